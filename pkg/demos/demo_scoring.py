#!/usr/bin/env python3
"""Walkthrough: the three WER scoring modes on multi-talker output.

Shows why permutation-minimum WER is the right metric for serialized
multi-talker transcripts, and what best-matching WER isolates.
"""

from mtkit import best_match_wer, permutation_wer, score_corpus, single_wer

ref = "THE CAPTAIN SAILED NORTH <sc> A STORM ROSE OVER THE HARBOR"

# The model transcribed both talkers correctly but emitted them in the
# opposite order.
hyp_swapped = "A STORM ROSE OVER THE HARBOR <sc> THE CAPTAIN SAILED NORTH"

naive = single_wer(ref, hyp_swapped)
print(f"single (order-sensitive) WER: {100 * naive.wer:.2f}%  "
      f"(S={naive.substitutions} D={naive.deletions} I={naive.insertions})")

perm = permutation_wer(ref, hyp_swapped)
print(f"permutation-minimum WER:      {100 * perm.total.wer:.2f}%  "
      f"assignment {perm.pairs}")

# A genuinely wrong hypothesis: one word substituted, one talker dropped.
hyp_bad = "THE CAPTAIN SAILED SOUTH"
perm_bad = permutation_wer(ref, hyp_bad)
print(f"\ndegraded hypothesis WER:      {100 * perm_bad.total.wer:.2f}%  "
      f"(S={perm_bad.total.substitutions} D={perm_bad.total.deletions} "
      f"I={perm_bad.total.insertions})")

# Best-matching: score a single-talker target against every hypothesis
# segment and keep the lowest, factoring out talker-selection mistakes.
target = "THE CAPTAIN SAILED NORTH"
report, idx = best_match_wer(target, hyp_swapped)
print(f"\nbest-match WER for {target!r}: {100 * report.wer:.2f}% "
      f"(matched hypothesis segment {idx})")

# Corpus-level micro-average over keyed records.
refs = [("s1", ref), ("s2", "GOLDEN LIGHT ON THE MEADOW")]
hyps = [("s1", hyp_swapped), ("s2", "GOLDEN LIGHT ON THE MEADOW")]
corpus = score_corpus(refs, hyps, mode="sot_permutation")
print(f"\ncorpus micro WER: {100 * corpus.micro_wer:.2f}% over "
      f"{corpus.num_samples} samples, {corpus.ref_words} reference words")
