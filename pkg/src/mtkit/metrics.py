"""WER scoring: single-reference, permutation-minimum, and best-matching.

Multi-talker hypotheses are matched to references by the bijection that
minimizes the total error count (substitutions + deletions + insertions),
solved exactly with a linear-sum-assignment; the cost is the raw error
count so the global objective equals total corpus errors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DuplicateId, MultiSegmentTarget, UnknownHypothesisId
from .sot import SC_TOKEN, parse_sot
from .textnorm import DEFAULT_NORMALIZATION, NormalizationConfig, tokenize


@dataclass(frozen=True)
class WerReport:
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int
    zero_ref: bool = False

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        if self.ref_words > 0:
            return self.errors / self.ref_words
        return 0.0 if self.errors == 0 else 1.0


def word_edit_distance(ref_tokens: list[str], hyp_tokens: list[str]) -> WerReport:
    """Minimal S+D+I alignment. Among minimal alignments the tie-break
    prefers fewer substitutions, then fewer insertions."""
    n, m = len(ref_tokens), len(hyp_tokens)
    # dp cell: (total, subs, ins), compared lexicographically
    prev = [(j, 0, j) for j in range(m + 1)]
    for i in range(1, n + 1):
        cur = [(i, 0, 0)] + [None] * m
        r = ref_tokens[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1]
            if r == hyp_tokens[j - 1]:
                best = diag
            else:
                best = (diag[0] + 1, diag[1] + 1, diag[2])
            up = prev[j]
            cand = (up[0] + 1, up[1], up[2])  # deletion
            if cand < best:
                best = cand
            left = cur[j - 1]
            cand = (left[0] + 1, left[1], left[2] + 1)  # insertion
            if cand < best:
                best = cand
            cur[j] = best
        prev = cur
    total, subs, ins = prev[m]
    return WerReport(
        substitutions=subs,
        deletions=total - subs - ins,
        insertions=ins,
        ref_words=n,
    )


def single_wer(ref: str, hyp: str,
               cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> WerReport:
    ref_toks = tokenize(ref, cfg)
    hyp_toks = tokenize(hyp, cfg)
    report = word_edit_distance(ref_toks, hyp_toks)
    if not ref_toks and hyp_toks:
        return WerReport(report.substitutions, report.deletions,
                         report.insertions, 0, zero_ref=True)
    return report


@dataclass(frozen=True)
class AssignmentResult:
    pairs: list[tuple[int, int]]          # (ref_index, hyp_index), all padded indices
    per_pair: list[WerReport]
    total: WerReport
    n_ref_segments: int                   # before padding
    n_hyp_segments: int


def permutation_wer(ref_sot: str, hyp_sot: str,
                    cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> AssignmentResult:
    """Error-minimizing bijection between reference and hypothesis segments.

    The shorter side is padded with empty segments; padded references add
    nothing to the word-count denominator while unmatched hypothesis words
    count as insertions.
    """
    refs = parse_sot(ref_sot)
    hyps = parse_sot(hyp_sot)
    n_ref, n_hyp = len(refs), len(hyps)
    n = max(n_ref, n_hyp)
    if n == 0:
        return AssignmentResult([], [], WerReport(0, 0, 0, 0), 0, 0)
    refs = refs + [""] * (n - n_ref)
    hyps = hyps + [""] * (n - n_hyp)
    ref_toks = [tokenize(r, cfg) for r in refs]
    hyp_toks = [tokenize(h, cfg) for h in hyps]

    reports = [[word_edit_distance(ref_toks[i], hyp_toks[j]) for j in range(n)]
               for i in range(n)]
    cost = np.array([[reports[i][j].errors for j in range(n)] for i in range(n)])
    rows, cols = linear_sum_assignment(cost)

    pairs = sorted(zip(rows.tolist(), cols.tolist()))
    per_pair = [reports[i][j] for i, j in pairs]
    total = WerReport(
        substitutions=sum(r.substitutions for r in per_pair),
        deletions=sum(r.deletions for r in per_pair),
        insertions=sum(r.insertions for r in per_pair),
        ref_words=sum(len(t) for t in ref_toks),
    )
    return AssignmentResult(pairs, per_pair, total, n_ref, n_hyp)


def best_match_wer(target: str, hyp_sot: str,
                   cfg: NormalizationConfig = DEFAULT_NORMALIZATION,
                   ) -> tuple[WerReport, int]:
    """Lowest WER of a single-segment target against each hypothesis segment.

    Ties go to the lowest segment index. Factors speaker-selection errors
    out of the score.
    """
    if SC_TOKEN in target:
        raise MultiSegmentTarget("best-match target must be a single segment")
    segments = parse_sot(hyp_sot) or [""]
    best_report, best_idx = None, 0
    for idx, seg in enumerate(segments):
        report = single_wer(target, seg, cfg)
        if best_report is None or report.wer < best_report.wer:
            best_report, best_idx = report, idx
    return best_report, best_idx


@dataclass(frozen=True)
class SampleScore:
    sample_id: str
    report: WerReport
    matched_index: int | None = None      # best_match mode
    n_ref_segments: int | None = None     # sot_permutation mode
    n_hyp_segments: int | None = None


@dataclass(frozen=True)
class CorpusReport:
    mode: str
    num_samples: int
    missing_hypotheses: int
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int
    micro_wer: float
    macro_wer: float
    per_sample: list[SampleScore] = field(default_factory=list)
    segment_count_confusion: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions


MODES = ("single", "sot_permutation", "best_match")


def score_corpus(refs: list[tuple[str, str]], hyps: list[tuple[str, str]],
                 mode: str = "sot_permutation",
                 cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> CorpusReport:
    """Micro-averaged corpus WER over keyed (id, text) records.

    A reference with no hypothesis scores against the empty string (all
    deletions) and is counted in missing_hypotheses.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    ref_map: dict[str, str] = {}
    for sid, text in refs:
        if sid in ref_map:
            raise DuplicateId(f"duplicate reference id {sid!r}")
        ref_map[sid] = text
    hyp_map: dict[str, str] = {}
    for sid, text in hyps:
        if sid in hyp_map:
            raise DuplicateId(f"duplicate hypothesis id {sid!r}")
        if sid not in ref_map:
            raise UnknownHypothesisId(f"hypothesis id {sid!r} has no reference")
        hyp_map[sid] = text

    per_sample: list[SampleScore] = []
    confusion: Counter = Counter()
    missing = 0
    for sid, ref_text in ref_map.items():
        hyp_text = hyp_map.get(sid)
        if hyp_text is None:
            hyp_text = ""
            missing += 1
        if mode == "single":
            report = single_wer(ref_text, hyp_text, cfg)
            per_sample.append(SampleScore(sid, report))
        elif mode == "sot_permutation":
            result = permutation_wer(ref_text, hyp_text, cfg)
            confusion[(result.n_ref_segments, result.n_hyp_segments)] += 1
            per_sample.append(SampleScore(
                sid, result.total,
                n_ref_segments=result.n_ref_segments,
                n_hyp_segments=result.n_hyp_segments,
            ))
        else:
            report, idx = best_match_wer(ref_text, hyp_text, cfg)
            per_sample.append(SampleScore(sid, report, matched_index=idx))

    total_s = sum(s.report.substitutions for s in per_sample)
    total_d = sum(s.report.deletions for s in per_sample)
    total_i = sum(s.report.insertions for s in per_sample)
    total_ref = sum(s.report.ref_words for s in per_sample)
    total_err = total_s + total_d + total_i
    micro = total_err / total_ref if total_ref else (0.0 if total_err == 0 else 1.0)
    macro = (sum(s.report.wer for s in per_sample) / len(per_sample)
             if per_sample else 0.0)
    return CorpusReport(
        mode=mode,
        num_samples=len(per_sample),
        missing_hypotheses=missing,
        substitutions=total_s,
        deletions=total_d,
        insertions=total_i,
        ref_words=total_ref,
        micro_wer=micro,
        macro_wer=macro,
        per_sample=per_sample,
        segment_count_confusion=dict(confusion),
    )
