"""Independent reference implementations used only by the tests.

These deliberately avoid the library's code paths: a plain quadratic
Levenshtein, brute-force enumeration over all segment bijections, and a
fine-grid overlap estimator.
"""

from itertools import permutations


def levenshtein(a: list[str], b: list[str]) -> int:
    """Classic quadratic DP, total edit distance only."""
    prev = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        cur = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[-1]


def brute_force_min_errors(ref_segments: list[list[str]],
                           hyp_segments: list[list[str]]) -> int:
    """Minimum total edit distance over all bijections, after padding the
    shorter side with empty segments."""
    n = max(len(ref_segments), len(hyp_segments))
    refs = ref_segments + [[]] * (n - len(ref_segments))
    hyps = hyp_segments + [[]] * (n - len(hyp_segments))
    best = None
    for perm in permutations(range(n)):
        total = sum(levenshtein(refs[i], hyps[perm[i]]) for i in range(n))
        if best is None or total < best:
            best = total
    return best if best is not None else 0


def grid_overlap_ratio(intervals: list[tuple[float, float]], dt: float = 1e-3) -> float:
    """Estimate (time with >= 2 active talkers) / duration on a fine grid."""
    end = max(e for _, e in intervals)
    steps = int(end / dt)
    covered = 0
    for s in range(steps):
        t = (s + 0.5) * dt
        if sum(1 for a, b in intervals if a <= t < b) >= 2:
            covered += 1
    return covered / steps if steps else 0.0


def count_word_occurrences(transcripts: list[list[str]], word: str) -> int:
    return sum(toks.count(word) for toks in transcripts)
