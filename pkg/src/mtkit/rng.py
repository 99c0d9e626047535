"""Deterministic counter-based random sub-streams.

Each (seed, index) pair names an independent Philox stream, so corpora and
task sets can be generated in any order or degree of parallelism and still
come out identical to sequential generation. The domain tag keeps streams
used by different pipeline stages disjoint even under the same seed.
"""

from __future__ import annotations

import numpy as np

DOMAIN_MIXER = 0
DOMAIN_TASKS = 1
DOMAIN_TOY = 2

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int, domain: int = 0) -> np.random.Generator:
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    bitgen = np.random.Philox(key=key, counter=int(domain) << 192)
    return np.random.Generator(bitgen)
