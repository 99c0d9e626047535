"""Multi-talker mixture sampling and rendering.

Start offsets follow a fixed law: the first talker starts at 0 and each
subsequent start is the previous start plus a delta drawn uniformly from
[delta_min, min(delta_max, previous talker's duration)]. With the default
delta_min of 0.5 s this guarantees strictly increasing starts and, whenever
delta_min is below the previous duration, temporal overlap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import audio as audio_mod
from .corpus import SpeakerPool, Utterance
from .errors import (
    InfeasiblePlan,
    InsufficientSpeakers,
    LanguageUnavailable,
)
from .rng import DOMAIN_MIXER, substream


@dataclass(frozen=True)
class MixConfig:
    delta_min: float = 0.5
    delta_max: float = math.inf
    max_components: int = 3


@dataclass(frozen=True)
class MixtureComponent:
    utterance: Utterance
    start_sec: float

    @property
    def end_sec(self) -> float:
        return self.start_sec + self.utterance.duration_sec


@dataclass
class MixtureRecord:
    mixture_id: str
    components: list[MixtureComponent]
    seed: int
    gain_applied: float = 1.0
    audio_path: str | None = None

    @property
    def duration_sec(self) -> float:
        return max(c.end_sec for c in self.components)


def sample_mixture(pool: SpeakerPool, k: int, rng, cfg: MixConfig = MixConfig(),
                   required_languages: tuple[str, ...] = (),
                   allowed_languages: tuple[str, ...] | None = None,
                   mixture_id: str = "mix") -> MixtureRecord:
    """Draw k utterances from k distinct speakers and assign start offsets.

    required_languages lists languages that must each appear in at least one
    component (for cross-lingual mixtures); allowed_languages, when given,
    restricts the speakers drawn beyond the required ones.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    all_speakers = pool.speakers
    if len(all_speakers) < k:
        raise InsufficientSpeakers(f"need {k} speakers, pool has {len(all_speakers)}")

    chosen: list[str] = []
    for lang in required_languages[:k]:
        candidates = [s for s in pool.speakers_by_language(lang) if s not in chosen]
        if not candidates:
            raise LanguageUnavailable(f"no unused speaker with language {lang!r}")
        chosen.append(candidates[int(rng.integers(len(candidates)))])
    remaining = [s for s in all_speakers if s not in chosen]
    if allowed_languages is not None:
        remaining = [s for s in remaining
                     if pool.speaker_attrs[s][1] in allowed_languages]
    for _ in range(k - len(chosen)):
        if not remaining:
            raise InsufficientSpeakers(f"need {k} distinct speakers")
        idx = int(rng.integers(len(remaining)))
        chosen.append(remaining.pop(idx))
    # Shuffle so required-language components are not always first.
    order = rng.permutation(len(chosen))
    chosen = [chosen[i] for i in order]

    utts = []
    for spk in chosen:
        options = pool.by_speaker[spk]
        utts.append(options[int(rng.integers(len(options)))])

    components = []
    start = 0.0
    for i, u in enumerate(utts):
        if i > 0:
            prev_dur = utts[i - 1].duration_sec
            lo = cfg.delta_min
            hi = min(cfg.delta_max, prev_dur)
            delta = lo if hi <= lo else float(rng.uniform(lo, hi))
            start = start + delta
        components.append(MixtureComponent(utterance=u, start_sec=start))
    return MixtureRecord(mixture_id=mixture_id, components=components, seed=0)


def render_mixture(record: MixtureRecord, pool: SpeakerPool) -> audio_mod.Waveform:
    """Overlay the component source audio at the record's offsets.

    The normalization gain is written back into the record.
    """
    parts = []
    for c in record.components:
        w = audio_mod.read_audio(pool.audio_file(c.utterance), expected_rate=pool.sample_rate)
        parts.append((w, c.start_sec))
    wave, gain = audio_mod.overlay(parts)
    record.gain_applied = gain
    return wave


@dataclass(frozen=True)
class SimPlan:
    counts: dict[int, int] = field(default_factory=dict)   # k -> mixture count
    hours: dict[int, float] = field(default_factory=dict)  # k -> target hours (alternative)
    de_share: float = 0.0
    de_tolerance: float = 0.02
    mix: MixConfig = field(default_factory=MixConfig)


def _is_de_index(index: int, share: float) -> bool:
    # Streaming quota: deterministic per index, independent of total count.
    if share <= 0:
        return False
    return math.floor((index + 1) * share) > math.floor(index * share)


def _check_feasible(pool: SpeakerPool, plan: SimPlan):
    ks = [k for k, n in plan.counts.items() if n > 0]
    ks += [k for k, h in plan.hours.items() if h > 0]
    if not ks:
        raise InfeasiblePlan("plan requests no mixtures")
    k_max = max(ks)
    if len(pool.speakers) < k_max:
        raise InfeasiblePlan(f"plan needs {k_max} speakers, pool has {len(pool.speakers)}")
    if plan.de_share > 0 and not pool.speakers_by_language("de"):
        raise InfeasiblePlan("plan targets a German share but pool has no German speakers")


def _language_constraints(k: int, is_de: bool, de_share: float):
    """(required, allowed) language tuples for one mixture.

    When a German share is targeted, German appears only in quota-selected
    mixtures (one German talker, the rest English) so the achieved share
    tracks the quota instead of drifting with the pool composition.
    """
    if de_share <= 0:
        return (), None
    if not is_de:
        return (), ("en",)
    return (("de",), ("en",)) if k > 1 else (("de",), ("de",))


def simulate_corpus(pool: SpeakerPool, plan: SimPlan, seed: int) -> list[MixtureRecord]:
    """Generate mixture records deterministically from (pool, plan, seed).

    Each mixture uses an independent sub-stream keyed by its global index,
    so the output is identical regardless of generation parallelism.
    """
    _check_feasible(pool, plan)
    records: list[MixtureRecord] = []
    g = 0  # global mixture index across all k groups

    def gen_one(k: int) -> MixtureRecord:
        nonlocal g
        is_de = _is_de_index(g, plan.de_share)
        required, allowed = _language_constraints(k, is_de, plan.de_share)
        rng = substream(seed, g, DOMAIN_MIXER)
        rec = sample_mixture(
            pool, k, rng, plan.mix,
            required_languages=required,
            allowed_languages=allowed,
            mixture_id=f"mix_{g:06d}",
        )
        rec.seed = seed
        g += 1
        return rec

    for k in sorted(plan.counts):
        for _ in range(plan.counts[k]):
            records.append(gen_one(k))
    for k in sorted(plan.hours):
        target_sec = plan.hours[k] * 3600.0
        acc = 0.0
        while acc < target_sec:
            rec = gen_one(k)
            records.append(rec)
            acc += rec.duration_sec

    if plan.de_share > 0:
        total = sum(r.duration_sec for r in records)
        de = sum(r.duration_sec for r in records
                 if any(c.utterance.language == "de" for c in r.components))
        achieved = de / total if total else 0.0
        if abs(achieved - plan.de_share) > plan.de_tolerance:
            raise InfeasiblePlan(
                f"achieved German share {achieved:.4f} outside "
                f"{plan.de_share} ± {plan.de_tolerance}"
            )
    return records


def overlap_ratio(record: MixtureRecord) -> float:
    """Fraction of the mixture duration covered by two or more active talkers."""
    intervals = [(c.start_sec, c.end_sec) for c in record.components]
    total = max(e for _, e in intervals)
    if total <= 0 or len(intervals) < 2:
        return 0.0
    events = sorted({t for iv in intervals for t in iv})
    covered = 0.0
    for a, b in zip(events, events[1:]):
        mid = (a + b) / 2.0
        active = sum(1 for s, e in intervals if s <= mid < e)
        if active >= 2:
            covered += b - a
    return covered / total


@dataclass(frozen=True)
class MixtureStats:
    hours_by_k: dict[int, float]
    total_hours: float
    de_hours_share: float
    overlap_ratios: list[float]
    overlap_histogram: dict[str, int]


def mixture_stats(records: list[MixtureRecord]) -> MixtureStats:
    hours_by_k: dict[int, float] = {}
    de_sec = 0.0
    total_sec = 0.0
    ratios = []
    for r in records:
        k = len(r.components)
        hours_by_k[k] = hours_by_k.get(k, 0.0) + r.duration_sec / 3600.0
        total_sec += r.duration_sec
        if any(c.utterance.language == "de" for c in r.components):
            de_sec += r.duration_sec
        ratios.append(overlap_ratio(r))
    hist: dict[str, int] = {}
    for rho in ratios:
        lo = min(int(rho * 10), 9)
        key = f"{lo / 10:.1f}-{(lo + 1) / 10:.1f}"
        hist[key] = hist.get(key, 0) + 1
    return MixtureStats(
        hours_by_k=hours_by_k,
        total_hours=total_sec / 3600.0,
        de_hours_share=(de_sec / total_sec if total_sec else 0.0),
        overlap_ratios=ratios,
        overlap_histogram=dict(sorted(hist.items())),
    )


# --- metadata serialization ---

def mixture_to_dict(record: MixtureRecord) -> dict:
    return {
        "mixture_id": record.mixture_id,
        "audio": record.audio_path,
        "seed": record.seed,
        "gain": record.gain_applied,
        "components": [
            {
                "utterance_id": c.utterance.id,
                "speaker": c.utterance.speaker_id,
                "sex": c.utterance.sex,
                "language": c.utterance.language,
                "start_sec": c.start_sec,
                "duration_sec": c.utterance.duration_sec,
                "text": c.utterance.transcript,
            }
            for c in record.components
        ],
    }


def save_mixtures(records: list[MixtureRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(mixture_to_dict(r), ensure_ascii=False) + "\n")


def load_mixtures(path, pool: SpeakerPool | None = None) -> list[MixtureRecord]:
    """Read mixture metadata back into records.

    When a pool is given, components are resolved to its utterances (needed
    for rendering and enrollment); otherwise utterances are rebuilt from the
    metadata fields with the audio path left empty.
    """
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            d = json.loads(line)
            comps = []
            for c in d["components"]:
                if pool is not None:
                    utt = pool.utterance(c["utterance_id"])
                else:
                    utt = Utterance(
                        id=c["utterance_id"], audio_path="", speaker_id=c["speaker"],
                        sex=c["sex"], language=c["language"], transcript=c["text"],
                        duration_sec=c["duration_sec"], sample_rate=0,
                    )
                comps.append(MixtureComponent(utterance=utt, start_sec=c["start_sec"]))
            records.append(MixtureRecord(
                mixture_id=d["mixture_id"], components=comps,
                seed=d["seed"], gain_applied=d["gain"], audio_path=d["audio"],
            ))
    return records
