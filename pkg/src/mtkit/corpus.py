"""Manifest ingestion: single-talker source utterances grouped by speaker.

Manifests are UTF-8 JSON lines with fields `id`, `audio`, `speaker`, `sex`
("M"/"F"), `language` ("en"/"de"), `text`, `duration_sec`, `sample_rate`.
Unknown extra fields are ignored. Relative audio paths are resolved against
the manifest's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    EmptyManifest,
    InconsistentSpeakerAttributes,
    MalformedRecord,
    SampleRateMismatch,
)
from .textnorm import normalize_text

SEXES = ("M", "F")
LANGUAGES = ("en", "de")

MANIFEST_FIELDS = ("id", "audio", "speaker", "sex", "language", "text",
                   "duration_sec", "sample_rate")


@dataclass(frozen=True)
class Utterance:
    id: str
    audio_path: str
    speaker_id: str
    sex: str
    language: str
    transcript: str
    duration_sec: float
    sample_rate: int


@dataclass
class SpeakerPool:
    utterances: list[Utterance]
    sample_rate: int
    root: Path = field(default_factory=Path)
    by_speaker: dict[str, list[Utterance]] = field(init=False)
    speaker_attrs: dict[str, tuple[str, str]] = field(init=False)
    _by_id: dict[str, Utterance] = field(init=False, repr=False)

    def __post_init__(self):
        self.by_speaker = {}
        self.speaker_attrs = {}
        self._by_id = {}
        for u in self.utterances:
            self.by_speaker.setdefault(u.speaker_id, []).append(u)
            self.speaker_attrs[u.speaker_id] = (u.sex, u.language)
            self._by_id[u.id] = u

    @property
    def speakers(self) -> list[str]:
        return list(self.by_speaker)

    def utterance(self, utterance_id: str) -> Utterance:
        return self._by_id[utterance_id]

    def audio_file(self, utt: Utterance) -> Path:
        p = Path(utt.audio_path)
        return p if p.is_absolute() else self.root / p

    def speakers_by_language(self, language: str) -> list[str]:
        return [s for s, (_, lang) in self.speaker_attrs.items() if lang == language]


def _parse_line(line_no: int, line: str) -> Utterance:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(line_no, f"invalid JSON ({e.msg})") from e
    if not isinstance(rec, dict):
        raise MalformedRecord(line_no, "record is not an object")
    missing = [f for f in MANIFEST_FIELDS if f not in rec]
    if missing:
        raise MalformedRecord(line_no, f"missing fields {missing}")
    if rec["sex"] not in SEXES:
        raise MalformedRecord(line_no, f"sex must be one of {SEXES}, got {rec['sex']!r}")
    if rec["language"] not in LANGUAGES:
        raise MalformedRecord(line_no, f"language must be one of {LANGUAGES}, got {rec['language']!r}")
    try:
        duration = float(rec["duration_sec"])
        rate = int(rec["sample_rate"])
    except (TypeError, ValueError) as e:
        raise MalformedRecord(line_no, "duration_sec/sample_rate not numeric") from e
    if duration <= 0:
        raise MalformedRecord(line_no, f"duration_sec must be > 0, got {duration}")
    text = str(rec["text"])
    if not normalize_text(text):
        raise MalformedRecord(line_no, "transcript empty after normalization")
    return Utterance(
        id=str(rec["id"]),
        audio_path=str(rec["audio"]),
        speaker_id=str(rec["speaker"]),
        sex=rec["sex"],
        language=rec["language"],
        transcript=text,
        duration_sec=duration,
        sample_rate=rate,
    )


def load_manifest(path, expected_sample_rate: int | None = None) -> SpeakerPool:
    """Load and validate a manifest file into a SpeakerPool.

    Input order is preserved for deterministic iteration.
    """
    path = Path(path)
    utterances: list[Utterance] = []
    seen_ids: set[str] = set()
    attrs: dict[str, tuple[str, str]] = {}
    declared_rate = expected_sample_rate
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            u = _parse_line(line_no, line)
            if u.id in seen_ids:
                raise MalformedRecord(line_no, f"duplicate utterance id {u.id!r}")
            seen_ids.add(u.id)
            if declared_rate is None:
                declared_rate = u.sample_rate
            if u.sample_rate != declared_rate:
                raise SampleRateMismatch(
                    f"utterance {u.id!r}: rate {u.sample_rate} Hz, pool declares {declared_rate} Hz"
                )
            prev = attrs.get(u.speaker_id)
            if prev is not None and prev != (u.sex, u.language):
                raise InconsistentSpeakerAttributes(
                    u.speaker_id, f"{prev} vs {(u.sex, u.language)}"
                )
            attrs[u.speaker_id] = (u.sex, u.language)
            utterances.append(u)
    if not utterances:
        raise EmptyManifest(f"{path}: no records")
    return SpeakerPool(utterances, declared_rate, root=path.parent)


def write_manifest(pool: SpeakerPool, path) -> None:
    """Write a pool back to manifest format; load_manifest round-trips it."""
    with open(path, "w", encoding="utf-8") as f:
        for u in pool.utterances:
            rec = {
                "id": u.id,
                "audio": u.audio_path,
                "speaker": u.speaker_id,
                "sex": u.sex,
                "language": u.language,
                "text": u.transcript,
                "duration_sec": u.duration_sec,
                "sample_rate": u.sample_rate,
            }
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class PoolStats:
    total_hours: float
    hours_by_language: dict[str, float]
    language_share: dict[str, float]
    speaker_count: int
    utterance_count: int


def pool_stats(pool: SpeakerPool) -> PoolStats:
    total_sec = sum(u.duration_sec for u in pool.utterances)
    by_lang = {lang: 0.0 for lang in LANGUAGES}
    for u in pool.utterances:
        by_lang[u.language] += u.duration_sec
    share = {
        lang: (sec / total_sec if total_sec > 0 else 0.0)
        for lang, sec in by_lang.items()
    }
    return PoolStats(
        total_hours=total_sec / 3600.0,
        hours_by_language={lang: s / 3600.0 for lang, s in by_lang.items()},
        language_share=share,
        speaker_count=len(pool.by_speaker),
        utterance_count=len(pool.utterances),
    )
