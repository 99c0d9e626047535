"""Instruction/target sample generation for the six task kinds.

Task kinds:
  MT - transcribe all talkers (SOT target)
  TT - transcribe the talker shown in a 3 s enrollment clip prepended,
       with 3 s of silence, to the mixture audio
  KT - transcribe the talker who said a designated keyword (a word that
       occurs exactly once across all talkers, length >= 6 characters)
  SS - transcribe all talkers of one sex
  OS - transcribe the n-th talker by start order
  TL - transcribe the talkers of one language (cross-lingual mixtures only)

Instruction texts are data, not code: several paraphrases per task with
named placeholders, overridable from a JSON template file.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import audio as audio_mod
from .corpus import SpeakerPool
from .errors import (
    EmptyTarget,
    MonolingualRecord,
    NoEnrollmentAvailable,
    NoValidKeyword,
)
from .mixer import MixtureRecord, render_mixture
from .rng import DOMAIN_TASKS, substream
from .sot import order_segments, serialize_sot
from .textnorm import DEFAULT_NORMALIZATION, NormalizationConfig, tokenize


class TaskKind(str, Enum):
    MT = "MT"
    TT = "TT"
    KT = "KT"
    SS = "SS"
    OS = "OS"
    TL = "TL"


DEFAULT_TEMPLATES: dict[str, list[str]] = {
    "MT": [
        "Transcribe the speech of every talker in the order they start speaking.",
        "Write down what all talkers say, separated by speaker changes.",
        "Recognize all overlapping talkers and output their transcripts in start order.",
    ],
    "TT": [
        "Transcribe only the talker heard in the short clip at the beginning of the audio.",
        "The audio starts with a sample of one talker; transcribe that talker's speech from the mixture.",
        "Listen to the reference clip and transcribe only that talker.",
    ],
    "KT": [
        "Transcribe the speech of the talker who said the word \"{KEYWORD}\".",
        "One talker said \"{KEYWORD}\"; write down everything that talker said.",
        "Find the talker who uttered \"{KEYWORD}\" and transcribe their speech.",
    ],
    "SS": [
        "Transcribe the speech of all {SEX} talkers.",
        "Write down what every {SEX} talker says.",
        "Recognize only the {SEX} voices and transcribe them in start order.",
    ],
    "OS": [
        "Transcribe the speech of the {ORDINAL} talker to start speaking.",
        "Write down what the {ORDINAL} talker says.",
        "Transcribe only the talker who appears {ORDINAL} in the audio.",
    ],
    "TL": [
        "Transcribe the speech of the talkers speaking {LANGUAGE}.",
        "Write down only the {LANGUAGE} speech.",
        "Recognize the {LANGUAGE}-speaking talkers and transcribe them in start order.",
    ],
}

ORDINAL_WORDS = ["first", "second", "third", "fourth", "fifth",
                 "sixth", "seventh", "eighth", "ninth", "tenth"]
SEX_WORDS = {"M": "male", "F": "female"}
LANGUAGE_WORDS = {"en": "English", "de": "German"}


def load_templates(path) -> dict[str, list[str]]:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    templates = dict(DEFAULT_TEMPLATES)
    for kind, entries in data.items():
        if kind not in TaskKind.__members__:
            raise ValueError(f"unknown task kind in template file: {kind!r}")
        if not isinstance(entries, list) or not all(isinstance(e, str) for e in entries) or not entries:
            raise ValueError(f"templates for {kind} must be a non-empty list of strings")
        templates[kind] = entries
    return templates


@dataclass(frozen=True)
class TaskConfig:
    enrollment_sec: float = 3.0
    gap_sec: float = 3.0
    min_keyword_len: int = 6
    allow_same_utterance_enrollment: bool = False
    allow_absent_sex: bool = False


@dataclass
class TaskSample:
    sample_id: str
    task: TaskKind
    mixture_id: str
    audio_path: str | None
    instruction: str
    target: str
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "task": self.task.value,
            "mixture_id": self.mixture_id,
            "audio": self.audio_path,
            "instruction": self.instruction,
            "target": self.target,
            "meta": self.meta,
        }


def _pick(rng, items):
    return items[int(rng.integers(len(items)))]


def candidate_keywords(record: MixtureRecord,
                       cfg: TaskConfig = TaskConfig(),
                       norm: NormalizationConfig = DEFAULT_NORMALIZATION,
                       ) -> set[tuple[str, str]]:
    """Words that occur exactly once across all talkers' normalized
    transcripts and have at least min_keyword_len characters, paired with
    the speaker who said them."""
    counts: Counter[str] = Counter()
    speaker_of: dict[str, str] = {}
    for c in record.components:
        for tok in tokenize(c.utterance.transcript, norm):
            counts[tok] += 1
            speaker_of.setdefault(tok, c.utterance.speaker_id)
    return {
        (w, speaker_of[w])
        for w, n in counts.items()
        if n == 1 and len(w) >= cfg.min_keyword_len
    }


def gen_mt(record: MixtureRecord, templates, rng) -> TaskSample:
    target = serialize_sot(order_segments(record))
    return TaskSample(
        sample_id=f"{record.mixture_id}-mt",
        task=TaskKind.MT,
        mixture_id=record.mixture_id,
        audio_path=record.audio_path,
        instruction=_pick(rng, templates["MT"]),
        target=target,
    )


def gen_tt(record: MixtureRecord, pool: SpeakerPool, templates, rng,
           cfg: TaskConfig = TaskConfig(),
           mixture_audio: audio_mod.Waveform | None = None,
           mixture_root=None,
           ) -> tuple[TaskSample, audio_mod.Waveform]:
    """Build a target-talker sample and its composite audio:
    [enrollment clip | silence | mixture]."""
    comp = record.components[int(rng.integers(len(record.components)))]
    spk = comp.utterance.speaker_id
    others = [u for u in pool.by_speaker[spk] if u.id != comp.utterance.id]
    if others:
        enroll = _pick(rng, others)
    elif cfg.allow_same_utterance_enrollment:
        enroll = comp.utterance
    else:
        raise NoEnrollmentAvailable(
            f"speaker {spk!r} has no enrollment utterance besides the mixture source"
        )
    enroll_wave = audio_mod.read_audio(pool.audio_file(enroll), expected_rate=pool.sample_rate)
    clip = audio_mod.extract_clip(enroll_wave, 0.0, cfg.enrollment_sec)
    if mixture_audio is None:
        if record.audio_path:
            root = Path(mixture_root) if mixture_root is not None else pool.root
            mixture_audio = audio_mod.read_audio(
                root / record.audio_path, expected_rate=pool.sample_rate)
        else:
            mixture_audio = render_mixture(record, pool)
    composite = audio_mod.concat([
        clip,
        audio_mod.silence(cfg.gap_sec, pool.sample_rate),
        mixture_audio,
    ])
    sample = TaskSample(
        sample_id=f"{record.mixture_id}-tt",
        task=TaskKind.TT,
        mixture_id=record.mixture_id,
        audio_path=None,  # caller writes the composite and fills this in
        instruction=_pick(rng, templates["TT"]),
        target=comp.utterance.transcript,
        meta={"target_speaker": spk, "enrollment_utterance_id": enroll.id},
    )
    return sample, composite


def gen_kt(record: MixtureRecord, templates, rng,
           cfg: TaskConfig = TaskConfig(),
           norm: NormalizationConfig = DEFAULT_NORMALIZATION) -> TaskSample:
    cands = sorted(candidate_keywords(record, cfg, norm))
    if not cands:
        raise NoValidKeyword(f"{record.mixture_id}: no unique keyword of length >= {cfg.min_keyword_len}")
    keyword, spk = cands[int(rng.integers(len(cands)))]
    target = next(c.utterance.transcript for c in record.components
                  if c.utterance.speaker_id == spk)
    return TaskSample(
        sample_id=f"{record.mixture_id}-kt",
        task=TaskKind.KT,
        mixture_id=record.mixture_id,
        audio_path=record.audio_path,
        instruction=_pick(rng, templates["KT"]).replace("{KEYWORD}", keyword),
        target=target,
        meta={"keyword": keyword, "target_speaker": spk},
    )


def gen_ss(record: MixtureRecord, templates, rng,
           cfg: TaskConfig = TaskConfig()) -> TaskSample:
    present = sorted({c.utterance.sex for c in record.components})
    choices = ["F", "M"] if cfg.allow_absent_sex else present
    sex = _pick(rng, choices)
    segments = order_segments(record, lambda u: u.sex == sex)
    if not segments:
        raise EmptyTarget(f"{record.mixture_id}: no {sex} talker present")
    return TaskSample(
        sample_id=f"{record.mixture_id}-ss",
        task=TaskKind.SS,
        mixture_id=record.mixture_id,
        audio_path=record.audio_path,
        instruction=_pick(rng, templates["SS"]).replace("{SEX}", SEX_WORDS[sex]),
        target=serialize_sot(segments),
        meta={"sex": sex},
    )


def gen_os(record: MixtureRecord, templates, rng) -> TaskSample:
    k = len(record.components)
    n = 1 + int(rng.integers(k))
    ordinal = ORDINAL_WORDS[n - 1] if n <= len(ORDINAL_WORDS) else f"{n}th"
    comps = sorted(record.components, key=lambda c: c.start_sec)
    return TaskSample(
        sample_id=f"{record.mixture_id}-os",
        task=TaskKind.OS,
        mixture_id=record.mixture_id,
        audio_path=record.audio_path,
        instruction=_pick(rng, templates["OS"]).replace("{ORDINAL}", ordinal),
        target=comps[n - 1].utterance.transcript,
        meta={"ordinal": n},
    )


def gen_tl(record: MixtureRecord, templates, rng) -> TaskSample:
    present = sorted({c.utterance.language for c in record.components})
    if len(present) < 2:
        raise MonolingualRecord(f"{record.mixture_id}: only {present} present")
    language = _pick(rng, present)
    segments = order_segments(record, lambda u: u.language == language)
    return TaskSample(
        sample_id=f"{record.mixture_id}-tl",
        task=TaskKind.TL,
        mixture_id=record.mixture_id,
        audio_path=record.audio_path,
        instruction=_pick(rng, templates["TL"]).replace("{LANGUAGE}", LANGUAGE_WORDS[language]),
        target=serialize_sot(segments),
        meta={"language": language},
    )


_SKIPPABLE = (NoValidKeyword, MonolingualRecord, NoEnrollmentAvailable, EmptyTarget)


def gen_taskset(records: list[MixtureRecord], pool: SpeakerPool,
                task_mix: list[tuple[TaskKind, float]],
                templates: dict[str, list[str]] | None,
                seed: int,
                cfg: TaskConfig = TaskConfig(),
                norm: NormalizationConfig = DEFAULT_NORMALIZATION,
                tt_audio_dir=None,
                tt_audio_rel: str = "tt_audio",
                mixture_root=None,
                ) -> tuple[list[TaskSample], Counter]:
    """Generate one sample per record, drawing the task kind by weight.

    Deterministic given seed: record i uses sub-stream (seed, i). Records
    whose generator raises a task-specific error are skipped and counted.
    TT composite audio is written under tt_audio_dir (required when TT has
    positive weight); audio paths in the samples are relative, prefixed
    with tt_audio_rel.
    """
    templates = templates or DEFAULT_TEMPLATES
    weights = [w for _, w in task_mix]
    if any(w < 0 for w in weights) or sum(weights) <= 0:
        raise ValueError("task weights must be >= 0 with a positive sum")
    if any(kind == TaskKind.TT and w > 0 for kind, w in task_mix) and tt_audio_dir is None:
        raise ValueError("tt_audio_dir is required when the task mix includes TT")

    total_w = float(sum(weights))
    cum = []
    acc = 0.0
    for kind, w in task_mix:
        acc += w / total_w
        cum.append((kind, acc))

    samples: list[TaskSample] = []
    skips: Counter = Counter()
    for i, record in enumerate(records):
        rng = substream(seed, i, DOMAIN_TASKS)
        u = float(rng.random())
        kind = cum[-1][0]
        for cand, edge in cum:
            if u < edge:
                kind = cand
                break
        try:
            if kind == TaskKind.MT:
                samples.append(gen_mt(record, templates, rng))
            elif kind == TaskKind.TT:
                sample, composite = gen_tt(record, pool, templates, rng, cfg,
                                           mixture_root=mixture_root)
                fname = f"{record.mixture_id}-tt.wav"
                audio_mod.write_audio(composite, Path(tt_audio_dir) / fname)
                sample.audio_path = f"{tt_audio_rel}/{fname}"
                samples.append(sample)
            elif kind == TaskKind.KT:
                samples.append(gen_kt(record, templates, rng, cfg, norm))
            elif kind == TaskKind.SS:
                samples.append(gen_ss(record, templates, rng, cfg))
            elif kind == TaskKind.OS:
                samples.append(gen_os(record, templates, rng))
            elif kind == TaskKind.TL:
                samples.append(gen_tl(record, templates, rng))
        except _SKIPPABLE as e:
            skips[type(e).__name__] += 1
    return samples, skips


def save_tasks(samples: list[TaskSample], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for s in samples:
            f.write(json.dumps(s.to_dict(), ensure_ascii=False) + "\n")


def load_tasks(path) -> list[TaskSample]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            d = json.loads(line)
            out.append(TaskSample(
                sample_id=d["sample_id"], task=TaskKind(d["task"]),
                mixture_id=d["mixture_id"], audio_path=d["audio"],
                instruction=d["instruction"], target=d["target"],
                meta=d.get("meta", {}),
            ))
    return out
