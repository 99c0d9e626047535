"""Waveform I/O and sample-level operations.

Audio files are mono 16-bit little-endian PCM in a RIFF container.
In memory, samples are float64 in [-1, 1] (integer samples divided by
32768 on read). Seconds-to-samples conversion uses round-half-up and is
applied once per offset, never cumulatively, so long concatenations do
not drift.
"""

from __future__ import annotations

import hashlib
import math
import wave
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyComponentList,
    SampleRateMismatch,
    StartBeyondEnd,
    UnsupportedFormat,
)

DEFAULT_SAMPLE_RATE = 16000

_INT_SCALE = 32768.0


def sec_to_samples(seconds: float, sample_rate: int) -> int:
    """Convert a duration/offset in seconds to a sample count, round-half-up."""
    return int(math.floor(seconds * sample_rate + 0.5))


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise UnsupportedFormat(f"waveform must be 1-D, got shape {arr.shape}")
        object.__setattr__(self, "samples", arr)

    @property
    def num_samples(self) -> int:
        return len(self.samples)

    @property
    def duration_sec(self) -> float:
        return len(self.samples) / self.sample_rate


def read_audio(path, expected_rate: int | None = None) -> Waveform:
    """Read a mono 16-bit PCM WAV file.

    Raises UnsupportedFormat for multi-channel or non-16-bit files and
    SampleRateMismatch when expected_rate is given and differs.
    """
    with wave.open(str(path), "rb") as wf:
        if wf.getnchannels() != 1:
            raise UnsupportedFormat(f"{path}: expected mono, got {wf.getnchannels()} channels")
        if wf.getsampwidth() != 2:
            raise UnsupportedFormat(f"{path}: expected 16-bit PCM, got {8 * wf.getsampwidth()}-bit")
        rate = wf.getframerate()
        if expected_rate is not None and rate != expected_rate:
            raise SampleRateMismatch(f"{path}: file rate {rate} Hz, expected {expected_rate} Hz")
        raw = wf.readframes(wf.getnframes())
    ints = np.frombuffer(raw, dtype="<i2")
    return Waveform(ints.astype(np.float64) / _INT_SCALE, rate)


def write_audio(waveform: Waveform, path) -> None:
    """Write a waveform as mono 16-bit PCM. Round-trip error is at most one
    quantization step (1/32768) per sample."""
    s = waveform.samples
    if not np.all(np.isfinite(s)):
        raise ValueError("waveform contains non-finite samples")
    if s.size and np.max(np.abs(s)) > 1.0 + 1e-12:
        raise ValueError("waveform samples exceed [-1, 1]; normalize before writing")
    q = np.clip(np.floor(s * _INT_SCALE + 0.5), -32768, 32767).astype("<i2")
    # open the file ourselves so a bad path raises a clean OSError
    with open(path, "wb") as raw:
        with wave.open(raw, "wb") as wf:
            wf.setnchannels(1)
            wf.setsampwidth(2)
            wf.setframerate(waveform.sample_rate)
            wf.writeframes(q.tobytes())


def silence(duration_sec: float, sample_rate: int = DEFAULT_SAMPLE_RATE) -> Waveform:
    if duration_sec < 0:
        raise ValueError("duration_sec must be >= 0")
    return Waveform(np.zeros(sec_to_samples(duration_sec, sample_rate)), sample_rate)


def extract_clip(waveform: Waveform, start_sec: float, duration_sec: float) -> Waveform:
    """Extract a fixed-length window; pads with trailing zeros if the source
    ends before the window does."""
    if start_sec < 0:
        raise ValueError("start_sec must be >= 0")
    rate = waveform.sample_rate
    start = sec_to_samples(start_sec, rate)
    if start >= waveform.num_samples:
        raise StartBeyondEnd(
            f"start {start_sec} s is at or beyond source end ({waveform.duration_sec} s)"
        )
    n = sec_to_samples(duration_sec, rate)
    out = np.zeros(n)
    avail = waveform.samples[start : start + n]
    out[: len(avail)] = avail
    return Waveform(out, rate)


def _canonical_key(start_samples: int, w: Waveform):
    # Tie-break equal starts by content so summation order (and therefore
    # the float result) never depends on caller ordering.
    digest = hashlib.blake2b(w.samples.tobytes(), digest_size=16).hexdigest()
    return (start_samples, w.num_samples, digest)


def overlay(components: list[tuple[Waveform, float]]) -> tuple[Waveform, float]:
    """Sum components at their start offsets.

    If the summed peak exceeds 1.0 the whole signal is scaled by 1/peak;
    the applied gain is returned (1.0 when no scaling was needed).
    Summation runs in a canonical order so the result is bit-reproducible
    for any permutation of the input list.
    """
    if not components:
        raise EmptyComponentList("overlay requires at least one component")
    rate = components[0][0].sample_rate
    placed = []
    for w, start_sec in components:
        if w.sample_rate != rate:
            raise SampleRateMismatch(
                f"component rate {w.sample_rate} Hz != {rate} Hz"
            )
        if start_sec < 0:
            raise ValueError("start_sec must be >= 0")
        placed.append((sec_to_samples(start_sec, rate), w))
    placed.sort(key=lambda p: _canonical_key(p[0], p[1]))

    total = max(start + w.num_samples for start, w in placed)
    out = np.zeros(total)
    for start, w in placed:
        out[start : start + w.num_samples] += w.samples

    peak = np.max(np.abs(out)) if out.size else 0.0
    gain = 1.0
    if peak > 1.0:
        gain = 1.0 / peak
        out = out * gain
    return Waveform(out, rate), gain


def concat(parts: list[Waveform], sample_rate: int | None = None) -> Waveform:
    """Concatenate waveforms; sample counts add exactly."""
    if not parts:
        return Waveform(np.zeros(0), sample_rate or DEFAULT_SAMPLE_RATE)
    rate = parts[0].sample_rate
    for p in parts:
        if p.sample_rate != rate:
            raise SampleRateMismatch(f"part rate {p.sample_rate} Hz != {rate} Hz")
    return Waveform(np.concatenate([p.samples for p in parts]), rate)
