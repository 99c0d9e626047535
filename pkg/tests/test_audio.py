import wave

import numpy as np
import pytest

from mtkit.audio import (
    Waveform,
    concat,
    extract_clip,
    overlay,
    read_audio,
    sec_to_samples,
    silence,
    write_audio,
)
from mtkit.errors import (
    EmptyComponentList,
    SampleRateMismatch,
    StartBeyondEnd,
    UnsupportedFormat,
)

RATE = 16000


def sine(duration, freq=440.0, amp=0.5, rate=RATE):
    t = np.arange(int(duration * rate)) / rate
    return Waveform(amp * np.sin(2 * np.pi * freq * t), rate)


# --- read/write ---

def test_round_trip_silence(tmp_path):
    p = tmp_path / "s.wav"
    write_audio(silence(1.0, RATE), p)
    w = read_audio(p)
    assert w.num_samples == RATE
    assert np.all(w.samples == 0.0)


def test_round_trip_quantization_bound(tmp_path):
    p = tmp_path / "t.wav"
    src = sine(0.5, amp=1.0)
    # full-scale: clamp +1.0 to the int16 max on write
    src = Waveform(np.clip(src.samples, -1.0, 32767 / 32768), RATE)
    write_audio(src, p)
    back = read_audio(p)
    assert np.max(np.abs(back.samples - src.samples)) <= 1 / 32768


def test_read_duration(tmp_path):
    p = tmp_path / "one.wav"
    write_audio(Waveform(np.zeros(16000), RATE), p)
    w = read_audio(p)
    assert w.duration_sec == pytest.approx(1.0)


def test_int_scaling_convention(tmp_path):
    p = tmp_path / "neg.wav"
    with wave.open(str(p), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(RATE)
        wf.writeframes(np.array([-32768], dtype="<i2").tobytes())
    w = read_audio(p)
    assert w.samples[0] == -1.0


def test_stereo_rejected(tmp_path):
    p = tmp_path / "st.wav"
    with wave.open(str(p), "wb") as wf:
        wf.setnchannels(2)
        wf.setsampwidth(2)
        wf.setframerate(RATE)
        wf.writeframes(np.zeros(64, dtype="<i2").tobytes())
    with pytest.raises(UnsupportedFormat):
        read_audio(p)


def test_rate_mismatch_on_read(tmp_path):
    p = tmp_path / "8k.wav"
    write_audio(Waveform(np.zeros(800), 8000), p)
    with pytest.raises(SampleRateMismatch):
        read_audio(p, expected_rate=RATE)


def test_unwritable_path():
    with pytest.raises(OSError):
        write_audio(silence(0.1, RATE), "/nonexistent-dir/x.wav")


# --- silence / extract ---

def test_silence_three_seconds():
    assert silence(3.0, RATE).num_samples == 48000


def test_silence_zero():
    assert silence(0, RATE).num_samples == 0


def test_round_half_up():
    assert sec_to_samples(0.0001, RATE) == 2  # 1.6 rounds up


def test_extract_window():
    src = sine(5.0)
    clip = extract_clip(src, 1.0, 3.0)
    assert np.array_equal(clip.samples, src.samples[16000:64000])


def test_extract_pads_short_source():
    src = sine(2.0)
    clip = extract_clip(src, 0.0, 3.0)
    assert clip.num_samples == 48000
    assert np.array_equal(clip.samples[:32000], src.samples)
    assert np.all(clip.samples[32000:] == 0.0)


def test_extract_start_beyond_end():
    with pytest.raises(StartBeyondEnd):
        extract_clip(sine(5.0), 6.0, 1.0)


# --- overlay ---

def test_overlay_length():
    out, gain = overlay([(sine(3.0), 0.0), (sine(2.0), 2.5)])
    assert out.num_samples == 72000  # 4.5 s
    assert gain == 1.0


def test_overlay_peak_normalization():
    const = Waveform(np.full(1000, 0.8), RATE)
    out, gain = overlay([(const, 0.0), (const, 0.0)])
    assert gain == pytest.approx(0.625)
    assert np.max(np.abs(out.samples)) == pytest.approx(1.0)


def test_overlay_single_identity():
    w = sine(1.0)
    out, gain = overlay([(w, 0.0)])
    assert gain == 1.0
    assert np.array_equal(out.samples, w.samples)


def test_overlay_empty_rejected():
    with pytest.raises(EmptyComponentList):
        overlay([])


def test_overlay_permutation_invariant():
    rng = np.random.default_rng(5)
    comps = [(Waveform(rng.uniform(-0.3, 0.3, size=2000), RATE), s)
             for s in (0.0, 0.05, 0.05, 0.11)]
    a, ga = overlay(comps)
    for _ in range(5):
        order = rng.permutation(len(comps))
        b, gb = overlay([comps[i] for i in order])
        assert ga == gb
        assert np.array_equal(a.samples, b.samples)  # bit-exact


def test_overlay_disjoint_supports():
    w1, w2 = sine(1.0, 300), sine(1.0, 500)
    out, _ = overlay([(w1, 0.0), (w2, 2.0)])
    assert np.array_equal(out.samples[:16000], w1.samples)
    assert np.all(out.samples[16000:32000] == 0.0)
    assert np.array_equal(out.samples[32000:], w2.samples)


def test_extract_then_overlay_reproduces_window():
    src = sine(4.0)
    clip = extract_clip(src, 1.0, 2.0)
    out, _ = overlay([(clip, 1.0)])
    assert np.array_equal(out.samples[16000:48000], src.samples[16000:48000])


# --- concat ---

def test_concat_tt_layout():
    out = concat([sine(3.0), silence(3.0, RATE), sine(10.0)])
    assert out.num_samples == 16 * RATE


def test_concat_empty():
    assert concat([]).num_samples == 0


def test_concat_identity():
    w = sine(1.0)
    assert np.array_equal(concat([w]).samples, w.samples)


def test_concat_rate_mismatch():
    with pytest.raises(SampleRateMismatch):
        concat([sine(1.0), Waveform(np.zeros(10), 8000)])
