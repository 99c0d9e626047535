"""Self-contained toy corpus: tone-based "speech" with scripted transcripts.

Lets the full pipeline and the test suite run with zero external downloads.
Each speaker gets a distinct fundamental frequency; each word is a short
tone burst, so durations scale with transcript length.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .audio import DEFAULT_SAMPLE_RATE, Waveform, write_audio
from .corpus import SpeakerPool, Utterance, load_manifest, write_manifest
from .rng import DOMAIN_TOY, substream

# Mostly >= 6 characters so keyword-tracing has candidates on most mixtures.
EN_WORDS = [
    "STRAWBERRY", "MOUNTAIN", "EVENING", "WINDOW", "GARDEN", "RIVER",
    "THUNDER", "VILLAGE", "JOURNEY", "CAPTAIN", "HARBOR", "WINTER",
    "LIBRARY", "PICTURE", "MORNING", "FOREST", "ISLAND", "CASTLE",
    "DRAGON", "SILVER", "GOLDEN", "MARKET", "BRIDGE", "CANDLE",
    "LANTERN", "MEADOW", "ORCHARD", "PEBBLE", "QUARRY", "RIBBON",
    "SADDLE", "TIMBER", "VELVET", "WHISPER", "YELLOW", "ZEPHYR",
    "ANCHOR", "BUTTER", "COPPER", "DINNER", "ENGINE", "FEATHER",
    "GLACIER", "HAMMER", "INKWELL", "JACKET", "KITCHEN", "LADDER",
    "MIRROR", "NEEDLE", "OYSTER", "PARROT", "QUIVER", "ROCKET",
    "SHOVEL", "TUNNEL", "UMBRELLA", "VIOLIN", "WALNUT", "BLANKET",
    "CABINET", "DOLPHIN", "ELEPHANT", "FOUNTAIN", "GRANITE", "HORIZON",
    "JASMINE", "KESTREL", "LOBSTER", "MAGNET", "NUTMEG", "OCTOPUS",
    "PENGUIN", "RAVEN", "SPARROW", "TURNIP", "VULTURE", "WILLOW",
    "THE", "AND", "WITH", "OVER", "UNDER", "NEAR",
]

DE_WORDS = [
    "STRASSE", "FRÜHLING", "ABENDROT", "GEBIRGE", "FLUSSUFER", "DONNER",
    "GARTEN", "FENSTER", "BIBLIOTHEK", "MORGEN", "WALDWEG", "INSEL",
    "SILBERN", "GOLDEN", "BRÜCKE", "KERZE", "LATERNE", "WIESE",
    "SCHÖNHEIT", "GRÜNDLICH", "MÄRCHEN", "KÖNIGIN", "ÜBERALL", "HÄUSER",
    "WINTERTAG", "SOMMERLUFT", "HERBSTWIND", "SCHIFFE", "HAFENSTADT",
    "KAPITÄN", "DRACHEN", "BURGHOF", "DER", "UND", "ÜBER",
]

WORD_SEC = 0.45
WORD_GAP_SEC = 0.08
TAIL_SEC = 0.25
AMPLITUDE = 0.25


def _tone_for_words(n_words: int, f0: float, rate: int) -> np.ndarray:
    word_n = int(round(WORD_SEC * rate))
    gap_n = int(round(WORD_GAP_SEC * rate))
    tail_n = int(round(TAIL_SEC * rate))
    total = n_words * word_n + max(0, n_words - 1) * gap_n + tail_n
    out = np.zeros(total)
    t = np.arange(word_n) / rate
    pos = 0
    for w in range(n_words):
        # vary pitch slightly per word so mixtures are not flat tones
        f = f0 * (1.0 + 0.03 * (w % 5))
        burst = AMPLITUDE * np.sin(2 * math.pi * f * t)
        # short fade to avoid clicks
        fade = min(200, word_n // 4)
        burst[:fade] *= np.linspace(0, 1, fade)
        burst[-fade:] *= np.linspace(1, 0, fade)
        out[pos : pos + word_n] = burst
        pos += word_n + gap_n
    return out


def make_toy_corpus(out_dir, n_speakers: int = 8, utts_per_speaker: int = 4,
                    de_speakers: int = 2, seed: int = 0,
                    sample_rate: int = DEFAULT_SAMPLE_RATE,
                    min_words: int = 6, max_words: int = 10) -> Path:
    """Write wav files and a manifest under out_dir; returns the manifest path.

    Deterministic given the arguments. German speakers draw from the German
    word list and alternate sexes like the English ones.
    """
    out_dir = Path(out_dir)
    wav_dir = out_dir / "wav"
    wav_dir.mkdir(parents=True, exist_ok=True)

    utterances = []
    for s in range(n_speakers):
        speaker = f"spk{s:02d}"
        sex = "M" if s % 2 == 0 else "F"
        language = "de" if s < de_speakers else "en"
        words = DE_WORDS if language == "de" else EN_WORDS
        f0 = 110.0 + 17.0 * s
        for u in range(utts_per_speaker):
            rng = substream(seed, s * 1000 + u, DOMAIN_TOY)
            n_words = min_words + int(rng.integers(max_words - min_words + 1))
            idx = rng.choice(len(words), size=n_words, replace=False)
            text = " ".join(words[i] for i in idx)
            samples = _tone_for_words(n_words, f0, sample_rate)
            utt_id = f"{speaker}-{u:03d}"
            rel = f"wav/{utt_id}.wav"
            write_audio(Waveform(samples, sample_rate), out_dir / rel)
            utterances.append(Utterance(
                id=utt_id, audio_path=rel, speaker_id=speaker, sex=sex,
                language=language, transcript=text,
                duration_sec=len(samples) / sample_rate, sample_rate=sample_rate,
            ))

    pool = SpeakerPool(utterances, sample_rate, root=out_dir)
    manifest = out_dir / "manifest.jsonl"
    write_manifest(pool, manifest)
    return manifest


def make_toy_pool(out_dir, **kwargs) -> SpeakerPool:
    return load_manifest(make_toy_corpus(out_dir, **kwargs))
