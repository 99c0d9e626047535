"""Text normalization shared by task generation and WER scoring.

Using one config for both sides keeps keyword matching and scoring from
diverging. Defaults: uppercase, strip everything outside letters / digits /
apostrophe / hyphen, collapse whitespace, German sharp-s mapped to SS with
umlauts preserved. Normalization is idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NormalizationConfig:
    uppercase: bool = True
    strip_punctuation: bool = True
    collapse_whitespace: bool = True
    sharp_s_to_ss: bool = True


DEFAULT_NORMALIZATION = NormalizationConfig()

_KEPT_PUNCT = "'-"


def normalize_text(s: str, cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> str:
    if cfg.uppercase:
        if cfg.sharp_s_to_ss:
            s = s.upper()  # str.upper maps ß -> SS
        else:
            s = "".join(c if c == "ß" else c.upper() for c in s)
    if cfg.strip_punctuation:
        s = "".join(c if (c.isalnum() or c in _KEPT_PUNCT) else " " for c in s)
    if cfg.collapse_whitespace:
        s = " ".join(s.split())
    return s


def tokenize(s: str, cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> list[str]:
    return normalize_text(s, cfg).split()
