"""Serialized multi-talker targets with the speaker-change token.

Segments are joined in talker start-time order with the literal token
"<sc>" between them. Serialization is canonical (single spaces around the
token); parsing is tolerant because model output is noisy.
"""

from __future__ import annotations

from .errors import EmptySegmentList, SegmentContainsDelimiter

SC_TOKEN = "<sc>"


def serialize_sot(segments: list[str]) -> str:
    if not segments:
        raise EmptySegmentList("cannot serialize an empty segment list")
    for seg in segments:
        if SC_TOKEN in seg:
            raise SegmentContainsDelimiter(f"segment contains {SC_TOKEN!r}: {seg!r}")
        if not seg.strip():
            raise EmptySegmentList("segments must be non-empty")
    return f" {SC_TOKEN} ".join(segments)


def parse_sot(text: str) -> list[str]:
    """Split on the speaker-change token, trimming segments and dropping
    empties from leading/trailing/duplicated delimiters."""
    if not text:
        return []
    return [seg.strip() for seg in text.split(SC_TOKEN) if seg.strip()]


def order_segments(record, predicate=None) -> list[str]:
    """Transcripts of a mixture's components in start-time order, optionally
    filtered by a predicate over the component utterance."""
    comps = sorted(record.components, key=lambda c: c.start_sec)
    return [
        c.utterance.transcript
        for c in comps
        if predicate is None or predicate(c.utterance)
    ]
