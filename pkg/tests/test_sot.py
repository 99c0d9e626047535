import numpy as np
import pytest

from mtkit.errors import EmptySegmentList, SegmentContainsDelimiter
from mtkit.sot import SC_TOKEN, parse_sot, serialize_sot

WORDS = ["ALPHA", "BRAVO", "CHARLIE", "DELTA", "ECHO", "FOXTROT", "GOLF"]


def test_serialize_two_segments():
    assert serialize_sot(["HELLO WORLD", "GOOD MORNING"]) == "HELLO WORLD <sc> GOOD MORNING"


def test_serialize_single():
    assert serialize_sot(["ONLY ONE"]) == "ONLY ONE"


def test_serialize_three():
    assert serialize_sot(["A", "B", "C"]) == "A <sc> B <sc> C"


def test_serialize_empty_list():
    with pytest.raises(EmptySegmentList):
        serialize_sot([])


def test_serialize_rejects_token_in_segment():
    with pytest.raises(SegmentContainsDelimiter):
        serialize_sot(["A <sc> B"])


def test_parse_basic():
    assert parse_sot("A <sc> B") == ["A", "B"]


def test_parse_tolerant():
    assert parse_sot("A<sc>B <sc> ") == ["A", "B"]


def test_parse_empty():
    assert parse_sot("") == []


def test_delimiter_count():
    for n in range(1, 6):
        segs = [f"SEG{i}" for i in range(n)]
        assert serialize_sot(segs).count(SC_TOKEN) == n - 1


def test_round_trip_random():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = 1 + int(rng.integers(4))
        segs = [" ".join(WORDS[i] for i in rng.integers(len(WORDS), size=1 + int(rng.integers(5))))
                for _ in range(n)]
        assert parse_sot(serialize_sot(segs)) == segs
