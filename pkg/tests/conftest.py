import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mtkit.corpus import load_manifest
from mtkit.toy import make_toy_corpus


@pytest.fixture(scope="session")
def toy_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("toy_corpus")
    make_toy_corpus(d, n_speakers=8, utts_per_speaker=4, de_speakers=2, seed=11)
    return d


@pytest.fixture(scope="session")
def toy_pool(toy_dir):
    return load_manifest(toy_dir / "manifest.jsonl")
