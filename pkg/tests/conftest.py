"""
Shared fixtures for the zipflaws test suite
"""

from pathlib import Path

import numpy as np
import pytest

from zipflaws.lexicon import LexiconRecord, RankedLexicon

FIXTURES = Path(__file__).parent / "fixtures"


def make_lexicon(frequencies, senses=None) -> RankedLexicon:
    """Ranked lexicon from frequencies already in non-increasing order"""
    if senses is None:
        senses = [1] * len(frequencies)
    width = len(str(len(frequencies)))
    return RankedLexicon(tuple(
        LexiconRecord(i, f"w{i:0{width}d}", f, s)
        for i, (f, s) in enumerate(zip(frequencies, senses), start=1)
    ))


def random_lexicon(rng: np.random.Generator, n: int) -> RankedLexicon:
    frequencies = np.sort(rng.integers(1, 10_000, size=n))[::-1]
    senses = rng.integers(1, 40, size=n)
    return make_lexicon([int(f) for f in frequencies], [int(s) for s in senses])


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
