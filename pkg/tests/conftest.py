from __future__ import annotations

import sys

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from sigmalam.chords import AngleClass
from sigmalam.corpus import corpus
from sigmalam.lamfile import parse, to_lamination

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

CORPUS_SIZE = 1000


def load(name: str, depth=None):
    return to_lamination(parse((FIXTURES / name).read_text(), check_linked=False), depth)


@pytest.fixture(scope="session")
def full_corpus():
    return list(corpus(CORPUS_SIZE))


def angles(max_den: int = 64):
    return st.builds(lambda n, q: Fraction(n % q, q),
                     st.integers(0, 10**6), st.integers(1, max_den))


def angle_classes(min_size: int = 2, max_size: int = 5, max_den: int = 64):
    return st.sets(angles(max_den), min_size=min_size, max_size=max_size).map(AngleClass)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
