import random

import pytest
from hypothesis import strategies as st

from cayley_spectra.group import ReducedWord, reduce


def random_word(rng: random.Random, k: int, max_len: int = 8) -> ReducedWord:
    letters = [rng.randint(1, k + 1) for _ in range(rng.randint(0, 2 * max_len))]
    return reduce(letters, k)


@st.composite
def words(draw, k: int, max_len: int = 10):
    letters = draw(st.lists(st.integers(1, k + 1), max_size=max_len))
    return reduce(letters, k)


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE_RESULTS: list[tuple[str, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, elapsed, title in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{label:<5} {'PASS' if ok else 'FAIL'}  {elapsed:6.2f}s  {title}")
