"""Word arithmetic in the free product of k+1 copies of Z/2.

Vertices of the Cayley tree of order k are identified with reduced words
over generators a_1..a_{k+1}.  Every generator is an involution, so a word is
reduced exactly when no two adjacent letters coincide.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_BALL = 10**6
MAX_BALL_ENV = "CAYLEY_SPECTRA_MAX_BALL"


class GroupError(ValueError):
    pass


class BallTooLargeError(GroupError):
    pass


@dataclass(frozen=True)
class GroupParams:
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise GroupError(f"tree order k must be an integer >= 1, got {self.k!r}")

    @property
    def n_generators(self) -> int:
        return self.k + 1

    @property
    def identity(self) -> ReducedWord:
        return ReducedWord((), self.k)

    def generator(self, i: int) -> ReducedWord:
        _check_index(i, self.k)
        return ReducedWord((i,), self.k)


def _check_index(i: int, k: int) -> None:
    if not (1 <= i <= k + 1):
        raise GroupError(f"generator index {i} outside 1..{k + 1}")


@dataclass(frozen=True, order=True)
class ReducedWord:
    """An element of G_k in normal form.

    Construct through :func:`reduce` (or :meth:`ReducedWord.parse`) unless the
    letters are already known to be reduced.
    """

    letters: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        for a, b in zip(self.letters, self.letters[1:]):
            if a == b:
                raise GroupError(f"word {self.letters} is not reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: ReducedWord) -> ReducedWord:
        return multiply(self, other)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)

    @classmethod
    def parse(cls, text: str, k: int) -> ReducedWord:
        return parse_word(text, k)


def reduce(letters: Iterable[int], params: GroupParams | int) -> ReducedWord:
    k = params.k if isinstance(params, GroupParams) else params
    stack: list[int] = []
    for i in letters:
        _check_index(i, k)
        if stack and stack[-1] == i:
            stack.pop()
        else:
            stack.append(i)
    return ReducedWord(tuple(stack), k)


def _same_k(x: ReducedWord, y: ReducedWord) -> None:
    if x.k != y.k:
        raise GroupError(f"words over different groups (k={x.k} vs k={y.k})")


def multiply(x: ReducedWord, y: ReducedWord) -> ReducedWord:
    _same_k(x, y)
    # only the junction can cancel, since both factors are reduced
    a, b = x.letters, y.letters
    c = 0
    while c < len(a) and c < len(b) and a[-1 - c] == b[c]:
        c += 1
    return ReducedWord(a[: len(a) - c] + b[c:], x.k)


def inverse(x: ReducedWord) -> ReducedWord:
    return ReducedWord(x.letters[::-1], x.k)


def neighbors(x: ReducedWord, params: GroupParams | None = None) -> list[ReducedWord]:
    """Return x·a_m for m = 1..k+1, in generator order."""
    k = x.k if params is None else params.k
    if params is not None and params.k != x.k:
        raise GroupError(f"word over k={x.k} used with k={params.k}")
    out = []
    for m in range(1, k + 2):
        if x.letters and x.letters[-1] == m:
            out.append(ReducedWord(x.letters[:-1], k))
        else:
            out.append(ReducedWord(x.letters + (m,), k))
    return out


def omega_count(x: ReducedWord, i: int) -> int:
    _check_index(i, x.k)
    return x.letters.count(i)


def distance(x: ReducedWord, y: ReducedWord) -> int:
    return len(multiply(inverse(x), y))


def ball_size(k: int, radius: int) -> int:
    if radius < 0:
        raise GroupError("radius must be >= 0")
    if k == 1:
        return 1 + 2 * radius
    return 1 + (k + 1) * (k**radius - 1) // (k - 1)


def max_ball() -> int:
    raw = os.environ.get(MAX_BALL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_BALL
    try:
        return int(raw)
    except ValueError:
        raise GroupError(f"{MAX_BALL_ENV} must be an integer, got {raw!r}") from None


def iter_ball(params: GroupParams, radius: int, cap: int | None = None) -> Iterator[ReducedWord]:
    """Yield the ball of the given radius breadth-first, generators ascending."""
    cap = max_ball() if cap is None else cap
    size = ball_size(params.k, radius)
    if size > cap:
        raise BallTooLargeError(
            f"ball of radius {radius} for k={params.k} has {size} vertices (cap {cap})"
        )
    queue: deque[ReducedWord] = deque([params.identity])
    while queue:
        x = queue.popleft()
        yield x
        if len(x) == radius:
            continue
        last = x.letters[-1] if x.letters else None
        for m in range(1, params.k + 2):
            if m != last:
                queue.append(ReducedWord(x.letters + (m,), params.k))


def enumerate_ball(params: GroupParams, radius: int, cap: int | None = None) -> list[ReducedWord]:
    return list(iter_ball(params, radius, cap))


def format_word(x: ReducedWord | Sequence[int]) -> str:
    letters = x.letters if isinstance(x, ReducedWord) else tuple(x)
    return ".".join(f"a{i}" for i in letters) if letters else "e"


def parse_word(text: str, k: int) -> ReducedWord:
    """Parse ``"a1.a2.a3"`` or ``"e"``.  The result is reduced."""
    text = text.strip()
    if text == "e":
        return ReducedWord((), k)
    letters = []
    for part in text.split("."):
        if not part.startswith("a") or not part[1:].isdigit():
            raise GroupError(f"malformed word {text!r}")
        letters.append(int(part[1:]))
    return reduce(letters, k)
