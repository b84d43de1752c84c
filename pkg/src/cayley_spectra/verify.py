"""Vertex-by-vertex verification of periodic wave functions on finite balls."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Protocol, Sequence

import numpy as np

from .chain import ChainParams, ChainSolution, general_solution
from .group import GroupParams, ReducedWord, enumerate_ball, inverse, multiply
from .quotient import CosetPartition, ZProjection
from .spectrum import PeriodicPotential, SpectralSolution

DEFAULT_TOL = 1e-10


class VerificationError(ValueError):
    pass


class InsufficientKernelError(VerificationError):
    pass


class Labeler(Protocol):
    k: int

    def label(self, x: ReducedWord) -> int: ...


@dataclass
class BallWaveFunction:
    """Values of phi and eps*v on every vertex of a ball, in BFS order."""

    params: GroupParams
    radius: int
    vertices: list[ReducedWord]
    values: np.ndarray
    potential: np.ndarray
    energy: float
    convention: str = "adjacency"
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {x.letters: i for i, x in enumerate(self.vertices)}
        if len(self.values) != len(self.vertices) or len(self.potential) != len(self.vertices):
            raise VerificationError("one value and one potential entry per vertex required")
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.potential))):
            raise VerificationError("ball values must be finite")

    def __getitem__(self, x: ReducedWord) -> complex:
        return self.values[self.index[x.letters]]

    def __contains__(self, x: ReducedWord) -> bool:
        return x.letters in self.index

    @property
    def interior_count(self) -> int:
        return sum(1 for x in self.vertices if len(x) <= self.radius - 1)

    @property
    def scale(self) -> float:
        return (1.0 + abs(self.energy)) * float(np.max(np.abs(self.values)))

    def with_value(self, x: ReducedWord, value: complex) -> BallWaveFunction:
        vals = self.values.copy()
        vals[self.index[x.letters]] = value
        return BallWaveFunction(self.params, self.radius, self.vertices, vals,
                                self.potential, self.energy, self.convention, self.index)


def lift_finite(p: CosetPartition, sol: SpectralSolution, pot: PeriodicPotential, radius: int,
                convention: str = "adjacency") -> BallWaveFunction:
    params = GroupParams(p.k)
    verts = enumerate_ball(params, radius)
    labels = np.array([p.coset_of(x) for x in verts], dtype=np.int64)
    comps = np.asarray(sol.components)
    return BallWaveFunction(params, radius, verts, comps[labels].astype(float),
                            pot.scaled[labels], sol.energy, convention)


def lift_chain(zp: ZProjection, chain: ChainSolution | Mapping[int, complex], radius: int,
               params: ChainParams) -> BallWaveFunction:
    """Lift a Z-indexed sequence (or closed-form solution) onto the ball."""
    if isinstance(chain, ChainSolution):
        seq = general_solution(chain, -radius, radius)
    else:
        seq = dict(chain)
        missing = [n for n in range(-radius, radius + 1) if n not in seq]
        if missing:
            raise VerificationError(
                f"sequence does not cover [-{radius}, {radius}] (missing n={missing[0]})"
            )
    gp = GroupParams(zp.k)
    verts = enumerate_ball(gp, radius)
    labels = [zp.z_coset_index(x) for x in verts]
    vals = np.array([seq[n] for n in labels], dtype=complex)
    if np.all(vals.imag == 0):
        vals = vals.real
    pot = np.array([params.epsilon * params.v(n) for n in labels])
    return BallWaveFunction(gp, radius, verts, vals, pot, params.energy, params.convention)


def _vertex_residuals(w: BallWaveFunction) -> list[tuple[float, int]]:
    k1 = w.params.k + 1
    out = []
    for i, x in enumerate(w.vertices):
        if len(x) > w.radius - 1:
            break  # BFS order: everything after is on the boundary sphere
        letters = x.letters
        last = letters[-1] if letters else None
        s = 0.0
        for m in range(1, k1 + 1):
            y = letters[:-1] if m == last else letters + (m,)
            s += w.values[w.index[y]]
        phi = w.values[i]
        if w.convention == "laplacian":
            r = k1 * phi - s + w.potential[i] * phi - w.energy * phi
        else:
            r = s - (w.energy - w.potential[i]) * phi
        out.append((abs(r), i))
    return out


def residual(w: BallWaveFunction) -> tuple[float, ReducedWord]:
    """Max residual of the Schrödinger equation over interior vertices.

    Ties go to the vertex that comes first in BFS order.
    """
    if w.radius < 1:
        raise VerificationError("radius must be >= 1 to have interior vertices")
    worst, where = -1.0, 0
    for r, i in _vertex_residuals(w):
        if r > worst:
            worst, where = r, i
    return float(worst), w.vertices[where]


def chain_shortcut_residual(w: BallWaveFunction, zp: ZProjection, seq: Mapping[int, complex],
                            params: ChainParams) -> float:
    """Residual at each interior vertex computed from its class index alone."""
    worst = 0.0
    for x in w.vertices:
        if len(x) > w.radius - 1:
            break
        n = zp.z_coset_index(x)
        r = params.trace(n) * seq[n] - seq[n - 1] - seq[n + 1]
        worst = max(worst, abs(r))
    return worst


@dataclass
class PeriodicityReport:
    ok: bool
    trials: int
    seed: int
    witness: tuple[ReducedWord, ReducedWord] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _random_word(rng: random.Random, k: int, length: int) -> ReducedWord:
    letters: list[int] = []
    for _ in range(length):
        choices = [m for m in range(1, k + 2) if not letters or m != letters[-1]]
        letters.append(rng.choice(choices))
    return ReducedWord(tuple(letters), k)


def check_periodicity(w: BallWaveFunction, kernel: CosetPartition | ZProjection | Labeler,
                      trials: int = 200, seed: int = 0) -> PeriodicityReport:
    """Sample y in the kernel and x in the ball with yx in the ball; require phi(yx) = phi(x).

    Kernel elements come from rejection sampling over random words of length
    up to 2R; x is then chosen so that both x and yx stay inside the ball.
    """
    rng = random.Random(seed)
    k, R = w.params.k, w.radius
    done = 0
    attempts = 0
    max_attempts = 200 * max(trials, 1)
    while done < trials:
        attempts += 1
        if attempts > max_attempts:
            raise InsufficientKernelError(
                f"found only {done} of {trials} kernel pairs inside the radius-{R} ball; increase R"
            )
        y = _random_word(rng, k, rng.randint(0, 2 * R))
        if kernel.label(y) != 0:
            continue
        # pick z = yx in the ball with d(y, z) <= R: keep a prefix of y, append a fresh tail
        n = len(y)
        p = rng.randint(max(0, n - R), min(n, R))
        room = min(R - p, R - (n - p))
        tail: list[int] = []
        for _ in range(rng.randint(0, room)):
            prev = tail[-1] if tail else (y.letters[p - 1] if p else None)
            banned = {prev, y.letters[p] if (not tail and p < n) else None}
            tail.append(rng.choice([m for m in range(1, k + 2) if m not in banned]))
        z = ReducedWord(y.letters[:p] + tuple(tail), k)
        x = multiply(inverse(y), z)
        if len(x) > R or len(z) > R:
            continue
        done += 1
        if w[z] != w[x]:
            return PeriodicityReport(False, done, seed, (y, x))
    return PeriodicityReport(True, done, seed)


def least_squares_floor(M: np.ndarray, E: float) -> tuple[np.ndarray, float]:
    """Unit vector minimising ||(M - E I) phi||_2, and that minimum."""
    _, s, Vt = np.linalg.svd(M - E * np.eye(M.shape[0]))
    return Vt[-1], float(s[-1])


def verify_solution(w: BallWaveFunction, kernel, tol: float = DEFAULT_TOL, trials: int = 200,
                    seed: int = 0) -> dict:
    worst, where = residual(w)
    per = check_periodicity(w, kernel, trials, seed)
    passed = worst <= tol * w.scale and per.ok
    return {
        "R": w.radius,
        "interior_count": w.interior_count,
        "max_residual": worst,
        "worst_vertex": str(where),
        "scale": w.scale,
        "periodicity_trials": per.trials,
        "periodicity_ok": per.ok,
        "pass": bool(passed),
    }
