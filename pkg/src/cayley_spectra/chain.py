"""Wave functions periodic under the infinite-index kernel of f_M, |M| = 2.

Cosets are indexed by n in Z and a vertex of class n has one neighbour in
class n-1, k-1 in class n and one in n+1, so the coset values obey

    phi_{n-1} + phi_{n+1} = t_n phi_n,    t_n = E - eps v_n - (k - 1)

(adjacency convention; the Laplacian convention has t_n = 2 + eps v_n - E).
For constant potential the characteristic equation is lambda^2 - t lambda + 1 = 0.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .spectrum import CONVENTIONS

DEGENERATE_TOL = 1e-12
ILL_CONDITIONED_GAP = 1e-8
REAL_TOL = 1e-12
_LOG_MAX = math.log(np.finfo(float).max) - 1.0


class ChainError(ValueError):
    pass


class ChainOverflowError(OverflowError):
    pass


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ChainParams:
    k: int
    energy: float
    epsilon: float = 1.0
    potential: tuple[float, ...] = (0.0,)
    convention: str = "adjacency"

    def __post_init__(self) -> None:
        pot = self.potential
        if isinstance(pot, (int, float)):
            pot = (pot,)
        pot = tuple(float(v) for v in pot)
        object.__setattr__(self, "potential", pot)
        if self.k < 1:
            raise ChainError("k must be >= 1")
        if not pot:
            raise ChainError("potential period must be >= 1")
        if not all(math.isfinite(v) for v in pot + (self.energy, self.epsilon)):
            raise ChainError("chain parameters must be finite")
        if self.convention not in CONVENTIONS:
            raise ChainError(f"convention must be one of {CONVENTIONS}")

    @property
    def period(self) -> int:
        return len(self.potential)

    @property
    def is_constant(self) -> bool:
        return len(set(self.potential)) == 1

    def v(self, n: int) -> float:
        return self.potential[n % self.period]

    def trace(self, n: int = 0) -> float:
        """Coefficient t_n in phi_{n-1} + phi_{n+1} = t_n phi_n."""
        ev = self.epsilon * self.v(n)
        if self.convention == "laplacian":
            return 2.0 + ev - self.energy
        return self.energy - ev - (self.k - 1)


@dataclass(frozen=True)
class ChainSolution:
    lambda1: complex
    lambda2: complex
    C1: complex
    C2: complex
    degenerate: bool

    @property
    def roots(self) -> tuple[complex, complex]:
        return self.lambda1, self.lambda2


def characteristic_roots(params: ChainParams) -> tuple[complex, complex, bool]:
    """Roots of lambda^2 - t lambda + 1, ordered by (|lambda|, arg).

    Returns ``(lambda1, lambda2, degenerate)``.
    """
    if not params.is_constant:
        raise ChainError("closed-form roots need a constant potential")
    t = params.trace()
    disc = t * t - 4.0
    if abs(abs(t) - 2.0) <= DEGENERATE_TOL:
        lam = complex(math.copysign(1.0, t))
        return lam, lam, True
    if disc > 0:
        # larger root first computed without cancellation; the other is its reciprocal
        big = (t + math.copysign(math.sqrt(disc), t)) / 2.0
        pair = [complex(big), complex(1.0 / big)]
    else:
        s = math.sqrt(-disc) / 2.0
        pair = [complex(t / 2.0, s), complex(t / 2.0, -s)]
    pair.sort(key=lambda z: (round(abs(z), 12), cmath.phase(z)))
    return pair[0], pair[1], False


def classify(params: ChainParams) -> str:
    t = params.trace()
    if abs(abs(t) - 2.0) <= DEGENERATE_TOL:
        return "degenerate"
    return "oscillatory" if abs(t) < 2.0 else "exponential"


def _check_growth(lam: complex, n_lo: int, n_hi: int) -> None:
    a = abs(lam)
    if a == 0:
        raise ChainError("characteristic root is zero")
    worst = max(abs(n_lo), abs(n_hi)) * abs(math.log(a))
    if worst > _LOG_MAX:
        raise ChainOverflowError(
            f"|lambda|^|n| = exp({worst:.1f}) overflows double precision on [{n_lo}, {n_hi}]"
        )


def general_solution(sol: ChainSolution, n_lo: int, n_hi: int) -> dict[int, complex]:
    """phi_n = C1 l1^n + C2 l2^n, or (C1 + C2 n) l^n for a double root."""
    if n_lo > n_hi:
        raise ChainError("empty range")
    for lam in sol.roots:
        _check_growth(lam, n_lo, n_hi)
    out = {}
    for n in range(n_lo, n_hi + 1):
        if sol.degenerate:
            out[n] = (sol.C1 + sol.C2 * n) * sol.lambda1**n
        else:
            out[n] = sol.C1 * sol.lambda1**n + sol.C2 * sol.lambda2**n
    return out


def solve_recurrence(params: ChainParams, phi0: complex, phi1: complex, n_lo: int, n_hi: int) -> dict[int, complex]:
    """Iterate the three-term recurrence outward from the seeds at n = 0, 1."""
    if not (n_lo <= 0 and n_hi >= 1):
        raise ChainError("range must contain 0 and 1")
    phi = {0: complex(phi0), 1: complex(phi1)}
    for n in range(1, n_hi):
        phi[n + 1] = params.trace(n) * phi[n] - phi[n - 1]
        if not cmath.isfinite(phi[n + 1]):
            raise ChainOverflowError(f"recurrence overflowed at n={n + 1}")
    for n in range(0, n_lo, -1):
        phi[n - 1] = params.trace(n) * phi[n] - phi[n + 1]
        if not cmath.isfinite(phi[n - 1]):
            raise ChainOverflowError(f"recurrence overflowed at n={n - 1}")
    return dict(sorted(phi.items()))


def fit_coefficients(l1: complex, l2: complex, phi0: complex, phi1: complex, degenerate: bool = False) -> tuple[complex, complex]:
    """Coefficients reproducing the seeds phi_0, phi_1."""
    if degenerate or l1 == l2:
        # (C1 + C2 n) l^n at n = 0, 1
        return complex(phi0), complex(phi1) / l1 - complex(phi0)
    gap = abs(l1 - l2)
    if gap < ILL_CONDITIONED_GAP:
        warnings.warn(
            f"characteristic roots nearly coincide (|l1 - l2| = {gap:.2e}); coefficients are ill-conditioned",
            IllConditionedWarning,
            stacklevel=2,
        )
    C2 = (complex(phi1) - l1 * complex(phi0)) / (l2 - l1)
    C1 = complex(phi0) - C2
    return C1, C2


def chain_solution(params: ChainParams, C1: complex = 0.5, C2: complex = 0.5) -> ChainSolution:
    l1, l2, deg = characteristic_roots(params)
    return ChainSolution(l1, l2, complex(C1), complex(C2), deg)


def chain_from_seeds(params: ChainParams, phi0: complex, phi1: complex) -> ChainSolution:
    l1, l2, deg = characteristic_roots(params)
    C1, C2 = fit_coefficients(l1, l2, phi0, phi1, deg)
    return ChainSolution(l1, l2, C1, C2, deg)


def is_bounded(sol: ChainSolution) -> bool:
    """Bounded on all of Z: unit-modulus roots and no linear growth."""
    if sol.degenerate:
        return sol.C2 == 0
    on_circle = [abs(abs(l) - 1.0) <= 1e-12 for l in sol.roots]
    coeffs = [sol.C1, sol.C2]
    return all(on or c == 0 for on, c in zip(on_circle, coeffs))


def as_real_if_close(values: Mapping[int, complex] | Sequence[complex], tol: float = REAL_TOL):
    """Drop imaginary parts that are negligible relative to each magnitude."""
    items = values.items() if isinstance(values, Mapping) else enumerate(values)
    real = all(abs(z.imag) <= tol * max(1.0, abs(z)) for _, z in items)
    if not real:
        return values
    if isinstance(values, Mapping):
        return {n: float(z.real) for n, z in values.items()}
    return [float(z.real) for z in values]


def recurrence_residual(params: ChainParams, phi: Mapping[int, complex]) -> float:
    """Largest scaled residual of the recurrence over interior indices."""
    worst = 0.0
    ns = sorted(phi)
    for n in ns[1:-1]:
        a, b, c = phi[n - 1], phi[n], phi[n + 1]
        r = abs(a + c - params.trace(n) * b)
        worst = max(worst, r / max(1.0, abs(a), abs(b), abs(c)))
    return worst
