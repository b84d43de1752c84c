"""Periodic eigenproblem for a finite-index normal subgroup.

A K-periodic wave function takes one value per coset.  Substituting it into
the Schrödinger equation on the tree gives the r x r symmetric system
``M phi = E phi`` with ``M = Q + eps * diag(v)`` (adjacency convention) or
``M = (k+1) I - Q + eps * diag(v)`` (graph Laplacian convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polynomial import EXACT_MAX_DIM, charpoly_exact, charpoly_float
from .quotient import CosetPartition

CONVENTIONS = ("adjacency", "laplacian")
RESIDUAL_TOL = 1e-10
DEGENERACY_TOL = 1e-9


class SpectrumError(ValueError):
    pass


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class PeriodicPotential:
    values: tuple[float, ...]
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if not all(math.isfinite(v) for v in vals) or not math.isfinite(self.epsilon):
            raise SpectrumError("potential values and epsilon must be finite")

    @classmethod
    def constant(cls, value: float, r: int, epsilon: float = 1.0) -> PeriodicPotential:
        return cls((value,) * r, epsilon)

    @property
    def scaled(self) -> np.ndarray:
        return self.epsilon * np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class SpectralProblem:
    partition: CosetPartition
    potential: PeriodicPotential
    convention: str = "adjacency"

    @property
    def r(self) -> int:
        return self.partition.r

    @property
    def matrix(self) -> np.ndarray:
        Q = self.partition.Q.astype(float)
        if self.convention == "laplacian":
            Q = (self.partition.k + 1) * np.eye(self.r) - Q
        return Q + np.diag(self.potential.scaled)

    def exact_matrix(self) -> list[list[Fraction]]:
        k1 = self.partition.k + 1
        out = []
        for i in range(self.r):
            row = []
            for j in range(self.r):
                q = Fraction(int(self.partition.Q[i, j]))
                if self.convention == "laplacian":
                    q = (k1 if i == j else 0) - q
                if i == j:
                    eps = Fraction(self.potential.epsilon)
                    q += eps * Fraction(self.potential.values[i])
                row.append(q)
            out.append(row)
        return out


@dataclass(frozen=True)
class SpectralSolution:
    energy: float
    components: tuple[float, ...]
    multiplicity: int
    residual: float


def build_problem(p: CosetPartition, pot: PeriodicPotential, convention: str = "adjacency") -> SpectralProblem:
    if len(pot.values) != p.r:
        raise SpectrumError(f"potential has {len(pot.values)} values but the partition has r={p.r}")
    if convention not in CONVENTIONS:
        raise SpectrumError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return SpectralProblem(p, pot, convention)


def determinant_poly(prob: SpectralProblem) -> tuple:
    """Ascending coefficients of D_K(E) = det(M - E I).

    Entries are ``Fraction`` when computed exactly (r <= EXACT_MAX_DIM; every
    float is a dyadic rational, so this is always possible), float otherwise.
    The leading coefficient is (-1)**r.
    """
    sign = -1 if prob.r % 2 else 1
    if prob.r <= EXACT_MAX_DIM:
        # det(M - E I) = (-1)^r det(E I - M)
        return tuple(sign * c for c in charpoly_exact(prob.exact_matrix()))
    return tuple(float(sign * c) for c in charpoly_float(prob.matrix))


def evaluate_D(prob: SpectralProblem, E: float) -> float:
    return float(np.linalg.det(prob.matrix - E * np.eye(prob.r)))


def normalize_vector(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Unit 2-norm with the first non-negligible component positive."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    for c in v:
        if abs(c) > tol:
            return v if c > 0 else -v
    return v


def _canonical_basis(V: np.ndarray) -> list[np.ndarray]:
    """Basis-independent orthonormal basis of span(V's columns).

    Gram-Schmidt over the columns of the orthogonal projector, which does not
    depend on which eigenvectors the solver happened to return.
    """
    P = V @ V.T
    basis: list[np.ndarray] = []
    for j in range(P.shape[1]):
        w = P[:, j].copy()
        for b in basis:
            w -= (b @ w) * b
        if np.linalg.norm(w) > 1e-6:
            basis.append(normalize_vector(w))
        if len(basis) == V.shape[1]:
            break
    return basis


def energies(prob: SpectralProblem) -> list[SpectralSolution]:
    """All admissible energies, ascending, with normalized coset vectors."""
    M = prob.matrix
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver did not converge: {exc}") from exc
    scale = 1.0 + float(np.max(np.abs(w)))
    groups: list[list[int]] = []
    for i in range(len(w)):
        if groups and w[i] - w[groups[-1][-1]] <= DEGENERACY_TOL * scale:
            groups[-1].append(i)
        else:
            groups.append([i])

    out = []
    for g in groups:
        E = float(np.mean(w[g]))
        basis = _canonical_basis(V[:, g])
        basis.sort(key=lambda b: tuple(np.round(b, 12)))
        for phi in basis:
            res = float(np.max(np.abs(M @ phi - E * phi)))
            out.append(SpectralSolution(E, tuple(float(c) for c in phi), len(g), res))
    return out


def check_residuals(solutions: Sequence[SpectralSolution], tol: float = RESIDUAL_TOL) -> bool:
    return all(s.residual <= tol * (1.0 + abs(s.energy)) for s in solutions)
