import math
import random
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley_spectra.polynomial import real_roots, squarefree_factors
from cayley_spectra.quotient import catalog_names, catalog_partition
from cayley_spectra.spectrum import (
    _canonical_basis,
    PeriodicPotential,
    SpectrumError,
    build_problem,
    check_residuals,
    determinant_poly,
    energies,
    evaluate_D,
)


def leibniz_det(A):
    """Determinant by the permutation expansion; exact for Fraction entries."""
    n = len(A)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = Fraction(1)
        for i in range(n):
            prod *= A[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def sympy_detpoly(M):
    E = sympy.Symbol("E")
    S = sympy.Matrix([[sympy.Rational(Fraction(v)) for v in row] for row in M])
    p = sympy.Poly((S - E * sympy.eye(len(M))).det(), E)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]


def problem(name, k, values, eps=1.0, convention="adjacency"):
    p = catalog_partition(name, k)
    return build_problem(p, PeriodicPotential(tuple(values), eps), convention)


def test_build_problem_examples():
    assert problem("trivial", 2, [0.5]).matrix.tolist() == [[3.5]]
    assert problem("even", 2, [0, 1]).matrix.tolist() == [[0, 3], [3, 1]]
    prob = problem("hcap", 2, [1, 2, 3, 4], eps=0.0)
    assert prob.matrix.tolist() == prob.partition.Q.tolist()


def test_build_problem_errors():
    p = catalog_partition("even", 2)
    with pytest.raises(SpectrumError):
        build_problem(p, PeriodicPotential((0.0,), 1.0))
    with pytest.raises(SpectrumError):
        PeriodicPotential((math.nan, 0.0), 1.0)
    with pytest.raises(SpectrumError):
        build_problem(p, PeriodicPotential((0.0, 0.0)), convention="bogus")


def test_determinant_poly_trivial():
    for k in (1, 2, 3):
        c = determinant_poly(problem("trivial", k, [0.5]))
        assert c == (Fraction(1, 2) + k + 1, Fraction(-1))


def test_determinant_poly_index_two():
    k, eps, v1, v2 = 3, Fraction(1, 2), Fraction(3), Fraction(-1, 4)
    c = determinant_poly(problem("even", k, [float(v1), float(v2)], float(eps)))
    a, b = eps * v1, eps * v2
    # (E - a)(E - b) - (k+1)^2
    assert c == (a * b - (k + 1) ** 2, -(a + b), Fraction(1))


def test_determinant_poly_example3_roots():
    c = determinant_poly(problem("hcap", 2, [0, 0, 0, 0], eps=0.0))
    Q = catalog_partition("hcap", 2).Q.tolist()
    assert list(c) == sympy_detpoly(Q)
    assert real_roots(c) == pytest.approx([-1, 1, 1, 3], abs=1e-12)
    assert squarefree_factors(c)[2] == [Fraction(-1), Fraction(1)]  # (E - 1) squared


@pytest.mark.parametrize("name", ["trivial", "even", "hA:1", "hpair:1,2", "hpair:2,3", "hcap"])
def test_determinant_poly_matches_sympy(name):
    rng = random.Random(hash(name) % 1000)
    p = catalog_partition(name, 2)
    vals = [rng.choice([-2, -0.5, 0, 0.25, 1, 3]) for _ in range(p.r)]
    prob = build_problem(p, PeriodicPotential(tuple(vals), 0.5))
    assert list(determinant_poly(prob)) == sympy_detpoly(prob.exact_matrix())


def test_laplacian_convention_matrix():
    prob = problem("even", 2, [0, 1], convention="laplacian")
    assert prob.matrix.tolist() == [[3, -3], [-3, 4]]
    # constant potential: rigid shift E -> (k+1) + 2 eps v - E
    adj = energies(problem("hcap", 2, [0.5] * 4))
    lap = energies(problem("hcap", 2, [0.5] * 4, convention="laplacian"))
    assert sorted(3 + 2 * 0.5 - s.energy for s in adj) == pytest.approx([s.energy for s in lap])


def test_energies_examples():
    (s,) = energies(problem("trivial", 2, [0.5]))
    assert s.energy == 3.5 and s.components == (1.0,) and s.multiplicity == 1

    sols = energies(problem("even", 2, [0, 1]))
    assert [s.energy for s in sols] == pytest.approx(
        [(1 - math.sqrt(37)) / 2, (1 + math.sqrt(37)) / 2], abs=1e-12
    )

    sols = energies(problem("hcap", 2, [0] * 4, eps=0.0))
    oracle = sympy.Matrix(catalog_partition("hcap", 2).Q.tolist()).eigenvals()
    assert oracle == {3: 1, 1: 2, -1: 1}
    assert [s.energy for s in sols] == pytest.approx([-1, 1, 1, 3], abs=1e-12)
    assert [s.multiplicity for s in sols] == [1, 2, 2, 1]
    assert np.allclose(sols[-1].components, [0.5] * 4)


def test_degenerate_basis_is_orthonormal_and_canonical():
    prob = problem("hcap", 2, [0] * 4, eps=0.0)
    deg = [s for s in energies(prob) if s.multiplicity == 2]
    B = np.array([s.components for s in deg])
    assert np.allclose(B @ B.T, np.eye(2), atol=1e-12)
    assert all(next(c for c in s.components if abs(c) > 1e-12) > 0 for s in deg)
    # any rotation of the eigenspace basis yields the same canonical basis
    t = 0.7
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    again = _canonical_basis(B.T @ rot)
    again.sort(key=lambda b: tuple(np.round(b, 12)))
    assert np.allclose(np.array(again), B, atol=1e-12)


def test_evaluate_D_examples():
    assert evaluate_D(problem("trivial", 2, [0.5]), 0.0) == pytest.approx(3.5)
    assert evaluate_D(problem("even", 2, [0, 1]), 0.0) == pytest.approx(-9.0)
    prob = problem("hpair:1,2", 3, [0.1, -0.3, 0.7, 0.0, 1.1, -2.0])
    for s in energies(prob):
        assert abs(evaluate_D(prob, s.energy)) <= 1e-10 * (1 + abs(s.energy)) ** prob.r


def test_evaluate_D_matches_leibniz():
    prob = problem("hcap", 2, [0.5, -1.0, 0.25, 2.0])
    for E in (-2.0, 0.0, 0.5, 3.25):
        A = [[c - (E if i == j else 0) for j, c in enumerate(row)] for i, row in enumerate(prob.exact_matrix())]
        A = [[Fraction(c) for c in row] for row in A]
        assert evaluate_D(prob, E) == pytest.approx(float(leibniz_det(A)), rel=1e-12, abs=1e-12)


potentials = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["trivial", "even", "hA:2", "hpair:1,2", "hcap"]),
    st.integers(1, 3),
    st.floats(-2, 2, allow_nan=False),
    st.lists(potentials, min_size=6, max_size=6),
)
def test_spectral_invariants(name, k, eps, vals):
    p = catalog_partition(name, k)
    prob = build_problem(p, PeriodicPotential(tuple(vals[: p.r]), eps))
    M = prob.matrix
    sols = energies(prob)
    assert len(sols) == p.r
    assert check_residuals(sols)
    for s in sols:
        phi = np.array(s.components)
        assert np.max(np.abs(M @ phi - s.energy * phi)) <= 1e-10 * (1 + abs(s.energy))
        assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-12)
    Es = [s.energy for s in sols]
    assert Es == sorted(Es)
    assert sum(Es) == pytest.approx(np.trace(M), rel=1e-10, abs=1e-10)
    roots = real_roots(determinant_poly(prob))
    assert np.allclose(roots, Es, atol=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_perron_bound(k):
    for name in catalog_names(k):
        p = catalog_partition(name, k)
        sols = energies(build_problem(p, PeriodicPotential((0.0,) * p.r, 0.0)))
        top = sols[-1]
        assert top.energy == pytest.approx(k + 1, abs=1e-12)
        assert top.multiplicity == 1
        assert np.allclose(top.components, np.full(p.r, 1 / math.sqrt(p.r)), atol=1e-12)


def test_example2_closed_form_random():
    rng = random.Random(7)
    for _ in range(100):
        k = rng.randint(1, 4)
        eps, v1, v2 = rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-3, 3)
        sols = energies(problem("even", k, [v1, v2], eps))
        a, b = eps * v1, eps * v2
        disc = math.sqrt((a - b) ** 2 + 4 * (k + 1) ** 2)
        assert [s.energy for s in sols] == pytest.approx([(a + b - disc) / 2, (a + b + disc) / 2], abs=1e-10)
