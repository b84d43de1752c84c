from fractions import Fraction

import numpy as np
import pytest
import sympy

from cayley_spectra.polynomial import (
    charpoly_exact,
    charpoly_float,
    poly_divmod,
    poly_gcd,
    real_roots,
    simple_real_roots,
    squarefree_factors,
)

F = Fraction


def expand(roots):
    """Ascending coefficients of prod (E - r)."""
    p = [F(1)]
    for r in roots:
        p = [F(0)] + p
        for i in range(len(p) - 1):
            p[i] -= r * p[i + 1]
    return p


def test_expand_helper():
    assert expand([1, 2]) == [2, -3, 1]


def test_charpoly_exact_matches_sympy():
    M = [[F(2), F(1), F(0)], [F(1), F(-1, 3), F(4)], [F(0), F(4), F(5, 2)]]
    E = sympy.Symbol("E")
    ref = sympy.Poly((E * sympy.eye(3) - sympy.Matrix(M)).det(), E).all_coeffs()[::-1]
    assert charpoly_exact(M) == [F(int(c.p), int(c.q)) for c in ref]


def test_charpoly_float_agrees():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 5))
    A = A + A.T
    exact = charpoly_exact([[F(v) for v in row] for row in A])
    assert np.allclose(charpoly_float(A), [float(c) for c in exact], rtol=1e-9, atol=1e-9)


def test_poly_divmod_and_gcd():
    a = expand([1, 2, 3])
    b = expand([2, 5])
    q, r = poly_divmod(a, b)
    assert r != [0]
    assert poly_gcd(a, b) == expand([2])
    q, r = poly_divmod(a, expand([3]))
    assert r == [0] and q == expand([1, 2])


def test_squarefree_factors():
    p = expand([1, 1, 1, -2, 5, 5])
    fac = squarefree_factors(p)
    assert fac == {1: expand([-2]), 2: expand([5]), 3: expand([1])}


def test_real_roots_with_multiplicity():
    p = [-c for c in expand([F(1, 3), F(1, 3), -2, F(7, 4)])]
    assert real_roots(p) == pytest.approx([-2, 1 / 3, 1 / 3, 1.75], abs=1e-14)


def test_simple_real_roots_close_pair():
    p = expand([F(1), F(1) + F(1, 10**6), F(-3)])
    assert simple_real_roots(p) == pytest.approx([-3, 1, 1 + 1e-6], abs=1e-15)
    # float coefficients lose the pair to evaluation noise at roughly eps / |p'|
    assert simple_real_roots([float(c) for c in p]) == pytest.approx([-3, 1, 1 + 1e-6], abs=1e-9)
