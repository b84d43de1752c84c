"""Exact characteristic polynomials and a real-root finder.

This is the verification route for the eigenvalue solver: coefficients come
from the Faddeev-LeVerrier recursion over rationals, roots from a companion
matrix estimate refined by bisection on each square-free factor.  Coefficient
lists are ascending (``c[j]`` multiplies ``E**j``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

EXACT_MAX_DIM = 16


def charpoly_exact(M: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients of det(E*I - M), ascending, by Faddeev-LeVerrier."""
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for step in range(1, n + 1):
        c_prev = coeffs[n - step + 1]
        # Mk <- A @ Mk + c_prev * I
        Mk = [
            [sum((A[i][l] * Mk[l][j] for l in range(n)), Fraction(0)) + (c_prev if i == j else 0)
             for j in range(n)]
            for i in range(n)
        ]
        tr = sum((A[i][l] * Mk[l][i] for i in range(n) for l in range(n)), Fraction(0))
        coeffs[n - step] = -tr / step
    return coeffs


def charpoly_float(M: np.ndarray) -> np.ndarray:
    """Float Faddeev-LeVerrier, used only above ``EXACT_MAX_DIM``."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    Mk = np.zeros_like(M)
    eye = np.eye(n)
    for step in range(1, n + 1):
        Mk = M @ Mk + coeffs[n - step + 1] * eye
        coeffs[n - step] = -np.trace(M @ Mk) / step
    return coeffs


# polynomial arithmetic over Q, ascending coefficient lists -------------------

def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_deriv(p: Sequence) -> list:
    if len(p) <= 1:
        return [type(p[0])(0) if p else Fraction(0)]
    return _trim([j * p[j] for j in range(1, len(p))])


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a, b = _trim(list(a)), _trim(list(b))
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    rem = list(a)
    while len(rem) >= len(b) and rem != [0]:
        shift = len(rem) - len(b)
        f = rem[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            rem[i + shift] -= f * c
        rem = _trim(rem[:-1]) if len(rem) > 1 else [Fraction(0)]
    return _trim(q), _trim(rem)


def _monic(p: list[Fraction]) -> list[Fraction]:
    return [c / p[-1] for c in p]


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b != [0]:
        a, b = b, poly_divmod(a, b)[1]
    return _monic(a)


def squarefree_factors(p: Sequence[Fraction]) -> dict[int, list[Fraction]]:
    """Yun's algorithm: p = c * prod_i f_i**i with f_i square-free, coprime."""
    p = _monic(_trim([Fraction(c) for c in p]))
    out: dict[int, list[Fraction]] = {}
    if len(p) == 1:
        return out
    dp = poly_deriv(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = [ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(poly_deriv(b), len(b)))]
    d = _trim(d)
    i = 1
    while len(b) > 1:
        a = poly_gcd(b, d)
        if len(a) > 1:
            out[i] = a
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = _trim([ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(poly_deriv(b), len(b)))])
        i += 1
    return out


def _pad(p: list, n: int) -> list:
    return list(p) + [Fraction(0)] * (n - len(p))


# root finding ------------------------------------------------------------------

def _horner(p: Sequence, x):
    acc = p[-1] * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(p: Sequence, x: float) -> int:
    if isinstance(p[0], Fraction):
        v = _horner(p, Fraction(x))
    else:
        v = _horner(p, x)
    return (v > 0) - (v < 0)


def _bisect(p: Sequence, lo: float, hi: float) -> float | None:
    slo, shi = _sign(p, lo), _sign(p, hi)
    if slo == 0:
        return lo
    if shi == 0:
        return hi
    if slo == shi:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        sm = _sign(p, mid)
        if sm == 0:
            return mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def simple_real_roots(p: Sequence) -> list[float]:
    """Real roots of a polynomial assumed to have only simple real roots.

    Fraction coefficients make every sign test in the bisection exact.
    """
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    deg = len(p) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [float(-p[0] / p[1])]
    pf = np.array([float(c) for c in p])
    cands = np.sort(np.roots(pf[::-1]).real)
    bound = 1.0 + float(np.max(np.abs(pf[:-1] / pf[-1])))
    edges = [-bound] + [0.5 * (a + b) for a, b in zip(cands, cands[1:])] + [bound]
    roots = []
    for c, lo, hi in zip(cands, edges, edges[1:]):
        x = _bisect(p, float(lo), float(hi))
        roots.append(float(c) if x is None else float(x))
    return roots


def real_roots(coeffs: Sequence, exact: bool = True) -> list[float]:
    """Real roots with multiplicity, ascending.

    With ``exact`` the coefficients are treated as rationals and split into
    square-free factors first, so repeated roots are located by sign changes
    of a factor that has them as simple roots.
    """
    if exact:
        roots: list[float] = []
        for mult, f in squarefree_factors([Fraction(c) for c in coeffs]).items():
            for x in simple_real_roots(f):
                roots.extend([x] * mult)
        return sorted(roots)
    return sorted(simple_real_roots([float(c) for c in coeffs]))
