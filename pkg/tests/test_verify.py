import math
import random

import numpy as np
import pytest

from cayley_spectra.chain import ChainParams, chain_solution, general_solution, solve_recurrence
from cayley_spectra.group import GroupParams, ReducedWord, omega_count
from cayley_spectra.quotient import ZProjection, catalog_names, catalog_partition
from cayley_spectra.spectrum import PeriodicPotential, SpectralSolution, build_problem, energies, evaluate_D
from cayley_spectra.verify import (
    InsufficientKernelError,
    VerificationError,
    chain_shortcut_residual,
    check_periodicity,
    least_squares_floor,
    lift_chain,
    lift_finite,
    residual,
    verify_solution,
)


def w(*letters, k=2):
    return ReducedWord(tuple(letters), k)


def solve(name, k, vals, eps=1.0):
    p = catalog_partition(name, k)
    pot = PeriodicPotential(tuple(vals), eps)
    return p, pot, energies(build_problem(p, pot))


def test_lift_finite_trivial_is_constant():
    p, pot, (s,) = solve("trivial", 2, [0.5])
    ball = lift_finite(p, s, pot, 3)
    assert np.all(ball.values == 1.0)
    assert np.all(ball.potential == 0.5)


def test_lift_finite_index_two_alternates():
    p, pot, sols = solve("even", 2, [0.0, 1.0])
    ball = lift_finite(p, sols[0], pot, 3)
    for x in ball.vertices:
        assert ball[x] == sols[0].components[len(x) % 2]


def test_lift_finite_example3_parity_labels():
    p, pot, sols = solve("hcap", 2, [0.1, 0.2, 0.3, 0.4])
    s = sols[1]
    ball = lift_finite(p, s, pot, 4)
    by_parity = {}
    for x in ball.vertices:
        key = (omega_count(x, 1) % 2, omega_count(x, 2) % 2)
        by_parity.setdefault(key, set()).add(ball[x])
    assert len(by_parity) == 4
    assert all(len(vals) == 1 for vals in by_parity.values())


def test_lift_chain_examples():
    zp = ZProjection(2, 1, 2)
    params = ChainParams(2, 3.0)
    const = lift_chain(zp, {n: 2.0 for n in range(-3, 4)}, 3, params)
    assert np.all(const.values == 2.0)

    lin = lift_chain(zp, chain_solution(params, 0, 1), 3, params)
    assert (lin[w()], lin[w(1)], lin[w(2)], lin[w(3)]) == (0, 1, -1, 0)

    p0 = ChainParams(2, 0.0)
    seq = general_solution(chain_solution(p0, 0.5, 0.5), -4, 4)
    ball = lift_chain(zp, seq, 4, p0)
    for x in ball.vertices:
        n = zp.z_coset_index(x)
        assert ball[x] == pytest.approx(math.cos(2 * math.pi * n / 3), abs=1e-14)


def test_lift_chain_range_too_small():
    with pytest.raises(VerificationError):
        lift_chain(ZProjection(2, 1, 2), {0: 1.0, 1: 1.0}, 3, ChainParams(2, 3.0))


def test_residual_examples():
    p, pot, (s,) = solve("trivial", 2, [0.5])
    ball = lift_finite(p, s, pot, 3)
    res, where = residual(ball)
    assert res == 0.0

    off = SpectralSolution(s.energy + 0.5, s.components, 1, 0.0)
    res, where = residual(lift_finite(p, off, pot, 3))
    assert res == pytest.approx(0.5)
    assert where == w()  # every interior vertex ties; BFS-least wins


def test_residual_excludes_boundary():
    p, pot, (s,) = solve("trivial", 2, [0.0])
    ball = lift_finite(p, s, pot, 2)
    assert ball.interior_count == 4
    # a corrupted boundary value does not touch any interior equation except its parent's
    leaf = w(1, 2)
    res, where = residual(ball.with_value(leaf, 5.0))
    assert res == pytest.approx(4.0) and where == w(1)
    with pytest.raises(VerificationError):
        residual(lift_finite(p, s, pot, 0))


def test_periodicity_passes_for_lifted_solutions():
    for name in ("trivial", "even", "hA:1", "hpair:1,2", "hcap"):
        p = catalog_partition(name, 2)
        pot = PeriodicPotential(tuple(0.1 * i for i in range(p.r)), 1.0)
        sols = energies(build_problem(p, pot))
        ball = lift_finite(p, sols[0], pot, 4)
        rep = check_periodicity(ball, p, trials=200, seed=3)
        assert rep.ok and rep.trials == 200


def test_periodicity_negative_control():
    p, pot, sols = solve("even", 2, [0.0, 1.0])
    ball = lift_finite(p, sols[0], pot, 3)
    bad = ball.with_value(w(), 123.0)
    rep = check_periodicity(bad, p, trials=500, seed=1)
    assert not rep
    y, x = rep.witness
    assert p.coset_of(y) == 0
    assert bad[y * x] != bad[x]


def test_periodicity_chain_kernel():
    zp = ZProjection(3, 1, 2)
    params = ChainParams(3, 0.7)
    ball = lift_chain(zp, chain_solution(params, 0.5, 0.5), 4, params)
    assert check_periodicity(ball, zp, trials=200, seed=2)


def test_insufficient_kernel_elements():
    class Nothing:
        k = 2

        def label(self, x):
            return 1

    p, pot, (s,) = solve("trivial", 2, [0.0])
    with pytest.raises(InsufficientKernelError):
        check_periodicity(lift_finite(p, s, pot, 2), Nothing(), trials=5)


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("R", [3, 4, 5])
def test_soundness_on_balls(k, R):
    if k == 3 and R == 5:
        names = ["trivial", "even", "hpair:1,2", "hcap"]
    else:
        names = catalog_names(k)
    rng = random.Random(k * 10 + R)
    for name in names:
        p = catalog_partition(name, k)
        pot = PeriodicPotential(tuple(rng.uniform(-2, 2) for _ in range(p.r)), rng.uniform(-1, 1))
        for s in energies(build_problem(p, pot)):
            ball = lift_finite(p, s, pot, R)
            res, _ = residual(ball)
            assert res <= 1e-10 * (1 + abs(s.energy)) * np.max(np.abs(ball.values))


def test_completeness_probe():
    rng = random.Random(4)
    for name in ("even", "hpair:1,2", "hcap"):
        p = catalog_partition(name, 2)
        pot = PeriodicPotential(tuple(rng.uniform(-1, 1) for _ in range(p.r)), 0.8)
        prob = build_problem(p, pot)
        M = prob.matrix
        lo, hi = np.linalg.eigvalsh(M)[[0, -1]]
        tested = 0
        while tested < 50:
            E = rng.uniform(lo - 1, hi + 1)
            if abs(evaluate_D(prob, E)) <= 0.1:
                continue
            phi, floor = least_squares_floor(M, E)
            ball = lift_finite(p, SpectralSolution(E, tuple(phi), 1, 0.0), pot, 3)
            res, _ = residual(ball)
            assert res / np.max(np.abs(ball.values)) >= 1e-3
            tested += 1


@pytest.mark.parametrize("k", [2, 3])
def test_chain_soundness_and_shortcut(k):
    zp = ZProjection(k, 1, 2)
    rng = random.Random(k)
    cases = [ChainParams(k, k + 1.0), ChainParams(k, k - 3.0)]  # double roots +1 and -1
    cases += [ChainParams(k, rng.uniform(-4, 6), 0.5, (rng.uniform(-1, 1),)) for _ in range(8)]
    R = 6 if k == 2 else 5
    for params in cases:
        sol = chain_solution(params, complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(-1, 1))
        seq = general_solution(sol, -R - 1, R + 1)
        ball = lift_chain(zp, seq, R, params)
        res, _ = residual(ball)
        assert res <= 1e-10 * ball.scale
        short = chain_shortcut_residual(ball, zp, seq, params)
        assert short == pytest.approx(res, abs=1e-12 * ball.scale)


def test_chain_shortcut_is_exact_on_integer_sequence():
    zp = ZProjection(2, 1, 2)
    params = ChainParams(2, 3.5)  # phi_n = n is not a solution here: residual 0.5|n|
    seq = {n: float(n) for n in range(-7, 8)}
    ball = lift_chain(zp, seq, 6, params)
    res, _ = residual(ball)
    assert res == chain_shortcut_residual(ball, zp, seq, params)


def test_periodic_potential_chain_soundness():
    zp = ZProjection(2, 1, 2)
    params = ChainParams(2, 1.3, 1.0, (0.0, 0.7))
    seq = solve_recurrence(params, 1.0, 0.5, -6, 6)
    ball = lift_chain(zp, seq, 6, params)
    res, _ = residual(ball)
    assert res <= 1e-10 * ball.scale


def test_verify_solution_record():
    p, pot, sols = solve("hcap", 2, [0.0, 0.5, 1.0, 1.5])
    rec = verify_solution(lift_finite(p, sols[0], pot, 4), p, trials=50, seed=0)
    assert rec["pass"] and rec["R"] == 4 and rec["interior_count"] == 22
    assert set(rec) >= {"R", "interior_count", "max_residual", "worst_vertex", "periodicity_trials", "pass"}
