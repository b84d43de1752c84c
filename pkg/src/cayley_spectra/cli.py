"""Command-line entry point.

    cayley-spectra partition --k 2 --subgroup hcap
    cayley-spectra spectrum  --k 2 --subgroup even --epsilon 1 --potential 0,1 --out run/
    cayley-spectra chain     --k 2 --energy 0 --out run/
    cayley-spectra verify    run/spectrum.json --radius 4

Exit codes: 0 all checks pass, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import reports
from .chain import (
    ChainError,
    ChainParams,
    ChainSolution,
    as_real_if_close,
    chain_from_seeds,
    chain_solution,
    classify,
    general_solution,
    is_bounded,
    recurrence_residual,
    solve_recurrence,
)
from .config import ConfigError, RunConfig, load_config
from .group import GroupError
from .quotient import (
    CosetPartition,
    InvolutiveHom,
    PartitionError,
    ZProjection,
    build_partition,
    catalog_hom,
    format_cycles,
    is_infinite_spec,
)
from .spectrum import (
    RESIDUAL_TOL,
    PeriodicPotential,
    SolverError,
    SpectralSolution,
    SpectrumError,
    build_problem,
    check_residuals,
    determinant_poly,
    energies,
)
from .verify import VerificationError, lift_chain, lift_finite, verify_solution

log = logging.getLogger("cayley_spectra")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

UNBOUNDED_NOTE = (
    "pointwise solution only: |lambda| != 1 or a double root makes phi_n grow on at least "
    "one side, so phi is not square-summable"
)


def resolve_partition(cfg: RunConfig) -> CosetPartition:
    if cfg.hom is not None:
        return build_partition(cfg.hom, name=cfg.subgroup or "custom")
    name = cfg.subgroup or "trivial"
    if is_infinite_spec(name):
        raise ConfigError(f"{name!r} has infinite index; use the chain command")
    return build_partition(catalog_hom(name, cfg.k), name=name)


def partition_report(p: CosetPartition) -> dict:
    return {
        "kind": "partition",
        "k": p.k,
        "subgroup": p.name,
        "hom": p.hom.to_dict(),
        "r": p.r,
        "cosets": [
            {"index": i, "image": format_cycles(g), "representative": str(w)}
            for i, (g, w) in enumerate(zip(p.cosets, p.representatives))
        ],
        "Q": p.Q.tolist(),
        "Q_H0": p.q_h0.tolist(),
        "N_H0": p.n_h0,
        "metadata": reports.metadata(),
    }


def cmd_partition(cfg: RunConfig) -> tuple[dict, int]:
    return partition_report(resolve_partition(cfg)), EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> tuple[dict, int]:
    p = resolve_partition(cfg)
    pot = PeriodicPotential(cfg.potential_for(p.r), cfg.epsilon)
    prob = build_problem(p, pot, cfg.convention)
    sols = energies(prob)
    coeffs = determinant_poly(prob)
    exact = all(not isinstance(c, float) for c in coeffs)
    ok = check_residuals(sols)
    report = {
        "kind": "spectrum",
        "k": p.k,
        "subgroup": p.name,
        "hom": p.hom.to_dict(),
        "r": p.r,
        "Q": p.Q.tolist(),
        "convention": cfg.convention,
        "epsilon": pot.epsilon,
        "potential": list(pot.values),
        "D_K": {
            "definition": "det(M - E I)",
            "order": "ascending",
            "coefficients": [float(c) for c in coeffs],
            "exact": [reports.fraction_str(c) for c in coeffs] if exact else None,
        },
        "residual_tol": RESIDUAL_TOL,
        "solutions": [
            {"index": i, "E": s.energy, "multiplicity": s.multiplicity,
             "phi": list(s.components), "residual": s.residual}
            for i, s in enumerate(sols)
        ],
        "pass": ok,
        "metadata": reports.metadata(),
    }
    return report, EXIT_OK if ok else EXIT_FAIL


def _chain_params(cfg: RunConfig) -> ChainParams:
    if cfg.energy is None:
        raise ConfigError("chain needs an energy (--energy)")
    return ChainParams(cfg.k, cfg.energy, cfg.epsilon, cfg.potential, cfg.convention)


def cmd_chain(cfg: RunConfig) -> tuple[dict, int]:
    zp = ZProjection.parse(cfg.subgroup or "zM:1,2", cfg.k)
    params = _chain_params(cfg)
    lo, hi = cfg.n_range
    report = {
        "kind": "chain",
        "k": cfg.k,
        "subgroup": zp.name,
        "convention": cfg.convention,
        "epsilon": params.epsilon,
        "potential": list(params.potential),
        "E": params.energy,
        "n_range": [lo, hi],
    }
    if params.is_constant:
        if cfg.seeds is not None:
            sol = chain_from_seeds(params, *cfg.seeds)
        else:
            sol = chain_solution(params, *(cfg.coeffs or (0.5, 0.5)))
        seq = general_solution(sol, lo, hi)
        check = solve_recurrence(params, seq[0], seq[1], lo, hi)
        agree = max(abs(seq[n] - check[n]) / max(1.0, abs(seq[n])) for n in seq)
        bounded = is_bounded(sol)
        report.update({
            "lambda1": reports.cpair(sol.lambda1),
            "lambda2": reports.cpair(sol.lambda2),
            "C1": reports.cpair(sol.C1),
            "C2": reports.cpair(sol.C2),
            "degenerate": sol.degenerate,
            "classification": classify(params),
            "bounded": bounded,
            "note": None if bounded else UNBOUNDED_NOTE,
            "recurrence_agreement": agree,
        })
    else:
        if cfg.coeffs is not None:
            raise ConfigError("a non-constant potential has no closed form; give --seeds instead of --coeffs")
        seeds = cfg.seeds or (1.0, 1.0)
        seq = solve_recurrence(params, seeds[0], seeds[1], lo, hi)
        report.update({
            "lambda1": None, "lambda2": None, "C1": None, "C2": None,
            "degenerate": None, "classification": "periodic-potential",
            "bounded": None, "note": "non-constant potential: sequence from recurrence iteration",
            "seeds": [reports.cpair(seeds[0]), reports.cpair(seeds[1])],
        })
    res = recurrence_residual(params, seq)
    ok = res <= 1e-10
    shown = as_real_if_close(seq)
    report["sequence"] = [[n, float(complex(z).real), float(complex(z).imag)] for n, z in shown.items()]
    report["recurrence_residual"] = res
    report["pass"] = ok
    report["metadata"] = reports.metadata()
    return report, EXIT_OK if ok else EXIT_FAIL


def _verify_spectrum(src: dict, cfg: RunConfig) -> list[dict]:
    h = src["hom"]
    p = build_partition(InvolutiveHom.from_cycles(h["k"], h["m"], h["images"]), name=src["subgroup"])
    pot = PeriodicPotential(tuple(src["potential"]), src["epsilon"])
    out = []
    for s in src["solutions"]:
        sol = SpectralSolution(float(s["E"]), tuple(s["phi"]), int(s["multiplicity"]), float(s["residual"]))
        w = lift_finite(p, sol, pot, cfg.radius, src.get("convention", "adjacency"))
        rec = verify_solution(w, p, trials=cfg.trials, seed=cfg.seed)
        rec["index"] = s["index"]
        rec["E"] = sol.energy
        out.append(rec)
    return out


def _verify_chain(src: dict, cfg: RunConfig) -> list[dict]:
    zp = ZProjection.parse(src["subgroup"], src["k"])
    params = ChainParams(src["k"], src["E"], src["epsilon"], tuple(src["potential"]),
                         src.get("convention", "adjacency"))
    seq = {int(n): complex(re, im) for n, re, im in src["sequence"]}
    w = lift_chain(zp, seq, cfg.radius, params)
    rec = verify_solution(w, zp, trials=cfg.trials, seed=cfg.seed)
    rec["E"] = params.energy
    return [rec]


def cmd_verify(cfg: RunConfig, solution_file: str | Path) -> tuple[dict, int]:
    try:
        src = reports.read_json(solution_file)
        kind = src["kind"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read solution file {solution_file}: {exc}") from exc
    try:
        replace(cfg, k=int(src["k"])).check_radius()
        if kind == "spectrum":
            recs = _verify_spectrum(src, cfg)
        elif kind == "chain":
            recs = _verify_chain(src, cfg)
        else:
            raise ConfigError(f"cannot verify a {kind!r} report")
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed solution file {solution_file}: missing or bad field {exc}") from exc
    worst = max(recs, key=lambda r: r["max_residual"] / r["scale"] if r["scale"] else np.inf)
    passed = all(r["pass"] for r in recs)
    report = {
        "kind": "verify",
        "source": kind,
        "subgroup": src["subgroup"],
        "R": cfg.radius,
        "interior_count": recs[0]["interior_count"],
        "max_residual": max(r["max_residual"] for r in recs),
        "worst_vertex": worst["worst_vertex"],
        "periodicity_trials": sum(r["periodicity_trials"] for r in recs),
        "seed": cfg.seed,
        "pass": passed,
        "solutions": recs,
        "metadata": reports.metadata(),
    }
    return report, EXIT_OK if passed else EXIT_FAIL


# argument parsing -------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML run configuration")
    parser.add_argument("--k", type=int)
    parser.add_argument("--subgroup", help="trivial | even | hA:1,3 | hpair:1,2 | hcap | zM:1,2")
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--potential", help="comma-separated values; one value is broadcast")
    parser.add_argument("--energy", type=float)
    parser.add_argument("--radius", type=int)
    parser.add_argument("--convention", choices=["adjacency", "laplacian"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int, help="periodicity sample pairs for verify")
    parser.add_argument("--n-range", dest="n_range", help="chain index range, e.g. -20,20")
    parser.add_argument("--coeffs", help="chain coefficients C1,C2 (complex literals allowed)")
    parser.add_argument("--seeds", help="chain seeds phi_0,phi_1")
    parser.add_argument("--out", type=Path, help="output directory for JSON/CSV reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayley-spectra",
        description="Periodic wave functions of Schrödinger operators on Cayley trees.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("partition", "coset partition and neighbour-count matrix Q"),
        ("spectrum", "admissible energies for a finite-index subgroup"),
        ("chain", "chain solution for the infinite-index zM subgroup"),
        ("verify", "check a spectrum/chain report on a finite ball"),
    ]:
        sp = sub.add_parser(name, help=text)
        if name == "verify":
            sp.add_argument("solution", type=Path, help="spectrum.json or chain.json")
        _common(sp)
    return parser


_FLAGS = ("k", "subgroup", "epsilon", "potential", "energy", "radius", "convention",
          "seed", "trials", "n_range", "coeffs", "seeds", "out")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config, **{f: getattr(args, f) for f in _FLAGS})
        if args.command == "chain" and cfg.subgroup == "trivial" and args.subgroup is None:
            cfg = replace(cfg, subgroup="zM:1,2")
        if args.command == "partition":
            report, code = cmd_partition(cfg)
        elif args.command == "spectrum":
            report, code = cmd_spectrum(cfg)
        elif args.command == "chain":
            report, code = cmd_chain(cfg)
        else:
            report, code = cmd_verify(cfg, args.solution)
    except (ConfigError, PartitionError, GroupError, SpectrumError, ChainError, VerificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if cfg.out is not None:
        for path in reports.save(report, cfg.out):
            log.info("wrote %s", path)
    else:
        sys.stdout.write(reports.dumps(report))
    if code != EXIT_OK:
        print(f"{args.command}: checks FAILED", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
