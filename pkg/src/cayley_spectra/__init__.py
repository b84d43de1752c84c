"""Periodic wave functions of the discrete Schrödinger operator on Cayley trees."""

__version__ = "0.1.0"

from .group import (  # noqa: E402
    GroupParams,
    ReducedWord,
    distance,
    enumerate_ball,
    inverse,
    multiply,
    neighbors,
    omega_count,
    reduce,
)
from .quotient import (  # noqa: E402
    CosetPartition,
    InvolutiveHom,
    ZProjection,
    build_partition,
    catalog_partition,
)
from .spectrum import (  # noqa: E402
    PeriodicPotential,
    SpectralProblem,
    SpectralSolution,
    build_problem,
    determinant_poly,
    energies,
    evaluate_D,
)
from .chain import (  # noqa: E402
    ChainParams,
    ChainSolution,
    characteristic_roots,
    fit_coefficients,
    general_solution,
    solve_recurrence,
)
from .verify import BallWaveFunction, check_periodicity, lift_chain, lift_finite, residual  # noqa: E402

__all__ = [
    "GroupParams", "ReducedWord", "distance", "enumerate_ball", "inverse", "multiply",
    "neighbors", "omega_count", "reduce",
    "CosetPartition", "InvolutiveHom", "ZProjection", "build_partition", "catalog_partition",
    "PeriodicPotential", "SpectralProblem", "SpectralSolution", "build_problem",
    "determinant_poly", "energies", "evaluate_D",
    "ChainParams", "ChainSolution", "characteristic_roots", "fit_coefficients",
    "general_solution", "solve_recurrence",
    "BallWaveFunction", "check_periodicity", "lift_chain", "lift_finite", "residual",
]
