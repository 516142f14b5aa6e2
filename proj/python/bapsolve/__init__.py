"""Projection onto polyhedra and LPs solved as sequences of projections."""

from ._core import (
    BapProblem,
    BapsolveError,
    InvalidArgument,
    LpProblem,
    ParseError,
    RnnmConfig,
    SolveStatus,
    gen_bap,
    gen_lp,
    kkt_report,
    performance_profile,
    performance_ratio,
    read_mps,
    residual,
    run_benchmark,
    solve_hlwb,
    solve_lp,
    solve_rnnm,
)

__all__ = [
    "BapProblem",
    "BapsolveError",
    "InvalidArgument",
    "LpProblem",
    "ParseError",
    "RnnmConfig",
    "SolveStatus",
    "gen_bap",
    "gen_lp",
    "kkt_report",
    "performance_profile",
    "performance_ratio",
    "read_mps",
    "residual",
    "run_benchmark",
    "solve_hlwb",
    "solve_lp",
    "solve_rnnm",
]
