"""Hard instance generation for min-max robust combinatorial optimization."""

from ._core import (
    Instance,
    InvariantError,
    LdrResult,
    MasterSolution,
    MidResult,
    MroIteration,
    MroRun,
    NumericalError,
    ParseError,
    RobustResult,
    ScaleError,
    TimeLimitError,
    UncertaintyBox,
    build_uncertainty,
    colgen_master,
    evaluate,
    harden_instance,
    ldr_solve,
    master_solve_alternating,
    master_solve_exact,
    mid_generate,
    mro_generate,
    read_instance,
    robust_solve_exact,
    robust_solve_heuristic,
    robust_value,
    sample_ru,
    sorted_objective_vector,
    write_instance,
)

__all__ = [
    "Instance",
    "InvariantError",
    "LdrResult",
    "MasterSolution",
    "MidResult",
    "MroIteration",
    "MroRun",
    "NumericalError",
    "ParseError",
    "RobustResult",
    "ScaleError",
    "TimeLimitError",
    "UncertaintyBox",
    "build_uncertainty",
    "colgen_master",
    "evaluate",
    "harden_instance",
    "ldr_solve",
    "master_solve_alternating",
    "master_solve_exact",
    "mid_generate",
    "mro_generate",
    "read_instance",
    "robust_solve_exact",
    "robust_solve_heuristic",
    "robust_value",
    "sample_ru",
    "sorted_objective_vector",
    "write_instance",
]
