"""Consensus strings with outliers: exact, approximate and parameterized solvers."""
from .core import (
    Alphabet,
    Instance,
    Solution,
    closest_subset,
    consensus,
    evaluate_subset,
    format_instance,
    hamming,
    parse_instance,
    read_instance,
    total_distance,
    write_instance,
)
from .errors import CapExceededError, InstanceFormatError, RefusalError
from .exact import decide, solve_exact_centers, solve_exact_subsets
from .approx import ApproxParams, eptas_min_distance, ptas_max_nonoutliers, ptas_min_distance, sample_size
from .fpt import FptConfig, solve_fpt
from .kernels import BACKEND

__all__ = [
    "Alphabet", "Instance", "Solution", "closest_subset", "consensus", "evaluate_subset",
    "format_instance", "hamming", "parse_instance", "read_instance", "total_distance",
    "write_instance", "CapExceededError", "InstanceFormatError", "RefusalError", "decide",
    "solve_exact_centers", "solve_exact_subsets", "ApproxParams", "eptas_min_distance",
    "ptas_max_nonoutliers", "ptas_min_distance", "sample_size", "FptConfig", "solve_fpt", "BACKEND",
]
