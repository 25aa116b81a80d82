"""discperc: simulation and estimation engine for planar Poisson disc percolation.

Unit discs are dropped at the points of a Poisson process; the package
decides rectangle crossings of the occupied set exactly, computes maximal
crossing widths (vacant side exactly, occupied side with a certified grid
error bound), and estimates critical quantities by reproducible Monte Carlo.
"""

__version__ = "0.1.0"

from .sampler import (
    Rect,
    PointSample,
    square,
    sample_poisson,
    sample_for_query,
    rescale_sample,
    rng_for,
)
from .crossing_engine import (
    CensoringError,
    CrossingQuery,
    BottleneckResult,
    activation_radius,
    occupied_crossing,
    vacant_crossing,
    bottleneck_radius,
    effective_margin,
)
from .widths import (
    ScalarField,
    WidthResult,
    default_pitch,
    grid_error_bound,
    vacant_width,
    occupied_width,
    occupied_width_lower,
    vacant_width_grid,
    coverage_mask,
    occupied_distance_field,
    vacant_distance_field,
    widest_path,
)
from .arms import (
    ArmQuery,
    Pi4Estimate,
    is_pivotal,
    four_arm_annulus,
    estimate_pi4,
    alpha_n,
    russo_check,
)
from .experiments import (
    CurveCrossingError,
    EstimateRecord,
    SweepResult,
    crossing_counts,
    crossing_probability,
    estimate_lambda_c,
    width_distribution,
    coupling_identity_check,
    width_bound_check,
    characteristic_length,
    near_critical_window_check,
    scaling_fit,
    fkg_check,
    rRR_check,
)
from .cli_io import ExperimentConfig, run, write_records, main

__all__ = [
    "__version__",
    "Rect",
    "PointSample",
    "square",
    "sample_poisson",
    "sample_for_query",
    "rescale_sample",
    "rng_for",
    "CensoringError",
    "CrossingQuery",
    "BottleneckResult",
    "activation_radius",
    "occupied_crossing",
    "vacant_crossing",
    "bottleneck_radius",
    "effective_margin",
    "ScalarField",
    "WidthResult",
    "default_pitch",
    "grid_error_bound",
    "vacant_width",
    "occupied_width",
    "occupied_width_lower",
    "vacant_width_grid",
    "coverage_mask",
    "occupied_distance_field",
    "vacant_distance_field",
    "widest_path",
    "ArmQuery",
    "Pi4Estimate",
    "is_pivotal",
    "four_arm_annulus",
    "estimate_pi4",
    "alpha_n",
    "russo_check",
    "CurveCrossingError",
    "EstimateRecord",
    "SweepResult",
    "crossing_counts",
    "crossing_probability",
    "estimate_lambda_c",
    "width_distribution",
    "coupling_identity_check",
    "width_bound_check",
    "characteristic_length",
    "near_critical_window_check",
    "scaling_fit",
    "fkg_check",
    "rRR_check",
    "ExperimentConfig",
    "run",
    "write_records",
    "main",
]
