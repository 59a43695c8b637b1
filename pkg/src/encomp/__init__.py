"""Nonparametric encompassing tests for regression models.

Tests whether the regression of ``y`` on ``w`` encompasses the regression of
``y`` on ``x`` using ICM-type statistics (plain, bias-corrected and locally
robust) with a null-imposing wild bootstrap.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .bandwidth import AicC, GridSpec, RuleOfThumb, aicc_select, rule_of_thumb
from .bootstrap import (
    BootstrapResult,
    MultiplierLaw,
    TestConfig,
    bootstrap_sample,
    bootstrap_statistic,
    draw_multipliers,
    prepare,
    run_test,
    run_tests,
)
from .errors import EncompError
from .ingest import ColumnMap, load_csv
from .kernels import KernelFamily, KernelSpec, TrimRule, build_context
from .model import RngSeedPolicy, Sample, validate_sample
from .simulation import DgpSpec, SimulationCell, draw_dgp, power_curve, warp_speed_run
from .statistics import StatisticKind, compute_statistic
from .weighting import Transform, WeightSpec, build_weight_matrix, transform_x

__all__ = [
    "BACKEND",
    "AicC",
    "BootstrapResult",
    "ColumnMap",
    "DgpSpec",
    "EncompError",
    "GridSpec",
    "KernelFamily",
    "KernelSpec",
    "MultiplierLaw",
    "RngSeedPolicy",
    "RuleOfThumb",
    "Sample",
    "SimulationCell",
    "StatisticKind",
    "TestConfig",
    "Transform",
    "TrimRule",
    "WeightSpec",
    "aicc_select",
    "bootstrap_sample",
    "bootstrap_statistic",
    "build_context",
    "build_weight_matrix",
    "compute_statistic",
    "draw_dgp",
    "draw_multipliers",
    "load_csv",
    "power_curve",
    "prepare",
    "rule_of_thumb",
    "run_test",
    "run_tests",
    "transform_x",
    "validate_sample",
    "warp_speed_run",
]
