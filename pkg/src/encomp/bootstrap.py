"""Null-imposing wild bootstrap.

Bootstrap responses are ``Y* = m_hat(W) + xi * eps_hat``.  The smoothing
context (density, trimming, bandwidth, kernel matrix) and the weight matrix
are frozen from the original sample; only the response is redrawn.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bandwidth import AicC, AiccResult, BandwidthRule, select_bandwidth
from .kernels import KernelFamily, KernelSpec, SmootherContext, TrimRule, build_context, studentize
from .model import Sample, substream, validate_sample
from .statistics import ALL_KINDS, StatisticKind, compute_all, compute_statistic
from .weighting import WeightMatrix, WeightSpec, build_weight_matrix

_SQRT5 = math.sqrt(5.0)


class MultiplierLaw(str, enum.Enum):
    MAMMEN = "mammen"
    RADEMACHER = "rademacher"
    # values (3 -/+ sqrt5)/2 as printed in the source text; mean 1, kept for audit runs
    PAPER_LITERAL = "paper-literal"

    def support(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """``((low value, high value), (P(low), P(high)))``."""
        if self is MultiplierLaw.RADEMACHER:
            return (-1.0, 1.0), (0.5, 0.5)
        p_low = (5.0 + _SQRT5) / 10.0
        probs = (p_low, 1.0 - p_low)
        if self is MultiplierLaw.MAMMEN:
            return ((1.0 - _SQRT5) / 2.0, (1.0 + _SQRT5) / 2.0), probs
        return ((3.0 - _SQRT5) / 2.0, (3.0 + _SQRT5) / 2.0), probs

    def moments(self) -> tuple[float, float, float]:
        """Exact mean, variance and third central moment."""
        (a, b), (pa, pb) = self.support()
        mean = pa * a + pb * b
        var = pa * (a - mean) ** 2 + pb * (b - mean) ** 2
        third = pa * (a - mean) ** 3 + pb * (b - mean) ** 3
        return mean, var, third


def draw_multipliers(law: MultiplierLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("need n >= 1 multipliers")
    (low, high), (p_low, _) = MultiplierLaw(law).support()
    return np.where(rng.random(n) < p_low, low, high)


def bootstrap_sample(y, ctx: SmootherContext, xi) -> np.ndarray:
    """``m_hat + xi * eps_hat``; ``xi`` may be ``(n,)`` or ``(n, B)``."""
    y = np.asarray(y.y if isinstance(y, Sample) else y, dtype=np.float64)
    mhat = ctx.kmat.T @ y
    eps = y - mhat
    xi = np.asarray(xi, dtype=np.float64)
    if xi.ndim == 1:
        return mhat + xi * eps
    return mhat[:, None] + xi * eps[:, None]


def bootstrap_statistic(kind: StatisticKind, ystar, ctx: SmootherContext, A: WeightMatrix):
    """Statistic recomputed on bootstrap responses against the frozen context.

    The bias correction is recomputed from ``ystar``.  Columns of a matrix
    ``ystar`` are treated as separate bootstrap samples.
    """
    return compute_statistic(kind, ystar, ctx, A)


def p_value(statistic: float, boot_stats) -> float:
    boot = np.asarray(boot_stats, dtype=np.float64)
    return (1.0 + np.count_nonzero(boot >= statistic)) / (boot.size + 1.0)


@dataclass(frozen=True)
class TestConfig:
    bandwidth: BandwidthRule = field(default_factory=AicC)
    trim: TrimRule = TrimRule()
    weight: WeightSpec = WeightSpec()
    kernel: KernelFamily = KernelFamily.GAUSSIAN
    law: MultiplierLaw = MultiplierLaw.MAMMEN
    B: int = 999
    levels: tuple[float, ...] = (0.05, 0.10)
    seed: int = 0
    stream_tag: str = "multiplier"

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("B must be at least 1")
        if not all(0.0 < lv < 1.0 for lv in self.levels):
            raise ValueError("levels must lie in (0, 1)")
        object.__setattr__(self, "levels", tuple(sorted(float(lv) for lv in self.levels)))
        object.__setattr__(self, "law", MultiplierLaw(self.law))
        object.__setattr__(self, "kernel", KernelFamily(self.kernel))


@dataclass(frozen=True, eq=False)
class PreparedTest:
    """Everything frozen from the original sample."""

    sample: Sample  # with studentized smoothing regressors
    ctx: SmootherContext
    A: WeightMatrix
    h: float
    aicc: AiccResult | None


def prepare(sample: Sample, config: TestConfig) -> PreparedTest:
    ws = validate_sample(sample.y, studentize(sample.w), sample.x)
    h, aicc = select_bandwidth(config.bandwidth, ws, config.kernel)
    ctx = build_context(ws.w, KernelSpec(h, config.kernel), config.trim)
    A = build_weight_matrix(ws.x, ctx.trim, config.weight)
    return PreparedTest(ws, ctx, A, h, aicc)


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    kind: StatisticKind
    statistic: float
    boot_stats: np.ndarray
    p_value: float
    quantiles: dict[float, float]
    B: int

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "critical_values": {repr(lv): q for lv, q in self.quantiles.items()},
            "p_value": self.p_value,
        }


def multiplier_matrix(config: TestConfig, n: int) -> np.ndarray:
    xi = np.empty((n, config.B))
    for b in range(config.B):
        xi[:, b] = draw_multipliers(config.law, n, substream(config.seed, b, config.stream_tag))
    return xi


def _result(kind, stat, boot, config: TestConfig) -> BootstrapResult:
    boot = np.asarray(boot, dtype=np.float64)
    quantiles = {lv: float(np.quantile(boot, 1.0 - lv)) for lv in config.levels}
    return BootstrapResult(StatisticKind(kind), float(stat), boot, p_value(stat, boot), quantiles, config.B)


def run_tests(sample: Sample, config: TestConfig = TestConfig(), kinds=ALL_KINDS, prepared: PreparedTest | None = None):
    """Run several statistics on one sample, sharing the fit and the multiplier draws.

    Returns ``(prepared, {kind: BootstrapResult})``.
    """
    prep = prepare(sample, config) if prepared is None else prepared
    kinds = [StatisticKind(k) for k in kinds]
    y = prep.sample.y
    stats = compute_all(kinds, y, prep.ctx, prep.A)
    ystar = bootstrap_sample(y, prep.ctx, multiplier_matrix(config, prep.sample.n))
    boots = compute_all(kinds, ystar, prep.ctx, prep.A)
    return prep, {k: _result(k, stats[k], boots[k], config) for k in kinds}


def run_test(kind: StatisticKind, sample: Sample, config: TestConfig = TestConfig()) -> BootstrapResult:
    _, results = run_tests(sample, config, [kind])
    return results[StatisticKind(kind)]
