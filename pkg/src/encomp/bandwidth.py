"""Rule-of-thumb and AIC_c bandwidth selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import AllCandidatesInvalid, DegenerateColumn, InsufficientData
from .kernels import KernelFamily
from .model import Sample


@dataclass(frozen=True)
class GridSpec:
    c_min: float = 0.2
    c_max: float = 3.0
    num_points: int = 25

    def __post_init__(self):
        if self.num_points < 2 or not (0 < self.c_min < self.c_max):
            raise ValueError("grid needs num_points >= 2 and 0 < c_min < c_max")

    def constants(self) -> np.ndarray:
        return np.geomspace(self.c_min, self.c_max, self.num_points)


@dataclass(frozen=True)
class RuleOfThumb:
    C: float = 1.0

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("rule-of-thumb constant must be positive")

    def label(self) -> str:
        return f"rot:{self.C!r}"


@dataclass(frozen=True)
class AicC:
    grid: GridSpec = field(default_factory=GridSpec)

    def label(self) -> str:
        g = self.grid
        return f"aicc:{g.c_min!r}:{g.c_max!r}:{g.num_points}"


BandwidthRule = RuleOfThumb | AicC


def parse_rule(text: str) -> BandwidthRule:
    parts = text.strip().lower().split(":")
    if parts[0] == "rot" and len(parts) == 2:
        return RuleOfThumb(float(parts[1]))
    if parts[0] == "aicc" and len(parts) == 1:
        return AicC()
    if parts[0] == "aicc" and len(parts) == 4:
        return AicC(GridSpec(float(parts[1]), float(parts[2]), int(parts[3])))
    raise ValueError(f"unknown bandwidth rule {text!r}; use 'rot:C', 'aicc' or 'aicc:CMIN:CMAX:NUM'")


def _scale(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim == 1:
        w = w[:, None]
    if w.shape[0] < 2:
        raise InsufficientData("bandwidth rules need at least 2 observations")
    sd = w.std(axis=0, ddof=1)
    if np.any(~(sd > 0)):
        raise DegenerateColumn("a smoothing regressor has zero standard deviation")
    # mean over coordinates; equals the plain sd when p = 1
    return float(sd.mean())


def base_rate(n: int, p: int) -> float:
    return n ** (-1.0 / (4 + p))


def rule_of_thumb(w, C: float) -> float:
    w = np.asarray(w, dtype=np.float64)
    p = 1 if w.ndim == 1 else w.shape[1]
    return C * _scale(w) * base_rate(w.shape[0], p)


def aicc_penalty(trace: float, n: int) -> float:
    return (1.0 + trace / n) / (1.0 - (trace + 2.0) / n)


@dataclass(frozen=True)
class AiccResult:
    h: float
    hs: np.ndarray
    aicc: np.ndarray  # NaN marks a skipped candidate
    traces: np.ndarray

    def curve(self) -> list[tuple[float, float | None]]:
        return [(float(h), None if np.isnan(a) else float(a)) for h, a in zip(self.hs, self.aicc)]


def aicc_curve(sample: Sample, hs, family: KernelFamily = KernelFamily.GAUSSIAN):
    """AIC_c and hat-matrix trace at each candidate bandwidth (NaN where invalid)."""
    family = KernelFamily(family)
    hs = np.asarray(hs, dtype=np.float64)
    n, p = sample.n, sample.p
    s0, s1 = _backend.grid_sums(sample.w, sample.y, hs, family.code)
    k0 = 1.0 if family is KernelFamily.GAUSSIAN else 0.75**p
    aicc = np.full(hs.shape, np.nan)
    traces = np.full(hs.shape, np.nan)
    for g in range(hs.shape[0]):
        if np.any(~(s0[g] > 0)):
            continue
        tr = float(np.sum(k0 / s0[g]))
        traces[g] = tr
        if tr + 2.0 >= n:
            continue
        rss = float(np.mean((sample.y - s1[g] / s0[g]) ** 2))
        if not rss > 0:
            continue
        aicc[g] = np.log(rss) + aicc_penalty(tr, n)
    return aicc, traces


def aicc_select(sample: Sample, family: KernelFamily = KernelFamily.GAUSSIAN, grid: GridSpec = GridSpec()) -> AiccResult:
    hs = grid.constants() * _scale(sample.w) * base_rate(sample.n, sample.p)
    aicc, traces = aicc_curve(sample, hs, family)
    valid = np.flatnonzero(~np.isnan(aicc))
    if valid.size == 0:
        raise AllCandidatesInvalid("no candidate bandwidth gives a valid AIC_c")
    best = valid[-1]
    for g in valid[::-1]:
        if aicc[g] < aicc[best]:
            best = g
    return AiccResult(float(hs[best]), hs, aicc, traces)


def select_bandwidth(rule: BandwidthRule, sample: Sample, family: KernelFamily = KernelFamily.GAUSSIAN):
    """Return ``(h, AiccResult or None)`` for ``rule`` on the sample's smoothing regressors."""
    if isinstance(rule, RuleOfThumb):
        return rule_of_thumb(sample.w, rule.C), None
    res = aicc_select(sample, family, rule.grid)
    return res.h, res
