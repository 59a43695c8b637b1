"""Product-kernel density and Nadaraya-Watson smoothing with trimming.

All estimators use a single bandwidth ``h`` on every coordinate and follow
the convention that a regression estimate is 0 wherever the density estimate
is exactly 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DegenerateColumn, InvalidFraction, ZeroDensityAtSamplePoint
from .model import Sample


class KernelFamily(str, enum.Enum):
    GAUSSIAN = "gaussian"
    EPANECHNIKOV = "epanechnikov"

    @property
    def code(self) -> int:
        return _backend.GAUSSIAN if self is KernelFamily.GAUSSIAN else _backend.EPANECHNIKOV

    def univariate(self, u):
        u = np.asarray(u, dtype=np.float64)
        if self is KernelFamily.GAUSSIAN:
            return np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi)
        return np.where(np.abs(u) < 1.0, 0.75 * (1.0 - u * u), 0.0)

    def scale(self, p: int) -> float:
        """Factor turning backend kernel values into the normalized product kernel."""
        if self is KernelFamily.GAUSSIAN:
            return (2.0 * np.pi) ** (-0.5 * p)
        return 1.0


@dataclass(frozen=True)
class KernelSpec:
    h: float
    family: KernelFamily = KernelFamily.GAUSSIAN

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise ValueError(f"bandwidth must be positive and finite, got {self.h}")
        object.__setattr__(self, "family", KernelFamily(self.family))


@dataclass(frozen=True)
class TrimRule:
    """``alpha=None`` disables trimming; otherwise the ``floor(alpha n)`` lowest densities are cut."""

    alpha: float | None = None

    def __post_init__(self):
        if self.alpha is not None and not (0.0 <= self.alpha < 1.0):
            raise InvalidFraction(f"trimming fraction must lie in [0, 1), got {self.alpha}")

    @classmethod
    def parse(cls, text: str) -> TrimRule:
        text = text.strip().lower()
        if text == "none":
            return cls(None)
        if text.startswith("quantile:"):
            return cls(float(text.split(":", 1)[1]))
        raise ValueError(f"unknown trim rule {text!r}; use 'none' or 'quantile:ALPHA'")

    def label(self) -> str:
        return "none" if self.alpha is None else f"quantile:{self.alpha!r}"


def studentize(w) -> np.ndarray:
    """Divide each column by its sample standard deviation (n - 1 denominator)."""
    w = np.asarray(w, dtype=np.float64)
    sd = w.std(axis=0, ddof=1)
    if np.any(~(sd > 0)):
        raise DegenerateColumn("a smoothing regressor has zero standard deviation")
    return w / sd


def _points(at, p: int) -> tuple[np.ndarray, bool]:
    pts = np.asarray(at, dtype=np.float64)
    single = pts.ndim <= 1 and (pts.size == p)
    pts = pts.reshape(-1, p)
    return pts, single


def cross_kernel(w: np.ndarray, at: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Matrix of ``K_h(w_i - at_m)`` with shape ``(len(at), len(w))``."""
    u = (w[None, :, :] - at[:, None, :]) / spec.h
    return np.prod(spec.family.univariate(u), axis=2)


def density_at(sample: Sample, spec: KernelSpec, w):
    pts, single = _points(w, sample.p)
    n, p = sample.n, sample.p
    f = cross_kernel(sample.w, pts, spec).sum(axis=1) / (n * spec.h**p)
    return float(f[0]) if single else f


def nw_regress(sample: Sample, spec: KernelSpec, w):
    pts, single = _points(w, sample.p)
    k = cross_kernel(sample.w, pts, spec)
    num = k @ sample.y
    den = k.sum(axis=1)
    m = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return float(m[0]) if single else m


def trimming_indicators(fhat, rule: TrimRule) -> tuple[np.ndarray, float]:
    fhat = np.asarray(fhat, dtype=np.float64)
    n = fhat.shape[0]
    if rule.alpha is None:
        return np.ones(n, dtype=np.int8), 0.0
    k = int(np.floor(rule.alpha * n))
    tau = float(np.sort(fhat)[k]) if n else 0.0
    return (fhat >= tau).astype(np.int8), tau


def hat_matrix(sample: Sample, spec: KernelSpec) -> np.ndarray:
    """Row-stochastic smoother ``H`` with ``(m_hat(W_1), ..., m_hat(W_n)) = H Y``."""
    g = _backend.kernel_gram(sample.w, spec.h, spec.family.code)
    rows = g.sum(axis=1)
    if np.any(~(rows > 0)):
        raise ZeroDensityAtSamplePoint("estimated density is zero at a sample point")
    return g / rows[:, None]


@dataclass(frozen=True, eq=False)
class SmootherContext:
    """Kernel quantities computed once from the smoothing regressors.

    ``gram[i, j] = K_h(W_i - W_j) / (n h^p)`` and ``kmat = gram / fhat`` column-wise,
    so ``kmat.T`` is the Nadaraya-Watson hat matrix.
    """

    spec: KernelSpec
    w: np.ndarray
    fhat: np.ndarray
    trim: np.ndarray
    tau: float
    gram: np.ndarray = field(repr=False)
    kmat: np.ndarray = field(repr=False)
    trim_rule: TrimRule = TrimRule()

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def n_trimmed(self) -> int:
        return int(self.n - self.trim.sum())

    def nw_fit(self, y) -> np.ndarray:
        """``m_hat`` at the sample points (0 where the density is 0)."""
        return self.kmat.T @ np.asarray(y, dtype=np.float64)

    def smooth_trimmed(self, values) -> np.ndarray:
        """Trimmed second-stage smooth of ``values`` evaluated at the sample points."""
        return self.gram @ (np.asarray(values, dtype=np.float64) * self.trim)

    def ratio_to_density(self, numer: np.ndarray) -> np.ndarray:
        return np.divide(numer, self.fhat, out=np.zeros_like(numer), where=self.fhat > 0)


def build_context(w, spec: KernelSpec, trim_rule: TrimRule = TrimRule()) -> SmootherContext:
    w = np.ascontiguousarray(w, dtype=np.float64)
    if w.ndim == 1:
        w = w[:, None]
    n, p = w.shape
    gram = _backend.kernel_gram(w, spec.h, spec.family.code)
    gram *= spec.family.scale(p) / (n * spec.h**p)
    fhat = gram.sum(axis=0)
    trim, tau = trimming_indicators(fhat, trim_rule)
    inv = np.divide(1.0, fhat, out=np.zeros_like(fhat), where=fhat > 0)
    kmat = gram * inv[None, :]
    for arr in (w, fhat, trim, gram, kmat):
        arr.flags.writeable = False
    return SmootherContext(spec, w, fhat, trim, tau, gram, kmat, trim_rule)


def second_stage_smooth(values, context: SmootherContext, at):
    """``(n h^p)^{-1} sum_i values_i t_i K_h(W_i - at)``."""
    p = context.w.shape[1]
    pts, single = _points(at, p)
    k = cross_kernel(context.w, pts, context.spec)
    v = np.asarray(values, dtype=np.float64) * context.trim
    out = (k @ v) / (context.n * context.spec.h**p)
    return float(out[0]) if single else out
