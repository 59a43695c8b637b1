"""Regressor transforms and the sinc weight matrix.

The weight ``a(z) = prod_k sinc(pi z_k)`` is the Fourier transform of the
uniform law on ``[-pi, pi]^d``, so the weight matrix is positive semidefinite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DegenerateColumn


class Transform(str, enum.Enum):
    # studentize, logistic c.d.f., then center and studentize again
    LOGISTIC_THEN_STANDARDIZE = "logistic"
    # logistic c.d.f. applied to the raw values (not scale invariant)
    RAW_LOGISTIC_THEN_STANDARDIZE = "raw-logistic"
    STANDARDIZE_ONLY = "standardize"
    NONE = "none"


@dataclass(frozen=True)
class WeightSpec:
    transform: Transform = Transform.LOGISTIC_THEN_STANDARDIZE
    weight_family: str = "sinc"

    def __post_init__(self):
        object.__setattr__(self, "transform", Transform(self.transform))
        if self.weight_family != "sinc":
            raise ValueError(f"unsupported weight family {self.weight_family!r}")


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """``a_mat[j, m] = a(X_j - X_m) t_j t_m / n``; ``a_full`` is the same without trimming."""

    a_mat: np.ndarray
    a_full: np.ndarray
    trim: np.ndarray

    @property
    def n(self) -> int:
        return self.a_mat.shape[0]


def _sd(x: np.ndarray) -> np.ndarray:
    sd = x.std(axis=0, ddof=1) if x.shape[0] > 1 else np.zeros(x.shape[1])
    if np.any(~(sd > 0)):
        raise DegenerateColumn("a weighting regressor has zero standard deviation")
    return sd


def _center_scale(x: np.ndarray) -> np.ndarray:
    return (x - x.mean(axis=0)) / _sd(x)


def _logistic(u: np.ndarray) -> np.ndarray:
    # exp(-|u|) never overflows
    e = np.exp(-np.abs(u))
    return np.where(u >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def transform_x(x, spec: WeightSpec = WeightSpec()) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    t = spec.transform
    if t is Transform.NONE:
        return x.copy()
    if t is Transform.STANDARDIZE_ONLY:
        return x / _sd(x)
    if t is Transform.RAW_LOGISTIC_THEN_STANDARDIZE:
        return _center_scale(_logistic(x))
    return _center_scale(_logistic(_center_scale(x)))


def sinc(u):
    u = np.asarray(u, dtype=np.float64)
    return _backend._pykernels._sinc(u.reshape(-1)).reshape(u.shape)


def weight_value(z) -> float:
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    return float(np.prod(sinc(np.pi * z)))


def build_weight_matrix(x, trim=None, spec: WeightSpec | None = None) -> WeightMatrix:
    """Weight matrix on ``x``; ``spec=None`` means ``x`` is already transformed."""
    xt = np.asarray(x, dtype=np.float64) if spec is None else transform_x(x, spec)
    if xt.ndim == 1:
        xt = xt[:, None]
    n = xt.shape[0]
    t = np.ones(n, dtype=np.int8) if trim is None else np.asarray(trim, dtype=np.int8)
    a_full = _backend.sinc_gram(xt) / n
    tf = t.astype(np.float64)
    a_mat = a_full * tf[:, None] * tf[None, :]
    for arr in (a_full, a_mat):
        arr.flags.writeable = False
    return WeightMatrix(a_mat, a_full, t)
