"""Residuals and the ICM, bias-corrected and locally robust statistics.

Every function here is linear in the response up to the final quadratic
form, and accepts either a response vector of length ``n`` or an ``(n, B)``
matrix whose columns are separate responses (used by the bootstrap).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .kernels import SmootherContext
from .model import Sample
from .weighting import WeightMatrix


class StatisticKind(str, enum.Enum):
    ICM = "icm"
    BC = "bc"
    LR = "lr"

    @classmethod
    def parse_list(cls, text: str) -> list[StatisticKind]:
        kinds = [cls(tok.strip().lower()) for tok in text.split(",") if tok.strip()]
        if not kinds:
            raise ValueError("no statistic requested")
        return list(dict.fromkeys(kinds))


ALL_KINDS = (StatisticKind.BC, StatisticKind.LR, StatisticKind.ICM)


@dataclass(frozen=True, eq=False)
class ResidualSet:
    mhat: np.ndarray
    mbar: np.ndarray
    mtilde: np.ndarray
    bias: np.ndarray
    eps_hat: np.ndarray
    eps_tilde: np.ndarray


def _response(y) -> np.ndarray:
    return np.asarray(y.y if isinstance(y, Sample) else y, dtype=np.float64)


def _trim_col(ctx: SmootherContext, like: np.ndarray) -> np.ndarray:
    t = ctx.trim.astype(np.float64)
    return t if like.ndim == 1 else t[:, None]


def _ratio(ctx: SmootherContext, numer: np.ndarray) -> np.ndarray:
    inv = np.divide(1.0, ctx.fhat, out=np.zeros_like(ctx.fhat), where=ctx.fhat > 0)
    return numer * (inv if numer.ndim == 1 else inv[:, None])


def bias_corrected_fit(y, ctx: SmootherContext) -> ResidualSet:
    """One boosting step: ``m_tilde = 2 m_hat - smooth(m_hat t) / f_hat`` at the sample points."""
    y = _response(y)
    mhat = ctx.kmat.T @ y
    mbar = ctx.gram @ (mhat * _trim_col(ctx, mhat))
    ratio = _ratio(ctx, mbar)
    mtilde = 2.0 * mhat - ratio
    return ResidualSet(
        mhat=mhat,
        mbar=mbar,
        mtilde=mtilde,
        bias=ratio - mhat,
        eps_hat=y - mhat,
        eps_tilde=y - mtilde,
    )


def quad_form(A: np.ndarray, r: np.ndarray):
    """``r' A r``, column-wise when ``r`` is a matrix."""
    ar = A @ r
    if r.ndim == 1:
        return float(r @ ar)
    return np.einsum("ib,ib->b", r, ar)


def icm_statistic(residuals, A: WeightMatrix):
    return quad_form(A.a_mat, np.asarray(residuals, dtype=np.float64))


def lr_residuals(eps_hat, ctx: SmootherContext) -> np.ndarray:
    """``(I - K)(t * eps_hat)``: the residual weights of the locally robust process."""
    eps = np.asarray(eps_hat, dtype=np.float64)
    te = eps * _trim_col(ctx, eps)
    return te - ctx.kmat @ te


def lr_statistic(eps_hat, ctx: SmootherContext, A: WeightMatrix):
    return quad_form(A.a_full, lr_residuals(eps_hat, ctx))


def compute_statistic(kind: StatisticKind, y, ctx: SmootherContext, A: WeightMatrix):
    kind = StatisticKind(kind)
    y = _response(y)
    if kind is StatisticKind.BC:
        return icm_statistic(bias_corrected_fit(y, ctx).eps_tilde, A)
    eps_hat = y - ctx.kmat.T @ y
    if kind is StatisticKind.LR:
        return lr_statistic(eps_hat, ctx, A)
    return icm_statistic(eps_hat, A)


def compute_all(kinds, y, ctx: SmootherContext, A: WeightMatrix) -> dict:
    """Statistics for several kinds, sharing the first-stage fit."""
    y = _response(y)
    eps_hat = y - ctx.kmat.T @ y
    out = {}
    for kind in kinds:
        kind = StatisticKind(kind)
        if kind is StatisticKind.BC:
            out[kind] = icm_statistic(bias_corrected_fit(y, ctx).eps_tilde, A)
        elif kind is StatisticKind.LR:
            out[kind] = lr_statistic(eps_hat, ctx, A)
        else:
            out[kind] = icm_statistic(eps_hat, A)
    return out
