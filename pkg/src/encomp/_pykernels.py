"""Pure NumPy versions of the compiled pairwise kernels in ``_ckernels.pyx``."""

import numpy as np

GAUSSIAN = 0
EPANECHNIKOV = 1


def _sinc(u: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    small = np.abs(u) < 1e-4
    us = u[small]
    u2 = us * us
    out[small] = 1.0 - u2 / 6.0 + u2 * u2 / 120.0
    ub = u[~small]
    out[~small] = np.sin(ub) / ub
    return out


def _sq_dists(w: np.ndarray) -> np.ndarray:
    diff = w[:, None, :] - w[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _from_scaled(w: np.ndarray, h: float, family: int) -> np.ndarray:
    if family == GAUSSIAN:
        return np.exp(-0.5 * _sq_dists(w) / (h * h))
    u = (w[:, None, :] - w[None, :, :]) / h
    return np.prod(np.where(np.abs(u) < 1.0, 0.75 * (1.0 - u * u), 0.0), axis=2)


def kernel_gram(w: np.ndarray, h: float, family: int) -> np.ndarray:
    return _from_scaled(np.asarray(w, dtype=np.float64), float(h), family)


def sinc_gram(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.ones((x.shape[0], x.shape[0]))
    for k in range(x.shape[1]):
        u = np.pi * (x[:, k][:, None] - x[:, k][None, :])
        out *= _sinc(u)
    return out


def grid_sums(w, y, hs, family):
    w = np.asarray(w, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    s0 = np.empty((len(hs), w.shape[0]))
    s1 = np.empty_like(s0)
    d2 = _sq_dists(w) if family == GAUSSIAN else None
    for g, h in enumerate(hs):
        if family == GAUSSIAN:
            k = np.exp(-0.5 * d2 / (h * h))
        else:
            k = _from_scaled(w, h, family)
        s0[g] = k.sum(axis=1)
        s1[g] = k @ y
    return s0, s1
