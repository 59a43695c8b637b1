"""Selects the compiled kernel core when it is importable.

Set ``ENCOMP_PURE_PYTHON=1`` to force the NumPy fallback.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("ENCOMP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

GAUSSIAN = _pykernels.GAUSSIAN
EPANECHNIKOV = _pykernels.EPANECHNIKOV


def _c(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def kernel_gram(w, h: float, family: int) -> np.ndarray:
    return _impl.kernel_gram(_c(w), float(h), int(family))


def sinc_gram(x) -> np.ndarray:
    return _impl.sinc_gram(_c(x))


def grid_sums(w, y, hs, family: int):
    return _impl.grid_sums(_c(w), _c(y), _c(hs), int(family))
