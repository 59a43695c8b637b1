"""Data containers and the seeding contract shared by every module."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DimensionMismatch, NonFiniteValue, TooFewRows

_UINT64_MASK = (1 << 64) - 1


def _as_matrix(a: Any, name: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be a vector or an n x k matrix, got ndim={arr.ndim}")
    return arr


@dataclass(frozen=True, eq=False)
class Sample:
    """One dataset: response ``y``, smoothing regressors ``w``, weighting regressors ``x``.

    Arrays are read-only copies; build instances with :func:`validate_sample`.
    """

    y: np.ndarray
    w: np.ndarray
    x: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.w.shape[1]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def with_y(self, y) -> Sample:
        return validate_sample(y, self.w, self.x)

    def swapped(self) -> Sample:
        """The reverse hypothesis: ``x`` plays the smoothing role."""
        return validate_sample(self.y, self.x, self.w)

    def to_dict(self) -> dict:
        return {"y": self.y.tolist(), "w": self.w.tolist(), "x": self.x.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> Sample:
        return validate_sample(data["y"], data["w"], data["x"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return all(
            np.array_equal(a, b) for a, b in ((self.y, other.y), (self.w, other.w), (self.x, other.x))
        )

    __hash__ = None


def validate_sample(y, w, x) -> Sample:
    """Check shapes and finiteness and return an immutable :class:`Sample`."""
    yv = np.array(y, dtype=np.float64, copy=True)
    if yv.ndim == 2 and yv.shape[1] == 1:
        yv = yv[:, 0]
    if yv.ndim != 1:
        raise DimensionMismatch(f"y must be a vector, got shape {yv.shape}")
    wm = _as_matrix(w, "w")
    xm = _as_matrix(x, "x")
    n = yv.shape[0]
    if wm.shape[0] != n or xm.shape[0] != n:
        raise DimensionMismatch(
            f"row counts differ: y has {n}, w has {wm.shape[0]}, x has {xm.shape[0]}"
        )
    if wm.shape[1] < 1 or xm.shape[1] < 1:
        raise DimensionMismatch("w and x need at least one column each")
    for name, arr in (("y", yv), ("w", wm), ("x", xm)):
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue(f"{name} contains NaN or infinite entries")
    if n < 2:
        raise TooFewRows(f"need at least 2 rows, got {n}")
    for arr in (yv, wm, xm):
        arr.flags.writeable = False
    return Sample(yv, wm, xm)


def _tag_key(tag: str) -> int:
    digest = hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RngSeedPolicy:
    """Maps ``(replication, purpose tag)`` to an independent random stream.

    The stream depends only on the master seed, the index and the tag, never
    on scheduling, so parallel runs draw exactly what serial runs draw.
    """

    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed <= _UINT64_MASK:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")

    def seed_sequence(self, index: int, tag: str) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=(int(index), _tag_key(tag)))

    def generator(self, index: int, tag: str) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence(index, tag)))


def substream(seed: int, index: int, tag: str) -> np.random.Generator:
    return RngSeedPolicy(seed).generator(index, tag)
