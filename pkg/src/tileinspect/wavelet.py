"""Orthonormal Haar wavelet analysis and synthesis in one and two dimensions.

Filters are ``L = [1, 1] / sqrt(2)`` and ``H = [1, -1] / sqrt(2)`` applied with
stride-2 decimation, so one analysis step maps a pair ``(x0, x1)`` to
``((x0 + x1) / sqrt(2), (x0 - x1) / sqrt(2))``.  The transform is orthonormal:
it preserves energy and synthesis is its exact inverse.

Subband naming in 2-D uses the column (vertical) filter first and the row
(horizontal) filter second: ``lh`` is low-pass down the columns and high-pass
along the rows, ``hl`` the reverse.

Images are 2-D ``float64`` numpy arrays.  Every function returns freshly
allocated arrays and never writes into its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    CorruptPyramidError,
    DimensionMismatchError,
    LengthMismatchError,
    NotDivisibleError,
    OddDimensionError,
    OddLengthError,
    TooShortError,
)

SQRT2 = math.sqrt(2.0)

__all__ = [
    "Details",
    "Pyramid",
    "SubbandSet",
    "as_image",
    "decompose",
    "dwt2",
    "haar_analysis_1d",
    "haar_synthesis_1d",
    "idwt2",
    "reconstruct",
]


def as_image(data) -> np.ndarray:
    """Return a fresh 2-D float64 copy of ``data``."""
    img = np.array(data, dtype=np.float64, copy=True)
    if img.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D image, got {img.ndim}-D")
    if img.size == 0:
        raise DimensionMismatchError("image has no pixels")
    return img


def _analyze(x: np.ndarray, axis: int, scale: float = SQRT2) -> tuple[np.ndarray, np.ndarray]:
    xs = np.moveaxis(x, axis, 0)
    even, odd = xs[0::2], xs[1::2]
    approx = even + odd
    detail = even - odd
    if scale != 1.0:
        approx /= scale
        detail /= scale
    return np.moveaxis(approx, 0, axis), np.moveaxis(detail, 0, axis)


def _synthesize(approx: np.ndarray, detail: np.ndarray, axis: int,
                scale: float = SQRT2) -> np.ndarray:
    a = np.moveaxis(approx, axis, 0)
    d = np.moveaxis(detail, axis, 0)
    out = np.empty((2 * a.shape[0],) + a.shape[1:], dtype=np.float64)
    out[0::2] = a + d
    out[1::2] = a - d
    if scale != 1.0:
        out /= scale
    return np.moveaxis(out, 0, axis)


def haar_analysis_1d(signal) -> tuple[np.ndarray, np.ndarray]:
    """Split an even-length signal into approximation and detail halves."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D signal, got {x.ndim}-D")
    n = x.shape[0]
    if n < 2:
        raise TooShortError(n)
    if n % 2:
        raise OddLengthError(n)
    return _analyze(x, 0)


def haar_synthesis_1d(approx, detail) -> np.ndarray:
    """Inverse of :func:`haar_analysis_1d`."""
    a = np.asarray(approx, dtype=np.float64)
    d = np.asarray(detail, dtype=np.float64)
    if a.ndim != 1 or d.ndim != 1:
        raise DimensionMismatchError("approximation and detail must be 1-D")
    if a.shape != d.shape:
        raise LengthMismatchError(
            f"approximation has {a.shape[0]} samples but detail has {d.shape[0]}"
        )
    if a.shape[0] < 1:
        raise TooShortError(0)
    return _synthesize(a, d, 0)


@dataclass(frozen=True, eq=False)
class SubbandSet:
    """The four coefficient matrices produced by one 2-D analysis step."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(m) for m in (self.ll, self.lh, self.hl, self.hh)}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"subband shapes differ: {sorted(shapes)}")
        if len(next(iter(shapes))) != 2:
            raise DimensionMismatchError("subbands must be 2-D")

    @property
    def shape(self) -> tuple[int, int]:
        return self.ll.shape


class Details(NamedTuple):
    """Detail matrices of a single pyramid level."""

    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray


def dwt2(image, order: str = "rows") -> SubbandSet:
    """One level of the separable 2-D Haar transform.

    ``order`` selects whether rows or columns are filtered first; the two
    orders agree up to floating-point rounding.
    """
    img = as_image(image)
    rows, cols = img.shape
    if rows % 2 or cols % 2:
        raise OddDimensionError(rows, cols)
    # Both passes use raw sums/differences; the two 1/sqrt(2) factors are
    # applied together as one exact halving, so integer images stay exact.
    if order == "rows":
        row_lo, row_hi = _analyze(img, 1, 1.0)
        ll, hl = _analyze(row_lo, 0, 2.0)
        lh, hh = _analyze(row_hi, 0, 2.0)
    elif order == "columns":
        col_lo, col_hi = _analyze(img, 0, 1.0)
        ll, lh = _analyze(col_lo, 1, 2.0)
        hl, hh = _analyze(col_hi, 1, 2.0)
    else:
        raise ValueError(f"order must be 'rows' or 'columns', not {order!r}")
    return SubbandSet(ll, lh, hl, hh)


def idwt2(subbands: SubbandSet) -> np.ndarray:
    """Inverse of :func:`dwt2`; the output is twice the subband size per axis."""
    ll, lh, hl, hh = (np.asarray(m, dtype=np.float64) for m in
                      (subbands.ll, subbands.lh, subbands.hl, subbands.hh))
    if not (ll.shape == lh.shape == hl.shape == hh.shape):
        raise DimensionMismatchError("subband shapes differ")
    row_lo = _synthesize(ll, hl, 0, 1.0)
    row_hi = _synthesize(lh, hh, 0, 1.0)
    return _synthesize(row_lo, row_hi, 1, 2.0)


def _padded_dim(n: int, levels: int) -> int:
    block = 1 << levels
    return -(-n // block) * block


@dataclass(eq=False)
class Pyramid:
    """A level-``k`` decomposition: ``LL_k`` plus ``k`` detail triples.

    ``details[0]`` is the finest level.  ``source_rows`` and ``source_cols``
    are the dimensions before any edge padding; when they are not multiples of
    ``2**levels`` the stored coefficients describe the edge-padded image and
    :func:`reconstruct` crops back to the source size.
    """

    levels: int
    approximation: np.ndarray
    details: list[Details] = field(default_factory=list)
    source_rows: int = 0
    source_cols: int = 0

    @property
    def matrix_count(self) -> int:
        return 1 + 3 * len(self.details)

    @property
    def padded_shape(self) -> tuple[int, int]:
        return (_padded_dim(self.source_rows, self.levels),
                _padded_dim(self.source_cols, self.levels))

    @property
    def padded(self) -> bool:
        return self.padded_shape != (self.source_rows, self.source_cols)

    def matrices(self) -> list[np.ndarray]:
        """All coefficient matrices: ``LL_k``, then lh/hl/hh from level k down to 1."""
        out = [self.approximation]
        for det in reversed(self.details):
            out.extend(det)
        return out

    def energy(self) -> float:
        return float(sum(np.sum(m * m) for m in self.matrices()))

    def detail_energy(self) -> float:
        return float(sum(np.sum(m * m) for det in self.details for m in det))

    def validate(self) -> None:
        """Raise :class:`CorruptPyramidError` if the stored shapes disagree."""
        if self.levels < 1:
            raise CorruptPyramidError(f"levels must be >= 1, got {self.levels}")
        if self.source_rows < 1 or self.source_cols < 1:
            raise CorruptPyramidError(
                f"bad source size {self.source_rows}x{self.source_cols}")
        if len(self.details) != self.levels:
            raise CorruptPyramidError(
                f"{len(self.details)} detail levels stored for a level-{self.levels} pyramid")
        rows, cols = self.padded_shape
        want = (rows >> self.levels, cols >> self.levels)
        if np.shape(self.approximation) != want:
            raise CorruptPyramidError(
                f"approximation is {np.shape(self.approximation)}, expected {want}")
        for j, det in enumerate(self.details, start=1):
            want = (rows >> j, cols >> j)
            for name, m in zip(Details._fields, det):
                if np.shape(m) != want:
                    raise CorruptPyramidError(
                        f"level {j} {name} is {np.shape(m)}, expected {want}")

    def __eq__(self, other):
        """Bitwise equality of metadata and every coefficient."""
        if not isinstance(other, Pyramid):
            return NotImplemented
        if (self.levels, self.source_rows, self.source_cols) != (
                other.levels, other.source_rows, other.source_cols):
            return False
        mine, theirs = self.matrices(), other.matrices()
        if len(mine) != len(theirs):
            return False
        return all(
            a.shape == b.shape
            and np.ascontiguousarray(a, dtype=np.float64).tobytes()
            == np.ascontiguousarray(b, dtype=np.float64).tobytes()
            for a, b in zip(mine, theirs)
        )

    __hash__ = None


def decompose(image, levels: int = 3, pad: bool = False) -> Pyramid:
    """Iterate :func:`dwt2` on the approximation ``levels`` times.

    With ``pad`` set, dimensions that are not multiples of ``2**levels`` are
    extended by replicating the last row/column; otherwise they raise
    :class:`NotDivisibleError`.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    img = as_image(image)
    rows, cols = img.shape
    prows, pcols = _padded_dim(rows, levels), _padded_dim(cols, levels)
    if (prows, pcols) != (rows, cols):
        if not pad:
            raise NotDivisibleError(rows, cols, levels)
        img = np.pad(img, ((0, prows - rows), (0, pcols - cols)), mode="edge")

    details = []
    current = img
    for _ in range(levels):
        bands = dwt2(current)
        details.append(Details(bands.lh, bands.hl, bands.hh))
        current = bands.ll
    return Pyramid(levels, current, details, rows, cols)


def reconstruct(pyramid: Pyramid) -> np.ndarray:
    """Invert :func:`decompose`, cropping any padding."""
    pyramid.validate()
    current = np.asarray(pyramid.approximation, dtype=np.float64)
    for det in reversed(pyramid.details):
        current = idwt2(SubbandSet(current, det.lh, det.hl, det.hh))
    if pyramid.padded:
        current = current[: pyramid.source_rows, : pyramid.source_cols].copy()
    return current
