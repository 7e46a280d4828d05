"""Reference-vs-test comparison on level-k Haar approximations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, NegativeDistanceError
from .wavelet import Pyramid, as_image, decompose

# Absorbs float rounding so the exact-zero rule survives identical code paths.
DEFAULT_EPSILON = 1e-9


class Verdict(str, enum.Enum):
    OK = "OK"
    DEFECTIVE = "DEFECTIVE"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Verdict":
        return cls(text.strip().upper())


@dataclass(frozen=True)
class InspectConfig:
    levels: int = 3
    distance_threshold: float = 0.0
    map_coeff_threshold: Optional[float] = None
    pad_enabled: bool = False
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if not self.distance_threshold >= 0:
            raise ValueError(f"distance_threshold must be >= 0, got {self.distance_threshold}")
        if self.map_coeff_threshold is not None and not self.map_coeff_threshold >= 0:
            raise ValueError(
                f"map_coeff_threshold must be >= 0, got {self.map_coeff_threshold}")


@dataclass(frozen=True, eq=False)
class InspectionResult:
    distance: float
    verdict: Verdict
    defect_map: Optional[np.ndarray] = None
    defect_map_fullres: Optional[np.ndarray] = None


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"shape mismatch: {a.shape[0]}x{a.shape[1]} vs {b.shape[0]}x{b.shape[1]}")


def euclidean_distance(ref_ll, test_ll) -> float:
    """Square root of the summed squared differences over every coefficient."""
    r = as_image(ref_ll)
    t = as_image(test_ll)
    _check_same_shape(r, t)
    diff = r - t
    return math.sqrt(float(np.sum(diff * diff)))


def classify(distance: float, config: InspectConfig = InspectConfig()) -> Verdict:
    if distance < 0 or math.isnan(distance):
        raise NegativeDistanceError(f"distance must be >= 0, got {distance}")
    if distance <= config.distance_threshold + config.epsilon:
        return Verdict.OK
    return Verdict.DEFECTIVE


def defect_map(ref_ll, test_ll, coeff_threshold: float, upscale: int = 1,
               out_shape: Optional[tuple[int, int]] = None) -> tuple[np.ndarray, np.ndarray]:
    """Binary masks of coefficients whose difference exceeds ``coeff_threshold``.

    Returns the mask at approximation resolution and its nearest-neighbour
    enlargement by ``upscale`` per axis, cropped to ``out_shape`` if given.
    Masks are ``uint8`` arrays of 0/1.
    """
    if coeff_threshold < 0:
        raise ValueError(f"coeff_threshold must be >= 0, got {coeff_threshold}")
    if upscale < 1 or upscale & (upscale - 1):
        raise ValueError(f"upscale must be a power of two, got {upscale}")
    r = as_image(ref_ll)
    t = as_image(test_ll)
    _check_same_shape(r, t)
    map_ll = (np.abs(r - t) > coeff_threshold).astype(np.uint8)
    map_full = np.repeat(np.repeat(map_ll, upscale, axis=0), upscale, axis=1)
    if out_shape is not None:
        map_full = map_full[: out_shape[0], : out_shape[1]].copy()
    return map_ll, map_full


class Inspector:
    """Holds a decomposed reference so many test images can be checked against it.

    Safe to share between threads: the stored pyramid is never mutated.
    """

    def __init__(self, reference, config: InspectConfig = InspectConfig()):
        self.config = config
        ref = as_image(reference)
        self.shape = ref.shape
        self.reference: Pyramid = decompose(ref, config.levels, pad=config.pad_enabled)

    def inspect(self, test) -> InspectionResult:
        img = as_image(test)
        if img.shape != self.shape:
            raise DimensionMismatchError(
                f"reference is {self.shape[0]}x{self.shape[1]} but test is "
                f"{img.shape[0]}x{img.shape[1]}")
        cfg = self.config
        pyr = decompose(img, cfg.levels, pad=cfg.pad_enabled)
        ref_ll, test_ll = self.reference.approximation, pyr.approximation
        distance = euclidean_distance(ref_ll, test_ll)
        verdict = classify(distance, cfg)
        map_ll = map_full = None
        if cfg.map_coeff_threshold is not None:
            map_ll, map_full = defect_map(ref_ll, test_ll, cfg.map_coeff_threshold,
                                          1 << cfg.levels, out_shape=self.shape)
        return InspectionResult(distance, verdict, map_ll, map_full)


def inspect_pair(reference, test, config: InspectConfig = InspectConfig()) -> InspectionResult:
    """Decompose both images, measure the approximation distance, decide."""
    return Inspector(reference, config).inspect(test)
