"""Seeded synthetic tile corpora: smooth textured tiles with injected defects.

Every output is a pure function of the :class:`CorpusSpec`.  Each image draws
from its own SplitMix64 stream derived from ``(seed, stream id)``, so images
can be generated in any order or in parallel without changing a byte.

Stream ids: 0 texture, 1 reference noise, 2 label assignment, and
``16 + i`` for test image ``i`` (its noise first, then its defect draws).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadSizeError, CorpusIOError, ExtentTooLargeError
from .imageio import Manifest, ManifestEntry, dump_manifest, save_pgm
from .inspection import Verdict
from .rng import SplitMix64, derive_seed

STREAM_TEXTURE = 0
STREAM_REFERENCE = 1
STREAM_LABELS = 2
STREAM_IMAGES = 16

DEFECT_KINDS = ("spot", "crack", "edge_chip", "blob")

# Frozen from scripts/calibrate_defaults.py at 256x256, noise_sigma 2.
DEFAULT_EXTENTS = {"spot": 9, "crack": 128, "edge_chip": 14, "blob": 11}
DEFAULT_AMPLITUDES = {"spot": 72.0, "crack": 96.0, "edge_chip": 64.0, "blob": 72.0}

REFERENCE_NAME = "ref.pgm"
MANIFEST_NAME = "manifest.csv"


@dataclass(frozen=True)
class DefectSpec:
    kind: str
    amplitude: float
    extent: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in DEFECT_KINDS:
            raise ValueError(f"unknown defect kind {self.kind!r}; expected one of {DEFECT_KINDS}")
        if self.amplitude == 0:
            raise ValueError("defect amplitude must be nonzero")
        if self.extent < 1:
            raise ValueError(f"defect extent must be >= 1, got {self.extent}")


@dataclass(frozen=True)
class CorpusSpec:
    size: int = 256
    count: int = 85
    defect_ratio: float = 0.5
    noise_sigma: float = 2.0
    seed: int = 0
    levels: int = 3
    base_level: float = 128.0
    texture_amplitude: float = 24.0
    gratings: int = 3

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        if not 0.0 <= self.defect_ratio <= 1.0:
            raise ValueError(f"defect_ratio must lie in [0, 1], got {self.defect_ratio}")
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.gratings < 0:
            raise ValueError(f"gratings must be >= 0, got {self.gratings}")

    def check_size(self) -> None:
        n = self.size
        if n < 2 or n & (n - 1):
            raise BadSizeError(f"tile size {n} is not a power of two >= 2")
        if n % (1 << self.levels):
            raise BadSizeError(f"tile size {n} is not divisible by 2**{self.levels}")

    @property
    def defective_count(self) -> int:
        # round half up so the count does not depend on a runtime's tie rule
        return int(math.floor(self.count * self.defect_ratio + 0.5))


# -- textures --------------------------------------------------------------

def tile_texture(spec: CorpusSpec) -> np.ndarray:
    """Noise-free texture: a base level plus a few low-frequency cosine gratings."""
    spec.check_size()
    n = spec.size
    rng = SplitMix64(derive_seed(spec.seed, STREAM_TEXTURE))
    y, x = np.mgrid[0:n, 0:n].astype(np.float64)
    tex = np.full((n, n), float(spec.base_level))
    if spec.gratings == 0 or spec.texture_amplitude == 0:
        return tex
    amp = spec.texture_amplitude / spec.gratings
    for _ in range(spec.gratings):
        fx = rng.integer(0, 3)
        fy = rng.integer(0, 3)
        if fx == 0 and fy == 0:
            fx = 1
        phase = 2.0 * math.pi * rng.uniform()
        tex += amp * np.cos(2.0 * math.pi * (fx * x + fy * y) / n + phase)
    return tex


def add_noise(texture: np.ndarray, sigma: float, rng: SplitMix64) -> np.ndarray:
    """Add Gaussian acquisition noise, round to integers, clamp to [0, 255]."""
    img = texture.copy()
    if sigma > 0:
        img += sigma * rng.normal(img.size).reshape(img.shape)
    return np.clip(np.rint(img), 0.0, 255.0)


def generate_base_tile(spec: CorpusSpec, stream: int = STREAM_REFERENCE) -> np.ndarray:
    """A clean tile: the spec's texture with noise drawn from ``stream``."""
    rng = SplitMix64(derive_seed(spec.seed, stream))
    return add_noise(tile_texture(spec), spec.noise_sigma, rng)


# -- defects ---------------------------------------------------------------

def _disc(shape, cy: float, cx: float, radius: float) -> np.ndarray:
    y, x = np.ogrid[0:shape[0], 0:shape[1]]
    return (y - cy) ** 2 + (x - cx) ** 2 <= radius * radius


def _spot_mask(shape, extent, rng):
    rows, cols = shape
    if 2 * extent + 1 > min(rows, cols):
        raise ExtentTooLargeError(f"spot radius {extent} does not fit a {rows}x{cols} image")
    cy = rng.integer(extent, rows - 1 - extent)
    cx = rng.integer(extent, cols - 1 - extent)
    return _disc(shape, cy, cx, extent)


def _blob_mask(shape, extent, rng):
    rows, cols = shape
    if 2 * extent + 1 > min(rows, cols):
        raise ExtentTooLargeError(f"blob radius {extent} does not fit a {rows}x{cols} image")
    cy = rng.integer(extent, rows - 1 - extent)
    cx = rng.integer(extent, cols - 1 - extent)
    # radius wobbles between 0.65 and 1.0 of extent with three harmonics
    weights = np.array([rng.uniform() + 0.1 for _ in range(3)])
    weights /= weights.sum()
    phases = [2.0 * math.pi * rng.uniform() for _ in range(3)]
    y, x = np.ogrid[0:rows, 0:cols]
    dy, dx = y - cy, x - cx
    theta = np.arctan2(dy, dx)
    wobble = sum(w * 0.5 * (1.0 + np.cos(m * theta + p))
                 for w, m, p in zip(weights, (2, 3, 5), phases))
    radius = extent * (1.0 - 0.35 * wobble)
    return dx * dx + dy * dy <= radius * radius


def _edge_chip_mask(shape, extent, rng):
    rows, cols = shape
    if extent > min(rows, cols):
        raise ExtentTooLargeError(f"edge chip radius {extent} exceeds a {rows}x{cols} image")
    anchor = rng.integer(0, 7)
    if anchor < 4:  # corners: quarter disc
        cy = 0 if anchor in (0, 1) else rows - 1
        cx = 0 if anchor in (0, 2) else cols - 1
    elif anchor == 4:  # top edge
        cy, cx = 0, rng.integer(0, cols - 1)
    elif anchor == 5:  # bottom edge
        cy, cx = rows - 1, rng.integer(0, cols - 1)
    elif anchor == 6:  # left edge
        cy, cx = rng.integer(0, rows - 1), 0
    else:  # right edge
        cy, cx = rng.integer(0, rows - 1), cols - 1
    return _disc(shape, cy, cx, extent)


def _crack_mask(shape, extent, rng):
    rows, cols = shape
    if extent > min(rows, cols):
        raise ExtentTooLargeError(f"crack length {extent} exceeds a {rows}x{cols} image")
    width = rng.integer(1, 2)
    y = float(rng.integer(0, rows - 1))
    x = float(rng.integer(0, cols - 1))
    angle = 2.0 * math.pi * rng.uniform()
    mask = np.zeros(shape, dtype=bool)
    step = 0.5
    travelled = 0.0
    while True:
        iy, ix = int(round(y)), int(round(x))
        mask[iy, ix] = True
        if width == 2:
            # thicken across the dominant direction of travel
            if abs(math.cos(angle)) >= abs(math.sin(angle)):
                mask[min(iy + 1, rows - 1), ix] = True
            else:
                mask[iy, min(ix + 1, cols - 1)] = True
        if travelled >= extent:
            break
        # bend every 4 px of travel
        if travelled > 0 and travelled % 4.0 == 0:
            angle += 0.5 * (rng.uniform() - 0.5)
        ny, nx = y + step * math.sin(angle), x + step * math.cos(angle)
        if not 0 <= ny <= rows - 1:
            angle = -angle
            ny = y + step * math.sin(angle)
        if not 0 <= nx <= cols - 1:
            angle = math.pi - angle
            nx = x + step * math.cos(angle)
        y, x = ny, nx
        travelled += step
    return mask


_MASKERS = {
    "spot": _spot_mask,
    "crack": _crack_mask,
    "edge_chip": _edge_chip_mask,
    "blob": _blob_mask,
}


def defect_mask(shape: tuple[int, int], spec: DefectSpec) -> np.ndarray:
    """Boolean mask of the pixels ``spec`` touches on an image of ``shape``."""
    return _MASKERS[spec.kind](shape, spec.extent, SplitMix64(spec.seed))


def inject_defect(image, spec: DefectSpec) -> np.ndarray:
    """Shift the defect's pixels by ``spec.amplitude`` and clamp to [0, 255]."""
    img = np.array(image, dtype=np.float64, copy=True)
    if img.ndim != 2:
        raise ValueError("expected a 2-D image")
    mask = defect_mask(img.shape, spec)
    img[mask] += spec.amplitude
    return np.clip(img, 0.0, 255.0)


def random_defect(rng: SplitMix64, size: int) -> DefectSpec:
    """Draw a defect with the frozen default amplitude and extent for its kind.

    Radii are capped at a quarter of the tile and crack length at the tile
    side, so small tiles stay valid.
    """
    kind = DEFECT_KINDS[rng.integer(0, len(DEFECT_KINDS) - 1)]
    sign = 1.0 if rng.integer(0, 1) else -1.0
    cap = size if kind == "crack" else size // 4
    extent = max(1, min(DEFAULT_EXTENTS[kind], cap))
    return DefectSpec(kind, sign * DEFAULT_AMPLITUDES[kind], extent, rng.next_u64())


# -- corpora ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CorpusImage:
    name: str
    image: np.ndarray
    label: Verdict
    defect: DefectSpec | None = None


def defective_indices(spec: CorpusSpec) -> frozenset[int]:
    order = SplitMix64(derive_seed(spec.seed, STREAM_LABELS)).shuffle(list(range(spec.count)))
    return frozenset(order[: spec.defective_count])


def corpus_image(spec: CorpusSpec, index: int, defective: bool,
               texture: np.ndarray | None = None) -> CorpusImage:
    """Build test image ``index``; its stream is independent of every other image."""
    if texture is None:
        texture = tile_texture(spec)
    rng = SplitMix64(derive_seed(spec.seed, STREAM_IMAGES + index))
    img = add_noise(texture, spec.noise_sigma, rng)
    name = f"test_{index:04d}.pgm"
    if not defective:
        return CorpusImage(name, img, Verdict.OK)
    defect = random_defect(rng, spec.size)
    return CorpusImage(name, inject_defect(img, defect), Verdict.DEFECTIVE, defect)




def build_corpus(spec: CorpusSpec) -> tuple[np.ndarray, list[CorpusImage]]:
    """In-memory corpus: the clean reference and every labeled test image."""
    texture = tile_texture(spec)
    reference = add_noise(texture, spec.noise_sigma,
                          SplitMix64(derive_seed(spec.seed, STREAM_REFERENCE)))
    bad = defective_indices(spec)
    images = [corpus_image(spec, i, i in bad, texture) for i in range(spec.count)]
    return reference, images


def generate_corpus(spec: CorpusSpec, out_dir) -> Manifest:
    """Write ``ref.pgm``, ``test_NNNN.pgm`` files and ``manifest.csv`` to ``out_dir``."""
    reference, images = build_corpus(spec)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / REFERENCE_NAME).write_bytes(save_pgm(reference))
        for item in images:
            (out / item.name).write_bytes(save_pgm(item.image))
        manifest = Manifest([ManifestEntry(i.name, i.label) for i in images], REFERENCE_NAME)
        (out / MANIFEST_NAME).write_bytes(dump_manifest(manifest))
    except OSError as exc:
        raise CorpusIOError(f"cannot write corpus to {out}: {exc}") from exc
    return manifest
