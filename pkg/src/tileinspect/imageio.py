"""Byte-level codecs: PGM images, HDWT pyramid files and CSV manifests.

All functions here work on ``bytes``; reading and writing files is left to
callers.

HDWT layout (little-endian throughout)::

    b"HDWT"  u8 version=1  u32 levels  u32 source_rows  u32 source_cols
    then 3*levels+1 matrices: LL_k, then lh, hl, hh for level k down to 1,
    each as  u32 rows  u32 cols  rows*cols float64 values, row-major.
"""

from __future__ import annotations

import csv
import io
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadEntryError,
    BadHeaderError,
    BadLabelError,
    BadMagicError,
    DuplicatePathError,
    LengthMismatchError,
    MalformedHeaderError,
    MaxvalUnsupportedError,
    TruncatedDataError,
    VersionUnsupportedError,
)
from .inspection import Verdict
from .wavelet import Details, Pyramid

HDWT_MAGIC = b"HDWT"
HDWT_VERSION = 1
_HEADER = struct.Struct("<4sBIII")
_DIMS = struct.Struct("<II")

_WHITESPACE = b" \t\n\r\v\f"
_P2_LINE_WIDTH = 70


# -- PGM -------------------------------------------------------------------

def _header_tokens(data: bytes, pos: int, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated tokens, skipping ``#`` comments.

    Returns the tokens and the index just past the last one.
    """
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos >= n:
            raise TruncatedDataError("PGM header ends early")
        if data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _positive_int(token: bytes, what: str) -> int:
    if not token.isdigit():
        raise MalformedHeaderError(f"PGM {what} {token!r} is not a positive integer")
    value = int(token)
    if value <= 0:
        raise MalformedHeaderError(f"PGM {what} must be positive, got {value}")
    return value


def load_pgm(data: bytes) -> np.ndarray:
    """Decode a P2 (ASCII) or P5 (binary) PGM with maxval <= 255."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise BadMagicError(f"not a PGM file (magic {magic!r}, expected P2 or P5)")
    (w_tok, h_tok, m_tok), pos = _header_tokens(data, 2, 3)
    cols = _positive_int(w_tok, "width")
    rows = _positive_int(h_tok, "height")
    maxval = _positive_int(m_tok, "maxval")
    if maxval > 255:
        raise MaxvalUnsupportedError(f"maxval {maxval} > 255 is not supported")
    count = rows * cols

    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data):
            raise TruncatedDataError("PGM raster missing")
        if data[pos] not in _WHITESPACE:
            raise MalformedHeaderError("no whitespace after PGM maxval")
        raster = data[pos + 1: pos + 1 + count]
        if len(raster) < count:
            raise TruncatedDataError(f"PGM raster has {len(raster)} of {count} bytes")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        text = b"\n".join(line.split(b"#", 1)[0] for line in data[pos:].splitlines())
        tokens = text.split()
        if len(tokens) < count:
            raise TruncatedDataError(f"PGM raster has {len(tokens)} of {count} values")
        try:
            pixels = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError as exc:
            raise MalformedHeaderError(f"bad P2 pixel value: {exc}") from None
        if pixels.min() < 0:
            raise MalformedHeaderError("negative P2 pixel value")
    if pixels.max() > maxval:
        raise MalformedHeaderError(f"pixel value {int(pixels.max())} exceeds maxval {maxval}")
    return pixels.astype(np.float64).reshape(rows, cols)


def quantize(image) -> np.ndarray:
    """Clamp to [0, 255] and round half-to-even, giving ``uint8`` pixels."""
    img = np.asarray(image, dtype=np.float64)
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return np.rint(np.clip(img, 0.0, 255.0)).astype(np.uint8)


def save_pgm(image, binary: bool = True) -> bytes:
    """Encode an image as maxval-255 PGM (P5 when ``binary``, otherwise P2)."""
    pixels = quantize(image)
    if pixels.ndim != 2:
        raise ValueError("PGM images must be 2-D")
    rows, cols = pixels.shape
    if binary:
        return b"P5\n%d %d\n255\n" % (cols, rows) + pixels.tobytes()
    out = [b"P2\n%d %d\n255\n" % (cols, rows)]
    for row in pixels:
        line = b""
        for value in row:
            tok = b"%d" % value
            if line and len(line) + 1 + len(tok) > _P2_LINE_WIDTH:
                out.append(line + b"\n")
                line = tok
            else:
                line = line + b" " + tok if line else tok
        out.append(line + b"\n")
    return b"".join(out)


# -- HDWT pyramids ---------------------------------------------------------

def save_pyramid(pyramid: Pyramid) -> bytes:
    pyramid.validate()
    parts = [_HEADER.pack(HDWT_MAGIC, HDWT_VERSION, pyramid.levels,
                          pyramid.source_rows, pyramid.source_cols)]
    for m in pyramid.matrices():
        m = np.asarray(m, dtype="<f8")
        parts.append(_DIMS.pack(*m.shape))
        parts.append(np.ascontiguousarray(m).tobytes())
    return b"".join(parts)


def load_pyramid(data: bytes) -> Pyramid:
    if data[:4] != HDWT_MAGIC:
        if len(data) < 4 and HDWT_MAGIC.startswith(data):
            raise TruncatedDataError("HDWT header truncated")
        raise BadMagicError(f"not an HDWT file (magic {data[:4]!r})")
    if len(data) < _HEADER.size:
        if len(data) > 4 and data[4] != HDWT_VERSION:
            raise VersionUnsupportedError(f"HDWT version {data[4]} is not supported")
        raise TruncatedDataError("HDWT header truncated")
    _, version, levels, rows, cols = _HEADER.unpack_from(data, 0)
    if version != HDWT_VERSION:
        raise VersionUnsupportedError(f"HDWT version {version} is not supported")

    pos = _HEADER.size
    matrices = []
    for i in range(3 * levels + 1):
        if len(data) - pos < _DIMS.size:
            raise TruncatedDataError(f"HDWT matrix {i} header truncated")
        r, c = _DIMS.unpack_from(data, pos)
        pos += _DIMS.size
        nbytes = 8 * r * c
        if len(data) - pos < nbytes:
            raise TruncatedDataError(f"HDWT matrix {i} payload truncated")
        m = np.frombuffer(data, dtype="<f8", count=r * c, offset=pos)
        matrices.append(m.astype(np.float64).reshape(r, c))
        pos += nbytes
    if pos != len(data):
        raise LengthMismatchError(f"{len(data) - pos} trailing bytes after HDWT payload")

    approx, rest = matrices[0], matrices[1:]
    details = [Details(*rest[3 * i: 3 * i + 3]) for i in range(levels)]
    details.reverse()  # file stores coarsest first
    pyramid = Pyramid(levels, approx, details, rows, cols)
    pyramid.validate()
    return pyramid


# -- manifests -------------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: Verdict


@dataclass
class Manifest:
    entries: list[ManifestEntry] = field(default_factory=list)
    reference_path: str = ""


_LABELS = {"ok": Verdict.OK, "defective": Verdict.DEFECTIVE}


def load_manifest(data: bytes, reference_path: str = "") -> Manifest:
    """Parse a ``path,label`` CSV; entries keep file order."""
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise BadHeaderError(f"manifest is not UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["path", "label"]:
        raise BadHeaderError(f"manifest header must be 'path,label', got {header!r}")

    entries = []
    seen = set()
    for row in reader:
        line = reader.line_num
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 2:
            raise BadEntryError(line, f"expected 2 fields, got {len(row)}")
        path, label = row[0].strip(), row[1].strip().lower()
        if not path:
            raise BadEntryError(line, "empty path")
        if label not in _LABELS:
            raise BadLabelError(line, row[1].strip())
        if path in seen:
            raise DuplicatePathError(path)
        seen.add(path)
        entries.append(ManifestEntry(path, _LABELS[label]))
    return Manifest(entries, reference_path)


def dump_manifest(manifest: Manifest) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "label"])
    for e in manifest.entries:
        writer.writerow([e.path, e.label.value.lower()])
    return buf.getvalue().encode("utf-8")
