"""Binary and text file formats.

Formats:

* ``DT1`` dense tensor: magic ``b"DT1\\n"``, ``u32`` little-endian order
  ``d``, then ``d`` ``u64`` little-endian mode sizes, then ``prod(dims)``
  little-endian IEEE ``f64`` values in first-index-fastest order.
* ``MK1`` observation mask: magic ``b"MK1\\n"``, ``u32`` order, ``d`` u64
  mode sizes, ``u64`` count, then ``count`` sorted ``u64`` linear indices.
* ring factors: one JSON header line ``{"d": ..., "ranks": [...]}`` followed
  by ``d`` concatenated DT1 blocks, one per core.
* PGM (``P5``) binary grayscale, read as an image mask (pixel 0 = missing).
* PPM (``P6``) binary RGB, scaled to [0, 1] on read and clamped back to
  0..255 on write.
* solver config: ``key = value`` lines matching SolverConfig fields.

Readers raise :class:`FormatError` carrying the path and the byte offset
at which parsing failed.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from ._validation import prod
from .ring import TRFactors
from .sampling import ObservationMask, mask_from_bool
from .solver import SolverConfig

__all__ = [
    "FormatError",
    "read_tensor",
    "write_tensor",
    "read_factors",
    "write_factors",
    "read_mask",
    "write_mask",
    "read_pgm_mask",
    "read_ppm",
    "write_ppm",
    "read_solver_config",
]

_TENSOR_MAGIC = b"DT1\n"
_MASK_MAGIC = b"MK1\n"


class FormatError(ValueError):
    """A file failed to parse; records the path and byte offset."""

    def __init__(self, path, offset: int, message: str):
        self.path = str(path)
        self.offset = int(offset)
        self.reason = message
        super().__init__(f"{self.path}: byte {self.offset}: {message}")


class _Cursor:
    def __init__(self, path, data: bytes):
        self.path = path
        self.data = data
        self.offset = 0

    def take(self, n: int, what: str) -> bytes:
        if self.offset + n > len(self.data):
            raise FormatError(
                self.path, len(self.data), f"truncated file while reading {what}"
            )
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def fail(self, message: str, at: int | None = None):
        raise FormatError(self.path, self.offset if at is None else at, message)


def _read_tensor_block(cur: _Cursor) -> np.ndarray:
    at = cur.offset
    if cur.take(4, "magic") != _TENSOR_MAGIC:
        cur.fail("bad magic, expected DT1", at=at)
    at = cur.offset
    (d,) = struct.unpack("<I", cur.take(4, "order"))
    if d == 0:
        cur.fail("tensor order is 0", at=at)
    dims = []
    for k in range(d):
        at = cur.offset
        (n,) = struct.unpack("<Q", cur.take(8, f"dim {k + 1}"))
        if n == 0:
            cur.fail(f"mode {k + 1} has size 0", at=at)
        dims.append(int(n))
    count = prod(dims)
    raw = cur.take(8 * count, "tensor data")
    values = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    return values.reshape(tuple(dims), order="F")


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        cur = _Cursor(path, fh.read())
    t = _read_tensor_block(cur)
    if cur.offset != len(cur.data):
        cur.fail(f"{len(cur.data) - cur.offset} trailing bytes after tensor data")
    return t


def _tensor_block_bytes(t: np.ndarray) -> bytes:
    t = np.asarray(t, dtype=np.float64)
    parts = [_TENSOR_MAGIC, struct.pack("<I", t.ndim)]
    parts.extend(struct.pack("<Q", n) for n in t.shape)
    parts.append(t.reshape(-1, order="F").astype("<f8").tobytes())
    return b"".join(parts)


def write_tensor(path, t: np.ndarray) -> None:
    if np.asarray(t).ndim < 1:
        raise ValueError("cannot write a scalar as a tensor file")
    with open(path, "wb") as fh:
        fh.write(_tensor_block_bytes(t))


def write_factors(path, factors: TRFactors) -> None:
    header = json.dumps({"d": factors.order, "ranks": list(factors.ranks)})
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        for core in factors.cores:
            fh.write(_tensor_block_bytes(core))


def read_factors(path) -> TRFactors:
    with open(path, "rb") as fh:
        data = fh.read()
    nl = data.find(b"\n")
    if nl < 0:
        raise FormatError(path, len(data), "missing header line")
    try:
        header = json.loads(data[:nl].decode("ascii"))
        d = int(header["d"])
        ranks = [int(r) for r in header["ranks"]]
    except (ValueError, KeyError, TypeError, UnicodeDecodeError):
        raise FormatError(path, 0, "malformed factor header") from None
    if d < 1 or len(ranks) != d:
        raise FormatError(path, 0, f"header order {d} does not match ranks {ranks}")
    cur = _Cursor(path, data)
    cur.offset = nl + 1
    cores = []
    for k in range(d):
        at = cur.offset
        core = _read_tensor_block(cur)
        if core.ndim != 3:
            raise FormatError(path, at, f"core {k + 1} is not third-order")
        cores.append(core)
    if cur.offset != len(data):
        cur.fail(f"{len(data) - cur.offset} trailing bytes after last core")
    factors = TRFactors(tuple(cores))
    if list(factors.ranks) != ranks:
        raise FormatError(path, nl + 1, "core shapes disagree with header ranks")
    return factors


def write_mask(path, mask: ObservationMask) -> None:
    parts = [_MASK_MAGIC, struct.pack("<I", len(mask.dims))]
    parts.extend(struct.pack("<Q", n) for n in mask.dims)
    parts.append(struct.pack("<Q", mask.count))
    parts.append(mask.indices.astype("<u8").tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


def read_mask(path) -> ObservationMask:
    with open(path, "rb") as fh:
        cur = _Cursor(path, fh.read())
    at = cur.offset
    if cur.take(4, "magic") != _MASK_MAGIC:
        cur.fail("bad magic, expected MK1", at=at)
    at = cur.offset
    (d,) = struct.unpack("<I", cur.take(4, "order"))
    if d == 0:
        cur.fail("mask order is 0", at=at)
    dims = []
    for k in range(d):
        at = cur.offset
        (n,) = struct.unpack("<Q", cur.take(8, f"dim {k + 1}"))
        if n == 0:
            cur.fail(f"mode {k + 1} has size 0", at=at)
        dims.append(int(n))
    at = cur.offset
    (count,) = struct.unpack("<Q", cur.take(8, "count"))
    if count > prod(dims):
        cur.fail(f"count {count} exceeds tensor size {prod(dims)}", at=at)
    at = cur.offset
    raw = cur.take(8 * count, "indices")
    idx = np.frombuffer(raw, dtype="<u8").astype(np.int64)
    if cur.offset != len(cur.data):
        cur.fail(f"{len(cur.data) - cur.offset} trailing bytes after indices")
    if idx.size and np.any(np.diff(idx) <= 0):
        raise FormatError(path, at, "indices are not strictly increasing")
    try:
        return ObservationMask(tuple(dims), idx)
    except ValueError as exc:
        raise FormatError(path, at, str(exc)) from None


def _read_pnm_header(cur: _Cursor, magic: bytes):
    at = cur.offset
    if cur.take(2, "magic") != magic:
        cur.fail(f"bad magic, expected {magic.decode()}", at=at)

    def next_token() -> int:
        # skip whitespace and '#' comments between header fields
        while True:
            at = cur.offset
            b = cur.take(1, "header")
            if b in b" \t\r\n":
                continue
            if b == b"#":
                while cur.take(1, "comment") != b"\n":
                    pass
                continue
            tok = b
            while True:
                c = cur.take(1, "header")
                if c in b" \t\r\n":
                    break
                tok += c
            try:
                return int(tok)
            except ValueError:
                cur.fail(f"non-numeric header token {tok!r}", at=at)

    width = next_token()
    height = next_token()
    maxval = next_token()
    if width < 1 or height < 1:
        cur.fail(f"bad image size {width}x{height}")
    if not 0 < maxval < 256:
        cur.fail(f"unsupported maxval {maxval}; expected 1..255")
    return width, height, maxval


def read_pgm_mask(path, dims=None) -> ObservationMask:
    """Read a binary PGM as an observation mask (pixel 0 = missing).

    The image covers the leading two modes; with ``dims`` given, the
    pattern is replicated across any trailing modes (e.g. channels).
    """
    with open(path, "rb") as fh:
        cur = _Cursor(path, fh.read())
    width, height, _ = _read_pnm_header(cur, b"P5")
    raw = cur.take(width * height, "pixel data")
    if cur.offset != len(cur.data):
        cur.fail(f"{len(cur.data) - cur.offset} trailing bytes after pixels")
    img = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
    observed = img != 0
    if dims is None:
        return mask_from_bool(observed)
    dims = tuple(int(n) for n in dims)
    if dims[:2] != observed.shape:
        raise ValueError(
            f"mask image {observed.shape} does not cover leading modes of {dims}"
        )
    expanded = observed.reshape(observed.shape + (1,) * (len(dims) - 2))
    return mask_from_bool(np.broadcast_to(expanded, dims))


def read_ppm(path) -> np.ndarray:
    """Read a binary PPM into an (H, W, 3) float array scaled to [0, 1]."""
    with open(path, "rb") as fh:
        cur = _Cursor(path, fh.read())
    width, height, maxval = _read_pnm_header(cur, b"P6")
    raw = cur.take(width * height * 3, "pixel data")
    if cur.offset != len(cur.data):
        cur.fail(f"{len(cur.data) - cur.offset} trailing bytes after pixels")
    img = np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3)
    return img.astype(np.float64) / maxval


def write_ppm(path, img: np.ndarray) -> None:
    """Write an (H, W, 3) array; values clamped to [0, 1] then scaled to 0..255."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) image, got {img.shape}")
    data = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (img.shape[1], img.shape[0]))
        fh.write(data.tobytes())


_CONFIG_PARSERS = {
    "l": int,
    "mu0": float,
    "beta": float,
    "tol_rc": float,
    "max_iters": int,
    "svt_backend": str,
    "weights": lambda s: tuple(float(v) for v in s.split(",")),
}


def read_solver_config(path) -> SolverConfig:
    """Parse a ``key = value`` file into a :class:`SolverConfig`."""
    fields = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            try:
                fields[key] = _CONFIG_PARSERS[key](value.strip())
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: bad value for {key!r}: {value.strip()!r}"
                ) from None
    return SolverConfig(**fields)
