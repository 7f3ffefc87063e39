"""Tensor files, PGM ingestion and report serialisation.

TNS3 layout (all little-endian)::

    offset 0   4 bytes  magic b"TNS3"
    offset 4   u16      format version (1)
    offset 6   3 x u64  n1, n2, n3
    offset 30  f64 * n1 n2 n3, i fastest, then j, then k
"""

import csv
import json
import os
import re
import struct
from pathlib import Path

import numpy as np

from .errors import DataError, FormatError
from .tensor import as_tensor3

MAGIC = b"TNS3"
VERSION = 1
_HEADER = struct.Struct("<4sH3Q")
HEADER_SIZE = _HEADER.size
IMAGE_SUFFIXES = (".pgm", ".pnm")


def tensor_to_bytes(X):
    X = as_tensor3(X)
    header = _HEADER.pack(MAGIC, VERSION, *X.shape)
    return header + np.asarray(X, dtype="<f8").tobytes(order="F")


def tensor_from_bytes(data):
    if len(data) < HEADER_SIZE:
        raise FormatError(
            f"truncated header: expected {HEADER_SIZE} bytes, got {len(data)}", offset=len(data)
        )
    magic, version, n1, n2, n3 = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}", offset=4)
    if min(n1, n2, n3) < 1:
        raise FormatError(f"dims must be positive, got {(n1, n2, n3)}", offset=6)
    expected = 8 * n1 * n2 * n3
    actual = len(data) - HEADER_SIZE
    if actual != expected:
        raise FormatError(
            f"payload length mismatch: expected {expected} bytes, got {actual}",
            offset=HEADER_SIZE + min(actual, expected),
        )
    values = np.frombuffer(data, dtype="<f8", offset=HEADER_SIZE)
    X = values.astype(np.float64).reshape((n1, n2, n3), order="F")
    if not np.all(np.isfinite(X)):
        raise DataError("tensor file contains NaN or Inf entries")
    return X


def save_tensor(X, path):
    Path(path).write_bytes(tensor_to_bytes(X))


def load_tensor(path):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return tensor_from_bytes(data)


# -- PGM --------------------------------------------------------------------


def _header_tokens(data, count):
    """Return ``count`` whitespace-separated header tokens and the end offset."""
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header", offset=pos)
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data):
    """Decode a P5 (binary) or P2 (ASCII) graymap to a float array, rows x cols."""
    if data[:2] not in (b"P5", b"P2"):
        raise FormatError(f"not a PGM file (magic {data[:2]!r})", offset=0)
    try:
        tokens, pos = _header_tokens(data, 4)
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"bad PGM header: {exc}") from exc
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise FormatError(f"bad PGM geometry {width}x{height} maxval {maxval}")
    count = width * height
    if tokens[0] == b"P5":
        pos += 1  # single whitespace byte before the raster
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(data) - pos < need:
            raise FormatError(
                f"truncated raster: expected {need} bytes, got {len(data) - pos}", offset=pos
            )
        values = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    else:
        body = re.sub(rb"#[^\r\n]*", b" ", data[pos:])
        try:
            values = np.array([int(v) for v in body.split()[:count]])
        except ValueError as exc:
            raise FormatError(f"bad ASCII sample: {exc}") from exc
        if values.size != count:
            raise FormatError(f"expected {count} ASCII samples, got {values.size}")
    return values.astype(np.float64).reshape(height, width), maxval


def read_pgm(path):
    """Read a PGM as gray levels on the 0-255 scale."""
    pixels, maxval = parse_pgm(Path(path).read_bytes())
    if maxval != 255:
        pixels = pixels * (255.0 / maxval)
    return pixels


def write_pgm(path, image, maxval=255):
    image = np.asarray(image)
    h, w = image.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    dtype = ">u2" if maxval > 255 else "u1"
    raster = np.clip(np.rint(image), 0, maxval).astype(dtype).tobytes()
    Path(path).write_bytes(header + raster)


def _axis_weights(src, dst):
    """Sample positions for half-pixel-centred bilinear resampling, edge-clamped."""
    pos = (np.arange(dst) + 0.5) * (src / dst) - 0.5
    pos = np.clip(pos, 0.0, src - 1)
    lo = np.floor(pos).astype(np.intp)
    hi = np.minimum(lo + 1, src - 1)
    return lo, hi, pos - lo


def resize_bilinear(image, size):
    image = np.asarray(image, dtype=np.float64)
    h, w = (int(s) for s in size)
    if image.shape == (h, w):
        return image.copy()
    r0, r1, fr = _axis_weights(image.shape[0], h)
    c0, c1, fc = _axis_weights(image.shape[1], w)
    rows = image[r0] * (1 - fr)[:, None] + image[r1] * fr[:, None]
    return rows[:, c0] * (1 - fc) + rows[:, c1] * fc


def list_images(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory} is not a directory")
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and not p.name.startswith(".")),
        key=lambda p: p.name,
    )


def ingest_images(directory, size=None):
    """Stack every image of ``directory`` (sorted by filename) along mode 3."""
    paths = list_images(directory)
    if not paths:
        raise DataError(f"no images in {directory}")
    images, failures = [], []
    for p in paths:
        if p.suffix.lower() not in IMAGE_SUFFIXES:
            failures.append(f"{p.name}: unsupported format (PGM P5/P2 only)")
            continue
        try:
            images.append(read_pgm(p))
        except (FormatError, OSError) as exc:
            failures.append(f"{p.name}: {exc}")
    if failures:
        raise DataError("could not ingest:\n  " + "\n  ".join(failures))
    if size is None:
        shapes = {im.shape for im in images}
        if len(shapes) > 1:
            raise DataError(f"images differ in size {sorted(shapes)}; pass a target size")
        size = images[0].shape
    return np.stack([resize_bilinear(im, size) for im in images], axis=2)


# -- reports ------------------------------------------------------------------


def write_json(obj, path):
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read report {path}: {exc}") from exc


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])


def write_d_series_csv(path, series):
    T = max((len(s) for s in series), default=0)
    rows = []
    for t in range(T):
        rows.append([t + 1] + [s[t] if t < len(s) else "" for s in series])
    write_csv(path, ["iteration"] + [f"test_{i}" for i in range(len(series))], rows)


def write_spectra_csv(directory, spectra, prefix="spectrum"):
    paths = []
    for mode, values in enumerate(spectra, start=1):
        path = os.path.join(directory, f"{prefix}_mode{mode}.csv")
        write_csv(path, ["rank", "value"], [(r, float(v)) for r, v in enumerate(values, 1)])
        paths.append(path)
    return paths


def flatten_report(report, directory):
    """Write the CSV companions of an audit or spectrum report dict."""
    os.makedirs(directory, exist_ok=True)
    written = []
    if report.get("kind") == "audit":
        tests = report["per_test"]
        path = os.path.join(directory, "d_series.csv")
        write_d_series_csv(path, [t["d_series"] for t in tests])
        written.append(path)
        for t in tests:
            traces = t["objective_traces"]
            labels = list(traces)
            T = max((len(v) for v in traces.values()), default=0)
            rows = [[i + 1] + [traces[k][i] if i < len(traces[k]) else "" for k in labels]
                    for i in range(T)]
            path = os.path.join(directory, f"objective_test_{t['index']}.csv")
            write_csv(path, ["iteration"] + labels, rows)
            written.append(path)
        spectrum = report.get("spectrum")
        if spectrum:
            written += write_spectra_csv(directory, spectrum["spectra"])
    elif report.get("kind") == "spectrum":
        written += write_spectra_csv(directory, report["spectra"])
    else:
        raise DataError(f"unknown report kind {report.get('kind')!r}")
    return written
