"""Text and binary file formats.

Every reader raises InputMalformedError with the offending line number. A path of ``-``
means standard input or standard output.
"""

import csv
import struct
import sys
from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import IO, TextIO

import numpy as np

from .cone import ConeSpec, ElementaryTriplet, build_reduced_matrix, expected_dimensions
from .errors import InputMalformedError, OverflowDetectedError
from .linalg import int_array, int_matrix
from .stats import Histogram
from .symmetry import OrbitRecord, SymmetryGroup

BINARY_MAGIC = b"SDDR1"
INT32_MIN, INT32_MAX = -(1 << 31), (1 << 31) - 1

PathLike = Path | str


@contextmanager
def open_text(path: PathLike, mode: str = "r") -> Iterator[TextIO]:
    if str(path) == "-":
        yield sys.stdout if "w" in mode or "a" in mode else sys.stdin
        return
    path = Path(path).expanduser()
    if "w" in mode or "a" in mode:
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, mode) as f:
        yield f


def data_lines(lines: Iterable[str], comments: bool = True) -> Iterator[tuple[int, str]]:
    """(line number, stripped text) for every non-blank line; '#' lines skipped."""
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or (comments and text.startswith("#")):
            continue
        yield lineno, text


def parse_ints(text: str, lineno: int | None, expected: int | None = None) -> list[int]:
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError as e:
        raise InputMalformedError(f"not an integer list: {text!r}", lineno) from e
    if expected is not None and len(values) != expected:
        raise InputMalformedError(f"expected {expected} integers, got {len(values)}", lineno)
    return values


def format_ints(values: Sequence[int]) -> str:
    return " ".join(str(int(v)) for v in values)


# --- matrix and order files ---


def write_matrix(spec: ConeSpec, path: PathLike) -> None:
    """Header "d m n", then the m rows, then one "i j K" label per row."""
    with open_text(path, "w") as f:
        f.write(f"{spec.d} {spec.m} {spec.n}\n")
        for row in spec.matrix:
            f.write(format_ints(row) + "\n")
        for t in spec.triplets:
            f.write(t.to_text() + "\n")


def _parse_triplet(text: str, lineno: int) -> ElementaryTriplet:
    i, j, K = parse_ints(text, lineno, 3)
    try:
        return ElementaryTriplet(i, j, K)
    except ValueError as e:
        raise InputMalformedError(str(e), lineno) from e


def read_matrix(path: PathLike) -> ConeSpec:
    """Read a matrix file and check it against the cone it claims to describe."""
    with open_text(path) as f:
        lines = list(data_lines(f, comments=False))
    if not lines:
        raise InputMalformedError("empty matrix file", 1)
    lineno, header = lines[0]
    d, m, n = parse_ints(header, lineno, 3)
    try:
        reference = build_reduced_matrix(n)
    except ValueError as e:
        raise InputMalformedError(str(e), lineno) from e
    if (d, m) != expected_dimensions(n):
        raise InputMalformedError(f"dimensions {d}x{m} do not match n={n}", lineno)
    if len(lines) != 1 + 2 * m:
        raise InputMalformedError(
            f"expected {2 * m} lines after the header, got {len(lines) - 1}"
        )

    rows = [parse_ints(text, no, d) for no, text in lines[1 : m + 1]]
    triplets = tuple(_parse_triplet(text, no) for no, text in lines[m + 1 :])
    matrix = np.array(rows, dtype=np.int64)
    for k, t in enumerate(triplets):
        ref = reference.row_of.get(t)
        if ref is None or not np.array_equal(matrix[k], reference.matrix[ref]):
            raise InputMalformedError(f"row {k} does not match label {t.label}", lines[1 + k][0])
    matrix.setflags(write=False)
    return ConeSpec(n=n, coords=reference.coords, matrix=matrix, triplets=triplets)


def write_order(rows: Sequence[int], spec: ConeSpec, path: PathLike) -> None:
    with open_text(path, "w") as f:
        for r in rows:
            f.write(spec.triplets[r].to_text() + "\n")


def read_order(path: PathLike, spec: ConeSpec) -> tuple[int, ...]:
    rows: list[int] = []
    seen: set[int] = set()
    with open_text(path) as f:
        for lineno, text in data_lines(f):
            t = _parse_triplet(text, lineno)
            row = spec.row_of.get(t)
            if row is None:
                raise InputMalformedError(f"{t.label} is not a row for n={spec.n}", lineno)
            if row in seen:
                raise InputMalformedError(f"{t.label} listed twice", lineno)
            seen.add(row)
            rows.append(row)
    return tuple(rows)


# --- ray and orbit files ---


def write_rays(rays: np.ndarray, path: PathLike, comment: str | None = None) -> None:
    with open_text(path, "w") as f:
        if comment:
            for line in comment.splitlines():
                f.write(f"# {line}\n")
        for ray in rays:
            f.write(format_ints(ray) + "\n")


def read_rays(path: PathLike, d: int | None = None) -> np.ndarray:
    """One ray per line; the first data line fixes the dimension unless `d` is given."""
    rays: list[list[int]] = []
    with open_text(path) as f:
        for lineno, text in data_lines(f):
            values = parse_ints(text, lineno, d)
            if d is None:
                d = len(values)
            rays.append(values)
    return int_matrix(rays, d or 0)


def write_orbit_pool(records: Iterable[OrbitRecord], path: PathLike) -> None:
    """One canonical ray per line, sorted, annotated with "# size weight"."""
    with open_text(path, "w") as f:
        for rec in sorted(records):
            f.write(f"{format_ints(rec.canonical)} # {rec.size} {rec.weight}\n")


def read_orbit_pool(
    path: PathLike, d: int, group: SymmetryGroup | None = None
) -> list[OrbitRecord]:
    """Read a pool; lines without annotations need a group to recompute size and weight."""
    records: list[OrbitRecord] = []
    with open_text(path) as f:
        for lineno, text in data_lines(f):
            coords, _, note = text.partition("#")
            canonical = tuple(parse_ints(coords, lineno, d))
            if note.strip():
                size, weight = parse_ints(note, lineno, 2)
                records.append(OrbitRecord(canonical, size, weight))
            elif group is not None:
                rec = group.canonical_form(canonical)
                if rec.canonical != canonical:
                    raise InputMalformedError("ray is not in canonical form", lineno)
                records.append(rec)
            else:
                raise InputMalformedError("missing '# size weight' annotation", lineno)
    return records


# --- CSV ---


def write_trajectory_csv(trajectory: Sequence[tuple[int, int]], path: PathLike) -> None:
    with open_text(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["rows", "rays"])
        writer.writerows(trajectory)


def write_histogram_csv(hist: Histogram, path: PathLike, bucket: str = "bucket") -> None:
    with open_text(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([bucket, "count"])
        writer.writerows(hist.items())


# --- pipe mode ---


@dataclass
class DDPair:
    """Processed rows, their extremal rays, and optionally the next row to add."""

    rows: np.ndarray
    rays: np.ndarray
    new_row: np.ndarray | None = None

    @property
    def dimension(self) -> int:
        return self.rows.shape[1]


def read_dd_pair(stream: IO[str]) -> DDPair:
    """Header "d m_i r_i", m_i rows, r_i rays, then an optional new row."""
    lines = list(data_lines(stream))
    if not lines:
        raise InputMalformedError("empty DD pair", 1)
    lineno, header = lines[0]
    d, m, r = parse_ints(header, lineno, 3)
    if d <= 0 or m < 0 or r < 0:
        raise InputMalformedError(f"bad header {header!r}", lineno)
    body = lines[1:]
    if len(body) not in (m + r, m + r + 1):
        last = body[-1][0] if body else lineno
        raise InputMalformedError(
            f"expected {m + r} or {m + r + 1} lines after the header, got {len(body)}", last
        )
    rows = int_matrix([parse_ints(text, no, d) for no, text in body[:m]], d)
    rays = int_matrix([parse_ints(text, no, d) for no, text in body[m : m + r]], d)
    new_row = None
    if len(body) == m + r + 1:
        no, text = body[-1]
        new_row = int_array(parse_ints(text, no, d))
    return DDPair(rows, rays, new_row)


def write_dd_pair(stream: IO[str], rows: np.ndarray, rays: np.ndarray) -> None:
    stream.write(f"{rows.shape[1]} {rows.shape[0]} {rays.shape[0]}\n")
    for row in rows:
        stream.write(format_ints(row) + "\n")
    for ray in rays:
        stream.write(format_ints(ray) + "\n")


# --- binary rays ---


def write_binary_rays(rays: np.ndarray, path: PathLike) -> None:
    """Magic "SDDR1", <u4 dimension, <u8 count, then <i4 coordinates row by row."""
    rays = np.asarray(rays)
    count, d = rays.shape
    if count and (rays.min() < INT32_MIN or rays.max() > INT32_MAX):
        raise OverflowDetectedError("ray coordinates do not fit the 32-bit binary format")
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(BINARY_MAGIC)
        f.write(struct.pack("<IQ", d, count))
        f.write(rays.astype("<i4").tobytes())


def read_binary_rays(path: PathLike) -> np.ndarray:
    data = Path(path).expanduser().read_bytes()
    head = len(BINARY_MAGIC) + struct.calcsize("<IQ")
    if len(data) < head or not data.startswith(BINARY_MAGIC):
        raise InputMalformedError(f"{path} is not an SDDR1 ray file")
    d, count = struct.unpack_from("<IQ", data, len(BINARY_MAGIC))
    expected = head + 4 * d * count
    if len(data) != expected:
        raise InputMalformedError(f"{path}: expected {expected} bytes, found {len(data)}")
    values = np.frombuffer(data, dtype="<i4", offset=head, count=d * count)
    return values.reshape(count, d).astype(np.int64)


def is_binary_ray_file(path: PathLike) -> bool:
    if str(path) == "-":
        return False
    with open(Path(path).expanduser(), "rb") as f:
        return f.read(len(BINARY_MAGIC)) == BINARY_MAGIC


def load_rays(path: PathLike, d: int | None = None) -> np.ndarray:
    """Text or binary ray file, detected by the magic header."""
    if is_binary_ray_file(path):
        rays = read_binary_rays(path)
        if d is not None and rays.shape[1] != d:
            raise InputMalformedError(f"{path}: dimension {rays.shape[1]}, expected {d}")
        return rays
    return read_rays(path, d)
