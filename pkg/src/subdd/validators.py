"""Checks on user-supplied rays, orders and DD pairs."""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .cone import MAX_N, MIN_N, ConeSpec
from .errors import InputMalformedError
from .formats import DDPair
from .linalg import rank
from .logger import debug


def validate_n(n: int) -> int:
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"n must be between {MIN_N} and {MAX_N}, got {n}")
    return n


def validate_dimension(rays: np.ndarray, spec: ConeSpec, source: str = "rays") -> None:
    if rays.shape[0] and rays.shape[1] != spec.d:
        raise InputMalformedError(
            f"{source}: rays have {rays.shape[1]} coordinates, n={spec.n} needs {spec.d}"
        )


@dataclass
class RayReport:
    """Outcome of checking a ray set against the cone."""

    total: int = 0
    outside: list[int] = field(default_factory=list)
    not_extremal: list[int] = field(default_factory=list)
    not_primitive: list[int] = field(default_factory=list)
    duplicates: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.outside or self.not_extremal or self.not_primitive or self.duplicates)

    def summary(self) -> dict[str, int]:
        return {
            "rays": self.total,
            "outside cone": len(self.outside),
            "not extremal": len(self.not_extremal),
            "not primitive": len(self.not_primitive),
            "duplicates": len(self.duplicates),
        }


def validate_rays(rays: np.ndarray, spec: ConeSpec) -> RayReport:
    """Membership, extremality (tight rows of rank d - 1), primitivity and uniqueness."""
    validate_dimension(rays, spec)
    report = RayReport(total=rays.shape[0])
    if rays.shape[0] == 0:
        return report
    values = spec.matrix @ rays.T
    seen: set[tuple[int, ...]] = set()
    for k in range(rays.shape[0]):
        key = tuple(int(v) for v in rays[k])
        if key in seen:
            report.duplicates.append(k)
        seen.add(key)
        if gcd(*key) != 1:
            report.not_primitive.append(k)
        column = values[:, k]
        if np.any(column < 0):
            report.outside.append(k)
            continue
        if rank(spec.matrix[column == 0]) != spec.d - 1:
            report.not_extremal.append(k)
    debug.print(f"[verify] {report.summary()}")
    return report


def validate_order(rows: tuple[int, ...], spec: ConeSpec, complete: bool = True) -> None:
    """Rows are distinct indices; a complete order names every row."""
    if len(set(rows)) != len(rows):
        raise InputMalformedError("order lists a row more than once")
    if any(not 0 <= r < spec.m for r in rows):
        raise InputMalformedError(f"order names a row outside 0..{spec.m - 1}")
    if complete and len(rows) != spec.m:
        raise InputMalformedError(f"order names {len(rows)} of {spec.m} rows")


def validate_dd_pair(pair: DDPair) -> None:
    """Every ray satisfies every processed row and no ray is zero."""
    if pair.rays.shape[0] == 0:
        return
    if pair.rays.shape[1] != pair.dimension:
        raise InputMalformedError("rays and rows have different dimensions")
    if not np.all(np.any(pair.rays != 0, axis=1)):
        raise InputMalformedError("DD pair contains the zero vector")
    if pair.rows.shape[0]:
        values = pair.rows @ pair.rays.T
        bad = np.flatnonzero(np.any(values < 0, axis=0))
        if bad.size:
            raise InputMalformedError(f"ray {int(bad[0])} violates a processed row")
    if pair.new_row is not None and pair.new_row.shape[0] != pair.dimension:
        raise InputMalformedError("new row has the wrong dimension")


def processed_rank(pair: DDPair) -> int:
    return rank(pair.rows) if pair.rows.shape[0] else 0
