"""Weight and orbit-size distributions, and the capture-recapture orbit-count estimate."""

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .cone import ConeSpec
from .symmetry import OrbitRecord


@dataclass
class Histogram:
    """Bucket (weight or orbit size) to count."""

    counts: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def min(self) -> int | None:
        return min(self.counts) if self.counts else None

    @property
    def max(self) -> int | None:
        return max(self.counts) if self.counts else None

    def items(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())

    def weighted_sum(self) -> int:
        """Sum of bucket * count (total rays for an orbit-size histogram)."""
        return sum(k * v for k, v in self.counts.items())

    def mean(self) -> float:
        total = self.total
        return self.weighted_sum() / total if total else 0.0

    def merge(self, other: "Histogram") -> "Histogram":
        return Histogram(self.counts + other.counts)


def weight_histogram(rays: np.ndarray, spec: ConeSpec) -> Histogram:
    rays = np.asarray(rays)
    if rays.shape[0] == 0:
        return Histogram()
    weights = np.count_nonzero(spec.matrix @ rays.T == 0, axis=0)
    return Histogram(Counter(int(w) for w in weights))


def weight_histogram_from_orbits(records: Iterable[OrbitRecord]) -> Histogram:
    """Ray weight histogram reconstructed from orbit representatives and their sizes."""
    counts: Counter = Counter()
    for rec in records:
        counts[rec.weight] += rec.size
    return Histogram(counts)


def orbit_weight_histogram(records: Iterable[OrbitRecord]) -> Histogram:
    return Histogram(Counter(rec.weight for rec in records))


def orbit_size_histogram(records: Iterable[OrbitRecord]) -> Histogram:
    return Histogram(Counter(rec.size for rec in records))


@dataclass(frozen=True)
class CaptureEstimate:
    pool_size: int
    probe_size: int
    overlap: int
    mean_orbit_size: float | None = None

    @property
    def overlap_fraction(self) -> float:
        return self.overlap / self.probe_size if self.probe_size else 0.0

    @property
    def defined(self) -> bool:
        return self.overlap > 0

    @property
    def orbits(self) -> float | None:
        if not self.defined:
            return None
        return self.pool_size / self.overlap_fraction

    @property
    def rays(self) -> float | None:
        if self.orbits is None or self.mean_orbit_size is None:
            return None
        return self.orbits * self.mean_orbit_size


def capture_recapture_counts(
    pool_size: int, probe_size: int, overlap: int, mean_orbit_size: float | None = None
) -> CaptureEstimate:
    if min(pool_size, probe_size, overlap) < 0:
        raise ValueError("sizes must be nonnegative")
    if overlap > min(pool_size, probe_size):
        raise ValueError(
            f"overlap {overlap} exceeds min(pool={pool_size}, probe={probe_size})"
        )
    return CaptureEstimate(pool_size, probe_size, overlap, mean_orbit_size)


def capture_recapture(
    pool: Iterable[Sequence[int]],
    probe_orbits: Iterable[Sequence[int]],
    orbit_sizes: Histogram | None = None,
) -> CaptureEstimate:
    """Estimate from two orbit sets given as canonical forms.

    The probe set must come from rays that played no part in building the pool.
    """
    pool_set = {tuple(int(v) for v in c) for c in pool}
    probe_set = {tuple(int(v) for v in c) for c in probe_orbits}
    mean = orbit_sizes.mean() if orbit_sizes and orbit_sizes.total else None
    return capture_recapture_counts(
        len(pool_set), len(probe_set), len(pool_set & probe_set), mean
    )


def format_estimate(estimate: CaptureEstimate) -> str:
    lines = [
        f"pool: {estimate.pool_size}",
        f"probe: {estimate.probe_size}",
        f"overlap: {estimate.overlap}",
        f"overlap_fraction: {estimate.overlap_fraction:.6f}",
    ]
    if estimate.defined:
        lines.append(f"estimated_orbits: {estimate.orbits:.4e}")
    else:
        lines.append("estimated_orbits: undefined (no overlap)")
    if estimate.mean_orbit_size is not None:
        lines.append(f"mean_orbit_size: {estimate.mean_orbit_size:.2f}")
        if estimate.rays is not None:
            lines.append(f"estimated_rays: {estimate.rays:.4e}")
    return "\n".join(lines)
