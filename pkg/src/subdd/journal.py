"""Append-only probe journal for orbit searches.

One line per probe: ``c1 c2 ... cd | weight | #neighbors | #new-orbits``. Lines starting
with ``#`` are comments. A campaign is resumed from its orbit pool file plus the set of
canonical rays already probed.
"""

from dataclasses import dataclass
from pathlib import Path

from .logger import warn


@dataclass(frozen=True)
class JournalEntry:
    canonical: tuple[int, ...]
    weight: int
    neighbors: int
    new_orbits: int

    def to_line(self) -> str:
        coords = " ".join(str(v) for v in self.canonical)
        return f"{coords} | {self.weight} | {self.neighbors} | {self.new_orbits}"

    @classmethod
    def from_line(cls, line: str) -> "JournalEntry":
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 '|'-separated fields, got {len(parts)}")
        canonical = tuple(int(v) for v in parts[0].split())
        if not canonical:
            raise ValueError("empty canonical ray")
        return cls(canonical, int(parts[1]), int(parts[2]), int(parts[3]))


class ProbeJournal:
    """Appends entries to a journal file as probes finish."""

    def __init__(self, path: Path | str | None):
        self.path = Path(path).expanduser() if path else None
        self.entries: list[JournalEntry] = []

    def append(self, entry: JournalEntry) -> None:
        self.entries.append(entry)
        if not self.path:
            return
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a") as f:
                f.write(entry.to_line() + "\n")
        except OSError as e:
            warn(f"Failed to write probe journal {self.path}: {e}")


def load_journal(path: Path | str) -> list[JournalEntry]:
    """Read journal entries; malformed lines are reported and skipped."""
    path = Path(path).expanduser()
    if not path.exists():
        return []

    entries: list[JournalEntry] = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                entries.append(JournalEntry.from_line(text))
            except ValueError as e:
                warn(f"{path}:{lineno}: skipping journal line ({e})")
    return entries


def probed_set(entries: list[JournalEntry]) -> set[tuple[int, ...]]:
    return {e.canonical for e in entries}
