"""Console and debug output shared by the engines and the CLI."""

import time

from rich.console import Console

# stdout carries data (pipe mode, ray files written to "-"), so diagnostics go to stderr
console = Console(stderr=True)


def warn(message: str) -> None:
    console.print(f"[yellow]Warning: {message}[/yellow]")


def error(message: str) -> None:
    console.print(f"[red]Error: {message}[/red]")


class Debug:
    def __init__(self):
        self.enabled = False
        self.message_timestamps: dict[str, float] = {}
        self.MESSAGE_INTERVAL = 2.0  # Minimum interval between repeated debug messages
        self.started = time.monotonic()

    def print(self, message: str, rate_limit: bool = False):
        """Print a debug line prefixed with the elapsed run time.

        Args:
            message: The debug message to print
            rate_limit: If True, suppress repeats of this message within MESSAGE_INTERVAL
        """
        if not self.enabled:
            return

        if rate_limit:
            current_time = time.monotonic()
            message_key = message[:50]  # similar messages share a key

            last_time = self.message_timestamps.get(message_key)
            if last_time is not None and current_time - last_time < self.MESSAGE_INTERVAL:
                return

            self.message_timestamps[message_key] = current_time

        elapsed = time.monotonic() - self.started
        console.print(f"[dim cyan][DEBUG {elapsed:8.2f}s][/dim cyan] {message}")

    def dd_step(self, processed: int, rays: int, row_label: str = "") -> None:
        """Progress callback for the DD engine: one line per inserted row."""
        suffix = f" row {row_label}" if row_label else ""
        self.print(f"[DD] {processed:4d} rows, {rays:10d} rays{suffix}", rate_limit=False)

    def probe(self, probes: int, pool: int, frontier: int) -> None:
        """Progress callback for the orbit search."""
        self.print(f"[BFS] probes={probes} orbits={pool} frontier={frontier}", rate_limit=True)


# Global debug instance
debug = Debug()
