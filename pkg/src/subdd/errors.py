"""Exception types and the exit codes the CLI maps them to."""


class SubddError(RuntimeError):
    """Base class for failures that carry a process exit code."""

    exit_code = 1


class BudgetExhaustedError(SubddError):
    """A resource budget (rays, probes) ran out before the run completed."""

    exit_code = 2


class InputMalformedError(SubddError):
    """An input file or stream does not follow the expected text format."""

    exit_code = 3

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OverflowDetectedError(SubddError):
    """A value left the range of the configured fixed-width integer backend."""

    exit_code = 4
