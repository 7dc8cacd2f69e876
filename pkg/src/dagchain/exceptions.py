"""Exception hierarchy shared by every module in the package."""


class DagChainError(Exception):
    """Base class for all errors raised by dagchain."""


class ParseError(DagChainError, ValueError):
    """Malformed edge-list or chain-file line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class RangeError(DagChainError, IndexError):
    """A vertex id outside ``0..n-1``."""


class CycleError(DagChainError, ValueError):
    """The input graph has a directed cycle.

    ``cycle`` holds one witness as a closed vertex sequence, e.g. ``(0, 1, 0)``.
    """

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("graph is not acyclic; witness cycle: " + " -> ".join(map(str, self.cycle)))


class ParamError(DagChainError, ValueError):
    """Generator or estimator parameters that cannot be satisfied."""


class InvalidDecomposition(DagChainError, ValueError):
    """A chain decomposition that violates its invariants for the given graph."""


class InconsistentInput(InvalidDecomposition):
    """Chain/position arrays disagree with the chain lists."""


class MemoryBudgetError(DagChainError, MemoryError):
    """An exact oracle would exceed its configured size cap."""
