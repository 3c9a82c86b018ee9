"""Exception types shared across the package."""


class MithError(Exception):
    """Base class for all package errors."""


class FieldError(MithError):
    """Invalid field operation: modulus mismatch, zero inverse, bad points."""


class CircuitError(MithError):
    """Circuit violates a structural invariant."""


class CircuitParseError(CircuitError):
    """Syntax error in circuit text, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class ProofError(MithError):
    """Malformed or inconsistent proof data."""


class SessionError(MithError):
    """Interactive session failure (framing, phase order, transport)."""

    def __init__(self, message: str, phase: str = "?"):
        super().__init__(f"[phase {phase}] {message}")
        self.phase = phase


class SimulationFailure(MithError):
    """Zero-knowledge simulator exhausted its retry budget."""
