"""
Error hierarchy for boustro.

Every error carries the process exit code the CLI reports for it:
0 success, 2 input/validation error, 3 infeasible problem, 4 internal solver failure.
Domain code raises these; only the CLI turns them into exit codes.
"""

from __future__ import annotations

from typing import Any

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


class BoustroError(Exception):
    """Base class for all boustro errors."""

    exit_code: int = EXIT_INTERNAL


class InputError(BoustroError, ValueError):
    """Raised when user-supplied input cannot be used."""

    exit_code = EXIT_INPUT


class ParseError(InputError):
    """Raised when a file is malformed (bad JSON, missing or mistyped fields)."""

    def __init__(self, message: str, *, path: str | None = None, location: str | None = None):
        self.path = path
        self.location = location
        parts = [p for p in (path, location) if p]
        prefix = f"{': '.join(parts)}: " if parts else ""
        super().__init__(f"{prefix}{message}")


class ValidationError(InputError):
    """Raised when a domain invariant does not hold. `invariant` names it."""

    def __init__(self, invariant: str, message: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


class ConfigError(InputError):
    """Raised when a configuration value is invalid. `field` is the dotted field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class PlanMismatch(InputError):
    """Raised when a plan does not fit the scenario it is evaluated against."""


class DegenerateGeometry(InputError):
    """Raised when points do not span a two-dimensional convex hull."""


class GenerationFailure(InputError):
    """Raised when a random scenario cannot be generated from its configuration."""


class EmptySelection(InputError):
    """Raised when a budget interval is requested for a selection with no traversals."""


class InfeasibleProblem(BoustroError):
    """Raised when the planning problem has no useful solution (no trackline meets any spill)."""

    exit_code = EXIT_INFEASIBLE


class InfeasibleBudget(BoustroError):
    """Raised when a duration budget lies outside the feasible interval of a selection."""

    exit_code = EXIT_INFEASIBLE

    def __init__(self, budget: float, t_lo: float, t_hi: float):
        self.budget = budget
        self.t_lo = t_lo
        self.t_hi = t_hi
        super().__init__(f"Budget {budget:.6g} s outside feasible interval [{t_lo:.6g}, {t_hi:.6g}] s")


class NoConvergence(BoustroError, RuntimeError):
    """Raised when the speed solver exhausts its Newton steps. `best_mu` holds the last iterate."""

    exit_code = EXIT_INTERNAL

    def __init__(self, message: str, best_mu: Any = None, iterations: int = 0):
        self.best_mu = best_mu
        self.iterations = iterations
        super().__init__(message)
