"""Exception hierarchy shared by the engines and the CLI."""

from __future__ import annotations

from typing import Any, Dict, Optional


class IdealCalcError(Exception):
    """Root of every error raised by idealcalc."""


class InvalidArgumentError(IdealCalcError, ValueError):
    pass


class NumericFailureError(IdealCalcError, ArithmeticError):
    """A dense decomposition did not converge or produced non-finite output."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


class NotLinearError(IdealCalcError, ValueError):
    """A black-box map failed the superposition check."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ConfigError(IdealCalcError):
    pass
