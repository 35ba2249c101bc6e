"""Exception types shared across the package."""

from __future__ import annotations


class PathquantError(Exception):
    """Base class for all library errors."""


class ConvergenceError(PathquantError):
    """Iterative optimization failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class GridFileError(PathquantError):
    """A quantizer grid file is malformed."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class InvalidParameters(PathquantError):
    """Hard model-parameter violation."""

    def __init__(self, model: str, violations):
        self.violations = list(violations)
        super().__init__(f"{model}: " + "; ".join(self.violations))


class CoefficientError(PathquantError):
    """A model coefficient could not be evaluated."""

    def __init__(self, term: str, cause: Exception):
        super().__init__(f"evaluation of coefficient '{term}' failed: {cause}")
        self.term = term


class IntegrationBlowup(PathquantError):
    """NaN/inf encountered while integrating a codeword ODE."""

    def __init__(self, index, step: int, state):
        super().__init__(
            f"codeword {index}: non-finite state at step {step}: {state}"
        )
        self.index = index
        self.step = step
        self.state = state


class DegenerateGridError(PathquantError):
    """A marginal-quantization grid could not be repaired."""


class UnsupportedOperation(PathquantError):
    """Operation requires a property the model does not declare (e.g. ellipticity)."""


class LostWeightError(PathquantError):
    """Too much codeword weight was lost to integration failures."""

    def __init__(self, lost: float, limit: float):
        super().__init__(
            f"lost codeword weight {lost:.3e} exceeds limit {limit:.1e}"
        )
        self.lost = lost


class ConfigError(PathquantError):
    """Run configuration is missing or malformed."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field
