"""Exception types shared by the solvers and the experiment harness."""


class CFLError(ValueError):
    """A time step violates the stability (CFL) restriction of a scheme."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class InvariantViolation(RuntimeError):
    """A discrete invariant (maximum principle, conservation, ...) failed."""

    def __init__(self, message, cell=None, step=None):
        if cell is not None or step is not None:
            message = f"{message} (cell={cell}, step={step})"
        super().__init__(message)
        self.cell = cell
        self.step = step


class ConfigError(ValueError):
    """An experiment configuration names an unknown key, preset or scheme."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class VacuumError(ValueError):
    """Riemann data that generate vacuum."""
