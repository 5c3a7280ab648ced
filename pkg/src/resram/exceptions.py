"""Exception hierarchy shared by all resram modules."""


class ResramError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ResramError, ValueError):
    """A circuit or geometry parameter is outside its admissible domain."""


class UnsupportedRegimeError(ResramError):
    """An analytic closed form was requested for a non-oscillatory circuit."""


class GeometryError(ResramError, ValueError):
    """Array geometry cannot be mapped onto a lumped circuit."""


class ScheduleError(ResramError, ValueError):
    """Pulse schedule or control windows are inconsistent."""


class DegenerateScheduleError(ScheduleError):
    """The schedule produces no resonant transfer window (zero SD delay)."""


class StepSizeError(ResramError, ValueError):
    """Integration step too coarse for the requested dynamics."""


class DivergenceError(ResramError):
    """Integration produced a non-finite state."""


class LedgerError(ResramError):
    """Energy bookkeeping rejected a trace (incomplete cycle or open ledger)."""


class InfeasibleSizingError(ResramError):
    """No inductance satisfies the sizing constraints.

    ``binding_constraint`` names the constraint that makes the problem
    infeasible ("target_swing_fraction", "max_t_r_half" or "f_op_range").
    """

    def __init__(self, message: str, binding_constraint: str):
        super().__init__(message)
        self.binding_constraint = binding_constraint


class ConfigError(ResramError, ValueError):
    """Configuration text failed to parse or validate.

    ``key`` holds the dotted path of the offending entry when one is known.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
