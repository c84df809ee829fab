"""Exception types shared across the package."""


class InvalidDirectionError(ValueError):
    """A potential direction is not a unit imaginary quaternion."""


class DegenerateWavenumberError(ValueError):
    """The slow interior branch has zero wavenumber (V0 equals omega0).

    Every solver in this package expands the interior field over four
    propagating plane waves.  At k_minus = 0 one of them degenerates into a
    linear-in-x mode that is deliberately not modeled, so the input is
    rejected instead of silently producing garbage.
    """


class ComplexLimitDegeneracyError(ValueError):
    """Raw mode ratios were requested in the complex limit (sin theta ~ 0).

    The raw ratios diverge there.  The regular combinations w_plus, w_minus
    and w_cross remain finite for every direction and should be used instead.
    """


class SingularSystemError(RuntimeError):
    """A matching or boundary linear system could not be solved reliably."""


class UndefinedFractionError(ArithmeticError):
    """Quaternionic fraction requested for a vanishing transmitted wave."""
