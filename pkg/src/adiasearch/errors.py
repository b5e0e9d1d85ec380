"""Exception and warning types shared across the package.

Two families matter to the CLI: ``InputError`` maps to exit code 2,
``NumericError`` to exit code 3.
"""


class AdiabaticSearchError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AdiabaticSearchError, ValueError):
    """Invalid user input: malformed database, bad parameters, wrong shapes."""


class NumericError(AdiabaticSearchError, RuntimeError):
    """Numerical failure during simulation (integrator drift, timeout)."""


class NotPowerOfTwo(InputError):
    """Database row count is not a power of two."""


class DuplicateKey(InputError):
    """Two database rows share the same key."""


class UnparseableValueLabel(InputError):
    """A value label does not parse as a decimal integer or real."""


class TargetNotInDatabase(InputError):
    """Strict mode rejected a target label absent from the database."""


class LengthMismatch(InputError):
    """A vector or axes list has the wrong length for the qubit count."""


class NotNormalized(InputError):
    """A probability vector does not sum to 1 within tolerance."""


class DimensionMismatch(InputError):
    """Two operators or states have incompatible dimensions."""


class NonDiagonalInput(InputError):
    """An operation requiring a diagonal operator received a non-diagonal one."""


class SOutOfRange(InputError):
    """Interpolation parameter or step index outside its valid range."""


class WrongQubitCount(InputError):
    """Operation supports a fixed qubit count (the pulse compiler needs n=2)."""


class UnsupportedHamiltonian(InputError):
    """Pulse compilation requires a diagonal problem Hamiltonian (I/Z terms only)."""


class StepTooLarge(NumericError):
    """Integrator norm drift exceeded tolerance; reduce the time step."""


class SweepTimeout(NumericError):
    """A scaling-sweep instance exceeded its wall-clock budget."""


class DegenerateGroundAcrossSweep(UserWarning):
    """Ground level degenerate at an interior s: signals a level crossing."""
