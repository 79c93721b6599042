"""Exception types shared across the library."""


class WallgasError(Exception):
    """Base class for library-specific failures."""


class BracketFailure(WallgasError):
    """A guaranteed sign change was not found on the search bracket."""


class QuadratureFailure(WallgasError):
    """Adaptive quadrature did not reach its accuracy target."""


class OracleMismatch(WallgasError):
    """A closed form and its independent numerical oracle disagree.

    Carries both values so the caller can report them.
    """

    def __init__(self, what, closed, oracle, tol):
        self.what = what
        self.closed = closed
        self.oracle = oracle
        self.tol = tol
        super().__init__(
            f"{what}: closed form {closed!r} vs oracle {oracle!r} "
            f"(|diff|={abs(closed - oracle):.3e} > {tol:g})"
        )


class TuningFailure(WallgasError):
    """Metropolis step-width tuning could not reach a usable acceptance rate."""


class PrecisionExhausted(WallgasError):
    """Orthogonalization residuals stayed above target at the precision cap."""
