"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class AiryOverflowError(OverflowError):
    """Bi or Bi' would exceed the double-precision range."""


class UnsupportedRegimeError(ValueError):
    """Parameters fall outside the positive-definite Ermakov regime."""


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction was violated (upstream bug)."""


class IntegrationError(RuntimeError):
    """The ODE integrator produced a non-finite state."""


class BracketError(ValueError):
    """A root-finding bracket does not contain a sign change."""


class ConvergenceError(RuntimeError):
    """An iteration did not converge within its budget."""
