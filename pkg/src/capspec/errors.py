"""Exception taxonomy shared by all capspec modules.

Two broad families, mirrored by the CLI exit codes:

* :class:`ValidationError` — the request itself is malformed (bad arguments,
  parameters outside a formula's domain, mismatched grids).  CLI exit 2.
* :class:`SolverError` — the request was well-posed but a numerical
  procedure failed to deliver (series stall, scan exhaustion, integrator
  breakdown, inconsistent bisection bracket).  CLI exit 3.
"""


class CapspecError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CapspecError, ValueError):
    """Malformed input: wrong type, out-of-domain parameter, bad combination."""


class SolverError(CapspecError, RuntimeError):
    """A numerical routine failed to converge or to locate its target."""


# --- special-function layer -------------------------------------------------

class GammaOverflowError(SolverError):
    """Gamma magnitude exceeds double range; carries the sign of the limit."""

    def __init__(self, x: float, sign: int):
        self.x = x
        self.sign = sign
        super().__init__(f"gamma magnitude overflow at x={x!r} (sign {sign:+d})")


class DigammaPoleError(ValidationError):
    """Digamma evaluated at (or within snap distance of) a non-positive integer."""


class SeriesStallError(SolverError):
    """Hypergeometric series hit the term cap; carries the last term size."""

    def __init__(self, message: str, last_term: float, n_terms: int):
        self.last_term = last_term
        self.n_terms = n_terms
        super().__init__(f"{message} (term {last_term:.3e} after {n_terms} terms)")


class ConversionInapplicableError(ValidationError):
    """Argument-connection formula blocked by an integer parameter combination."""


class DegenerateParameterError(ValidationError):
    """Logarithmic-solution series requires non-integer upper parameters."""


class FormulaInapplicableError(ValidationError):
    """Closed-form definite integral used outside its validity region."""


# --- cap / grid layer -------------------------------------------------------

class GridMismatchError(ValidationError):
    """Two radial functions living on different grids were combined."""


class QuadratureRefinementError(SolverError):
    """Grid refinement failed to reproduce a value within the sentinel."""


# --- eigenvalue layer -------------------------------------------------------

class SpectralScanError(SolverError):
    """Eigenvalue scan exhausted its budget without isolating the target."""


class IntegratorError(SolverError):
    """Radial ODE integrator collapsed; carries the failing angle."""

    def __init__(self, theta: float, message: str = "step size underflow"):
        self.theta = theta
        super().__init__(f"integrator failure at theta={theta!r}: {message}")


class SignalBelowNoiseError(SolverError):
    """Fourier coefficient indistinguishable from quadrature noise."""


# --- nonlinear layer --------------------------------------------------------

class BracketInconsistencyError(SolverError):
    """Convergence predicate non-monotone across the bisection bracket."""


class GrowthConditionWarning(UserWarning):
    """Supplied nonlinearity looks sublinear/non-convex on the probed range."""
