"""Exception types shared across the package.

Every domain failure derives from FuzzFracError so callers (and the CLI)
can distinguish "the input is mathematically inadmissible" from plain bugs.
"""

from __future__ import annotations


class FuzzFracError(Exception):
    """Base class for all domain errors raised by fuzzfrac."""


class NegativeSpread(FuzzFracError):
    """A triangular fuzzy number was requested with a spread < 0."""


class NegativeScalar(FuzzFracError):
    """Scalar multiplication of a fuzzy number by a negative factor."""


class LambdaOutOfRange(FuzzFracError):
    """A membership level outside [0, 1] was requested."""


class HukuharaNotExist(FuzzFracError):
    """The Hukuhara difference of two fuzzy numbers does not exist.

    Carries the first offending membership level in ``lam``.
    """

    def __init__(self, message: str, lam: float | None = None):
        super().__init__(message)
        self.lam = lam


class XOutOfDomain(FuzzFracError):
    """An abscissa lies outside the domain of the requested interval map."""


class XOutOfRange(FuzzFracError):
    """An abscissa lies outside the sampled function's domain."""


class DanglingInterval(FuzzFracError):
    """Some data subinterval is contained in no address interval."""


class NotIrreducible(FuzzFracError):
    """The transition matrix's nonzero pattern is not strongly connected."""


class NotContractive(FuzzFracError):
    """A map that must be contractive has coefficient >= 1."""


class ScalingConditionsViolated(FuzzFracError):
    """The vertical scaling factors fail the admissibility conditions.

    Carries the per-interval validation report in ``report`` when available.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class EndpointConditionsViolated(FuzzFracError):
    """The interval maps do not reproduce the data at address endpoints."""


class MaxIterExceeded(FuzzFracError):
    """Fixed-point iteration failed to converge within the iteration cap."""


class EndpointMoved(FuzzFracError):
    """An abscissa perturbation moved one of the domain endpoints."""


class NotIncreasing(FuzzFracError):
    """Perturbed abscissae are not strictly increasing."""


class InadmissiblePerturbation(FuzzFracError):
    """A requested perturbation leaves the admissible configuration set."""


class ConfigParseError(FuzzFracError):
    """A problem configuration file could not be parsed or validated.

    ``where`` names the offending file/field as precisely as possible.
    """

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
