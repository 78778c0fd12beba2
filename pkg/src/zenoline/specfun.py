"""Special functions and improper-integral quadrature.

Gamma, Riemann zeta, real polylogarithms on (0, 1], Bose-Einstein
integrals and their finite-N corrected counterparts.  All quadrature is
routed through QUADPACK (scipy.integrate.quad) with series handling of
the removable singularities at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as sc
from scipy.integrate import quad

from .errors import AccuracyError, DivergenceError, DomainError

__all__ = [
    "QuadratureSettings",
    "BoseIntegralResult",
    "gamma_fn",
    "riemann_zeta",
    "polylog",
    "bose_integral",
    "finite_n_integral",
    "improper_quad",
]


@dataclass(frozen=True)
class QuadratureSettings:
    """Error targets for the improper-integral engine."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("abs_tol and rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class BoseIntegralResult:
    """Value of an improper integral with an error bound and a cost count."""

    value: float
    est_error: float
    evaluations: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError("integral value is not finite")
        if self.est_error < 0:
            raise DomainError("est_error must be non-negative")


def gamma_fn(x):
    """Gamma function for positive real argument."""
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def riemann_zeta(s):
    """Riemann zeta for s > 1 (pole at s = 1)."""
    if s <= 1:
        raise DomainError(f"riemann_zeta requires s > 1 (pole at 1), got {s}")
    return float(sc.zeta(s))


def polylog(s, z):
    """Real polylogarithm Li_s(z) for z in (0, 1].

    Li_s(1) = zeta(s); for z close to 1 evaluation is delegated to
    mpmath's Hurwitz-expansion implementation, the direct power series
    is used otherwise.
    """
    if not (0 < z <= 1):
        raise DomainError(f"polylog requires z in (0, 1], got {z}")
    if z == 1:
        if s <= 1:
            raise DivergenceError(f"Li_s(1) diverges for s <= 1, got s={s}")
        return riemann_zeta(s)
    if z <= 0.6:
        # direct series: |tail| <= term * z / (1 - z) for s >= 0,
        # and the k^-s factor only helps the bound for s > 0.
        total = 0.0
        term = z
        k = 1
        while True:
            total += term / k**s
            k += 1
            term *= z
            if term / k ** min(s, 0.0) < 1e-17 * max(abs(total), 1e-300) * (1 - z):
                break
            if k > 10_000:
                break
        return total
    return float(mpmath.polylog(s, z))


def _occupancy(x):
    """1/(e^x - 1), stable for small and large positive x."""
    return math.exp(-x) / (-math.expm1(-x))


def _quad(f, a, b, settings):
    value, err, info = quad(
        f,
        a,
        b,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        full_output=1,
    )[:3]
    return value, err, info["neval"]


def improper_quad(f, a, settings=DEFAULT_SETTINGS):
    """Integrate f over (a, infinity).

    Integrands must already be finite at the left endpoint (removable
    singularities handled by the caller's series branch).  Failure to
    converge raises AccuracyError carrying the best estimate.
    """
    value, err, info, *rest = quad(
        f,
        a,
        np.inf,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        full_output=1,
    )
    if rest:
        best = BoseIntegralResult(value, err, info["neval"])
        raise AccuracyError(f"quadrature did not converge: {rest[0]}", best=best)
    return BoseIntegralResult(value, err, info["neval"])


# Bernoulli-series coefficients of 1/(e^x - 1) - 1/x:
# -1/2 + x/12 - x^3/720 + x^5/30240 - x^7/1209600 + x^9/47900160
_BERN = ((0, -0.5), (1, 1 / 12), (3, -1 / 720), (5, 1 / 30240),
         (7, -1 / 1209600), (9, 1 / 47900160))


def _bose_head(gamma, delta):
    """Closed form of int_0^delta xi^gamma / (e^xi - 1) d(xi) via the
    Bernoulli series (accurate for delta <= 1/4)."""
    total = delta**gamma / gamma  # from the 1/xi leading term
    for p, c in _BERN:
        total += c * delta ** (gamma + p + 1) / (gamma + p + 1)
    return total


def bose_integral(gamma, kappa, settings=DEFAULT_SETTINGS):
    """int_0^inf xi^gamma / (e^(xi - kappa) - 1) d(xi) for kappa <= 0.

    Equals Gamma(gamma+1) * Li_{gamma+1}(e^kappa).
    """
    if kappa > 0:
        raise DomainError(f"bose_integral requires kappa <= 0, got {kappa}")
    if gamma <= -1:
        raise DivergenceError(f"bose_integral diverges for gamma <= -1, got {gamma}")
    if kappa == 0 and gamma <= 0:
        raise DivergenceError(
            f"bose_integral with kappa = 0 requires gamma > 0, got {gamma}"
        )

    if kappa == 0:
        delta = 0.25
        head = _bose_head(gamma, delta)
        tail, err, n = _quad(
            lambda x: x**gamma * _occupancy(x), delta, np.inf, settings
        )
        # Bernoulli truncation at delta=1/4 is below 1e-16 relative
        return BoseIntegralResult(head + tail, err + 1e-16 * abs(head), n)

    # factor e^kappa out analytically so the reported relative accuracy
    # does not collapse for very negative kappa
    def scaled(x):
        return x**gamma * math.exp(-x) / (-math.expm1(kappa - x))

    value, err, n = _quad(scaled, 0.0, np.inf, settings)
    scale = math.exp(kappa)
    return BoseIntegralResult(scale * value, scale * err, n)


def _finite_n_bracket(x, n):
    """1/(e^x - 1) - n/(e^(n x) - 1), stable near x = 0.

    The 1/x poles of the two terms cancel; for n*x small the Bernoulli
    difference series is used.
    """
    if n * x < 0.1:
        return (
            (n - 1) / 2
            - (n * n - 1) * x / 12
            + (n**4 - 1) * x**3 / 720
            - (n**6 - 1) * x**5 / 30240
        )
    return _occupancy(x) - n * _occupancy(n * x)


def finite_n_integral(gamma, b, kappa, n_cap, settings=DEFAULT_SETTINGS):
    """Finite-count corrected Bose integral.

    int_0^inf xi^gamma [1/(e^(b(xi+kappa)) - 1) - N/(e^(bN(xi+kappa)) - 1)] d(xi)

    For gamma = 0, kappa = 0 the closed form ln(N)/b holds.
    """
    if b <= 0:
        raise DomainError(f"finite_n_integral requires b > 0, got {b}")
    if kappa < 0:
        raise DomainError(f"finite_n_integral requires kappa >= 0, got {kappa}")
    if n_cap < 1:
        raise DomainError(f"finite_n_integral requires N >= 1, got {n_cap}")
    if gamma <= -1:
        raise DivergenceError(f"finite_n_integral diverges for gamma <= -1")
    if n_cap == 1:
        return BoseIntegralResult(0.0, 0.0, 0)

    def integrand(x):
        return x**gamma * _finite_n_bracket(b * (x + kappa), n_cap)

    value, err, n = _quad(integrand, 0.0, np.inf, settings)
    return BoseIntegralResult(value, err, n)
