"""Phase-diagram assembly: Zeno line, Bachinskii parabola, the
fractal-index Bose-type equation of state with its volume deformation
phi(V), reduced isotherms, the jamming extension gamma(mu), and bundled
reference tables.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .curves import PhaseCurve
from .errors import (BracketError, CausticError, DomainError, SolverError,
                     ZenolineError)
from .specfun import polylog, riemann_zeta

__all__ = [
    "ZenoLine",
    "FractalEos",
    "IsothermPoint",
    "CriticalGamma",
    "zeno_density",
    "bachinskii_density",
    "solve_phi",
    "critical_gamma",
    "ideal_isotherm",
    "imperfect_isotherm",
    "jamming_extension",
    "liquid_summary",
    "reference_tables",
    "rotation_angle",
    "substance_data",
]

GAMMA0 = 0.2


@dataclass(frozen=True)
class ZenoLine:
    """Straight Zeno line rho = rho_B (1 - T/T_B)."""

    rho_B: float = 1.0
    T_B: float = 1.0

    def __post_init__(self):
        if self.rho_B <= 0 or self.T_B <= 0:
            raise DomainError("rho_B and T_B must be positive")


def zeno_density(line, T):
    """Density on the Zeno line at temperature T < T_B."""
    if not (0.0 <= T < line.T_B):
        raise DomainError(f"T = {T} outside [0, T_B = {line.T_B})")
    return line.rho_B * (1.0 - T / line.T_B)


def bachinskii_density(b, c, P):
    """Both density roots of the parabola P = c rho (1 - c rho / (4b)).

    The two branches merge at the caustic P = b; beyond it the roots
    are complex and a CausticError is raised.
    """
    if b <= 0 or c <= 0:
        raise DomainError("b and c must be positive")
    if P < 0:
        raise DomainError(f"P must be non-negative, got {P}")
    if P > b:
        raise CausticError(f"P = {P} > b = {b}: roots are complex past the caustic")
    s = math.sqrt(1.0 - P / b)
    return (2.0 * b / c) * (1.0 - s), (2.0 * b / c) * (1.0 + s)


class FractalEos:
    """Volume deformation phi(V) of the fractal-index equation of state.

    Parametrized by kappa along the unit-compressibility curve; the
    tabulated phi is strictly increasing with positive derivative, and
    phi(V)/V -> 1 at the large-volume end.  ``identity`` builds the
    undeformed phi(V) = V member used for ideal-gas reduction checks.
    """

    def __init__(self, gamma, V, kappa, phi_vals, dphi_vals, V_cr):
        self.gamma = gamma
        self.V = np.asarray(V, dtype=float)
        self.kappa = np.asarray(kappa, dtype=float)
        self.phi_vals = np.asarray(phi_vals, dtype=float)
        self.dphi_vals = np.asarray(dphi_vals, dtype=float)
        self.V_cr = V_cr
        self._identity = False
        if np.any(self.phi_vals <= 0) or np.any(self.dphi_vals <= 0):
            raise DomainError("phi and phi' must be strictly positive")
        if np.any(np.diff(self.phi_vals) <= 0):
            raise DomainError("phi must be strictly increasing")
        if abs(self.phi_vals[-1] / self.V[-1] - 1.0) > 1e-3:
            raise DomainError("phi(V)/V does not reach 1 at the largest sample")
        self._phi = PchipInterpolator(self.V, self.phi_vals)
        self._dphi = PchipInterpolator(self.V, self.dphi_vals)
        self._inv = PchipInterpolator(self.phi_vals, self.V)

    @classmethod
    def identity(cls, gamma=GAMMA0, V_cr=1.0):
        obj = cls.__new__(cls)
        obj.gamma = gamma
        obj.V = obj.kappa = obj.phi_vals = obj.dphi_vals = None
        obj.V_cr = V_cr
        obj._identity = True
        return obj

    def phi(self, V):
        if self._identity:
            return V
        if V >= self.V[-1]:
            # asymptotic regime phi ~ V
            return self.phi_vals[-1] + (V - self.V[-1])
        if V < self.V[0]:
            raise DomainError(f"V = {V} below the solved range [{self.V[0]}, ...]")
        return float(self._phi(V))

    def dphi(self, V):
        if self._identity:
            return 1.0
        if V >= self.V[-1]:
            return 1.0
        if V < self.V[0]:
            raise DomainError(f"V = {V} below the solved range [{self.V[0]}, ...]")
        return float(self._dphi(V))

    def inv_phi(self, y):
        """Volume with phi(V) = y, consistent with ``phi`` to rounding."""
        if self._identity:
            return y
        if y >= self.phi_vals[-1]:
            return self.V[-1] + (y - self.phi_vals[-1])
        if y < self.phi_vals[0]:
            raise DomainError(f"phi value {y} below the solved range")
        # the tabulated inverse interpolant only brackets the answer;
        # polish against the forward interpolant itself
        guess = float(self._inv(y))
        lo = max(self.V[0], guess - 1e-2 * (1.0 + abs(guess)))
        hi = min(self.V[-1], guess + 1e-2 * (1.0 + abs(guess)))
        f_lo, f_hi = self._phi(lo) - y, self._phi(hi) - y
        if f_lo > 0 or f_hi < 0:
            lo, hi = self.V[0], self.V[-1]
        return float(brentq(lambda v: self._phi(v) - y, lo, hi,
                            xtol=1e-15, rtol=8.9e-16))


IsothermPoint = namedtuple("IsothermPoint", ["P_r", "Z", "a", "T_r"])
CriticalGamma = namedtuple("CriticalGamma", ["d", "gamma"])


def _kappa_prime(gamma, V, kappa, zeno):
    """Slope of kappa(V) along the unit-compressibility constraint.

    Vanishes as kappa -> 0- for gamma < 1 (the lowest polylogarithm
    diverges there); trial evaluations at kappa >= 0 use that limit.
    """
    if kappa >= -1e-300 and gamma < 1.0:
        return 0.0
    z = math.exp(kappa)
    l0 = polylog(gamma, z)
    l1 = polylog(gamma + 1.0, z)
    l2 = polylog(gamma + 2.0, z)
    T = zeno.T_B * (1.0 - 1.0 / (zeno.rho_B * V))
    Tp = zeno.T_B / (zeno.rho_B * V * V)
    return -(l1 * l1 / l0) * (1.0 / (V * l2) + (gamma + 1.0) * Tp / (T * l1))


def solve_phi(gamma, V_grid, zeno=ZenoLine()):
    """Integrate the parametric constraint for phi(V) inward from the
    large-volume boundary phi(V)/V -> 1.

    Returns a FractalEos sampled on the supplied grid, truncated at the
    volume V_cr where the chemical-potential parameter reaches zero.
    """
    V_grid = np.asarray(sorted(V_grid), dtype=float)
    if V_grid[0] * zeno.rho_B <= 1.0:
        raise DomainError("V grid must stay above the Zeno-line pole 1/rho_B")

    def T_of(V):
        return zeno.T_B * (1.0 - 1.0 / (zeno.rho_B * V))

    V_max = V_grid[-1]
    kappa = -math.log(V_max * T_of(V_max) ** (gamma + 1.0))
    out_V, out_k = [V_max], [kappa]
    V = V_max
    V_cr = None
    # integrate inward; kappa rises toward 0 with a steep, integrable
    # slope near the crossing, so steps are halved against overshoot and
    # the trace stops just short of kappa = 0
    kappa_stop = -1e-6
    for V_target in V_grid[::-1][1:]:
        while V_cr is None and V > V_target + 1e-14:
            step = max(V_target - V, -2.0)
            while True:
                k1 = _kappa_prime(gamma, V, kappa, zeno)
                k2 = _kappa_prime(gamma, V + step / 2, kappa + step * k1 / 2, zeno)
                k3 = _kappa_prime(gamma, V + step / 2, kappa + step * k2 / 2, zeno)
                k4 = _kappa_prime(gamma, V + step, kappa + step * k3, zeno)
                k_new = kappa + step * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
                if k_new < kappa_stop:
                    V += step
                    kappa = k_new
                    break
                step /= 2.0
                if abs(step) < 1e-9:
                    V_cr = V
                    break
        if V_cr is not None:
            if V < out_V[-1]:
                out_V.append(V)
                out_k.append(kappa)
            break
        out_V.append(V)
        out_k.append(kappa)
    if V_cr is None:
        V_cr = out_V[-1]
    out_V.reverse()
    out_k.reverse()
    phi_vals, dphi_vals = [], []
    for Vv, kk in zip(out_V, out_k):
        z = math.exp(kk)
        t_pow = T_of(Vv) ** (-(gamma + 1.0))
        phi_vals.append(t_pow / polylog(gamma + 1.0, z))
        dphi_vals.append(t_pow / (Vv * polylog(gamma + 2.0, z)))
    return FractalEos(gamma, out_V, out_k, phi_vals, dphi_vals, V_cr)


def critical_gamma(target_Z, d_range=(1.0 + 1e-6, 6.0)):
    """Fractal dimension d with zeta(d+1)/zeta(d) equal to the target
    compressibility (geometric factor taken as 1), and the associated
    index gamma = d - 1."""
    if not (0.0 < target_Z < 1.0):
        raise DomainError(f"target must be in (0, 1), got {target_Z}")

    def res(d):
        return riemann_zeta(d + 1.0) / riemann_zeta(d) - target_Z

    lo, hi = d_range
    if res(lo) > 0 or res(hi) < 0:
        raise DomainError(
            f"target {target_Z} outside the attainable ratio range on d in {d_range}")
    d = brentq(res, lo, hi, xtol=1e-12)
    return CriticalGamma(d=d, gamma=d - 1.0)


_BISECT_STEPS = 100


def _bisect_activity(resid, lo=0.0, hi=1.0):
    """Fixed-count bisection for the activity a in (0, 1]; resid must be
    negative at lo and non-negative at hi."""
    f_lo, f_hi = resid(lo), resid(hi)
    if f_lo > 0 or f_hi < 0:
        raise SolverError(
            f"activity not bracketed: resid({lo}) = {f_lo:.3g}, "
            f"resid({hi}) = {f_hi:.3g}")
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if resid(mid) < 0:
            lo = mid
        else:
            hi = mid
    return hi


def ideal_isotherm(P_grid, gamma0=GAMMA0):
    """Unit reduced-temperature isotherm of the undeformed gas.

    For each reduced pressure P in (0, 1], inverts
    Li_{gamma0+2}(a) = P zeta(gamma0+2) for the activity a and returns
    Z = P zeta(gamma0+2) / Li_{gamma0+1}(a).
    """
    zp2 = riemann_zeta(gamma0 + 2.0)
    points = []
    for P in P_grid:
        if not (0.0 < P <= 1.0):
            raise DomainError(f"P must be in (0, 1], got {P}")
        target = P * zp2

        def resid(a):
            if a == 0.0:
                return -target
            return polylog(gamma0 + 2.0, a) - target

        a = _bisect_activity(resid)
        V_eff = zp2 / polylog(gamma0 + 1.0, a)
        points.append(IsothermPoint(P_r=P, Z=P * V_eff, a=a, T_r=1.0))
    return points


def imperfect_isotherm(P_grid, eos, gamma0=GAMMA0):
    """Unit reduced-temperature isotherm of the deformed (phi) gas.

    Solves, per reduced pressure P, the coupled pair

        phi(V) Li_{gamma0+1}(a) = phi'(V_cr) zeta(gamma0+2)
        phi'(V) Li_{gamma0+2}(a) = P phi'(V_cr) zeta(gamma0+2)

    for the activity a and volume V = Z/P.  With the identity
    deformation phi(V) = V this reduces exactly to the ideal isotherm.
    """
    zp2 = riemann_zeta(gamma0 + 2.0)
    c_cr = eos.dphi(eos.V_cr)
    scale = c_cr * zp2
    points = []
    for P in P_grid:
        if not (0.0 < P <= 1.0):
            raise DomainError(f"P must be in (0, 1], got {P}")
        target = P * scale

        def v_of(a):
            return eos.inv_phi(scale / polylog(gamma0 + 1.0, a))

        def resid(a):
            if a == 0.0:
                return -target
            try:
                v = v_of(a)
            except DomainError:
                # implied volume below the solved range: overcompressed,
                # push the bisection toward smaller activity
                return math.inf
            return eos.dphi(v) * polylog(gamma0 + 2.0, a) - target

        try:
            a = _bisect_activity(resid)
            final = resid(a)
            if not math.isfinite(final) or abs(final) > 1e-8 * target:
                raise SolverError(
                    f"residual {final:.3g} at a = {a}: the implied volume "
                    f"leaves the solved range, P = {P} is not resolvable")
            V = v_of(a)
        except ZenolineError as exc:
            raise SolverError(f"imperfect isotherm failed at P = {P}: {exc}") from exc
        points.append(IsothermPoint(P_r=P, Z=P * V, a=a, T_r=1.0))
    return points


def _z_ideal(gamma, mu):
    a = math.exp(mu)
    return polylog(gamma + 2.0, a) / polylog(gamma + 1.0, a)


def _gamma_slope(gamma, mu, h=1e-4):
    """d(gamma)/d(mu) along the maximal-entropy constraint at T_r = 1;
    the sign convention makes gamma shrink as mu decreases from zero."""
    z = _z_ideal(gamma, mu)
    dlog = (math.log(_z_ideal(gamma + h, mu))
            - math.log(_z_ideal(gamma - h, mu))) / (2.0 * h)
    return z * dlog


def jamming_extension(mu_grid, eos, gamma0=GAMMA0, anchor_P=2.5,
                      variant="ode", stitch_points=40):
    """Continuation of the unit isotherm past the critical pressure.

    Integrates gamma(mu) from gamma0 at mu = 0 until either the grid is
    exhausted or gamma reaches 0 (full jamming); maps each state to
    (P, Z) with the deformation derivative frozen, then appends the
    straight stitch to the anchor point (anchor_P, Z = 1) so the
    emitted tail is linear.  ``variant='linear'`` replaces the
    integrated gamma(mu) by the unit-slope approximation.
    """
    mu_grid = list(mu_grid)
    if not mu_grid or mu_grid[0] != 0.0:
        raise DomainError("mu grid must start at 0")
    if any(b >= a for a, b in zip(mu_grid, mu_grid[1:])):
        raise DomainError("mu grid must be strictly decreasing")
    if variant not in ("ode", "linear"):
        raise DomainError(f"unknown variant {variant!r}")

    zp2 = riemann_zeta(gamma0 + 2.0)
    gamma = gamma0
    rows = []
    jammed = False
    for i, mu in enumerate(mu_grid):
        if i > 0:
            h = mu - mu_grid[i - 1]
            if variant == "linear":
                gamma = gamma0 + mu
            else:
                k1 = _gamma_slope(gamma, mu_grid[i - 1])
                k2 = _gamma_slope(gamma + h * k1 / 2, mu_grid[i - 1] + h / 2)
                k3 = _gamma_slope(gamma + h * k2 / 2, mu_grid[i - 1] + h / 2)
                k4 = _gamma_slope(gamma + h * k3, mu)
                gamma = gamma + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            if gamma <= 0.0:
                gamma = 0.0
                jammed = True
        a = math.exp(mu)
        P = polylog(gamma + 2.0, a) / zp2 if mu < 0 else riemann_zeta(gamma + 2.0) / zp2
        Z = _z_ideal(gamma, mu) if mu < 0 else \
            riemann_zeta(gamma + 2.0) / riemann_zeta(gamma + 1.0)
        rows.append((P, Z, mu, gamma))
        if jammed:
            break
    P_b, Z_b, mu_b, g_b = rows[-1]
    if anchor_P <= P_b:
        raise DomainError(f"anchor pressure {anchor_P} not beyond breakpoint {P_b}")
    for t in np.linspace(0.0, 1.0, stitch_points + 1)[1:]:
        rows.append((P_b + t * (anchor_P - P_b), Z_b + t * (1.0 - Z_b), mu_b, g_b))
    return PhaseCurve(
        columns=("P", "Z", "mu", "gamma"), rows=rows,
        meta={"jammed": jammed, "breakpoint": (P_b, Z_b), "anchor_P": anchor_P,
              "variant": variant, "geometric_factor": 1.0, "V_cr": eos.V_cr})


def liquid_summary(eos, zeno, Z_cr=0.29, rho_cr_ratio=0.273):
    """Liquid-branch reference assembly: the constant-density rays, the
    connecting hyperbola Z = c/rho, and triple-point constants."""
    rho_cr = rho_cr_ratio * zeno.rho_B
    c = Z_cr * rho_cr
    rho_samples = np.linspace(rho_cr, zeno.rho_B * 0.999, 25)
    hyperbola = [(float(r), float(c / r)) for r in rho_samples]
    t_rays = [0.9, 0.8, 0.7, 0.6]
    rays = [(t * zeno.T_B, zeno_density(zeno, t * zeno.T_B)) for t in t_rays]
    return {
        "hyperbola_constant": c,
        "hyperbola": hyperbola,
        "rays": rays,
        "focal_Z": 0.17,
        "triple_point": {"Z": 0.3e-3, "T_over_T_cr": 0.55, "rho_g_cm3": 0.7},
        "V_cr": eos.V_cr,
        "gamma": eos.gamma,
    }


# rotation angles (radians) applied to the reduced-volume bands
_ROTATION_ANGLES = ((0.30, 0.049), (0.25, 0.052), (0.20, 0.058), (0.17, 0.066))

# per-substance reference data: well depth (K), quarter critical
# temperature (K), and the critical-energy estimate in the same units
_SUBSTANCES = MappingProxyType({
    "Ne": {"epsilon_K": 36.3, "T_cr_quarter_K": 11.0, "E_cr_eps_over_k": 10.5},
    "Ar": {"epsilon_K": 119.3, "T_cr_quarter_K": 37.0, "E_cr_eps_over_k": 35.0},
    "Kr": {"epsilon_K": 171.0, "T_cr_quarter_K": 52.0, "E_cr_eps_over_k": 50.0},
    "N2": {"epsilon_K": 95.9, "T_cr_quarter_K": 31.0, "E_cr_eps_over_k": 28.0},
    "CH4": {"epsilon_K": 148.2, "T_cr_quarter_K": 47.0, "E_cr_eps_over_k": 43.0},
    "C2H6": {"epsilon_K": 243.0, "T_cr_quarter_K": 76.0, "E_cr_eps_over_k": 70.0},
})

T_CR_OVER_T_B_REFERENCES = (0.39, 2.79)


def reference_tables():
    """Bundled immutable reference data."""
    return {
        "rotation_angles": _ROTATION_ANGLES,
        "substances": _SUBSTANCES,
        "T_cr_over_T_B": T_CR_OVER_T_B_REFERENCES,
    }


def rotation_angle(V):
    """Rotation angle (radians) for the reduced-volume band containing V."""
    for threshold, angle in _ROTATION_ANGLES:
        if V >= threshold:
            return angle
    raise LookupError(f"no rotation angle tabulated below V = 0.17 (got {V})")


def substance_data(name):
    """Reference constants for one substance."""
    try:
        return _SUBSTANCES[name]
    except KeyError:
        raise LookupError(f"no reference data for substance {name!r}") from None
