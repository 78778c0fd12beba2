"""Effective two-body scattering energy and the compressibility map.

For a pair potential U(r), impact parameter B and attraction
coefficient alpha, the effective energy is

    E(r) = (-alpha r^4 + r^2 U(r)) / (B^2 - r^2).

Its stationary structure (a well and a barrier that merge at a critical
alpha) maps onto the Zeno-line analog and the compressibility factor
Z = 1 - E_min/E_max, from which the critical-point summary is read off.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .curves import PhaseCurve
from .errors import DegenerateError, DomainError, PoleError, BracketError

__all__ = [
    "PotentialSpec",
    "ScatterProblem",
    "StationaryPair",
    "CriticalSummary",
    "effective_energy",
    "effective_energy_derivative",
    "alpha_from_first_derivative",
    "alpha_from_second_derivative",
    "zeno_condition_root",
    "trace_zeno_analog",
    "stationary_pair",
    "compressibility_curve",
    "critical_summary",
]

_FAMILIES = ("lennard_jones", "generalized_lj", "morse", "buckingham")


def _thread_count():
    env = os.environ.get("ZENOLINE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _parallel_map(fn, items):
    n = min(_thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class PotentialSpec:
    """A pair potential family with analytic first and second derivatives.

    Reduced units throughout: the well depth and effective radius of the
    plain Lennard-Jones member are both 1.

    Families and their ``params``:

    - ``lennard_jones``: none (U = 4 (r^-12 - r^-6))
    - ``generalized_lj``: ``m`` (U = 4 (r^-2m - r^-m), default m = 6)
    - ``morse``: ``a``, ``r0`` (U = e^{-2a(r-r0)} - 2 e^{-a(r-r0)})
    - ``buckingham``: ``A``, ``B``, ``C`` (U = A e^{-B r} - C r^-6)
    """

    family: str = "lennard_jones"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown potential family {self.family!r}")

    @property
    def r_floor(self):
        # below this the repulsive core dwarfs everything and no
        # stationary point can occur
        return 0.5

    def u(self, r):
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        f, p = self.family, self.params
        if f == "lennard_jones":
            ir6 = r**-6
            return 4.0 * (ir6 * ir6 - ir6)
        if f == "generalized_lj":
            m = p.get("m", 6.0)
            irm = r**-m
            return 4.0 * (irm * irm - irm)
        if f == "morse":
            a, r0 = p.get("a", 6.0), p.get("r0", 2.0 ** (1.0 / 6.0))
            e = math.exp(-a * (r - r0))
            return e * e - 2.0 * e
        a_, b_, c_ = p.get("A", 5e5), p.get("B", 12.0), p.get("C", 2.0)
        return a_ * math.exp(-b_ * r) - c_ * r**-6

    def du(self, r):
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        f, p = self.family, self.params
        if f == "lennard_jones":
            return 4.0 * (-12.0 * r**-13 + 6.0 * r**-7)
        if f == "generalized_lj":
            m = p.get("m", 6.0)
            return 4.0 * (-2.0 * m * r ** (-2 * m - 1) + m * r ** (-m - 1))
        if f == "morse":
            a, r0 = p.get("a", 6.0), p.get("r0", 2.0 ** (1.0 / 6.0))
            e = math.exp(-a * (r - r0))
            return -2.0 * a * e * e + 2.0 * a * e
        a_, b_, c_ = p.get("A", 5e5), p.get("B", 12.0), p.get("C", 2.0)
        return -a_ * b_ * math.exp(-b_ * r) + 6.0 * c_ * r**-7

    def d2u(self, r):
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        f, p = self.family, self.params
        if f == "lennard_jones":
            return 4.0 * (156.0 * r**-14 - 42.0 * r**-8)
        if f == "generalized_lj":
            m = p.get("m", 6.0)
            return 4.0 * (2.0 * m * (2 * m + 1) * r ** (-2 * m - 2)
                          - m * (m + 1) * r ** (-m - 2))
        if f == "morse":
            a, r0 = p.get("a", 6.0), p.get("r0", 2.0 ** (1.0 / 6.0))
            e = math.exp(-a * (r - r0))
            return 4.0 * a * a * e * e - 2.0 * a * a * e
        a_, b_, c_ = p.get("A", 5e5), p.get("B", 12.0), p.get("C", 2.0)
        return a_ * b_ * b_ * math.exp(-b_ * r) - 42.0 * c_ * r**-8


@dataclass(frozen=True)
class ScatterProblem:
    """Potential plus the two scattering parameters.

    B is the impact parameter (reduced by the potential radius), alpha
    the attraction coefficient C2/V.
    """

    potential: PotentialSpec
    B: float
    alpha: float

    def __post_init__(self):
        if self.B <= 1.0:
            raise DomainError(f"impact parameter must exceed 1, got {self.B}")
        if self.alpha < 0.0:
            raise DomainError(f"alpha must be non-negative, got {self.alpha}")


@dataclass(frozen=True)
class StationaryPair:
    """The two stationary radii of E(r) and the well/barrier depths.

    The energy landscape is stored flipped (wells turned upside down):
    E_max is the well depth -min_r E and E_min the barrier depth
    -max_r E, so both are non-negative and E_max >= E_min.
    """

    r_lo: float
    r_hi: float
    E_min: float
    E_max: float

    def __post_init__(self):
        if self.E_max < self.E_min:
            raise DomainError("E_max < E_min in stationary pair")


@dataclass(frozen=True)
class CriticalSummary:
    """Critical-point ratios read off the Z(rho) curve."""

    Z_cr: float
    rho_cr_over_rho_B: float
    T_cr_over_T_B: float
    notes: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for name in ("Z_cr", "rho_cr_over_rho_B", "T_cr_over_T_B"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise DomainError(f"{name} = {v} outside (0, 1)")


def effective_energy(problem, r):
    """E(r) = (-alpha r^4 + r^2 U(r)) / (B^2 - r^2)."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    B = problem.B
    if r == B:
        raise PoleError(f"effective energy has a pole at r = B = {B}")
    u = problem.potential.u(r)
    return (-problem.alpha * r**4 + r * r * u) / (B * B - r * r)


def _dE_numerator(problem, r):
    """Numerator of E'(r) over the common factor (B^2 - r^2)^2."""
    B2 = problem.B * problem.B
    pot = problem.potential
    u, up = pot.u(r), pot.du(r)
    return (2.0 * B2 * r * u
            + 2.0 * problem.alpha * r**3 * (r * r - 2.0 * B2)
            + r * r * (B2 - r * r) * up)


def effective_energy_derivative(problem, r):
    """Analytic dE/dr."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    B2 = problem.B * problem.B
    if r == problem.B:
        raise PoleError(f"derivative has a pole at r = B = {problem.B}")
    return _dE_numerator(problem, r) / (B2 - r * r) ** 2


def alpha_from_first_derivative(potential, B, r):
    """The alpha making r a stationary point of E (first derivative
    condition solved for alpha)."""
    if not (potential.r_floor < r < B):
        raise DomainError(f"r = {r} outside ({potential.r_floor}, {B})")
    B2 = B * B
    den = 2.0 * r * r * (r * r - 2.0 * B2)
    if den == 0.0:
        raise DomainError(f"singular configuration r^2 = 2 B^2 at r = {r}")
    u, up = potential.u(r), potential.du(r)
    return (-2.0 * B2 * u - B2 * r * up + r**3 * up) / den


def alpha_from_second_derivative(potential, B, r):
    """The alpha making r an inflection of E (second derivative
    condition solved for alpha)."""
    if not (potential.r_floor < r < B):
        raise DomainError(f"r = {r} outside ({potential.r_floor}, {B})")
    B2 = B * B
    r2 = r * r
    den = 2.0 * r2 * (6.0 * B2 * B2 - 3.0 * B2 * r2 + r2 * r2)
    if den == 0.0:
        raise DomainError(f"singular configuration at r = {r}")
    u, up, upp = potential.u(r), potential.du(r), potential.d2u(r)
    num = (2.0 * (B2 * B2 + 3.0 * B2 * r2) * u
           + 4.0 * r * (B2 * B2 - B2 * r2) * up
           + r2 * (B2 - r2) ** 2 * upp)
    return num / den


def _zeno_residual(potential, B, r):
    """Eliminant of the two alpha expressions: vanishes where the well
    and barrier merge (E' = E'' = 0 at the same r)."""
    B2 = B * B
    u, up, upp = potential.u(r), potential.du(r), potential.d2u(r)
    return (-8.0 * B2 * u + 2.0 * B2 * r * up + r**3 * up
            + 2.0 * B2 * r * r * upp - r**4 * upp)


def zeno_condition_root(potential, B, bracket=(1.0, 2.0)):
    """Radius r* at which the stationary points of E(r) merge.

    Scans the bracket on a dense log grid, bisects every sign change,
    and returns the smallest root (warning on multiplicity).
    """
    lo, hi = bracket
    if not (potential.r_floor <= lo < hi <= B):
        raise DomainError(f"bracket {bracket} outside ({potential.r_floor}, {B})")
    grid = np.geomspace(lo, hi, 400)
    vals = np.array([_zeno_residual(potential, B, r) for r in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda r: _zeno_residual(potential, B, r),
                                grid[i], grid[i + 1], xtol=1e-14, rtol=8.9e-16))
    if not roots:
        raise BracketError(f"no sign change of the merge condition in {bracket}")
    if len(roots) > 1:
        warnings.warn(f"multiple merge-condition roots in {bracket}: {roots}; "
                      "returning the smallest", stacklevel=2)
    return roots[0]


def trace_zeno_analog(potential, B_grid):
    """Parametric Zeno-line analog: for each B, the merge radius r*, the
    degeneracy alpha*(B), and the (doubly stationary) energy there.

    Per-point failures are recorded in ``meta['failures']`` and skipped.
    """
    B_list = list(B_grid)
    if any(b <= 1.0 for b in B_list):
        raise DomainError("all B values must exceed 1")
    if sorted(B_list) != B_list:
        raise DomainError("B grid must be increasing")

    def one(B):
        r_star = zeno_condition_root(potential, B)
        alpha = alpha_from_first_derivative(potential, B, r_star)
        E = effective_energy(ScatterProblem(potential, B, alpha), r_star)
        return (B, r_star, alpha, E)

    rows, failures = [], []
    for B, res in zip(B_list, _parallel_map(_safe(one), B_list)):
        if isinstance(res, Exception):
            failures.append((B, repr(res)))
        else:
            rows.append(res)
    return PhaseCurve(columns=("B", "r_star", "alpha", "E"), rows=rows,
                      meta={"failures": failures, "family": potential.family})


def _safe(fn):
    def wrapped(x):
        try:
            return fn(x)
        except Exception as exc:  # noqa: BLE001 - per-point fault isolation
            return exc
    return wrapped


def stationary_pair(problem):
    """Locate the well and barrier radii of E(r) and the flipped depths.

    Raises DegenerateError when alpha is at or beyond the merge
    threshold so the two stationary points no longer exist.
    """
    pot, B = problem.potential, problem.B
    grid = np.geomspace(pot.r_floor * 1.0001, B * 0.9999, 800)
    vals = np.array([_dE_numerator(problem, r) for r in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda r: _dE_numerator(problem, r),
                                grid[i], grid[i + 1], xtol=1e-14, rtol=8.9e-16))
    if len(roots) < 2:
        try:
            a_star = alpha_from_first_derivative(
                pot, B, zeno_condition_root(pot, B))
            hint = f"; merge threshold alpha*({B:g}) = {a_star:.6g}"
        except Exception:  # noqa: BLE001 - hint only
            hint = ""
        raise DegenerateError(
            f"stationary points merged or absent at alpha = {problem.alpha}{hint}")
    r_lo, r_hi = roots[0], roots[-1]
    e_lo = effective_energy(problem, r_lo)
    e_hi = effective_energy(problem, r_hi)
    # flipped convention: wells upside down
    return StationaryPair(r_lo=r_lo, r_hi=r_hi,
                          E_min=-max(e_lo, e_hi), E_max=-min(e_lo, e_hi))


def compressibility_curve(potential, B, rho_grid, C2=1.0):
    """Z(rho) = 1 - E_min/E_max and its complement on a density grid.

    Density maps to the attraction coefficient through alpha = C2 rho.
    Degenerate points are recorded in ``meta['failures']`` and skipped.
    """
    if B < 10.0:
        raise DomainError(f"B must be >= 10 for the plateau regime, got {B}")
    rho_list = list(rho_grid)

    def one(rho):
        pair = stationary_pair(ScatterProblem(potential, B, C2 * rho))
        z_min = pair.E_min / pair.E_max
        return (rho, 1.0 - z_min, z_min)

    rows, failures = [], []
    for rho, res in zip(rho_list, _parallel_map(_safe(one), rho_list)):
        if isinstance(res, Exception):
            failures.append((rho, repr(res)))
        else:
            rows.append(res)
    return PhaseCurve(columns=("rho", "Z", "Z_min"), rows=rows,
                      meta={"B": B, "C2": C2, "failures": failures})


def _ordinate(potential, B, alpha):
    """Well-to-barrier energy gap scaled by B^2; its alpha -> 0 value
    calibrates the temperature axis."""
    pair = stationary_pair(ScatterProblem(potential, B, alpha))
    return B * B * (pair.E_max - pair.E_min)


def critical_summary(potential, B=100.0, C2=1.0):
    """Critical-point ratios for the given potential.

    Construction: the density axis is normalized by rho_B = alpha*(B)/C2
    (the degeneracy intercept, where Z reaches 0); the critical point is
    where the derivative of Z along the diagonal of the unit square
    vanishes, dZ/dx = -1 with x = rho/rho_B; the temperature ratio is
    the well-to-barrier energy gap at the critical density over its
    zero-density value.  Every step is logged in ``notes``.
    """
    r_star = zeno_condition_root(potential, B)
    alpha_star = alpha_from_first_derivative(potential, B, r_star)
    rho_B = alpha_star / C2

    def z_of_x(x):
        pair = stationary_pair(ScatterProblem(potential, B, alpha_star * x))
        return 1.0 - pair.E_min / pair.E_max

    # bracket the dZ/dx = -1 crossing on a coarse grid first
    h = 1e-4

    def diag(x):
        return (z_of_x(x + h) - z_of_x(x - h)) / (2.0 * h) + 1.0

    xs = np.linspace(0.05, 0.9, 35)
    ds = [diag(x) for x in xs]
    x_cr = None
    for i in range(len(xs) - 1):
        if ds[i] * ds[i + 1] < 0.0:
            x_cr = brentq(diag, xs[i], xs[i + 1], xtol=1e-8)
            break
    if x_cr is None:
        raise BracketError("diagonal-derivative crossing dZ/dx = -1 not bracketed")
    z_cr = z_of_x(x_cr)
    ord_cr = _ordinate(potential, B, alpha_star * x_cr)
    ord_0 = _ordinate(potential, B, alpha_star * 1e-9)
    t_ratio = ord_cr / ord_0
    notes = {
        "B": B,
        "C2": C2,
        "r_star": r_star,
        "alpha_star": alpha_star,
        "rho_B": rho_B,
        "diagonal_criterion": "dZ/d(rho/rho_B) = -1, central difference h=1e-4",
        "ordinate_zero_density": ord_0,
        "ordinate_critical": ord_cr,
        "temperature_calibration": "gap(rho_cr)/gap(0), gap = B^2 (E_max - E_min)",
        "reference_T_ratios": (0.39, 2.79),
    }
    return CriticalSummary(Z_cr=z_cr, rho_cr_over_rho_B=x_cr,
                           T_cr_over_T_B=t_ratio, notes=notes)
