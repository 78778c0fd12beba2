"""Restricted-partition counts and condensate-threshold asymptotics.

Exact p_k(n) tables by dynamic programming over big integers, Hartley
entropy, the summand-count threshold k0 beyond which the number of
partition variants stops growing, the one-dimensional threshold N_cr,
and the finite-N global-distribution solver built on the Bose-type
integrals of the specfun module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from . import specfun
from .errors import DomainError, ResourceError, SolverError

__all__ = [
    "PartitionTable",
    "GlobalDistribution",
    "CondensateThreshold",
    "build_partition_table",
    "hartley_entropy",
    "condensate_threshold",
    "maximize_variants",
    "solve_global_distribution",
    "ncr_dimension1",
    "fractal_weight",
]

# the constant of the two-term threshold asymptotics
_C = 2.0 * math.pi / math.sqrt(6.0)
_ALPHA = -2.0 * math.log(_C / 2.0)

_N_CAP = 20000
_CELL_CAP = 40_000_000


@dataclass(frozen=True)
class CondensateThreshold:
    """Exact and asymptotic location of the argmax of p_k(n) over k."""

    n: int
    k0_exact: int
    k0_leading: float
    k0_two_term: float


@dataclass(frozen=True)
class GlobalDistribution:
    """Parameters (b, kappa) of the finite-N Bose-type distribution."""

    b: float
    kappa: float
    gamma: float
    n_cap: int

    def __post_init__(self):
        if self.b <= 0:
            raise DomainError(f"b must be positive, got {self.b}")
        if self.kappa < 0:
            raise DomainError(f"kappa must be non-negative, got {self.kappa}")
        if self.n_cap < 1:
            raise DomainError(f"N must be >= 1, got {self.n_cap}")


class PartitionTable:
    """Exact table of p_k(n), the number of partitions of n into
    exactly k parts, for n <= n_max and k <= k_max.

    Filled by the recurrence p_k(n) = p_k(n-k) + p_{k-1}(n-1); counts
    are Python big integers, so no overflow occurs.
    """

    def __init__(self, n_max, k_max, rows):
        self.n_max = n_max
        self.k_max = k_max
        self._rows = rows  # _rows[k][n] = p_k(n)

    def count(self, n, k):
        """p_k(n); zero outside the triangle k <= n."""
        if not (0 <= n <= self.n_max):
            raise DomainError(f"n={n} outside table range [0, {self.n_max}]")
        if not (0 <= k <= self.k_max):
            raise DomainError(f"k={k} outside table range [0, {self.k_max}]")
        return self._rows[k][n]

    def row(self, n):
        """All p_k(n) for k = 1..min(n, k_max)."""
        top = min(n, self.k_max)
        return [self._rows[k][n] for k in range(1, top + 1)]

    def total(self, n):
        """p(n) = sum_k p_k(n); requires k_max >= n."""
        if self.k_max < n:
            raise DomainError(f"k_max={self.k_max} < n={n}, row sum incomplete")
        return sum(self.row(n))


def build_partition_table(n_max, k_max):
    """Fill the exact p_k(n) table for 1 <= k <= k_max, 0 <= n <= n_max."""
    if not (1 <= k_max <= n_max):
        raise DomainError(f"need 1 <= k_max <= n_max, got k_max={k_max}, n_max={n_max}")
    if n_max > _N_CAP:
        raise ResourceError(f"n_max={n_max} exceeds cap {_N_CAP}")
    if (n_max + 1) * (k_max + 1) > _CELL_CAP:
        raise ResourceError(
            f"table of {(n_max + 1) * (k_max + 1)} cells exceeds cap {_CELL_CAP}"
        )
    rows = [[0] * (n_max + 1) for _ in range(k_max + 1)]
    rows[0][0] = 1
    for k in range(1, k_max + 1):
        cur = rows[k]
        prev = rows[k - 1]
        for n in range(k, n_max + 1):
            cur[n] = cur[n - k] + prev[n - 1]
    return PartitionTable(n_max, k_max, rows)


def hartley_entropy(n, k, table):
    """Binary logarithm of the number of partition variants, log2 p_k(n)."""
    c = table.count(n, k)
    if c == 0:
        raise DomainError(f"p_{k}({n}) = 0, entropy undefined")
    return _log2_bigint(c)


def _log2_bigint(x):
    """log2 of a positive big integer without float overflow."""
    e = x.bit_length() - 53
    if e <= 0:
        return math.log2(x)
    return e + math.log2(x >> e)


def _argmax_pk_streaming(n, patience=60):
    """Smallest argmax of p_k(n) over k, by streaming one k-row at a
    time through the recurrence.  p_k(n) is unimodal in k, so the scan
    stops after `patience` consecutive declines."""
    prev = [0] * (n + 1)
    prev[0] = 1
    best_k, best_v, declines = 1, 0, 0
    for k in range(1, n + 1):
        cur = [0] * (n + 1)
        for m in range(k, n + 1):
            cur[m] = cur[m - k] + prev[m - 1]
        v = cur[n]
        if v > best_v:
            best_v, best_k, declines = v, k, 0
        else:
            declines += 1
            if declines >= patience:
                break
        prev = cur
    return best_k


def _two_term(n):
    rt = math.sqrt(n)
    leading = rt / _C * math.log(n)
    return leading, leading + _ALPHA * rt


def condensate_threshold(n, table=None):
    """Threshold summand count k0: the smallest argmax of p_k(n) over k,
    with its one- and two-term asymptotic approximations."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if table is not None:
        if table.n_max < n or table.k_max < n:
            raise DomainError(f"table does not cover n={n} with k_max=n")
        row = table.row(n)
        k0 = max(range(len(row)), key=lambda i: (row[i], -i)) + 1
    else:
        k0 = _argmax_pk_streaming(n)
    leading, two_term = _two_term(n)
    return CondensateThreshold(n=n, k0_exact=k0, k0_leading=leading,
                               k0_two_term=two_term)


def maximize_variants(n, k_bar, table):
    """The k <= k_bar maximizing the variant count p_k(n).

    Below the threshold the count is still growing, so the cap itself
    wins; above it the threshold wins.
    """
    if not (1 <= k_bar <= n):
        raise DomainError(f"need 1 <= k_bar <= n, got k_bar={k_bar}, n={n}")
    k0 = condensate_threshold(n, table).k0_exact
    return k_bar if k_bar <= k0 else k0


def _moment(gamma, b, kappa, n_cap, settings):
    return specfun.finite_n_integral(gamma, b, kappa, n_cap, settings).value


def _solve_b(gamma, kappa, n_cap, n_target, b_seed, settings):
    """Solve the (gamma+1)-moment equation for b at fixed kappa; the
    moment is strictly decreasing in b."""

    def res(log_b):
        return _moment(gamma + 1.0, math.exp(log_b), kappa, n_cap, settings) - n_target

    lo = hi = math.log(b_seed)
    flo = res(lo)
    for _ in range(200):
        if flo > 0:
            break
        lo -= 0.7
        flo = res(lo)
    fhi = res(hi)
    for _ in range(200):
        if fhi < 0:
            break
        hi += 0.7
        fhi = res(hi)
    if flo <= 0 or fhi >= 0:
        raise SolverError(f"could not bracket b (kappa={kappa}, N={n_cap})")
    return math.exp(brentq(res, lo, hi, xtol=1e-14, rtol=1e-14))


def solve_global_distribution(n, k=None, gamma=0.0, settings=specfun.DEFAULT_SETTINGS):
    """Fit (b, kappa) of the finite-N distribution to the two moment
    constraints: the gamma-moment equals the summand count k and the
    (gamma+1)-moment equals n.

    With k omitted the kappa = 0 mode is solved instead: b comes from
    the (gamma+1)-moment alone (infinite-N form) and N is set to the
    self-consistent threshold k0 satisfying the gamma-moment fixed
    point.  Both moments of the returned parameters reproduce their
    targets to better than 1e-8 relative.
    """
    if n < 100:
        raise DomainError(f"asymptotic regime requires n >= 100, got {n}")
    if gamma <= -1:
        raise DomainError(f"gamma must exceed -1, got {gamma}")

    # infinite-N seed for b at kappa = 0
    b_seed = (specfun.gamma_fn(gamma + 2.0) * specfun.riemann_zeta(gamma + 2.0) / n) \
        ** (1.0 / (gamma + 2.0))

    if k is None:
        # kappa = 0 mode: fixed point k0 = gamma-moment(b, 0, k0)
        def fp(kk):
            return _moment(gamma, b_seed, 0.0, max(int(round(kk)), 2), settings) - kk

        hi = 4.0 * (math.sqrt(n) / _C * math.log(n) + 10.0)
        k0 = brentq(fp, 2.0, hi, xtol=1e-10)
        return GlobalDistribution(b=b_seed, kappa=0.0, gamma=gamma,
                                  n_cap=int(round(k0)))

    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")

    def kappa_residual(kappa):
        b = _solve_b(gamma, kappa, k, n, b_seed, settings)
        return _moment(gamma, b, kappa, k, settings) - k

    r0 = kappa_residual(0.0)
    if r0 < 0:
        raise SolverError(
            f"gamma-moment at kappa=0 is below k={k}: the requested summand "
            f"count exceeds the threshold regime (residual {r0:.3g})"
        )
    hi = 1.0
    for _ in range(200):
        if kappa_residual(hi) < 0:
            break
        hi *= 2.0
    else:
        raise SolverError("could not bracket kappa")
    kappa = brentq(kappa_residual, 0.0, hi, xtol=1e-13, rtol=8.9e-16)
    b = _solve_b(gamma, kappa, k, n, b_seed, settings)
    return GlobalDistribution(b=b, kappa=kappa, gamma=gamma, n_cap=k)


def _w_integrand(xi):
    """1/xi^2 - 1/(e^(xi^2) - 1), with the removable 1/xi^2 pole at the
    origin handled by the Bernoulli series in x = xi^2."""
    x = xi * xi
    if x < 0.09:
        return 0.5 - x / 12.0 + x**3 / 720.0 - x**5 / 30240.0
    if x > 700.0:
        return 1.0 / x
    return 1.0 / x - 1.0 / math.expm1(x)


def ncr_dimension1(n, settings=specfun.DEFAULT_SETTINGS):
    """One-dimensional condensation threshold N_cr(n).

    Builds W = (2n)^(1/3) I1^(-1/3) I2 from the two spectral integrals
    and solves the resulting quadratic, N_cr = (W^2/4)(1 + sqrt(1-4/W))^2.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    i1 = specfun.bose_integral(0.5, 0.0, settings).value
    i2 = specfun.improper_quad(_w_integrand, 0.0, settings).value
    w = (2.0 * n) ** (1.0 / 3.0) * i1 ** (-1.0 / 3.0) * i2
    if w < 4.0:
        raise DomainError(
            f"W = {w:.6g} < 4 at n = {n}: no real root (below the asymptotic regime)"
        )
    return (w * w / 4.0) * (1.0 + math.sqrt(1.0 - 4.0 / w)) ** 2


def fractal_weight(d, i):
    """Degeneracy weight Gamma(d+i) / (Gamma(i+1) Gamma(d)) for
    non-integer dimension d; reduces to i+1 at d = 2 and to 1 at d = 1."""
    if d <= 0:
        raise DomainError(f"d must be positive, got {d}")
    if i < 0:
        raise DomainError(f"i must be >= 0, got {i}")
    return math.exp(math.lgamma(d + i) - math.lgamma(i + 1.0) - math.lgamma(d))
