"""Closed-form and semi-analytic limit distributions for the asymptotic
speed of a second-class particle and the direction of the competition
interface, plus the parameter maps linking the three formulations.

Variable kinds and evaluation directions:

* ``speed``: u -> P(U >= u), nonincreasing on the support, value 1 left of
  it and 0 right of it.
* ``angle``: alpha -> P(Theta <= alpha), nondecreasing.
* ``hammersley_speed``: v -> P(V <= v), nondecreasing.

At a support endpoint the evaluator returns the limit from inside; the
distribution may carry an atom exactly there, so endpoint values are
advisory (``boundary_atom_possible``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    CancellationError,
    DomainError,
    InvalidParameterError,
    StabilityError,
)
from .profiles import CountingProcess, TasepProfile
from .walks import SupCompareResult, estimate_sup_compare, hammersley_sup_compare

__all__ = [
    "LimitLaw",
    "rho_from_speed",
    "rho_from_angle",
    "rho_from_hammersley_speed",
    "angle_from_speed",
    "speed_from_angle",
    "parameter_map",
    "speed_support",
    "angle_support",
    "hammersley_speed_support",
    "gamma_compare",
    "two_corner_cdf",
    "gm1_fixed_point",
    "periodic_tasep_cdf",
    "bernoulli_cdf",
    "bernoulli_queue_params",
    "pyke_p_plus",
    "pyke_boundary_laws",
    "hammersley_periodic_compare",
    "hammersley_periodic_cdf",
    "hammersley_poisson_cdf",
    "geometric_sup_params",
    "general_law_estimate",
]


# ---------------------------------------------------------------------------
# parameter maps
# ---------------------------------------------------------------------------


def rho_from_speed(u: float) -> float:
    """Characteristic intensity for a speed u in (-1, 1)."""
    if not -1.0 < u < 1.0:
        raise DomainError(f"speed {u} outside (-1, 1)")
    return (1.0 + u) / 2.0


def rho_from_angle(alpha: float) -> float:
    """Characteristic intensity for an interface angle in (0, pi/2)."""
    if not 0.0 < alpha < math.pi / 2.0:
        raise DomainError(f"angle {alpha} outside (0, pi/2)")
    return 1.0 / (1.0 + math.sqrt(math.tan(alpha)))


def rho_from_hammersley_speed(v: float) -> float:
    """Characteristic intensity for a positive speed v."""
    if v <= 0.0:
        raise DomainError(f"speed {v} must be positive")
    return 1.0 / math.sqrt(v)


def angle_from_speed(u: float) -> float:
    """The interface angle whose law matches the speed law at u."""
    if not -1.0 < u < 1.0:
        raise DomainError(f"speed {u} outside (-1, 1)")
    return math.atan(((1.0 - u) / (1.0 + u)) ** 2)


def speed_from_angle(alpha: float) -> float:
    """Inverse of angle_from_speed on (0, pi/2)."""
    if not 0.0 < alpha < math.pi / 2.0:
        raise DomainError(f"angle {alpha} outside (0, pi/2)")
    s = math.sqrt(math.tan(alpha))
    return (1.0 - s) / (1.0 + s)


_MAPS = {
    "rho_from_speed": rho_from_speed,
    "rho_from_angle": rho_from_angle,
    "rho_from_hammersley_speed": rho_from_hammersley_speed,
    "angle_from_speed": angle_from_speed,
    "speed_from_angle": speed_from_angle,
}


def parameter_map(kind: str, value: float) -> float:
    try:
        return _MAPS[kind](value)
    except KeyError:
        raise DomainError(f"unknown parameter map {kind!r}") from None


def _slope_angle(p: float) -> float:
    """Angle whose square-root tangent is the odds ratio p/(1-p)."""
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return math.pi / 2.0
    return math.atan((p / (1.0 - p)) ** 2)


def speed_support(profile: TasepProfile) -> tuple[float, float]:
    p, p_prime = profile.densities()
    return (1.0 - 2.0 * p_prime, 1.0 - 2.0 * p)


def angle_support(profile: TasepProfile) -> tuple[float, float]:
    p, p_prime = profile.densities()
    return (_slope_angle(p), _slope_angle(p_prime))


def hammersley_speed_support(nu: CountingProcess) -> tuple[float, float]:
    a, b = nu.densities()
    hi = math.inf if a == 0.0 else a ** -2
    lo = 0.0 if b == math.inf else b ** -2
    return (lo, hi)


# ---------------------------------------------------------------------------
# the law object
# ---------------------------------------------------------------------------

_DIRECTION = {"speed": -1, "angle": +1, "hammersley_speed": +1}


@dataclass(frozen=True)
class LimitLaw:
    """An evaluable limit distribution on a support interval."""

    kind: str
    support: tuple[float, float]
    method: str
    evaluator: Callable[[float], tuple[float, float]] = field(repr=False)
    label: str = ""
    boundary_atom_possible: bool = True

    def eval_with_error(self, x: float) -> tuple[float, float]:
        lo, hi = self.support
        increasing = _DIRECTION[self.kind] > 0
        if x <= lo:
            return (0.0 if increasing else 1.0), 0.0
        if x >= hi:
            return (1.0 if increasing else 0.0), 0.0
        value, err = self.evaluator(x)
        return min(1.0, max(0.0, value)), err

    def __call__(self, x: float) -> float:
        return self.eval_with_error(x)[0]

    def tabulate(self, grid) -> np.ndarray:
        """Rows of (point, value, error_bound) over the grid."""
        rows = np.empty((len(grid), 3))
        for i, x in enumerate(grid):
            v, e = self.eval_with_error(float(x))
            rows[i] = (x, v, e)
        return rows

    def cdf(self, x: float) -> float:
        """P(variable <= x) regardless of the native direction."""
        v = self(x)
        return 1.0 - v if self.kind == "speed" else v


# ---------------------------------------------------------------------------
# two-corner family (gamma comparison)
# ---------------------------------------------------------------------------


def gamma_compare(x: int, y: int, rho: float) -> float:
    """P(a Gamma(x, rho) variable is at least an independent Gamma(y, 1-rho)).

    Evaluated as the finite sum with log-factorials for stability.
    """
    if not (isinstance(x, (int, np.integer)) and isinstance(y, (int, np.integer))):
        raise DomainError("x and y must be integers")
    if x < 1 or y < 1:
        raise DomainError("x and y must be >= 1")
    if not (0.0 < rho < 1.0):
        raise DomainError("rho must lie in (0, 1)")
    log_base = y * math.log1p(-rho) - math.lgamma(y)
    total = 0.0
    for j in range(x):
        total += math.exp(
            log_base + math.lgamma(j + y) - math.lgamma(j + 1) + j * math.log(rho)
        )
    return min(1.0, total)


def two_corner_cdf(x: int, y: int, variable: str = "speed") -> LimitLaw:
    """Limit law for the two-corner configuration with x and y arms."""
    if variable == "speed":
        return LimitLaw(
            kind="speed",
            support=(-1.0, 1.0),
            method="closed_form",
            evaluator=lambda u: (gamma_compare(x, y, rho_from_speed(u)), 0.0),
            label=f"two_corner({x},{y}) speed",
        )
    if variable == "angle":
        return LimitLaw(
            kind="angle",
            support=(0.0, math.pi / 2.0),
            method="closed_form",
            evaluator=lambda a: (gamma_compare(x, y, rho_from_angle(a)), 0.0),
            label=f"two_corner({x},{y}) angle",
        )
    raise DomainError(f"unknown variable {variable!r}")


# ---------------------------------------------------------------------------
# periodic family (queue fixed points)
# ---------------------------------------------------------------------------


def gm1_fixed_point(k: int, rho: float, side: str) -> float:
    """Smallest root in (0, 1) of the queue fixed-point equation.

    side '+': z (1 - (1-rho) z)^k = rho^k, requires 1 - rho > 1/(1+k).
    side '-': z (1 - rho z)^k = (1-rho)^k, requires 1 - rho < k/(1+k).
    """
    if k < 1 or not isinstance(k, (int, np.integer)):
        raise DomainError("k must be an integer >= 1")
    if not (0.0 < rho < 1.0):
        raise DomainError("rho must lie in (0, 1)")
    if side == "+":
        if not (1.0 - rho > 1.0 / (1.0 + k)):
            raise StabilityError(
                f"side '+' requires 1 - rho > 1/(1+k) = {1/(1+k):.6g}; got rho={rho}"
            )
        f = lambda z: z * (1.0 - (1.0 - rho) * z) ** k - rho**k
    elif side == "-":
        if not (1.0 - rho < k / (1.0 + k)):
            raise StabilityError(
                f"side '-' requires 1 - rho < k/(1+k) = {k/(1+k):.6g}; got rho={rho}"
            )
        f = lambda z: z * (1.0 - rho * z) ** k - (1.0 - rho) ** k
    else:
        raise DomainError("side must be '+' or '-'")
    lo, hi = 0.0, 1.0 - 1e-9
    if f(hi) <= 0.0:
        raise StabilityError("fixed point indistinguishable from 1; rho too close to the stability boundary")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _periodic_compare(k_plus: int, k_minus: int, rho: float) -> float:
    lam_p = gm1_fixed_point(k_plus, rho, "+")
    lam_m = gm1_fixed_point(k_minus, rho, "-")
    a = (1.0 - rho) * (1.0 - lam_p)
    b = rho * (1.0 - lam_m)
    return a / (a + b)


def periodic_tasep_cdf(k_plus: int, k_minus: int, variable: str = "speed") -> LimitLaw:
    """Limit law for the periodic configuration (k_plus holes / k_minus particles).

    Requires max(k_plus, k_minus) >= 2, otherwise both densities are 1/2
    and there is no rarefaction fan.
    """
    if max(k_plus, k_minus) < 2:
        raise InvalidParameterError("periodic law needs max(k_plus, k_minus) >= 2")
    p = 1.0 / (1.0 + k_plus)
    p_prime = k_minus / (1.0 + k_minus)

    def eval_at_rho(rho: float) -> float:
        # stability failures on either side mean the point sits outside the
        # open support; the law continues with its endpoint value there
        if not (1.0 - rho > 1.0 / (1.0 + k_plus)):
            return 0.0
        if not (1.0 - rho < k_minus / (1.0 + k_minus)):
            return 1.0
        return _periodic_compare(k_plus, k_minus, rho)

    if variable == "speed":
        return LimitLaw(
            kind="speed",
            support=(1.0 - 2.0 * p_prime, 1.0 - 2.0 * p),
            method="fixed_point",
            evaluator=lambda u: (eval_at_rho(rho_from_speed(u)), 1e-12),
            label=f"periodic({k_plus},{k_minus}) speed",
        )
    if variable == "angle":
        return LimitLaw(
            kind="angle",
            support=(_slope_angle(p), _slope_angle(p_prime)),
            method="fixed_point",
            evaluator=lambda a: (eval_at_rho(rho_from_angle(a)), 1e-12),
            label=f"periodic({k_plus},{k_minus}) angle",
        )
    raise DomainError(f"unknown variable {variable!r}")


# ---------------------------------------------------------------------------
# Bernoulli family (uniform law)
# ---------------------------------------------------------------------------


def bernoulli_queue_params(p1: float, p2: float, rho: float) -> dict:
    """Queue intermediates behind the uniform law.

    lambda_plus is the busy-cycle fixed point; S+ and S- are exponential
    with rates (1 - rho - p1) and (p2 - (1 - rho)) inside the fan.
    """
    if not (0.0 <= p1 < p2 <= 1.0):
        raise DomainError("need 0 <= p1 < p2 <= 1")
    if not (p1 < 1.0 - rho < p2):
        raise StabilityError("rho must satisfy p1 < 1 - rho < p2")
    lam_plus = (p1 / (1.0 - p1)) * (rho / (1.0 - rho)) if p1 > 0 else 0.0
    return {
        "lambda_plus": lam_plus,
        "rate_plus": 1.0 - rho - p1,
        "rate_minus": p2 - (1.0 - rho),
    }


def bernoulli_cdf(p1: float, p2: float, variable: str = "speed") -> LimitLaw:
    """Uniform speed law on (1 - 2 p2, 1 - 2 p1)."""
    if not (0.0 <= p1 < p2 <= 1.0):
        raise DomainError("need 0 <= p1 < p2 <= 1")
    lo, hi = 1.0 - 2.0 * p2, 1.0 - 2.0 * p1

    def tail(u: float) -> float:
        return ((1.0 - 2.0 * p1) - u) / (2.0 * (p2 - p1))

    if variable == "speed":
        return LimitLaw(
            kind="speed",
            support=(lo, hi),
            method="closed_form",
            evaluator=lambda u: (tail(u), 0.0),
            label=f"bernoulli({p1},{p2}) speed",
        )
    if variable == "angle":
        return LimitLaw(
            kind="angle",
            support=(_slope_angle(p1), _slope_angle(p2)),
            method="closed_form",
            evaluator=lambda a: (tail(speed_from_angle(a)), 0.0),
            label=f"bernoulli({p1},{p2}) angle",
        )
    raise DomainError(f"unknown variable {variable!r}")


# ---------------------------------------------------------------------------
# periodic boundary on the Hammersley side (Pyke formulas)
# ---------------------------------------------------------------------------


def pyke_p_plus(lam: float, rho: float, tol: float = 1e-14) -> float:
    """Unique root in (0, 1) of p = 1 - exp(-p rho / lam), for rho > lam.

    p = 0 always solves the equation; the positive root exists exactly when
    the slope rho/lam at 0 exceeds 1, and bisection starts from a bracket
    strictly away from 0 to avoid collapsing onto the trivial root.
    """
    if rho <= lam:
        raise DomainError(f"no positive root: need rho > lam, got rho={rho}, lam={lam}")

    def f(p: float) -> float:
        return p - 1.0 + math.exp(-p * rho / lam)

    lo = 0.5
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise DomainError("root numerically indistinguishable from 0")
    hi = 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_SERIES_STABILITY_CAP = 5e9


def _sup_cdf_terms(mu: float, rho: float, k: int) -> tuple[float, float]:
    """P(left supremum <= k) by the alternating sum; returns (value, max |term|)."""
    r = rho / mu
    terms = []
    for i in range(k + 1):
        terms.append(((-r) ** i) * ((k - i) ** i / math.factorial(i)) * math.exp(r * (k - i)))
    value = (1.0 - r) * math.fsum(terms)
    return value, max(abs(t) for t in terms)


def pyke_boundary_laws(lam: float, mu: float, rho: float, k: int) -> tuple[float, float]:
    """(P(right supremum >= k), P(left supremum <= k)) for grid boundaries.

    The right tail is exactly geometric in the root of the fixed-point
    equation; the left distribution is an alternating sum evaluated with
    compensated summation and refused once cancellation would cost more
    than about six significant digits.
    """
    if k < 0 or not isinstance(k, (int, np.integer)):
        raise DomainError("k must be a nonnegative integer")
    if rho >= mu:
        raise DomainError("need rho < mu for a finite left supremum")
    inf_tail = (1.0 - pyke_p_plus(lam, rho)) ** k
    value, max_term = _sup_cdf_terms(mu, rho, k)
    if max_term > 1e13:
        raise CancellationError(
            f"alternating sum at k={k} peaks at {max_term:.2e}; result unreliable"
        )
    return inf_tail, min(1.0, max(0.0, value))


def hammersley_periodic_compare(
    lam: float, mu: float, rho: float, tail_tol: float = 1e-13
) -> tuple[float, float]:
    """P(right supremum >= left supremum) for grid boundaries, with a bound.

    Sums the geometric weights of the right supremum against the left
    distribution until either the geometric tail falls below ``tail_tol``
    or the alternating sum hits its cancellation cap; the remaining mass is
    bracketed between the last stable left-distribution value and 1, and
    half that bracket is returned as the error bound.
    """
    if not (lam < rho < mu):
        raise DomainError(f"need lam < rho < mu, got {lam}, {rho}, {mu}")
    pp = pyke_p_plus(lam, rho)
    total = 0.0
    weight = pp
    f_last = 0.0
    peak = 1.0
    k = 0
    while True:
        value, max_term = _sup_cdf_terms(mu, rho, k)
        if max_term > _SERIES_STABILITY_CAP:
            break
        peak = max(peak, max_term)
        f_last = min(1.0, max(0.0, value))
        total += weight * f_last
        if (1.0 - pp) ** (k + 1) < tail_tol:
            k += 1
            break
        weight *= 1.0 - pp
        k += 1
    remainder = (1.0 - pp) ** k
    lo = total + remainder * f_last
    hi = total + remainder
    noise = 1e-15 * peak * math.sqrt(k + 1.0)
    return 0.5 * (lo + hi), 0.5 * (hi - lo) + noise


def hammersley_periodic_cdf(lam: float, mu: float) -> LimitLaw:
    """Speed law for grid boundaries of intensities lam (right) and mu (left)."""
    if not (0.0 < lam < mu):
        raise DomainError("need 0 < lam < mu")
    return LimitLaw(
        kind="hammersley_speed",
        support=(mu**-2, lam**-2),
        method="series",
        evaluator=lambda v: hammersley_periodic_compare(
            lam, mu, rho_from_hammersley_speed(v)
        ),
        label=f"hammersley_periodic({lam},{mu})",
    )


# ---------------------------------------------------------------------------
# Poisson boundary on the Hammersley side
# ---------------------------------------------------------------------------


def geometric_sup_params(lam: float, mu: float, rho: float) -> dict:
    """Step probabilities and geometric parameters of the two merged walks."""
    if not (lam < rho < mu):
        raise DomainError("need lam < rho < mu")
    p_plus = lam / (lam + rho)
    p_minus = rho / (mu + rho)
    return {
        "p_plus": p_plus,
        "p_minus": p_minus,
        "r_plus": p_plus / (1.0 - p_plus),
        "r_minus": p_minus / (1.0 - p_minus),
    }


def hammersley_poisson_cdf(lam: float, mu: float) -> LimitLaw:
    """Speed law for Poisson boundaries: piecewise explicit."""
    if not (0.0 < lam < mu):
        raise DomainError("need 0 < lam < mu")

    def cdf(v: float) -> tuple[float, float]:
        return ((mu - 1.0 / math.sqrt(v)) / (mu - lam), 0.0)

    return LimitLaw(
        kind="hammersley_speed",
        support=(mu**-2, lam**-2),
        method="closed_form",
        evaluator=cdf,
        label=f"hammersley_poisson({lam},{mu})",
    )


# ---------------------------------------------------------------------------
# general Monte Carlo law via the walk estimators
# ---------------------------------------------------------------------------


def general_law_estimate(
    model: str,
    profile: TasepProfile | CountingProcess,
    point: float,
    replicas: int,
    tol: float = 1e-6,
    seed: int = 0,
) -> SupCompareResult:
    """Estimate the limit law of any profile at one interior point.

    Maps the point to its characteristic intensity and runs the matching
    supremum comparison: P(U >= u) for ``tasep_speed``, P(Theta <= alpha)
    for ``interface_angle`` (the same comparison after the angle map), and
    P(V <= v) for ``hammersley_speed``.  Points at or outside the open
    support are refused because the law may be discontinuous there.
    """
    if model == "tasep_speed":
        lo, hi = speed_support(profile)
        if not (lo < point < hi):
            raise DomainError(
                f"speed {point} not strictly inside the open support ({lo}, {hi}); "
                "the law may have an atom at the boundary"
            )
        return estimate_sup_compare(
            profile, rho_from_speed(point), replicas, tol=tol, seed=seed
        )
    if model == "interface_angle":
        lo, hi = angle_support(profile)
        if not (lo < point < hi):
            raise DomainError(
                f"angle {point} not strictly inside the open support ({lo}, {hi}); "
                "the law may have an atom at the boundary"
            )
        return estimate_sup_compare(
            profile, rho_from_angle(point), replicas, tol=tol, seed=seed
        )
    if model == "hammersley_speed":
        lo, hi = hammersley_speed_support(profile)
        if not (lo < point < hi):
            raise DomainError(
                f"speed {point} not strictly inside the open support ({lo}, {hi}); "
                "the law may have an atom at the boundary"
            )
        return hammersley_sup_compare(
            profile, rho_from_hammersley_speed(point), replicas, tol=tol, seed=seed
        )
    raise DomainError(f"unknown model {model!r}")
