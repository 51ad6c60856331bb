"""Independent brute-force verifiers for the main computational kernels.

Each oracle recomputes a quantity through a different arithmetic path than
the implementation it certifies: exhaustive path enumeration against the
passage-time dynamic program, quadratic chain search against patience
piles, numerical quadrature against the closed gamma-comparison sum, and a
queue recursion against the fixed-point exponentials.  They are slow on
purpose and share no code with the modules they check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, InvalidParameterError, StabilityError

__all__ = [
    "OracleReport",
    "lpp_enumerate",
    "lis_quadratic",
    "gamma_compare_integrate",
    "lindley_gm1_sim",
]


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    oracle_value: float
    main_value: float
    tolerance: float
    cost: int

    @property
    def difference(self) -> float:
        return abs(self.oracle_value - self.main_value)

    @property
    def passed(self) -> bool:
        return self.difference <= self.tolerance


def lpp_enumerate(weights: np.ndarray) -> float:
    """Maximum weight over up-right paths across the whole array.

    The path starts at cell (0, 0) and ends at the opposite corner,
    collecting every cell weight except the starting one.  Plain recursion
    over both step choices; area is capped to keep the path count tame.
    """
    n0, n1 = weights.shape
    if n0 * n1 > 20:
        raise InvalidParameterError("enumeration oracle limited to 20 cells")

    # accumulate along the path front to back: a path sum is defined by
    # adding weights in walking order, which pins the float rounding
    def walk(i: int, j: int, acc: float) -> float:
        if i == n0 - 1 and j == n1 - 1:
            return acc
        options = []
        if i + 1 < n0:
            options.append(walk(i + 1, j, acc + weights[i + 1, j]))
        if j + 1 < n1:
            options.append(walk(i, j + 1, acc + weights[i, j + 1]))
        return max(options)

    return walk(0, 0, 0.0)


def lis_quadratic(points: np.ndarray) -> int:
    """Longest strictly increasing chain by the quadratic recurrence."""
    n = len(points)
    if n > 500:
        raise InvalidParameterError("quadratic oracle limited to 500 points")
    if n == 0:
        return 0
    pts = np.asarray(points, dtype=float)
    best = np.ones(n, dtype=int)
    order = np.argsort(pts[:, 0])
    pts = pts[order]
    for i in range(n):
        for j in range(i):
            if pts[j, 0] < pts[i, 0] and pts[j, 1] < pts[i, 1]:
                best[i] = max(best[i], best[j] + 1)
    return int(best.max())


def gamma_compare_integrate(x: int, y: int, rho: float) -> float:
    """P(Gamma(x, rho) >= Gamma(y, 1-rho)) by adaptive quadrature.

    Integrates the upper-incomplete-gamma ratio against the Gamma(y)
    density, using the finite-sum form of the incomplete gamma for integer
    shape.  Absolute target 1e-10.
    """
    if x < 1 or y < 1 or x != int(x) or y != int(y):
        raise DomainError("x and y must be integers >= 1")
    if not (0.0 < rho < 1.0):
        raise DomainError("rho must lie in (0, 1)")
    scale = rho / (1.0 - rho)

    def upper_ratio(z: float) -> float:
        # Gamma(x, z) / Gamma(x) for integer x
        total = 0.0
        term = 1.0
        for j in range(int(x)):
            if j > 0:
                term *= z / j
            total += term
        return math.exp(-z) * total

    def integrand(z: float) -> float:
        return upper_ratio(scale * z) * z ** (y - 1) * math.exp(-z) / math.gamma(y)

    value, err = integrate.quad(integrand, 0.0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
    if err > 1e-9:
        raise ArithmeticError(f"quadrature error estimate {err:.2e} too large")
    return value


def lindley_gm1_sim(
    k: int,
    rho: float,
    samples: int,
    seed: int = 0,
    burn_in: int = 10_000,
    thin: int = 10,
) -> np.ndarray:
    """Stationary waiting times of the k-stage arrival queue.

    Arrivals are sums of k exponentials of rate rho, services single
    exponentials of rate 1 - rho; stability needs the mean arrival gap to
    beat the mean service.  Uses the reflection identity
    W_n = S_n - min_{m <= n} S_m for the recursion started empty, then
    discards a burn-in and thins (the chain is geometrically ergodic under
    stability, so the defaults are generous).
    """
    if not (1.0 - rho > 1.0 / (1.0 + k)):
        raise StabilityError("queue unstable: need 1 - rho > 1/(1+k)")
    n_steps = burn_in + samples * thin
    rng = np.random.default_rng(seed)
    arrivals = rng.gamma(shape=k, scale=1.0 / rho, size=n_steps)
    services = rng.exponential(1.0 / (1.0 - rho), size=n_steps)
    s = np.cumsum(services - arrivals)
    running_min = np.minimum.accumulate(np.minimum(s, 0.0))
    w = s - running_min
    return w[burn_in::thin][:samples]
