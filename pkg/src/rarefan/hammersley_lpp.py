"""Planar-Poisson last-passage percolation with boundary sources.

Chains are strictly increasing in both coordinates; the boundary-weighted
passage value adds the boundary count at the chain's foot.  The supremum
over feet reduces to the boundary atoms plus the origin (between atoms the
boundary count is flat while moving the foot right can only lose points).
Far-left feet are excluded by a counting bound: a chain across area A has
length at least k with probability at most A^k / (k!)^2, while the
boundary count falls off linearly going left.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import DomainError, InvalidParameterError, PreconditionError
from .profiles import CountingProcess, PoissonTail

__all__ = [
    "PoissonCloud",
    "BoundaryPassage",
    "DominationWitness",
    "EquilibriumReport",
    "longest_increasing_path",
    "l_nu",
    "chain_length_bound",
    "domination_check",
    "equilibrium_intensity_check",
]


@dataclass(frozen=True)
class PoissonCloud:
    """A unit-intensity planar Poisson sample on a rectangle, sorted by x."""

    points: np.ndarray
    rect: tuple[float, float, float, float]
    seed: int = 0

    @classmethod
    def generate(
        cls, seed: int, rect: tuple[float, float, float, float], intensity: float = 1.0
    ) -> "PoissonCloud":
        x_lo, x_hi, t_lo, t_hi = rect
        if x_hi <= x_lo or t_hi <= t_lo:
            raise InvalidParameterError("rectangle must have positive area")
        rng = np.random.default_rng(
            np.random.SeedSequence([abs(int(seed)) & (2**63 - 1), 0xC10D])
        )
        n = rng.poisson(intensity * (x_hi - x_lo) * (t_hi - t_lo))
        xs = ts = np.empty(0)
        for _ in range(8):
            xs = rng.uniform(x_lo, x_hi, n)
            ts = rng.uniform(t_lo, t_hi, n)
            # distinct levels almost surely; resample wholesale on collision
            if len(np.unique(xs)) == n and len(np.unique(ts)) == n:
                break
        order = np.argsort(xs)
        return cls(points=np.column_stack([xs[order], ts[order]]), rect=rect, seed=seed)

    @property
    def size(self) -> int:
        return len(self.points)

    def subset(self, x_lo, x_hi, t_lo, t_hi) -> np.ndarray:
        """Points with x in (x_lo, x_hi] and t in (t_lo, t_hi]."""
        p = self.points
        i = np.searchsorted(p[:, 0], x_lo, side="right")
        j = np.searchsorted(p[:, 0], x_hi, side="right")
        sel = p[i:j]
        return sel[(sel[:, 1] > t_lo) & (sel[:, 1] <= t_hi)]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "t"])
            for x, t in self.points:
                writer.writerow([format(x, ".17g"), format(t, ".17g")])


def longest_increasing_path(cloud: PoissonCloud, z, v) -> int:
    """Maximum chain of cloud points strictly above z and weakly below v.

    Points sharing a level with the start are excluded (strict inequality
    on both coordinates); the endpoint is inclusive.
    """
    if z[0] > v[0] or z[1] > v[1]:
        raise DomainError(f"points not ordered: {z} vs {v}")
    pts = cloud.subset(z[0], v[0], z[1], v[1])
    return int(K.lis_length(np.ascontiguousarray(pts[:, 1])))


def chain_length_bound(area: float, tol: float) -> int:
    """Smallest k whose chain-count bound area^k / (k!)^2 falls below tol."""
    if area <= 0.0:
        return 0
    log_area = math.log(max(area, 1e-300))
    log_tol = math.log(tol)
    k = 1
    log_bound = log_area
    while log_bound > log_tol:
        k += 1
        log_bound += log_area - 2.0 * math.log(k)
        if k > 100_000_000:
            raise ArithmeticError("chain bound did not converge")
    return k


def _candidate_values(nu: CountingProcess, locs: np.ndarray, masses: np.ndarray):
    """Signed counting values at atom locations.

    For a positive location the atom's own mass is included (mass in
    (0, z]); for a negative one it is excluded (minus the mass in (z, 0]).
    Values dominate every non-atom foot in the adjacent flat stretch.
    """
    cum = np.cumsum(masses)
    neg_count = int(np.searchsorted(locs, 0.0, side="left"))
    neg_total = cum[neg_count - 1] if neg_count else 0
    vals = np.where(locs > 0, cum - neg_total, -(neg_total - cum))
    return vals.astype(np.float64) + (nu.extra_mass_at_zero if nu.extra_mass_at_zero else 0) * (
        locs > 0
    )


def _left_cutoff(nu: CountingProcess, x: float, t: float, trunc_tol: float) -> float:
    """A foot position below which no candidate can win, with certainty
    1 - trunc_tol against the chain-count bound."""
    b = nu.left_tail.density()
    if b <= 0.0:
        raise DomainError(
            "left density condition violated; the boundary supremum is infinite"
        )
    if isinstance(nu.left_tail, PoissonTail):
        # random left mass concentrates on its mean; halving the rate makes
        # the linear-loss argument hold up to an exponentially small event
        b = b / 2.0
    lo = min(0.0, nu.window[0]) - max(8.0, 2.0 * t)
    best_known = float(nu.nu(0.0))
    while True:
        # candidates beyond lo lose boundary mass at rate >= b while the
        # certified chain gain grows only like sqrt(area); once the gain's
        # slope e t / (2 sqrt(area)) is under b, the bound at lo dominates
        area = (x - lo) * t
        curvature_ok = area >= (math.e * t / (2.0 * b)) ** 2
        bound = nu.nu(lo) + chain_length_bound(area, trunc_tol) + 2.0
        if curvature_ok and bound <= best_known:
            return lo
        locs, masses = nu.materialize(lo, min(0.0, x))
        if locs.size:
            vals = _candidate_values(nu, locs, masses)
            best_known = max(best_known, float(vals.max()))
        if lo < -1e9:
            warnings.warn("left truncation for the boundary supremum not certified")
            return lo
        lo = 2.0 * lo - max(8.0, t)


def l_nu(
    nu: CountingProcess,
    cloud: PoissonCloud,
    x: float,
    t: float,
    trunc_tol: float = 1e-9,
) -> int:
    """Boundary-weighted passage value at (x, t).

    Supremum over feet z <= x of (boundary count at z) + (chain from (z, 0)
    to (x, t)).  At t = 0 this is the boundary count at x.  Feet reduce to
    the boundary atoms plus the origin; for one-sided boundaries that are
    minus infinity on the left, feet run over [0, x] only, and otherwise
    the far-left tail is cut off by the chain-count bound.
    """
    if t < 0.0:
        raise DomainError("time must be nonnegative")
    if t == 0.0:
        return int(nu.nu(x))
    if nu.left_infinite:
        cutoff = 0.0
    else:
        cutoff = _left_cutoff(nu, x, t, trunc_tol)
    locs, masses = nu.materialize(cutoff, x)
    values = _candidate_values(nu, locs, masses) if locs.size else np.empty(0)
    # the origin is always an admissible foot with the marker mass counted
    marks = np.concatenate([locs, [0.0]]) if x >= 0.0 else locs
    vals = np.concatenate([values, [float(nu.extra_mass_at_zero)]]) if x >= 0.0 else values
    if marks.size == 0:
        return 0
    order = np.argsort(marks)[::-1]
    marks_desc = np.ascontiguousarray(marks[order])
    vals_desc = vals[order]
    pts = cloud.subset(marks_desc[-1], x, 0.0, t)
    xs_desc = np.ascontiguousarray(pts[::-1, 0])
    ys_desc = np.ascontiguousarray(pts[::-1, 1])
    chains = K.suffix_chain_counts(xs_desc, ys_desc, marks_desc)
    return int((vals_desc + chains).max())


class BoundaryPassage:
    """Memoized boundary-weighted passage values for one boundary and cloud."""

    def __init__(self, nu: CountingProcess, cloud: PoissonCloud):
        self.nu = nu
        self.cloud = cloud
        self._memo: dict[tuple[float, float], int] = {}

    def value(self, x: float, t: float) -> int:
        key = (x, t)
        if key not in self._memo:
            self._memo[key] = l_nu(self.nu, self.cloud, x, t)
        return self._memo[key]

    def increment(self, x: float, y: float, t: float) -> int:
        """Particle count of the evolved configuration on (x, y]."""
        return self.value(y, t) - self.value(x, t)


@dataclass(frozen=True)
class DominationWitness:
    lhs: int
    rhs: int
    x: float
    y: float
    t: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def domination_check(
    nu: CountingProcess,
    cloud: PoissonCloud,
    x: float,
    y: float,
    t: float,
    y_second_class: float,
) -> DominationWitness:
    """Evolved-boundary increments never beat the free increments.

    Checks L_nu(y,t) - L_nu(x,t) <= L(0,(y,t)) - L(0,(x,t)) for
    0 <= x <= y strictly left of the second-class particle.  The
    precondition is reported distinctly because the inequality genuinely
    can fail beyond the second-class particle.
    """
    if not (0.0 <= x <= y):
        raise PreconditionError("need 0 <= x <= y")
    if y >= y_second_class:
        raise PreconditionError(
            f"y={y} is not left of the second-class particle at {y_second_class}"
        )
    lhs = l_nu(nu, cloud, y, t) - l_nu(nu, cloud, x, t)
    origin = (0.0, 0.0)
    rhs = longest_increasing_path(cloud, origin, (y, t)) - longest_increasing_path(
        cloud, origin, (x, t)
    )
    return DominationWitness(lhs=lhs, rhs=rhs, x=x, y=y, t=t)


# ---------------------------------------------------------------------------
# equilibrium intensity along the axis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquilibriumReport:
    intensity: float
    counts: np.ndarray
    ks_statistic: float
    p_value: float

    @property
    def empirical_mean(self) -> float:
        return float(self.counts.mean())


def _poisson_cdf_grid(k_max: int, mean: float) -> np.ndarray:
    out = np.empty(k_max + 1)
    term = math.exp(-mean)
    acc = term
    out[0] = acc
    for j in range(1, k_max + 1):
        term *= mean / j
        acc += term
        out[j] = acc
    return out


def _discrete_ks(counts: np.ndarray, mean: float) -> float:
    k_max = int(counts.max())
    cdf = _poisson_cdf_grid(k_max, mean)
    ks = np.arange(0, k_max + 1)
    ecdf = np.searchsorted(np.sort(counts), ks, side="right") / len(counts)
    return float(np.abs(ecdf - cdf).max())


def equilibrium_intensity_check(
    alpha: float,
    distance: float,
    n_intervals: int,
    seed: int = 0,
    intervals_per_cloud: int = 100,
    null_sims: int = 200,
) -> EquilibriumReport:
    """Unit-interval passage-count increments toward a far ray corner.

    Collects L((j,0), z) - L((j+1,0), z) over disjoint unit intervals on
    the axis, across independent clouds, and compares the counts against
    the Poisson law of intensity sqrt(tan(alpha)) through a discrete
    Kolmogorov-Smirnov distance with a parametric-bootstrap p-value.
    These are finite-distance approximations of the equilibrium counts.
    """
    if not (0.0 < alpha < math.pi / 2.0):
        raise DomainError("alpha must lie in (0, pi/2)")
    target = math.sqrt(math.tan(alpha))
    zx = distance * math.cos(alpha)
    zt = distance * math.sin(alpha)
    if intervals_per_cloud + 1 >= zx:
        raise InvalidParameterError("ray corner too close for that many intervals")
    chunks = []
    n_clouds = math.ceil(n_intervals / intervals_per_cloud)
    for c in range(n_clouds):
        cloud = PoissonCloud.generate(seed + 7919 * c, (0.0, zx, 0.0, zt))
        marks_desc = np.arange(intervals_per_cloud, -1, -1, dtype=np.float64)
        pts = cloud.points
        xs_desc = np.ascontiguousarray(pts[::-1, 0])
        ys_desc = np.ascontiguousarray(pts[::-1, 1])
        g_desc = K.suffix_chain_counts(xs_desc, ys_desc, marks_desc)
        g = g_desc[::-1]  # g[j] = chain count from foot (j, 0)
        chunks.append(g[:-1] - g[1:])
    counts = np.concatenate(chunks)[:n_intervals]
    stat = _discrete_ks(counts, target)
    rng = np.random.default_rng(
        np.random.SeedSequence([abs(int(seed)) & (2**63 - 1), 0xB007])
    )
    null = np.empty(null_sims)
    for s in range(null_sims):
        null[s] = _discrete_ks(rng.poisson(target, len(counts)), target)
    p_value = float((null >= stat - 1e-12).mean())
    return EquilibriumReport(
        intensity=target, counts=counts, ks_statistic=stat, p_value=p_value
    )
