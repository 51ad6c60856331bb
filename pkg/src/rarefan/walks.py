"""Environment random walks and certified supremum-comparison estimators.

The limiting speed laws reduce to the probability that one negative-drift
walk's all-time supremum exceeds another's.  Both suprema run over
infinitely many indices, so the estimators truncate adaptively: a side
stops once it is past the explicit core of its profile and has fallen a
gap C below its running maximum, where C is chosen from an exponential
(Lundberg-type) tail bound so that the probability of the discarded future
ever exceeding the recorded maximum is below ``tol``.

The gap works as follows.  For tail steps with independent increments
whose one-cycle moment generating function has a root E[exp(theta Z)] = 1
with theta > 0, the future supremum W of the post-truncation walk obeys
P(W >= c) <= exp(-theta c), and a partial cycle can add at most its
up-jumps A, giving P(A + W >= c) <= E[exp(theta A)] exp(-theta c).  With
prefactor = E[exp(theta A)] the gap C = (log prefactor + log(1/tol)) /
theta certifies the stop.  Down-only tails stop immediately with a zero
certificate; up-only tails mean the supremum is infinite and are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import DriftError, InvalidParameterError
from .profiles import (
    BernoulliTail,
    ConstantTail,
    CountingProcess,
    EmptyTail,
    FloorDefectTail,
    GridTail,
    PeriodicTail,
    PoissonTail,
    TasepProfile,
)

__all__ = [
    "WalkEnvironment",
    "SupEstimate",
    "SupCompareResult",
    "sample_environment_walk",
    "walk_supremum",
    "estimate_sup_compare",
    "hammersley_sup_compare",
    "wilson_interval",
]


@dataclass(frozen=True)
class WalkEnvironment:
    """An intensity parameter attached to a profile, with its rng seed."""

    profile: TasepProfile
    rho: float
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise InvalidParameterError("rho must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class SupEstimate:
    """A realized walk supremum with its truncation certificate."""

    value: float
    truncation_n: int
    certificate: float


@dataclass(frozen=True)
class SupCompareResult:
    """Monte Carlo estimate of P(sup_minus >= sup_plus)."""

    estimate: float
    ci_low: float
    ci_high: float
    wins: int
    replicas: int
    certificate: float
    sup_plus: np.ndarray
    sup_minus: np.ndarray

    @property
    def ci_halfwidth(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


def wilson_interval(wins: int, n: int, z: float = 1.96) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    phat = wins / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# ---------------------------------------------------------------------------
# direct walk sampling (diagnostics and small-scale tests)
# ---------------------------------------------------------------------------


def sample_environment_walk(
    env: WalkEnvironment, side: str, n: int, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Partial sums of the environment walk.

    side '+' returns S_1..S_n (n values); side '-' returns S_0..S_{-n}
    (n + 1 values, the k = 0 increment included).  Up steps have rate
    1 - rho at particles (side '+') and rate rho at holes (side '-').
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(env.seed)
    rho = env.rho
    if side == "+":
        occ = env.profile.bar_window(1, n).astype(bool)
    elif side == "-":
        occ = env.profile.bar_window(-n, 0)[::-1].astype(bool)
    else:
        raise InvalidParameterError("side must be '+' or '-'")
    ups = rng.exponential(1.0 / (1.0 - rho), occ.size)
    downs = rng.exponential(1.0 / rho, occ.size)
    if side == "+":
        incr = np.where(occ, ups, -downs)
    else:
        incr = np.where(occ, -ups, downs)
    return np.cumsum(incr)


def walk_supremum(
    env: WalkEnvironment,
    side: str,
    tol: float = 1e-6,
    rng: np.random.Generator | None = None,
    max_steps: int = 10_000_000,
) -> SupEstimate:
    """One realized supremum with adaptive truncation.

    Walks until past the profile core and ``gap`` below the running
    maximum; the certificate bounds the probability that the discarded
    future would have beaten the recorded value.
    """
    profile = env.profile
    rho = env.rho
    rng = rng if rng is not None else np.random.default_rng(env.seed)
    tail = profile.right_tail if side == "+" else profile.left_tail
    gap = _tasep_tail_gap(tail, side, rho, tol)
    core_end = profile.window + 1
    s = 0.0
    m = -math.inf
    k = 0
    while True:
        k += 1
        kk = k if side == "+" else -(k - 1)
        occ = profile.bar(kk)
        up = (occ == 1) if side == "+" else (occ == 0)
        rate = (1.0 - rho) if (occ == 1) else rho
        step = rng.exponential(1.0 / rate)
        s += step if up else -step
        m = max(m, s)
        if k > core_end:
            if gap is None:  # down-only tail: the supremum is already final
                return SupEstimate(value=m, truncation_n=k, certificate=0.0)
            if s <= m - gap:
                return SupEstimate(value=m, truncation_n=k, certificate=tol)
        if k >= max_steps:
            raise RuntimeError("walk failed to certify its supremum")


# ---------------------------------------------------------------------------
# Lundberg gaps for the exclusion-side walks
# ---------------------------------------------------------------------------


def _root_bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _mixture_root(p_up: float, r_up: float, r_dn: float) -> float:
    """Positive root of p_up r_u/(r_u - t) + (1 - p_up) r_d/(r_d + t) = 1."""
    if p_up <= 0.0:
        raise ValueError("no up steps")
    drift = p_up / r_up - (1.0 - p_up) / r_dn
    if drift >= 0.0:
        raise DriftError(
            f"tail drift {drift:.4g} is not negative; the supremum comparison "
            "needs the intensity strictly inside its open interval"
        )

    def f(theta):
        return (
            p_up * r_up / (r_up - theta)
            + (1.0 - p_up) * r_dn / (r_dn + theta)
            - 1.0
        )

    # f(0) = 0 with negative slope; find a strictly negative point first
    lo = r_up / 2.0
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise DriftError("tail drift too close to zero to certify truncation")
    return _root_bisect(f, lo, r_up * (1.0 - 1e-12))


def _pattern_root(n_up: int, n_dn: int, r_up: float, r_dn: float) -> tuple[float, float]:
    """Positive root of the one-period mgf product; returns (theta, log prefactor)."""
    drift = n_up / r_up - n_dn / r_dn
    if drift >= 0.0:
        raise DriftError(
            f"periodic tail drift {drift:.4g} per cycle is not negative; "
            "intensity must be strictly inside its open interval"
        )

    def f(theta):
        return n_up * math.log(r_up / (r_up - theta)) + n_dn * math.log(
            r_dn / (r_dn + theta)
        )

    lo = r_up / 2.0
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise DriftError("periodic tail drift too close to zero to certify")
    theta = _root_bisect(f, lo, r_up * (1.0 - 1e-12))
    log_pref = n_up * math.log(r_up / (r_up - theta))
    return theta, log_pref


def _tasep_tail_gap(tail, side: str, rho: float, tol: float) -> float | None:
    """Certified stop gap for one side's tail; None means down-only."""
    r_up = (1.0 - rho) if side == "+" else rho
    r_dn = rho if side == "+" else (1.0 - rho)
    if isinstance(tail, ConstantTail):
        up_value = 1 if side == "+" else 0
        if tail.value != up_value:
            return None
        raise DriftError(
            "tail consists of up steps only; the supremum is infinite at this rho"
        )
    if isinstance(tail, BernoulliTail):
        p_up = tail.p if side == "+" else 1.0 - tail.p
        if p_up == 0.0:
            return None
        if p_up == 1.0:
            raise DriftError("tail consists of up steps only")
        theta = _mixture_root(p_up, r_up, r_dn)
        return math.log(1.0 / tol) / theta
    if isinstance(tail, PeriodicTail):
        ups = sum(tail.pattern) if side == "+" else len(tail.pattern) - sum(tail.pattern)
        downs = len(tail.pattern) - ups
        if ups == 0:
            return None
        if downs == 0:
            raise DriftError("tail consists of up steps only")
        theta, log_pref = _pattern_root(ups, downs, r_up, r_dn)
        return (log_pref + math.log(1.0 / tol)) / theta
    raise InvalidParameterError(f"unsupported tail for walk estimation: {tail!r}")


def _tasep_kernel_args(profile: TasepProfile, side: str, rho: float, tol: float):
    tail = profile.right_tail if side == "+" else profile.left_tail
    gap = _tasep_tail_gap(tail, side, rho, tol)
    if side == "+":
        core = profile.bar_window(1, profile.window + 1)
    else:
        core = profile.bar_window(-profile.window, 0)[::-1].copy()
    if gap is None:
        return core, K.TAIL_DOWN_ONLY, np.zeros(1, dtype=np.uint8), 0.0, 0.0
    if isinstance(tail, PeriodicTail):
        pat = np.asarray(tail.pattern, dtype=np.uint8)
        return core, K.TAIL_PERIODIC, pat, 0.0, gap
    return core, K.TAIL_BERNOULLI, np.zeros(1, dtype=np.uint8), tail.p, gap


def estimate_sup_compare(
    eta: TasepProfile,
    rho: float,
    replicas: int,
    tol: float = 1e-6,
    seed: int = 0,
    fixed_horizon: int = 0,
) -> SupCompareResult:
    """Estimate P(sup of the minus walk >= sup of the plus walk).

    Ties count as success, matching the closed comparison event.  Random
    (Bernoulli) tails are redrawn per replica: the comparison probability
    averages over the configuration when it is random.  The reported
    certificate bounds the per-replica probability that either truncated
    supremum differs from the infinite one.
    """
    if replicas < 1:
        raise InvalidParameterError("replicas must be >= 1")
    if not (0.0 < rho < 1.0):
        raise DriftError("rho must lie strictly inside (0, 1)")
    cp, code_p, pat_p, pp, gap_p = _tasep_kernel_args(eta, "+", rho, tol)
    cm, code_m, pat_m, pm, gap_m = _tasep_kernel_args(eta, "-", rho, tol)
    sup_p, sup_m, ok = K.walk_sup_pair(
        cp, cm, code_p, pat_p, pp, code_m, pat_m, pm,
        rho, gap_p, gap_m, replicas, seed, fixed_horizon, 50_000_000,
    )
    if not ok.all():
        raise RuntimeError("some replicas failed to certify their truncation")
    wins = int(np.count_nonzero(sup_m >= sup_p))
    lo, hi = wilson_interval(wins, replicas)
    return SupCompareResult(
        estimate=wins / replicas,
        ci_low=lo,
        ci_high=hi,
        wins=wins,
        replicas=replicas,
        certificate=0.0 if fixed_horizon else 2.0 * tol,
        sup_plus=sup_p,
        sup_minus=sup_m,
    )


# ---------------------------------------------------------------------------
# Hammersley-side comparison
# ---------------------------------------------------------------------------


def _grid_root_plus(lam: float, rho: float) -> float:
    """Root of theta + (rho/lam)(exp(-theta) - 1) = 0 for rho > lam."""
    if rho <= lam:
        raise DriftError(
            f"need rho > right intensity ({lam:.4g}) for a finite right supremum"
        )

    def f(theta):
        return theta + (rho / lam) * (math.exp(-theta) - 1.0)

    lo = 1.0
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise DriftError("right drift too close to zero to certify")
    hi = max(2.0, 4.0 * rho / lam)
    while f(hi) <= 0.0:
        hi *= 2.0
    return _root_bisect(f, lo, hi)


def _grid_root_minus(mu: float, rho: float) -> float:
    """Root of (rho/mu)(exp(theta) - 1) - theta = 0 for rho < mu."""
    if rho >= mu:
        raise DriftError(
            f"need rho < left intensity ({mu:.4g}) for a finite left supremum"
        )

    def f(theta):
        return (rho / mu) * (math.exp(theta) - 1.0) - theta

    lo = 1.0
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise DriftError("left drift too close to zero to certify")
    hi = 2.0
    while f(hi) <= 0.0:
        hi *= 2.0
    return _root_bisect(f, lo, hi)


def _nu_side_args(nu: CountingProcess, side: str, rho: float, tol: float):
    """(atoms, masses, tail_code, intensity, core_end, gap) for one side."""
    tail = nu.right_tail if side == "+" else nu.left_tail
    x_min, x_max = nu.window
    if side == "+":
        locs, masses = (
            nu.materialize(0.0, x_max) if x_max > 0 else (np.empty(0), np.empty(0, np.int64))
        )
        atoms = locs
        core_end = max(0.0, x_max)
    else:
        locs, masses = (
            nu.materialize(x_min, 0.0) if x_min < 0 else (np.empty(0), np.empty(0, np.int64))
        )
        atoms = -locs[::-1]
        masses = masses[::-1].copy()
        core_end = max(0.0, -x_min)
    if isinstance(tail, EmptyTail):
        if side == "-":
            # the Poisson stream keeps climbing left of the last atom
            raise DriftError("empty left tail makes the left supremum infinite")
        return atoms, masses, K.NU_TAIL_EMPTY, 0.0, core_end, 0.0
    if isinstance(tail, GridTail):
        lam = tail.intensity
        theta = _grid_root_plus(lam, rho) if side == "+" else _grid_root_minus(lam, rho)
        gap = 1.0 + math.log(1.0 / tol) / theta
        return atoms, masses, K.NU_TAIL_GRID, lam, core_end, gap
    if isinstance(tail, PoissonTail):
        lam = tail.intensity
        if side == "+":
            if rho <= lam:
                raise DriftError(f"need rho > right intensity ({lam:.4g})")
            theta = math.log(rho / lam)
        else:
            if rho >= lam:
                raise DriftError(f"need rho < left intensity ({lam:.4g})")
            theta = math.log(lam / rho)
        gap = math.log(1.0 / tol) / theta
        return atoms, masses, K.NU_TAIL_POISSON, lam, core_end, gap
    if isinstance(tail, FloorDefectTail):
        if side != "+":
            raise InvalidParameterError("floor-defect tail is right-sided only")
        # atoms are a subset of the unit grid, so the unit-grid bound
        # certifies the stop from any position; the exhaust code only backs
        # up the generous materialization horizon
        theta = _grid_root_plus(1.0, rho)
        gap = 1.0 + math.log(1.0 / tol) / theta
        horizon = max(256.0, 64.0 * (gap + 8.0) / max(rho - 1.0, 1e-3))
        locs, ms = nu.materialize(0.0, horizon)
        return locs, ms, K.NU_TAIL_EXHAUST, 0.0, 0.0, gap
    raise InvalidParameterError(f"unsupported tail for walk estimation: {tail!r}")


def hammersley_sup_compare(
    nu: CountingProcess,
    rho: float,
    replicas: int,
    tol: float = 1e-6,
    seed: int = 0,
    fixed_horizon: float = 0.0,
) -> SupCompareResult:
    """Estimate P(sup_{z>=0} [nu(z) - N(z)] >= sup_{z<0} [nu(z) - N(z)]).

    N is a fresh Poisson(rho) stream per replica.  The supremum over z >= 0
    is attained just after an atom of nu (or is 0 at z = 0); over z < 0 the
    within-gap maximum is the value just before the next atom going left.
    Poisson-tail atom configurations are also redrawn per replica, matching
    laws stated for random configurations.

    Note the orientation: for the limiting speed law this estimates
    P(V <= v) at rho = 1/sqrt(v), the plus side winning means the
    second-class particle is to the LEFT of the characteristic.
    """
    if replicas < 1:
        raise InvalidParameterError("replicas must be >= 1")
    if rho <= 0.0:
        raise DriftError("rho must be positive")
    ap, mp, code_p, int_p, end_p, gap_p = _nu_side_args(nu, "+", rho, tol)
    am, mm, code_m, int_m, end_m, gap_m = _nu_side_args(nu, "-", rho, tol)
    sup_p, sup_m, ok = K.nu_walk_sup_pair(
        ap, mp, code_p, int_p,
        am, mm, code_m, int_m,
        rho, gap_p, gap_m, end_p, end_m,
        replicas, seed, fixed_horizon, 50_000_000,
    )
    if not ok.all():
        raise RuntimeError(
            "some replicas exhausted their materialized atoms before certifying"
        )
    wins = int(np.count_nonzero(sup_p >= sup_m))
    lo, hi = wilson_interval(wins, replicas)
    return SupCompareResult(
        estimate=wins / replicas,
        ci_low=lo,
        ci_high=hi,
        wins=wins,
        replicas=replicas,
        certificate=0.0 if fixed_horizon else 2.0 * tol,
        sup_plus=sup_p,
        sup_minus=sup_m,
    )
