"""Forward particle simulations: coupled exclusion dynamics with a
discrepancy site, the Hammersley system with a second-class particle, and
batch empirical speed distributions.

Finite windows stand in for the infinite systems.  For the exclusion
process the discrepancy can reach distance t plus fluctuations, and edge
artifacts drift inward only when the left density falls below one half or
the right density rises above it, so the window is sized from the tail
densities with a fluctuation margin and the run aborts if the discrepancy
ever nears an edge.  For the Hammersley system all motion is leftward,
which makes in-window occupancy exact; the left edge is padded by the
distance its perturbations can travel, following the characteristic speed
of the left-density region.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels as K
from .errors import DriftError, InvalidParameterError, WindowExhaustedError
from .limit_laws import LimitLaw
from .profiles import CountingProcess, TasepProfile

__all__ = [
    "ClockField",
    "CoupledTrajectory",
    "TasepTrajectory",
    "YTrajectory",
    "SpeedCdfReport",
    "tasep_window",
    "tasep_evolve_reference",
    "tasep_evolve",
    "tasep_speed_samples",
    "hammersley_window",
    "hammersley_second_class",
    "hammersley_speed_samples",
    "hammersley_dual_routes",
    "empirical_speed_cdf",
]

_GUARD = 4


# ---------------------------------------------------------------------------
# explicit clock field and the slow reference coupling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClockField:
    """Per-site Poisson(1) ring times on a window, deterministic in the seed."""

    seed: int
    site_lo: int
    site_hi: int
    t_max: float

    def events(self, site: int) -> np.ndarray:
        if not (self.site_lo <= site <= self.site_hi):
            raise InvalidParameterError(f"site {site} outside the clock window")
        ss = np.random.SeedSequence(
            [abs(int(self.seed)) & (2**63 - 1), site + (1 << 31), 0xC10C]
        )
        rng = np.random.default_rng(ss)
        n = rng.poisson(self.t_max)
        return np.sort(rng.uniform(0.0, self.t_max, n))

    def merged(self) -> tuple[np.ndarray, np.ndarray]:
        """(times, sites) of all rings in time order."""
        times = []
        sites = []
        for s in range(self.site_lo, self.site_hi + 1):
            ev = self.events(s)
            times.append(ev)
            sites.append(np.full(ev.size, s, dtype=np.int64))
        t = np.concatenate(times)
        x = np.concatenate(sites)
        order = np.argsort(t, kind="stable")
        return t[order], x[order]


@dataclass(frozen=True)
class CoupledTrajectory:
    """Reference basic-coupling run holding both full configurations."""

    times: np.ndarray
    discrepancy: np.ndarray
    eta_final: dict[int, int]
    eta_prime_final: dict[int, int]


def tasep_evolve_reference(
    eta: TasepProfile, clocks: ClockField, check_invariant: bool = True
) -> CoupledTrajectory:
    """Evolve both coupled copies through the same rings, event by event.

    The second copy starts with an extra particle at the origin.  Slow and
    explicit on purpose: it re-derives the discrepancy from the two full
    configurations at every event, which is what the fast kernel's
    single-array representation is checked against.
    """
    lo, hi = clocks.site_lo, clocks.site_hi
    a = {s: int(eta.eta(s)) for s in range(lo, hi + 1)}
    a[0] = 0
    b = dict(a)
    b[0] = 1
    times, sites = clocks.merged()
    xs = np.empty(times.size, dtype=np.int64)
    for i in range(times.size):
        s = int(sites[i])
        if s + 1 <= hi:
            if a[s] == 1 and a[s + 1] == 0:
                a[s], a[s + 1] = 0, 1
            if b[s] == 1 and b[s + 1] == 0:
                b[s], b[s + 1] = 0, 1
        diff = [site for site in range(lo, hi + 1) if a[site] != b[site]]
        if check_invariant and len(diff) != 1:
            raise AssertionError(f"coupling broken at event {i}: diff sites {diff}")
        xs[i] = diff[0] if diff else 0
    return CoupledTrajectory(times=times, discrepancy=xs, eta_final=a, eta_prime_final=b)


# ---------------------------------------------------------------------------
# fast exclusion drivers
# ---------------------------------------------------------------------------


def tasep_window(profile: TasepProfile, t_max: float, margin: float | None = None):
    """Site window sized from the tail densities.

    The discrepancy's reachable range is (1 - 2 p') t to (1 - 2 p) t; edge
    artifacts drift inward at speed max(0, 2p - 1) from the right and
    max(0, 1 - 2p') from the left.  A fluctuation margin tops both off.
    """
    p, p_prime = profile.densities()
    if margin is None:
        margin = max(64.0, 5.0 * t_max ** (2.0 / 3.0))
    u_hi = 1.0 - 2.0 * p
    u_lo = 1.0 - 2.0 * p_prime
    x_hi = int(math.ceil(t_max * abs(u_hi) + margin))
    x_lo = -int(math.ceil(t_max * abs(u_lo) + margin))
    return x_lo, x_hi


def _tasep_initial(profile: TasepProfile, x_lo: int, x_hi: int, seed: int):
    eta0 = profile.with_seed(seed).eta_window(x_lo, x_hi)
    eta0 = eta0.astype(np.uint8)
    origin = -x_lo
    eta0[origin] = 0
    return eta0, origin


@dataclass(frozen=True)
class TasepTrajectory:
    times: np.ndarray
    positions: np.ndarray


def tasep_evolve(
    profile: TasepProfile,
    t_max: float,
    sample_times=None,
    seed: int = 0,
    window: tuple[int, int] | None = None,
) -> TasepTrajectory:
    """One discrepancy trajectory under the graphical construction."""
    x_lo, x_hi = window if window is not None else tasep_window(profile, t_max)
    if sample_times is None:
        sample_times = np.linspace(0.0, t_max, 201)
    sample_times = np.asarray(sample_times, dtype=np.float64)
    eta0, origin = _tasep_initial(profile, x_lo, x_hi, seed)
    out, ok, _ = K.tasep_trajectory(eta0, origin, sample_times, seed, 0, _GUARD)
    if not ok:
        raise WindowExhaustedError(
            "discrepancy reached the window edge; enlarge the margin"
        )
    return TasepTrajectory(times=sample_times, positions=out + x_lo)


def tasep_speed_samples(
    profile: TasepProfile,
    t_max: float,
    replicas: int,
    seed: int = 0,
    window: tuple[int, int] | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Discrepancy speeds X(t)/t over independent replicas.

    Each replica redraws any random tails of the profile (the limiting law
    averages over random configurations) and runs its own event stream;
    results are indexed by replica, so worker scheduling cannot change
    them.
    """
    x_lo, x_hi = window if window is not None else tasep_window(profile, t_max)
    n_sites = x_hi - x_lo + 1
    rng = np.random.default_rng(np.random.SeedSequence([abs(seed) & (2**63 - 1), 0x7E5]))
    counts = rng.poisson((n_sites - 1) * t_max, size=replicas)
    speeds = np.empty(replicas)

    def run(r: int) -> None:
        eta0, origin = _tasep_initial(profile, x_lo, x_hi, seed * 1_000_003 + r)
        x, ok = K.tasep_final_state(eta0, origin, counts[r], seed, r, _GUARD)
        if not ok:
            raise WindowExhaustedError(
                f"replica {r}: discrepancy reached the window edge"
            )
        speeds[r] = (x + x_lo) / t_max

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(run, range(replicas)))
    else:
        for r in range(replicas):
            run(r)
    return speeds


# ---------------------------------------------------------------------------
# Hammersley drivers
# ---------------------------------------------------------------------------


def hammersley_window(nu: CountingProcess, t_max: float, margin: float | None = None):
    """Space window for the particle dynamics.

    The second-class particle can reach t / a^2 plus fluctuations (a the
    right density); left-edge effects travel right at the characteristic
    speed t / b^2 of the left-density region.
    """
    a, b = nu.densities()
    if a <= 0.0:
        raise DriftError("second-class dynamics need atoms to the right of 0")
    if b <= 0.0:
        raise DriftError("left density condition violated")
    if margin is None:
        margin = max(32.0, 6.0 * t_max ** (2.0 / 3.0))
    x_hi = t_max / a**2 + margin
    x_lo = -(t_max / b**2 + margin)
    return x_lo, x_hi


@dataclass(frozen=True)
class YTrajectory:
    times: np.ndarray
    positions: np.ndarray

    @property
    def final(self) -> float:
        return float(self.positions[-1])


def _materialize_initial(nu: CountingProcess, x_lo: float, x_hi: float, rng):
    locs, masses = nu.materialize(x_lo, x_hi, rng=rng)
    parts0 = np.repeat(locs, masses)
    cap = parts0.size + int(x_hi - x_lo) + 4096
    return parts0, cap


def hammersley_second_class(
    nu: CountingProcess,
    t_max: float,
    seed: int = 0,
    sample_times=None,
    window: tuple[float, float] | None = None,
) -> YTrajectory:
    """Second-class particle trajectory for one replica.

    The marker rides on the configuration of nu itself; random boundary
    atoms are redrawn per seed (the limit law averages over them).
    """
    x_lo, x_hi = window if window is not None else hammersley_window(nu, t_max)
    if sample_times is None:
        sample_times = np.linspace(0.0, t_max, 201)
    sample_times = np.asarray(sample_times, dtype=np.float64)
    rng = np.random.default_rng(np.random.SeedSequence([abs(seed) & (2**63 - 1), 0x4A11]))
    parts0, cap = _materialize_initial(nu, x_lo, x_hi, rng)
    ys, status = K.hammersley_y_evolution(parts0, cap, x_lo, x_hi, sample_times, seed, 0)
    if status != 0:
        raise WindowExhaustedError(f"second-class particle left the window (status {status})")
    return YTrajectory(times=sample_times, positions=ys)


def hammersley_speed_samples(
    nu: CountingProcess,
    t_max: float,
    replicas: int,
    seed: int = 0,
    window: tuple[float, float] | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Second-class speeds Y(t)/t over independent replicas."""
    x_lo, x_hi = window if window is not None else hammersley_window(nu, t_max)
    sample_times = np.array([t_max], dtype=np.float64)
    speeds = np.empty(replicas)

    def run(r: int) -> None:
        rng = np.random.default_rng(
            np.random.SeedSequence([abs(seed) & (2**63 - 1), r, 0x4A11])
        )
        parts0, cap = _materialize_initial(nu, x_lo, x_hi, rng)
        ys, status = K.hammersley_y_evolution(
            parts0, cap, x_lo, x_hi, sample_times, seed, r
        )
        if status != 0:
            raise WindowExhaustedError(f"replica {r} left the window (status {status})")
        speeds[r] = ys[0] / t_max

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(run, range(replicas)))
    else:
        for r in range(replicas):
            run(r)
    return speeds


def hammersley_frozen_realization(
    nu: CountingProcess,
    t_max: float,
    seed: int = 0,
    window: tuple[float, float] | None = None,
):
    """One realization shared between routes: (frozen boundary, cloud, Y).

    Materializes the boundary atoms once, runs the particle dynamics on an
    explicit time-ordered cloud, and returns the atoms repackaged as an
    explicit counting process (tails continuing beyond the window) so that
    passage computations see exactly what the dynamics saw.
    """
    from .hammersley_lpp import PoissonCloud
    from .profiles import EmptyTail, GridTail

    if window is None:
        x_lo, x_hi = hammersley_window(nu, t_max, margin=max(16.0, 3.0 * t_max))
    else:
        x_lo, x_hi = window
    rng = np.random.default_rng(np.random.SeedSequence([abs(seed) & (2**63 - 1), 0xD0A1]))
    locs, masses = nu.materialize(x_lo, x_hi, rng=rng)
    parts0 = np.repeat(locs, masses)
    cap = parts0.size + int(x_hi - x_lo) + 4096
    cloud = PoissonCloud.generate(seed * 31 + 7, (x_lo, x_hi, 0.0, t_max))
    order = np.argsort(cloud.points[:, 1])
    event_x = np.ascontiguousarray(cloud.points[order, 0])
    y_dyn, status = K.hammersley_y_explicit(parts0, cap, event_x)
    if status != 0:
        raise WindowExhaustedError(f"dynamics route left the window (status {status})")
    b = nu.left_tail.density()
    frozen = CountingProcess(
        locations=locs,
        masses=masses,
        window=(x_lo - 1.0, x_hi + 1.0),
        left_tail=GridTail(b) if b > 0 else EmptyTail(),
        right_tail=EmptyTail(),
        seed=seed,
    )
    return frozen, cloud, float(y_dyn)


def hammersley_dual_routes(
    nu: CountingProcess,
    t_max: float,
    seed: int = 0,
    window: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """Second-class position by dynamics and by boundary comparison.

    Both routes see the same boundary atoms and the same cloud; the
    comparison route locates the first foot where the one-sided passage
    value from the right boundary catches the one from the left, which is
    the same position the coupled dynamics tracks.  Used as an exactness
    check on moderate instances.
    """
    from .hammersley_lpp import l_nu

    frozen, cloud, y_dyn = hammersley_frozen_realization(nu, t_max, seed, window)
    nu_plus = frozen.plus_part()
    nu_minus = frozen.minus_part()
    locs = frozen.locations

    def plus_wins(x: float) -> bool:
        return l_nu(nu_plus, cloud, x, t_max) >= l_nu(nu_minus, cloud, x, t_max)

    cands = np.unique(
        np.concatenate(
            [[0.0], locs[locs > 0], cloud.points[cloud.points[:, 0] > 0][:, 0]]
        )
    )
    if not plus_wins(float(cands[-1])):
        return float(y_dyn), math.inf
    lo_i, hi_i = 0, len(cands) - 1
    while lo_i < hi_i:  # smallest candidate where the right side has caught up
        mid = (lo_i + hi_i) // 2
        if plus_wins(float(cands[mid])):
            hi_i = mid
        else:
            lo_i = mid + 1
    return float(y_dyn), float(cands[lo_i])


# ---------------------------------------------------------------------------
# batch empirical laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpeedCdfReport:
    model: str
    t: float
    replicas: int
    seed: int
    speeds: np.ndarray
    law_label: str
    ks_statistic: float
    ks_pvalue: float

    def passed(self, threshold: float) -> bool:
        return self.ks_statistic <= threshold

    def rows(self):
        for r, s in enumerate(self.speeds):
            yield (self.model, self.seed, r, self.t, s)


def empirical_speed_cdf(
    model: str,
    profile: TasepProfile | CountingProcess,
    t: float,
    replicas: int,
    law: LimitLaw,
    seed: int = 0,
    workers: int = 1,
) -> SpeedCdfReport:
    """Simulate speeds and compare their empirical law to a limit law.

    The Kolmogorov-Smirnov distance is taken against the law's cumulative
    form; finite-time spread past the support edges lands in the statistic
    on purpose (that is what the comparison is measuring).
    """
    if model == "tasep":
        speeds = tasep_speed_samples(profile, t, replicas, seed=seed, workers=workers)
    elif model == "hammersley":
        speeds = hammersley_speed_samples(profile, t, replicas, seed=seed, workers=workers)
    else:
        raise InvalidParameterError("model must be 'tasep' or 'hammersley'")
    stat, pvalue = stats.kstest(speeds, np.vectorize(law.cdf))
    return SpeedCdfReport(
        model=model,
        t=t,
        replicas=replicas,
        seed=seed,
        speeds=np.sort(speeds),
        law_label=law.label,
        ks_statistic=float(stat),
        ks_pvalue=float(pvalue),
    )
