"""Initial conditions for the exclusion and Hammersley particle systems.

Two kinds of profile live here:

* :class:`TasepProfile` is a 0/1 occupancy configuration on the integers,
  stored as an explicit core window plus parametric tails (constant,
  periodic, or i.i.d. Bernoulli).  From it we derive the shifted
  configuration with a hole/particle pair at the origin (``bar``), and the
  down-right lattice path ``sigma`` that encodes the configuration as a
  growth profile.

* :class:`CountingProcess` is a locally finite atom measure on the reals
  with integer masses, using the signed convention ``nu(y) = nu((0, y])``
  for ``y >= 0`` and ``nu(y) = -nu((y, 0])`` for ``y < 0``.

Profiles are immutable after construction.  Random tails are materialized
through a counter-based hash keyed by ``(seed, site)``, so the value of a
site never depends on query order and two profiles with the same seed agree
sitewise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .errors import InvalidParameterError, UnsupportedTailError

__all__ = [
    "ConstantTail",
    "PeriodicTail",
    "BernoulliTail",
    "GridTail",
    "PoissonTail",
    "EmptyTail",
    "FloorDefectTail",
    "TasepProfile",
    "BarProfile",
    "SigmaPath",
    "CountingProcess",
    "DensityReport",
    "build_builtin",
    "bar_transform",
    "sigma_from_eta",
    "asymptotic_densities",
    "profile_to_config",
    "profile_from_config",
]


# ---------------------------------------------------------------------------
# counter-based site randomness (splitmix64 on (seed, counter))
# ---------------------------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def site_uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Deterministic uniforms in [0, 1), one per counter, keyed by seed.

    Pure function of (seed, counter): query order and repetition cannot
    change the values.
    """
    with np.errstate(over="ignore"):
        z = np.asarray(counters, dtype=np.int64).view(np.uint64) * _GOLDEN
        z = z + _mix64_array(np.uint64(seed) * _MIX2 + _GOLDEN)
        return (_mix64_array(z) >> np.uint64(11)).astype(np.float64) * _U53


# ---------------------------------------------------------------------------
# tail descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantTail:
    """Occupancy equal to ``value`` on every site of the tail."""

    value: int

    def density(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class PeriodicTail:
    """Occupancy ``pattern[k % len(pattern)]``, indexed by absolute site."""

    pattern: tuple[int, ...]

    def density(self) -> float:
        return sum(self.pattern) / len(self.pattern)


@dataclass(frozen=True)
class BernoulliTail:
    """I.i.d. Bernoulli(p) occupancies, materialized lazily per site."""

    p: float

    def density(self) -> float:
        return self.p


@dataclass(frozen=True)
class GridTail:
    """Unit atoms on the global grid {k / intensity : k integer}."""

    intensity: float

    def density(self) -> float:
        return self.intensity

    def density_bound(self) -> float:
        return self.intensity


@dataclass(frozen=True)
class PoissonTail:
    """Unit atoms of a Poisson process with the given intensity."""

    intensity: float

    def density(self) -> float:
        return self.intensity

    def density_bound(self) -> float:
        # Poisson atoms have no deterministic density bound; report the mean.
        return self.intensity


@dataclass(frozen=True)
class EmptyTail:
    """No atoms at all."""

    def density(self) -> float:
        return 0.0

    def density_bound(self) -> float:
        return 0.0


@dataclass(frozen=True)
class FloorDefectTail:
    """Unit atoms at integers n >= 1 where floor(n) - floor(n**(2/3)) jumps.

    The counting function grows like y minus a sublinear defect, so the
    asymptotic density is 1 while every finite prefix runs strictly below
    density 1.  Only meaningful as a right tail.
    """

    def density(self) -> float:
        return 1.0

    def density_bound(self) -> float:
        return 1.0

    @staticmethod
    def count_up_to(y: float) -> int:
        if y < 1.0:
            return 0
        n = math.floor(y)
        return n - math.floor(math.floor(n) ** (2.0 / 3.0))


TasepTail = ConstantTail | PeriodicTail | BernoulliTail
CountingTail = GridTail | PoissonTail | EmptyTail | FloorDefectTail


# ---------------------------------------------------------------------------
# TASEP profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TasepProfile:
    """A 0/1 configuration on Z: explicit core plus parametric tails.

    ``core`` must cover every site in ``[-window, window]``; sites outside
    are answered by the tails.  The occupancy at the origin is stored but
    never consulted by the bar transform.
    """

    core: Mapping[int, int]
    window: int
    left_tail: TasepTail
    right_tail: TasepTail
    seed: int = 0
    family: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for k in range(-self.window, self.window + 1):
            if k not in self.core:
                raise InvalidParameterError(
                    f"core must cover [-{self.window}, {self.window}]; missing site {k}"
                )
        for k, v in self.core.items():
            if v not in (0, 1):
                raise InvalidParameterError(f"occupancy at site {k} is {v}, not 0/1")

    # -- site access --------------------------------------------------------

    def eta(self, k: int) -> int:
        if -self.window <= k <= self.window:
            return self.core[k]
        tail = self.right_tail if k > 0 else self.left_tail
        if isinstance(tail, ConstantTail):
            return tail.value
        if isinstance(tail, PeriodicTail):
            return tail.pattern[k % len(tail.pattern)]
        # Bernoulli: counter-based, memoization-free determinism
        u = site_uniforms(self.seed, np.array([k], dtype=np.int64))[0]
        return int(u < tail.p)

    def eta_window(self, lo: int, hi: int) -> np.ndarray:
        """Occupancies on [lo, hi] inclusive, vectorized."""
        ks = np.arange(lo, hi + 1, dtype=np.int64)
        out = np.empty(ks.size, dtype=np.uint8)
        for mask, tail in (
            (ks > self.window, self.right_tail),
            (ks < -self.window, self.left_tail),
        ):
            if not mask.any():
                continue
            sites = ks[mask]
            if isinstance(tail, ConstantTail):
                out[mask] = tail.value
            elif isinstance(tail, PeriodicTail):
                pat = np.asarray(tail.pattern, dtype=np.uint8)
                out[mask] = pat[sites % len(pat)]
            else:
                out[mask] = site_uniforms(self.seed, sites) < tail.p
        mid = (ks >= -self.window) & (ks <= self.window)
        if mid.any():
            out[mid] = [self.core[int(k)] for k in ks[mid]]
        return out

    # -- derived objects ----------------------------------------------------

    def bar(self, k: int) -> int:
        """The transformed configuration with a hole at 0 and particle at 1."""
        if k == 0:
            return 0
        if k == 1:
            return 1
        return self.eta(k) if k < 0 else self.eta(k - 1)

    def bar_window(self, lo: int, hi: int) -> np.ndarray:
        ks = np.arange(lo, hi + 1, dtype=np.int64)
        shifted = np.where(ks > 0, ks - 1, ks)
        out = self.eta_window(int(shifted.min()), int(shifted.max()))[
            shifted - int(shifted.min())
        ].copy()
        out[ks == 0] = 0
        out[ks == 1] = 1
        return out

    def with_seed(self, seed: int) -> "TasepProfile":
        return replace(self, seed=seed)

    def densities(self) -> tuple[float, float]:
        """(right density p, left density p') read off the tail descriptors."""
        return (self.right_tail.density(), self.left_tail.density())


@dataclass(frozen=True)
class BarProfile:
    """Accessor view of the transformed configuration of a base profile."""

    base: TasepProfile

    def __call__(self, k: int) -> int:
        return self.base.bar(k)

    def window(self, lo: int, hi: int) -> np.ndarray:
        return self.base.bar_window(lo, hi)


def bar_transform(eta: TasepProfile) -> BarProfile:
    """Attach the hole/particle pair at the origin.

    The result satisfies bar(0) = 0, bar(1) = 1, bar(k) = eta(k) for k < 0
    and bar(k) = eta(k - 1) for k > 1.  eta(0) is never consulted.
    """
    return BarProfile(eta)


class SigmaPath:
    """Down-right lattice path encoding a configuration as a growth profile.

    sigma(0) = (0, 0) and sigma(k) - sigma(k-1) is (1, 0) where bar(k) = 0
    and (0, -1) where bar(k) = 1.
    """

    def __init__(self, eta: TasepProfile):
        self.eta = eta

    def segment(self, k_lo: int, k_hi: int) -> np.ndarray:
        """Points sigma(k_lo..k_hi) as an (n, 2) integer array."""
        if k_lo > k_hi:
            raise InvalidParameterError("empty sigma segment")
        lo = min(k_lo, 0)
        hi = max(k_hi, 0)
        bar = self.eta.bar_window(lo + 1, hi).astype(np.int64) if hi > lo else np.empty(0, np.int64)
        # steps for k in [lo+1, hi]
        dx = np.where(bar == 0, 1, 0)
        dy = np.where(bar == 0, 0, -1)
        xs = np.concatenate([[0], np.cumsum(dx)])
        ys = np.concatenate([[0], np.cumsum(dy)])
        # xs[i], ys[i] = sigma(lo + i) - sigma(lo); anchor so that sigma(0) = 0
        anchor = -lo
        pts = np.column_stack([xs - xs[anchor], ys - ys[anchor]])
        return pts[k_lo - lo : k_hi - lo + 1]

    def __call__(self, k: int) -> tuple[int, int]:
        p = self.segment(k, k)[0]
        return (int(p[0]), int(p[1]))


def sigma_from_eta(eta: TasepProfile, k_lo: int, k_hi: int) -> np.ndarray:
    """The sigma path segment for k in [k_lo, k_hi]."""
    return SigmaPath(eta).segment(k_lo, k_hi)


# ---------------------------------------------------------------------------
# counting processes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountingProcess:
    """Locally finite atom measure on R with integer masses.

    Atoms inside ``window = (x_min, x_max)`` are explicit; beyond the window
    the tails take over.  ``extra_mass_at_zero`` adds a marker atom at the
    origin that is counted for y >= 0 (closed on the left at 0), which is
    how a second-class particle is planted.

    ``left_infinite`` marks the one-sided variant whose value is minus
    infinity strictly left of 0.
    """

    locations: np.ndarray
    masses: np.ndarray
    window: tuple[float, float]
    left_tail: CountingTail
    right_tail: CountingTail
    seed: int = 0
    extra_mass_at_zero: int = 0
    left_infinite: bool = False
    family: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=np.float64)
        mass = np.asarray(self.masses, dtype=np.int64)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)
        if loc.shape != mass.shape:
            raise InvalidParameterError("locations and masses must have equal length")
        if loc.size and np.any(np.diff(loc) <= 0):
            raise InvalidParameterError("atom locations must be strictly increasing")
        if np.any(mass <= 0):
            raise InvalidParameterError("atom masses must be positive integers")
        if np.any(loc == 0.0):
            raise InvalidParameterError(
                "an atom exactly at the origin is represented by the marker mass"
            )
        if loc.size:
            if loc[0] <= self.window[0] or loc[-1] >= self.window[1]:
                raise InvalidParameterError("explicit atoms must lie inside the window")

    # -- counting ------------------------------------------------------------

    def nu(self, y: float) -> float:
        """Signed count: mass in (0, y] for y >= 0, minus mass in (y, 0] else.

        The marker atom at 0, if present, is counted for y >= 0.
        """
        if self.left_infinite and y < 0:
            return -math.inf
        if y >= 0:
            n = self._count_interval(0.0, y)
            return float(n + self.extra_mass_at_zero)
        return -float(self._count_interval(y, 0.0))

    def _count_interval(self, a: float, b: float) -> int:
        """Mass in (a, b] for a <= b, combining window atoms and tails."""
        if b <= a:
            return 0
        x_min, x_max = self.window
        n = 0
        lo_in, hi_in = max(a, x_min), min(b, x_max)
        if hi_in > lo_in:
            i = np.searchsorted(self.locations, lo_in, side="right")
            j = np.searchsorted(self.locations, hi_in, side="right")
            n += int(self.masses[i:j].sum())
        if b > x_max:
            n += self._tail_count(self.right_tail, max(a, x_max), b, right=True)
        if a < x_min:
            n += self._tail_count(self.left_tail, a, min(b, x_min), right=False)
        return n

    def _tail_count(self, tail: CountingTail, a: float, b: float, right: bool) -> int:
        if b <= a:
            return 0
        if isinstance(tail, EmptyTail):
            return 0
        if isinstance(tail, GridTail):
            lam = tail.intensity
            n = math.floor(b * lam) - math.floor(a * lam)
            if a < 0.0 <= b:  # the global grid has no atom at 0
                n -= 1
            return n
        if isinstance(tail, FloorDefectTail):
            if not right:
                raise UnsupportedTailError("floor-defect tail is right-sided only")
            return tail.count_up_to(b) - tail.count_up_to(a)
        if isinstance(tail, PoissonTail):
            # quenched per-unit-block counts via the counter hash
            return int(self._poisson_block_atoms(a, b).size)
        raise UnsupportedTailError(f"unknown tail {tail!r}")

    def _poisson_block_atoms(self, a: float, b: float) -> np.ndarray:
        """Quenched Poisson tail atoms in (a, b], deterministic in the seed."""
        tail = self.right_tail if a >= 0 else self.left_tail
        lam = tail.intensity
        blocks = np.arange(math.floor(a), math.ceil(b) + 1, dtype=np.int64)
        pts = []
        for blk in blocks:
            rng = np.random.default_rng(
                np.random.SeedSequence([self.seed & 0x7FFFFFFF, blk & 0x7FFFFFFF, 0x5EED])
            )
            n = rng.poisson(lam)
            if n:
                pts.append(blk + np.sort(rng.random(n)))
        if not pts:
            return np.empty(0)
        atoms = np.concatenate(pts)
        return atoms[(atoms > a) & (atoms <= b)]

    # -- materialization -----------------------------------------------------

    def materialize(self, lo: float, hi: float, rng: np.random.Generator | None = None):
        """Atoms in (lo, hi] as (locations, masses) arrays.

        With ``rng`` given, Poisson tails draw fresh atoms from it (one
        independent realization per call); without it they are quenched on
        the profile seed.
        """
        locs: list[np.ndarray] = []
        mass: list[np.ndarray] = []
        x_min, x_max = self.window
        if self.locations.size:
            i = np.searchsorted(self.locations, lo, side="right")
            j = np.searchsorted(self.locations, hi, side="right")
            locs.append(self.locations[i:j])
            mass.append(self.masses[i:j])
        for (side_lo, side_hi, tail, right) in (
            (max(lo, x_max), hi, self.right_tail, True),
            (lo, min(hi, x_min), self.left_tail, False),
        ):
            if side_hi <= side_lo or isinstance(tail, EmptyTail):
                continue
            if isinstance(tail, GridTail):
                lam = tail.intensity
                ks = np.arange(math.floor(side_lo * lam) + 1, math.floor(side_hi * lam) + 1)
                ks = ks[ks != 0]  # the global grid has no atom at 0
                locs.append(ks / lam)
                mass.append(np.ones(ks.size, dtype=np.int64))
            elif isinstance(tail, FloorDefectTail):
                ns = np.arange(max(1, math.floor(side_lo) + 1), math.floor(side_hi) + 1)
                counts = ns - np.floor(np.floor(ns) ** (2.0 / 3.0)).astype(np.int64)
                jumps = np.diff(np.concatenate([[FloorDefectTail.count_up_to(side_lo)], counts]))
                sel = jumps > 0
                locs.append(ns[sel].astype(np.float64))
                mass.append(jumps[sel].astype(np.int64))
            elif isinstance(tail, PoissonTail):
                if rng is None:
                    pts = self._poisson_block_atoms(side_lo, side_hi)
                else:
                    n = rng.poisson(tail.intensity * (side_hi - side_lo))
                    pts = np.sort(rng.uniform(side_lo, side_hi, n))
                locs.append(pts)
                mass.append(np.ones(pts.size, dtype=np.int64))
        if not locs:
            return np.empty(0), np.empty(0, dtype=np.int64)
        all_loc = np.concatenate(locs)
        all_mass = np.concatenate(mass)
        order = np.argsort(all_loc, kind="stable")
        return all_loc[order], all_mass[order]

    # -- derived processes ----------------------------------------------------

    def plus_part(self) -> "CountingProcess":
        """Restriction to [0, inf) with value minus infinity left of 0."""
        keep = self.locations > 0
        return replace(
            self,
            locations=self.locations[keep],
            masses=self.masses[keep],
            window=(0.0, self.window[1]) if self.window[1] > 0 else (0.0, 0.0),
            left_tail=EmptyTail(),
            left_infinite=True,
            family=self.family + "+",
        )

    def minus_part(self) -> "CountingProcess":
        """Process equal to 0 on [0, inf) and to nu on (-inf, 0)."""
        keep = self.locations < 0
        return replace(
            self,
            locations=self.locations[keep],
            masses=self.masses[keep],
            window=(self.window[0], 0.0) if self.window[0] < 0 else (0.0, 0.0),
            right_tail=EmptyTail(),
            extra_mass_at_zero=0,
            family=self.family + "-",
        )

    def with_marker_atom(self) -> "CountingProcess":
        """Add the second-class marker atom at the origin."""
        return replace(self, extra_mass_at_zero=self.extra_mass_at_zero + 1)

    def with_seed(self, seed: int) -> "CountingProcess":
        return replace(self, seed=seed)

    def densities(self) -> tuple[float, float]:
        """(right density a, left density b) from the tail descriptors."""
        return (self.right_tail.density(), self.left_tail.density())


# ---------------------------------------------------------------------------
# densities / rarefaction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    lower: float
    upper: float

    @property
    def rarefaction(self) -> bool:
        return self.lower < self.upper


def asymptotic_densities(profile: TasepProfile | CountingProcess) -> DensityReport:
    """Asymptotic density right of the origin (lower) and left of it (upper).

    The particle system is in the rarefaction regime exactly when
    lower < upper.  Only parametric tails carry a declared density; custom
    tails raise.
    """
    lower, upper = profile.densities()
    return DensityReport(lower=lower, upper=upper)


# ---------------------------------------------------------------------------
# builtin families
# ---------------------------------------------------------------------------


def _two_corner(x: int, y: int) -> TasepProfile:
    if not (isinstance(x, int) and isinstance(y, int) and x >= 1 and y >= 1):
        raise InvalidParameterError("two_corner requires integers x >= 1 and y >= 1")
    w = max(x, y) + 2
    core = {}
    for k in range(-w, w + 1):
        if -(x - 1) <= k < 0 or k >= y:
            core[k] = 0
        elif 0 < k <= y - 1 or k <= -x:
            core[k] = 1
        else:  # k == 0, never consulted by the bar transform
            core[k] = 0
    return TasepProfile(
        core=core,
        window=w,
        left_tail=ConstantTail(1),
        right_tail=ConstantTail(0),
        family="two_corner",
        params={"x": x, "y": y},
    )


def _periodic(k_plus: int, k_minus: int) -> TasepProfile:
    if not (isinstance(k_plus, int) and isinstance(k_minus, int) and k_plus >= 1 and k_minus >= 1):
        raise InvalidParameterError("periodic requires integers k_plus >= 1 and k_minus >= 1")
    # right of 0: blocks of k_plus holes then one particle, so eta(j) = 1 iff
    # j % (k_plus + 1) == 0 for j >= 1; left of 0 the dual pattern.
    right = PeriodicTail(tuple(1 if r == 0 else 0 for r in range(k_plus + 1)))
    left = PeriodicTail(tuple(0 if r == 0 else 1 for r in range(k_minus + 1)))
    w = k_plus + k_minus + 2
    core = {}
    for k in range(-w, w + 1):
        if k > 0:
            core[k] = 1 if k % (k_plus + 1) == 0 else 0
        elif k < 0:
            core[k] = 0 if k % (k_minus + 1) == 0 else 1
        else:
            core[k] = 0
    prof = TasepProfile(
        core=core,
        window=w,
        left_tail=left,
        right_tail=right,
        family="periodic",
        params={"k_plus": k_plus, "k_minus": k_minus},
    )
    if max(k_plus, k_minus) < 2:
        warnings.warn(
            "periodic(1, 1) has equal densities on both sides; not a rarefaction fan",
            stacklevel=3,
        )
    return prof


def _bernoulli(p1: float, p2: float, seed: int = 0) -> TasepProfile:
    if not (0.0 <= p1 < p2 <= 1.0):
        raise InvalidParameterError("bernoulli requires 0 <= p1 < p2 <= 1")
    return TasepProfile(
        core={0: 0},
        window=0,
        left_tail=BernoulliTail(p2),
        right_tail=BernoulliTail(p1),
        seed=seed,
        family="bernoulli",
        params={"p1": p1, "p2": p2},
    )


def _constant(value: int) -> TasepProfile:
    if value not in (0, 1):
        raise InvalidParameterError("constant occupancy must be 0 or 1")
    return TasepProfile(
        core={0: value},
        window=0,
        left_tail=ConstantTail(value),
        right_tail=ConstantTail(value),
        family="constant",
        params={"value": value},
    )


def _hammersley_periodic(lam: float, mu: float) -> CountingProcess:
    if not (0 < lam < mu):
        raise InvalidParameterError("hammersley_periodic requires 0 < lam < mu")
    return CountingProcess(
        locations=np.empty(0),
        masses=np.empty(0, dtype=np.int64),
        window=(0.0, 0.0),
        left_tail=GridTail(mu),
        right_tail=GridTail(lam),
        family="hammersley_periodic",
        params={"lam": lam, "mu": mu},
    )


def _hammersley_poisson(lam: float, mu: float, seed: int = 0) -> CountingProcess:
    if not (0 < lam < mu):
        raise InvalidParameterError("hammersley_poisson requires 0 < lam < mu")
    return CountingProcess(
        locations=np.empty(0),
        masses=np.empty(0, dtype=np.int64),
        window=(0.0, 0.0),
        left_tail=PoissonTail(mu),
        right_tail=PoissonTail(lam),
        seed=seed,
        family="hammersley_poisson",
        params={"lam": lam, "mu": mu},
    )


def _boundary_atom_demo(left_intensity: float, left_kind: str = "grid") -> CountingProcess:
    """Right tail with unit asymptotic density approached from below.

    The limiting speed law can carry an atom at the support edge matching
    that density.  The left side is a free parameter because only its
    density enters the rarefaction condition.
    """
    if left_intensity <= 1.0:
        raise InvalidParameterError(
            "boundary_atom_demo needs left_intensity > 1 for a rarefaction fan"
        )
    left: CountingTail
    if left_kind == "grid":
        left = GridTail(left_intensity)
    elif left_kind == "poisson":
        left = PoissonTail(left_intensity)
    else:
        raise InvalidParameterError("left_kind must be 'grid' or 'poisson'")
    return CountingProcess(
        locations=np.empty(0),
        masses=np.empty(0, dtype=np.int64),
        window=(0.0, 0.0),
        left_tail=left,
        right_tail=FloorDefectTail(),
        family="boundary_atom_demo",
        params={"left_intensity": left_intensity},
    )


_FAMILIES = {
    "two_corner": _two_corner,
    "periodic": _periodic,
    "bernoulli": _bernoulli,
    "constant": _constant,
    "hammersley_periodic": _hammersley_periodic,
    "hammersley_poisson": _hammersley_poisson,
    "boundary_atom_demo": _boundary_atom_demo,
}


def build_builtin(family: str, **params) -> TasepProfile | CountingProcess:
    """Construct one of the named initial conditions.

    Families: two_corner(x, y), periodic(k_plus, k_minus),
    bernoulli(p1, p2[, seed]), constant(value),
    hammersley_periodic(lam, mu), hammersley_poisson(lam, mu[, seed]),
    boundary_atom_demo(left_intensity[, left_kind]).
    """
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise InvalidParameterError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        ) from None
    return builder(**params)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def profile_to_config(profile: TasepProfile | CountingProcess) -> dict:
    """JSON-compatible descriptor {family, params, seed, window}."""
    if profile.family == "custom":
        raise InvalidParameterError("only builtin families serialize to config")
    return {
        "family": profile.family,
        "params": dict(profile.params),
        "seed": int(profile.seed),
        "window": list(profile.window) if isinstance(profile, CountingProcess) else profile.window,
    }


def profile_from_config(config: Mapping) -> TasepProfile | CountingProcess:
    params = dict(config.get("params", {}))
    family = config["family"]
    if family in ("two_corner", "periodic"):
        params = {k: int(v) for k, v in params.items()}
    prof = build_builtin(family, **params)
    seed = int(config.get("seed", 0))
    return prof.with_seed(seed) if seed else prof
