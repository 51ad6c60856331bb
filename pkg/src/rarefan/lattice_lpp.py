"""Lattice last-passage percolation with exponential weights.

Passage times run over up-right nearest-neighbor paths, never counting the
starting cell's weight.  Profile-anchored passage values take the best
anchor on one side of the origin of the encoding path, the competition
interface separates the two anchor sets' territories, and finite-distance
passage differences toward a far corner estimate the directional
difference functions whose increments carry the model's equilibrium law.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import DomainError, InvalidParameterError, WindowExhaustedError
from .profiles import SigmaPath, TasepProfile

__all__ = [
    "WeightField",
    "PassageTable",
    "SigmaPassage",
    "InterfacePath",
    "lpp_value",
    "lpp_table",
    "sigma_passage",
    "competition_coloring",
    "competition_interface_trace",
    "busemann_difference",
    "busemann_profile_increments",
]

_TILE = 128
_OFFSET = 1 << 31


class WeightField:
    """Seeded lazy grid of i.i.d. unit-rate exponential weights on Z^2.

    Weights are generated per 128x128 tile from a counter-keyed stream, so
    any window can be materialized in any order and rereads always agree.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & (2**63 - 1)
        self._tiles: dict[tuple[int, int], np.ndarray] = {}

    def _tile(self, ti: int, tj: int) -> np.ndarray:
        key = (ti, tj)
        tile = self._tiles.get(key)
        if tile is None:
            ss = np.random.SeedSequence([self.seed, ti + _OFFSET, tj + _OFFSET])
            tile = np.random.default_rng(ss).standard_exponential((_TILE, _TILE))
            self._tiles[key] = tile
        return tile

    def block(self, x_lo: int, y_lo: int, nx: int, ny: int) -> np.ndarray:
        """Weights for the window [x_lo, x_lo+nx) x [y_lo, y_lo+ny)."""
        out = np.empty((nx, ny))
        ti0 = math.floor(x_lo / _TILE)
        tj0 = math.floor(y_lo / _TILE)
        ti1 = math.floor((x_lo + nx - 1) / _TILE)
        tj1 = math.floor((y_lo + ny - 1) / _TILE)
        for ti in range(ti0, ti1 + 1):
            for tj in range(tj0, tj1 + 1):
                tile = self._tile(ti, tj)
                gx0 = max(x_lo, ti * _TILE)
                gx1 = min(x_lo + nx, (ti + 1) * _TILE)
                gy0 = max(y_lo, tj * _TILE)
                gy1 = min(y_lo + ny, (tj + 1) * _TILE)
                out[gx0 - x_lo : gx1 - x_lo, gy0 - y_lo : gy1 - y_lo] = tile[
                    gx0 - ti * _TILE : gx1 - ti * _TILE,
                    gy0 - tj * _TILE : gy1 - tj * _TILE,
                ]
        return out

    def at(self, x: int, y: int) -> float:
        return float(self.block(x, y, 1, 1)[0, 0])


@dataclass(frozen=True)
class PassageTable:
    """Passage values over a window, anchored as described."""

    values: np.ndarray
    x_lo: int
    y_lo: int
    anchor: str

    def value_at(self, x: int, y: int) -> float:
        return float(self.values[x - self.x_lo, y - self.y_lo])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "value"])
            nx, ny = self.values.shape
            for i in range(nx):
                for j in range(ny):
                    writer.writerow(
                        [self.x_lo + i, self.y_lo + j, format(self.values[i, j], ".17g")]
                    )


def _check_ordered(frm, to):
    if frm[0] > to[0] or frm[1] > to[1]:
        raise DomainError(f"points not ordered: {frm} vs {to}")


def lpp_value(field: WeightField, frm: tuple[int, int], to: tuple[int, int]) -> float:
    """Best up-right passage from frm to to, excluding the start weight."""
    _check_ordered(frm, to)
    nx = to[0] - frm[0] + 1
    ny = to[1] - frm[1] + 1
    weights = field.block(frm[0], frm[1], nx, ny)
    anchors = np.full((nx, ny), -1, dtype=np.int64)
    anchors[0, 0] = 0
    table, _ = K.lpp_forward(weights, anchors, np.zeros((nx, ny)))
    return float(table[nx - 1, ny - 1])


def lpp_table(field: WeightField, frm: tuple[int, int], to: tuple[int, int]) -> PassageTable:
    """The whole single-anchor passage table over [frm, to]."""
    _check_ordered(frm, to)
    nx = to[0] - frm[0] + 1
    ny = to[1] - frm[1] + 1
    weights = field.block(frm[0], frm[1], nx, ny)
    anchors = np.full((nx, ny), -1, dtype=np.int64)
    anchors[0, 0] = 0
    table, _ = K.lpp_forward(weights, anchors, np.zeros((nx, ny)))
    return PassageTable(values=table, x_lo=frm[0], y_lo=frm[1], anchor=f"point{frm}")


@dataclass(frozen=True)
class SigmaPassage:
    """Result of a profile-anchored passage query."""

    value: float
    argmax_k: int | None
    at_edge: bool


def _side_anchors(eta: TasepProfile, side: str, k_window: int) -> tuple[np.ndarray, np.ndarray]:
    sp = SigmaPath(eta)
    if side == "+":
        ks = np.arange(1, k_window + 1)
        pts = sp.segment(1, k_window)
    elif side == "-":
        ks = np.arange(-k_window, 0)
        pts = sp.segment(-k_window, -1)
    else:
        raise InvalidParameterError("side must be '+' or '-'")
    return ks, pts


def sigma_passage(
    field: WeightField,
    eta: TasepProfile,
    side: str,
    target: tuple[int, int],
    k_window: int,
    include_anchor_weights: bool = False,
) -> SigmaPassage:
    """Best passage value to target over one side's profile anchors.

    Returns 0 when no anchor on that side lies below the target.  The
    anchor-index window is finite; a maximizer realized exactly at the
    window edge is flagged (and warned) since the true best anchor may lie
    beyond it.  With include_anchor_weights the anchors count their own
    cell weights, the normalization under which the anchored values feed
    the directional comparison (see competition_coloring).
    """
    ks, pts = _side_anchors(eta, side, k_window)
    keep = (pts[:, 0] <= target[0]) & (pts[:, 1] <= target[1])
    if not keep.any():
        return SigmaPassage(value=0.0, argmax_k=None, at_edge=False)
    ks = ks[keep]
    pts = pts[keep]
    x_lo = int(min(pts[:, 0].min(), target[0]))
    y_lo = int(min(pts[:, 1].min(), target[1]))
    nx = target[0] - x_lo + 1
    ny = target[1] - y_lo + 1
    weights = field.block(x_lo, y_lo, nx, ny)
    anchors = np.full((nx, ny), -1, dtype=np.int64)
    floor = np.zeros((nx, ny))
    for idx in range(len(ks)):
        anchors[pts[idx, 0] - x_lo, pts[idx, 1] - y_lo] = idx
        if include_anchor_weights:
            floor[pts[idx, 0] - x_lo, pts[idx, 1] - y_lo] = weights[
                pts[idx, 0] - x_lo, pts[idx, 1] - y_lo
            ]
    table, best = K.lpp_forward(weights, anchors, floor)
    value = float(table[target[0] - x_lo, target[1] - y_lo])
    src = int(best[target[0] - x_lo, target[1] - y_lo])
    argmax_k = int(ks[src]) if src >= 0 else None
    at_edge = argmax_k is not None and abs(argmax_k) == k_window
    if at_edge:
        warnings.warn(
            f"sigma passage maximizer sits at the anchor-window edge (k={argmax_k}); "
            "consider a larger k_window",
            stacklevel=2,
        )
    return SigmaPassage(value=max(value, 0.0), argmax_k=argmax_k, at_edge=at_edge)


@dataclass(frozen=True)
class InterfacePath:
    """Up-right competition-interface path started at the origin."""

    points: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.points) - 1

    def realized_angle(self) -> float:
        x, y = self.points[-1]
        return math.atan2(y, x)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "x", "y"])
            for n, (x, y) in enumerate(self.points):
                writer.writerow([n, int(x), int(y)])


def competition_coloring(
    field: WeightField,
    eta: TasepProfile,
    size: int,
    k_window: int | None = None,
    include_anchor_weights: bool = True,
):
    """Anchored passage tables for both profile sides over [lo, size]^2.

    Returns (table_minus, table_plus, (x_lo, y_lo)); the cell at lattice
    point z is colored blue when the minus-side value strictly exceeds the
    plus-side one.  Anchors count their own weights by default: that is
    the normalization whose anchored differences toward a far corner have
    the equilibrium walk increments, hence the one the direction law is
    stated for.
    """
    if k_window is None:
        k_window = max(64, 2 * size)
    km, pm = _side_anchors(eta, "-", k_window)
    kp, pp = _side_anchors(eta, "+", k_window)
    keep_m = (pm[:, 0] <= size) & (pm[:, 1] <= size)
    keep_p = (pp[:, 0] <= size) & (pp[:, 1] <= size)
    pm = pm[keep_m]
    pp = pp[keep_p]
    if len(pm) == 0 or len(pp) == 0:
        raise InvalidParameterError(
            "profile must put anchors on both sides below the window corner"
        )
    x_lo = int(min(pm[:, 0].min(), pp[:, 0].min(), 0))
    y_lo = int(min(pm[:, 1].min(), pp[:, 1].min(), 0))
    nx = size - x_lo + 1
    ny = size - y_lo + 1
    weights = field.block(x_lo, y_lo, nx, ny)
    tables = []
    for pts in (pm, pp):
        anchors = np.full((nx, ny), -1, dtype=np.int64)
        floor = np.zeros((nx, ny))
        for idx in range(len(pts)):
            anchors[pts[idx, 0] - x_lo, pts[idx, 1] - y_lo] = idx
            if include_anchor_weights:
                floor[pts[idx, 0] - x_lo, pts[idx, 1] - y_lo] = weights[
                    pts[idx, 0] - x_lo, pts[idx, 1] - y_lo
                ]
        table, _ = K.lpp_forward(weights, anchors, floor)
        tables.append(table)
    return tables[0], tables[1], (x_lo, y_lo)


def competition_interface_trace(
    field: WeightField,
    eta: TasepProfile,
    n_steps: int,
    k_window: int | None = None,
) -> InterfacePath:
    """Trace the interface between the two conquered regions.

    At each corner the step is decided by the color of the cell diagonally
    ahead: an up step keeps a red cell on the right of the path, a right
    step keeps a blue cell on its left.  Ties go to red (blue requires a
    strict comparison).
    """
    d_minus, d_plus, (x_lo, y_lo) = competition_coloring(
        field, eta, n_steps + 1, k_window
    )
    pos = np.zeros(2, dtype=np.int64)
    pts = np.zeros((n_steps + 1, 2), dtype=np.int64)
    for n in range(1, n_steps + 1):
        cx = pos[0] + 1 - x_lo
        cy = pos[1] + 1 - y_lo
        if cx >= d_minus.shape[0] or cy >= d_minus.shape[1]:
            raise WindowExhaustedError("interface left the weight window")
        blue = d_minus[cx, cy] > d_plus[cx, cy]
        if blue:
            pos[0] += 1
        else:
            pos[1] += 1
        pts[n] = pos
    return InterfacePath(points=pts)


# ---------------------------------------------------------------------------
# directional passage differences
# ---------------------------------------------------------------------------


def _ray_corner(alpha: float, distance: float) -> tuple[int, int]:
    if not (0.0 < alpha < math.pi / 2.0):
        raise DomainError("direction must lie strictly inside the open quadrant")
    return (int(round(distance * math.cos(alpha))), int(round(distance * math.sin(alpha))))


def busemann_difference(
    field: WeightField,
    x: tuple[int, int],
    y: tuple[int, int],
    alpha: float,
    distance: float,
) -> float:
    """Directional passage difference toward the ray corner z.

    Uses the start-inclusive normalization: the difference of best path
    sums that count their own starting weights.  The start-exclusive
    difference is off by the two starting weights, which breaks the
    equilibrium form of the increments (the exclusive difference toward a
    dominating corner can never be smaller than the target cell's weight).
    Additivity and antisymmetry in (x, y) hold exactly at any fixed corner
    because both terms reference the same z.
    """
    z = _ray_corner(alpha, distance)
    x_lo = min(x[0], y[0])
    y_lo = min(x[1], y[1])
    if not (x[0] <= z[0] and x[1] <= z[1] and y[0] <= z[0] and y[1] <= z[1]):
        raise DomainError(f"ray corner {z} does not dominate both {x} and {y}")
    weights = field.block(x_lo, y_lo, z[0] - x_lo + 1, z[1] - y_lo + 1)
    table = K.lpp_backward(weights)
    return float(table[y[0] - x_lo, y[1] - y_lo] - table[x[0] - x_lo, x[1] - y_lo])


def busemann_profile_increments(
    field: WeightField,
    eta: TasepProfile,
    alpha: float,
    distance: float,
    k_lo: int,
    k_hi: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Difference increments along the encoding path.

    Returns (increments, step_kinds) for k in [k_lo, k_hi], where
    increments[i] is the start-inclusive passage difference from
    sigma(k-1) to sigma(k) toward the ray corner and step_kinds[i] is the
    transformed occupancy at k (0 for a right step, 1 for a down step).
    One backward table serves every k.
    """
    if k_lo > k_hi:
        raise InvalidParameterError("empty increment range")
    z = _ray_corner(alpha, distance)
    pts = SigmaPath(eta).segment(k_lo - 1, k_hi)
    kinds = eta.bar_window(k_lo, k_hi)
    x_lo = int(min(pts[:, 0].min(), 0))
    y_lo = int(min(pts[:, 1].min(), 0))
    if pts[:, 0].max() > z[0] or pts[:, 1].max() > z[1]:
        raise DomainError("ray corner does not dominate the requested path segment")
    weights = field.block(x_lo, y_lo, z[0] - x_lo + 1, z[1] - y_lo + 1)
    table = K.lpp_backward(weights)
    vals = table[pts[:, 0] - x_lo, pts[:, 1] - y_lo]
    return np.diff(vals), kinds
