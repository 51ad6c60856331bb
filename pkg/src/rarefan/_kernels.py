"""Compiled inner loops for the Monte Carlo and dynamic-programming paths.

Everything here is deliberately free of Python objects: plain arrays in,
plain arrays out.  Randomness comes from an inline splitmix64 stream keyed
by (seed, replica), so replicas are reproducible and order-independent,
which keeps parallel aggregation deterministic.
"""

from __future__ import annotations

import math

import numpy as np
from numba import int64, njit, uint64

_U53 = 1.0 / 9007199254740992.0
_GOLDEN = uint64(0x9E3779B97F4A7C15)
_MIX1 = uint64(0xBF58476D1CE4E5B9)
_MIX2 = uint64(0x94D049BB133111EB)

_SALT_TASEP = 101
_SALT_HAMMERSLEY = 202
_SALT_WALK_PLUS = 303
_SALT_WALK_MINUS = 404
_SALT_NUWALK_PLUS = 505
_SALT_NUWALK_MINUS = 606


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> uint64(30))) * _MIX1
    z = (z ^ (z >> uint64(27))) * _MIX2
    return z ^ (z >> uint64(31))


@njit(inline="always")
def _stream(seed, replica, salt):
    return _mix(uint64(seed) * _MIX2 + uint64(replica) * _GOLDEN + uint64(salt))


@njit(inline="always")
def _next(state):
    state += _GOLDEN
    return state, _mix(state)


@njit(inline="always")
def _uniform(state):
    state, z = _next(state)
    return state, (z >> uint64(11)) * _U53


@njit(inline="always")
def _exponential(state, rate):
    state, u = _uniform(state)
    return state, -math.log(1.0 - u) / rate


@njit(inline="always")
def _poisson_small(state, mean):
    if mean <= 0.0:
        return state, 0
    limit = math.exp(-mean)
    k = 0
    p = 1.0
    while True:
        state, u = _uniform(state)
        p *= u
        if p <= limit:
            return state, k
        k += 1


@njit(inline="always")
def _poisson(state, mean):
    total = 0
    m = mean
    while m > 30.0:
        state, k = _poisson_small(state, 30.0)
        total += k
        m -= 30.0
    state, k = _poisson_small(state, m)
    return state, total + k


# ---------------------------------------------------------------------------
# TASEP coupled evolution (occupancies + discrepancy site)
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def tasep_final_state(eta0, x0, n_events, seed, replica, guard):
    """Run n_events bond rings in order; return (X index, ok flag).

    The second copy of the basic coupling is implicit: it differs from eta
    at exactly the discrepancy index X, where eta holds a hole.  ok=0 when
    X comes within ``guard`` sites of either window edge.
    """
    state = _stream(seed, replica, _SALT_TASEP)
    eta = eta0.copy()
    n = eta.shape[0]
    nb = uint64(n - 1)
    X = x0
    for _ in range(n_events):
        state, z = _next(state)
        x = int64(z % nb)
        if x == X:
            if eta[x + 1] == 0:
                X += 1
        elif x + 1 == X:
            if eta[x] == 1:
                eta[x] = 0
                eta[X] = 1
                X = x
        else:
            if eta[x] == 1 and eta[x + 1] == 0:
                eta[x] = 0
                eta[x + 1] = 1
        if X < guard or X >= n - guard:
            return X, 0
    return X, 1


@njit(cache=True, nogil=True)
def tasep_trajectory(eta0, x0, sample_times, seed, replica, guard):
    """Time-tracked variant recording X at each sample time.

    Returns (positions at sample_times, ok flag, final eta array).
    """
    state = _stream(seed, replica, _SALT_TASEP)
    eta = eta0.copy()
    n = eta.shape[0]
    nb = uint64(n - 1)
    rate = float(n - 1)
    X = x0
    t = 0.0
    out = np.empty(sample_times.shape[0], dtype=np.int64)
    si = 0
    ok = 1
    while si < sample_times.shape[0]:
        state, gap = _exponential(state, rate)
        t_next = t + gap
        while si < sample_times.shape[0] and sample_times[si] < t_next:
            out[si] = X
            si += 1
        t = t_next
        if si >= sample_times.shape[0]:
            break
        state, z = _next(state)
        x = int64(z % nb)
        if x == X:
            if eta[x + 1] == 0:
                X += 1
        elif x + 1 == X:
            if eta[x] == 1:
                eta[x] = 0
                eta[X] = 1
                X = x
        else:
            if eta[x] == 1 and eta[x + 1] == 0:
                eta[x] = 0
                eta[x + 1] = 1
        if X < guard or X >= n - guard:
            ok = 0
            while si < sample_times.shape[0]:
                out[si] = X
                si += 1
            break
    return out, ok, eta


# ---------------------------------------------------------------------------
# Hammersley particle dynamics with a second-class particle
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def hammersley_y_evolution(parts0, cap, x_lo, x_hi, sample_times, seed, replica):
    """Evolve the particle system under a fresh unit-intensity Poisson cloud.

    At each cloud point (x, t) the nearest particle strictly right of x
    moves to x (keeping its sorted rank), or a particle is created at x if
    none exists.  The second-class particle Y starts at 0 and jumps to the
    displaced particle's old position whenever the event lands left of Y
    with no first-class particle in (x, Y].

    Returns (Y at sample_times, status): 0 ok, 1 Y escaped the window,
    2 capacity exhausted.
    """
    state = _stream(seed, replica, _SALT_HAMMERSLEY)
    parts = np.empty(cap, dtype=np.float64)
    n = parts0.shape[0]
    parts[:n] = parts0
    Y = 0.0
    rate = x_hi - x_lo
    t = 0.0
    out = np.empty(sample_times.shape[0], dtype=np.float64)
    si = 0
    status = 0
    while si < sample_times.shape[0]:
        state, gap = _exponential(state, rate)
        t_next = t + gap
        while si < sample_times.shape[0] and sample_times[si] < t_next:
            out[si] = Y
            si += 1
        t = t_next
        if si >= sample_times.shape[0]:
            break
        state, u = _uniform(state)
        x = x_lo + u * rate
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) >> 1
            if parts[mid] > x:
                hi = mid
            else:
                lo = mid + 1
        if lo == n:
            if n >= cap:
                status = 2
            else:
                parts[n] = x
                n += 1
                if x < Y:
                    status = 1
        else:
            p = parts[lo]
            parts[lo] = x
            if x < Y and p > Y:
                Y = p
                if Y >= x_hi:
                    status = 1
        if status != 0:
            while si < sample_times.shape[0]:
                out[si] = Y
                si += 1
            break
    return out, status


@njit(cache=True, nogil=True)
def hammersley_y_explicit(parts0, cap, event_x):
    """Second-class particle after an explicit time-ordered event list.

    Same dynamics as hammersley_y_evolution but driven by given cloud
    x-positions; used by the dual-route consistency checks.  Returns
    (Y, status): status 1 means Y lost its target (escaped), 2 capacity.
    """
    parts = np.empty(cap, dtype=np.float64)
    n = parts0.shape[0]
    parts[:n] = parts0
    Y = 0.0
    for idx in range(event_x.shape[0]):
        x = event_x[idx]
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) >> 1
            if parts[mid] > x:
                hi = mid
            else:
                lo = mid + 1
        if lo == n:
            if n >= cap:
                return Y, 2
            parts[n] = x
            n += 1
            if x < Y:
                return Y, 1
        else:
            p = parts[lo]
            parts[lo] = x
            if x < Y and p > Y:
                Y = p
    return Y, 0


@njit(cache=True, nogil=True)
def hammersley_system_evolution(parts0, cap, x_lo, x_hi, event_x, event_order):
    """Reference evolution of a bare particle system under given events.

    event_x holds cloud x-positions, event_order the time ordering.  Returns
    (positions, count, created) where created counts boundary creations.
    Used by the dual-route consistency checks with an explicit cloud.
    """
    parts = np.empty(cap, dtype=np.float64)
    n = parts0.shape[0]
    parts[:n] = parts0
    created = 0
    for idx in event_order:
        x = event_x[idx]
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) >> 1
            if parts[mid] > x:
                hi = mid
            else:
                lo = mid + 1
        if lo == n:
            if n >= cap:
                return parts, -1, created
            parts[n] = x
            n += 1
            created += 1
        else:
            parts[lo] = x
    return parts, n, created


# ---------------------------------------------------------------------------
# environment random-walk supremum comparison (exclusion / lattice side)
# ---------------------------------------------------------------------------

TAIL_DOWN_ONLY = 0
TAIL_PERIODIC = 1
TAIL_BERNOULLI = 2


@njit(cache=True, nogil=True)
def walk_sup_pair(
    core_plus,
    core_minus,
    tail_code_plus,
    pattern_plus,
    p_plus,
    tail_code_minus,
    pattern_minus,
    p_minus,
    rho,
    gap_plus,
    gap_minus,
    replicas,
    seed,
    fixed_horizon,
    max_steps,
):
    """Simulate both environment walks per replica and record their suprema.

    core_plus[i] is the transformed occupancy at k = i + 1; core_minus[i]
    at k = -i.  Beyond the cores the tail rule applies: periodic patterns
    are indexed by the absolute underlying site, Bernoulli sites are drawn
    fresh per replica (the comparison probability averages over random
    configurations).  A replica side stops once it is past its core and has
    dropped ``gap`` below its running maximum; with fixed_horizon > 0 it
    instead runs exactly that many steps (used to validate the truncation
    certificate by horizon doubling).

    Returns (sup_plus, sup_minus, ok) arrays; ok=0 flags a side that hit
    max_steps without satisfying its stop rule.
    """
    sup_p = np.empty(replicas, dtype=np.float64)
    sup_m = np.empty(replicas, dtype=np.float64)
    ok = np.ones(replicas, dtype=np.uint8)
    lp = len(pattern_plus)
    lm = len(pattern_minus)
    for r in range(replicas):
        # plus walk: k = 1, 2, ...; up where bar(k) = 1
        state = _stream(seed, r, _SALT_WALK_PLUS)
        s = 0.0
        m = -1.0e300
        k = 0
        while True:
            k += 1
            if k <= core_plus.shape[0]:
                occ = core_plus[k - 1]
            elif tail_code_plus == TAIL_DOWN_ONLY:
                break
            elif tail_code_plus == TAIL_PERIODIC:
                occ = pattern_plus[(k - 1) % lp]
            else:
                state, u = _uniform(state)
                occ = 1 if u < p_plus else 0
            if occ == 1:
                state, e = _exponential(state, 1.0 - rho)
                s += e
            else:
                state, e = _exponential(state, rho)
                s -= e
            if s > m:
                m = s
            if fixed_horizon > 0:
                if k >= fixed_horizon:
                    break
            elif k > core_plus.shape[0] and s <= m - gap_plus:
                break
            if k >= max_steps:
                ok[r] = 0
                break
        sup_p[r] = m
        # minus walk: k = 0, -1, ...; up where bar(k) = 0
        state = _stream(seed, r, _SALT_WALK_MINUS)
        s = 0.0
        m = -1.0e300
        k = 1
        while True:
            k -= 1
            i = -k
            if i < core_minus.shape[0]:
                occ = core_minus[i]
            elif tail_code_minus == TAIL_DOWN_ONLY:
                break
            elif tail_code_minus == TAIL_PERIODIC:
                occ = pattern_minus[k % lm]
            else:
                state, u = _uniform(state)
                occ = 1 if u < p_minus else 0
            if occ == 0:
                state, e = _exponential(state, rho)
                s += e
            else:
                state, e = _exponential(state, 1.0 - rho)
                s -= e
            if s > m:
                m = s
            if fixed_horizon > 0:
                if i + 1 >= fixed_horizon:
                    break
            elif i >= core_minus.shape[0] and s <= m - gap_minus:
                break
            if i >= max_steps:
                ok[r] = 0
                break
        sup_m[r] = m
    return sup_p, sup_m, ok


# ---------------------------------------------------------------------------
# atom-walk supremum comparison (Hammersley side)
# ---------------------------------------------------------------------------

NU_TAIL_EMPTY = 0
NU_TAIL_GRID = 1
NU_TAIL_POISSON = 2
NU_TAIL_EXHAUST = 3


@njit(cache=True, nogil=True)
def nu_walk_sup_pair(
    atoms_plus,
    masses_plus,
    tail_code_plus,
    intensity_plus,
    atoms_minus,
    masses_minus,
    tail_code_minus,
    intensity_minus,
    rho,
    gap_plus,
    gap_minus,
    core_end_plus,
    core_end_minus,
    replicas,
    seed,
    fixed_horizon,
    max_events,
):
    """Suprema of nu(z) - N_rho(z) over z >= 0 and z < 0 per replica.

    The plus side walks right through the atoms of nu (ups) against a fresh
    Poisson(rho) stream (downs); its supremum is attained immediately after
    an atom, or is 0 at z = 0.  The minus side walks left with the roles
    reversed, and its within-segment maximum is the value just before the
    next atom.  atoms_minus holds distances |z| in increasing order.

    Atom arrays cover [0, core_end]; beyond them the tail rule generates
    atoms on the fly (grid atoms continue the global lattice, Poisson atoms
    are drawn fresh, which matches laws stated for random configurations).

    Returns (sup_plus, sup_minus, ok) with integer-valued suprema as floats.
    """
    sup_p = np.empty(replicas, dtype=np.float64)
    sup_m = np.empty(replicas, dtype=np.float64)
    ok = np.ones(replicas, dtype=np.uint8)
    for r in range(replicas):
        # plus side
        state = _stream(seed, r, _SALT_NUWALK_PLUS)
        d = 0
        m = 0
        pos = 0.0
        i = 0
        grid_k = 1.0
        if tail_code_plus == NU_TAIL_GRID:
            grid_k = math.floor(core_end_plus * intensity_plus) + 1.0
        events = 0
        while True:
            if i < atoms_plus.shape[0]:
                a = atoms_plus[i]
                mass = masses_plus[i]
                i += 1
            elif tail_code_plus == NU_TAIL_EMPTY:
                break
            elif tail_code_plus == NU_TAIL_EXHAUST:
                ok[r] = 0
                break
            elif tail_code_plus == NU_TAIL_GRID:
                a = grid_k / intensity_plus
                grid_k += 1.0
                if a <= pos:
                    continue
                mass = 1
            else:
                state, g = _exponential(state, intensity_plus)
                a = pos + g
                mass = 1
            state, dn = _poisson(state, rho * (a - pos))
            d += mass - dn
            if d > m:
                m = d
            pos = a
            if fixed_horizon > 0.0:
                if pos >= fixed_horizon:
                    break
            elif pos > core_end_plus and d <= m - gap_plus:
                break
            events += 1
            if events >= max_events:
                ok[r] = 0
                break
        sup_p[r] = m
        # minus side (walking left; positions are distances from 0)
        state = _stream(seed, r, _SALT_NUWALK_MINUS)
        d = 0
        m = 0
        pos = 0.0
        i = 0
        grid_k = 1.0
        if tail_code_minus == NU_TAIL_GRID:
            grid_k = math.floor(core_end_minus * intensity_minus) + 1.0
        events = 0
        while True:
            if i < atoms_minus.shape[0]:
                a = atoms_minus[i]
                mass = masses_minus[i]
                i += 1
            elif tail_code_minus == NU_TAIL_EMPTY:
                break
            elif tail_code_minus == NU_TAIL_EXHAUST:
                ok[r] = 0
                break
            elif tail_code_minus == NU_TAIL_GRID:
                a = grid_k / intensity_minus
                grid_k += 1.0
                if a <= pos:
                    continue
                mass = 1
            else:
                state, g = _exponential(state, intensity_minus)
                a = pos + g
                mass = 1
            state, up = _poisson(state, rho * (a - pos))
            if d + up > m:
                m = d + up
            d += up - mass
            pos = a
            if fixed_horizon > 0.0:
                if pos >= fixed_horizon:
                    break
            elif pos > core_end_minus and d <= m - gap_minus:
                break
            events += 1
            if events >= max_events:
                ok[r] = 0
                break
        sup_m[r] = m
    return sup_p, sup_m, ok


# ---------------------------------------------------------------------------
# longest increasing chains (patience piles)
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def lis_length(ys):
    """Length of the longest strictly increasing subsequence of ys.

    Callers pass y-values ordered by strictly increasing x, so this is the
    longest chain increasing in both coordinates.
    """
    n = ys.shape[0]
    tails = np.empty(n, dtype=np.float64)
    m = 0
    for idx in range(n):
        y = ys[idx]
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < y:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = y
        if lo == m:
            m += 1
    return m


@njit(cache=True, nogil=True)
def suffix_chain_counts(xs_desc, ys_desc, marks_desc):
    """Longest-chain counts over suffixes {points with x > mark}.

    Points arrive sorted by strictly decreasing x.  For each mark (also
    decreasing) the returned count is the longest strictly-increasing chain
    among the points processed before the sweep passed that mark.
    """
    n = xs_desc.shape[0]
    nm = marks_desc.shape[0]
    out = np.empty(nm, dtype=np.int64)
    tails = np.empty(n, dtype=np.float64)
    m = 0
    mi = 0
    for idx in range(n):
        x = xs_desc[idx]
        while mi < nm and marks_desc[mi] >= x:
            out[mi] = m
            mi += 1
        key = -ys_desc[idx]
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = key
        if lo == m:
            m += 1
    while mi < nm:
        out[mi] = m
        mi += 1
    return out


# ---------------------------------------------------------------------------
# lattice last-passage dynamic programs
# ---------------------------------------------------------------------------

_NEG_INF = -1.0e300


@njit(cache=True, nogil=True)
def lpp_forward(weights, anchor_ids, anchor_floor):
    """Multi-source up-right dynamic program.

    anchor_ids[i, j] >= 0 marks cell (i, j) as an anchor with that id; an
    anchor contributes at least anchor_floor[i, j] at its own cell (0 for
    the start-exclusive convention, the cell weight for the inclusive
    one).  Returns (table, argmax ids) where table[i, j] is the best
    passage value from any anchor to (i, j) and ids tracks the realizing
    anchor.
    """
    n0, n1 = weights.shape
    table = np.full((n0, n1), _NEG_INF, dtype=np.float64)
    best = np.full((n0, n1), -1, dtype=np.int64)
    for i in range(n0):
        for j in range(n1):
            inc = _NEG_INF
            src = -1
            if i > 0 and table[i - 1, j] > inc:
                inc = table[i - 1, j]
                src = best[i - 1, j]
            if j > 0 and table[i, j - 1] > inc:
                inc = table[i, j - 1]
                src = best[i, j - 1]
            val = inc + weights[i, j] if inc > _NEG_INF else _NEG_INF
            if anchor_ids[i, j] >= 0 and val < anchor_floor[i, j]:
                val = anchor_floor[i, j]
                src = anchor_ids[i, j]
            table[i, j] = val
            best[i, j] = src
    return table, best


@njit(cache=True, nogil=True)
def lpp_backward(weights):
    """T[i, j] = weights[i, j] + max(T[i+1, j], T[i, j+1]).

    The passage value from (i, j) to the top-right corner, excluding the
    start weight, is T[i, j] - weights[i, j].
    """
    n0, n1 = weights.shape
    table = np.empty((n0, n1), dtype=np.float64)
    for i in range(n0 - 1, -1, -1):
        for j in range(n1 - 1, -1, -1):
            inc = _NEG_INF
            if i + 1 < n0 and table[i + 1, j] > inc:
                inc = table[i + 1, j]
            if j + 1 < n1 and table[i, j + 1] > inc:
                inc = table[i, j + 1]
            if inc <= _NEG_INF:
                inc = 0.0
            table[i, j] = weights[i, j] + inc
    return table
