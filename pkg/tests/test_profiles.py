import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rarefan import profiles
from rarefan.errors import InvalidParameterError
from rarefan.profiles import (
    BernoulliTail,
    ConstantTail,
    CountingProcess,
    EmptyTail,
    GridTail,
    PeriodicTail,
    PoissonTail,
    SigmaPath,
    TasepProfile,
    asymptotic_densities,
    bar_transform,
    build_builtin,
    profile_from_config,
    profile_to_config,
    sigma_from_eta,
)


def _constant_profile(value):
    return build_builtin("constant", value=value)


class TestBarTransform:
    def test_all_ones(self):
        bar = bar_transform(_constant_profile(1))
        assert bar(0) == 0
        assert bar(1) == 1
        assert all(bar(k) == 1 for k in (-5, -1, 2, 3, 9))

    def test_all_zeros(self):
        bar = bar_transform(_constant_profile(0))
        assert bar(1) == 1
        assert all(bar(k) == 0 for k in (-4, -1, 0, 2, 7))

    def test_index_shift_above_one(self):
        eta = TasepProfile(
            core={-2: 0, -1: 1, 0: 0, 1: 0, 2: 1},
            window=2,
            left_tail=ConstantTail(1),
            right_tail=ConstantTail(0),
        )
        bar = bar_transform(eta)
        assert bar(-1) == 1
        assert bar(2) == eta.eta(1) == 0
        assert bar(3) == eta.eta(2) == 1

    @given(st.integers(min_value=-30, max_value=30), st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=60, deadline=None)
    def test_defining_relation_everywhere(self, k, seed):
        eta = build_builtin("bernoulli", p1=0.3, p2=0.7, seed=seed)
        bar = eta.bar(k)
        if k == 0:
            assert bar == 0
        elif k == 1:
            assert bar == 1
        elif k < 0:
            assert bar == eta.eta(k)
        else:
            assert bar == eta.eta(k - 1)

    def test_window_matches_scalar(self):
        eta = build_builtin("periodic", k_plus=3, k_minus=2)
        window = eta.bar_window(-9, 9)
        assert window.tolist() == [eta.bar(k) for k in range(-9, 10)]


class TestSigmaPath:
    def test_two_corner_steps(self):
        # hole at 0 then holes right of the origin give right steps; the
        # forced particle at 1 gives the single down step
        tc = build_builtin("two_corner", x=1, y=1)
        seg = sigma_from_eta(tc, -2, 2)
        assert seg.tolist() == [[-1, 1], [-1, 0], [0, 0], [0, -1], [1, -1]]

    def test_two_corner_deeper_arms(self):
        tc = build_builtin("two_corner", x=2, y=3)
        sp = SigmaPath(tc)
        assert sp(1) == (0, -1)
        assert sp(2) == (0, -2)
        assert sp(3) == (0, -3)
        assert sp(4) == (1, -3)
        assert sp(-1) == (-1, 0)
        assert sp(-2) == (-2, 0)
        assert sp(-3) == (-2, 1)

    def test_alternating_staircase(self):
        eta = TasepProfile(
            core={0: 0},
            window=0,
            left_tail=ConstantTail(1),
            right_tail=PeriodicTail((1, 0)),
        )
        seg = sigma_from_eta(eta, 0, 5)
        steps = np.diff(seg, axis=0)
        # bar alternates 1,0,1,0,... beyond k=1 depending on parity
        for step, k in zip(steps, range(1, 6)):
            if eta.bar(k) == 0:
                assert step.tolist() == [1, 0]
            else:
                assert step.tolist() == [0, -1]

    def test_periodic_hand_unrolled(self):
        per = build_builtin("periodic", k_plus=2, k_minus=2)
        # transformed occupancies for k = 1..3 are 1, 0, 0: down, right, right
        seg = sigma_from_eta(per, 0, 3)
        assert seg.tolist() == [[0, 0], [0, -1], [1, -1], [2, -1]]

    @pytest.mark.filterwarnings("ignore:periodic")
    @given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
    @settings(max_examples=25, deadline=None)
    def test_monotone_and_step_count(self, k_plus, k_minus):
        per = build_builtin("periodic", k_plus=k_plus, k_minus=k_minus)
        seg = sigma_from_eta(per, -20, 20)
        dx = np.diff(seg[:, 0])
        dy = np.diff(seg[:, 1])
        assert np.all(dx >= 0) and np.all(dy <= 0)
        assert np.all(dx + np.abs(dy) == 1)
        n_down = int((-dy[20:]).sum())  # steps for k in [1, 20]
        assert n_down == sum(per.bar(k) for k in range(1, 21))


class TestBuiltinFamilies:
    def test_two_corner_configuration(self):
        tc = build_builtin("two_corner", x=2, y=3)
        for k in range(-8, 9):
            if -(2 - 1) <= k < 0 or k >= 3:
                assert tc.eta(k) == 0
            elif 0 < k <= 2 or k <= -2:
                assert tc.eta(k) == 1

    def test_two_corner_bar_pattern(self):
        tc = build_builtin("two_corner", x=1, y=1)
        assert tc.bar(0) == 0 and tc.bar(1) == 1
        assert all(tc.bar(k) == 0 for k in range(2, 8))
        assert all(tc.bar(k) == 1 for k in range(-6, 0))

    def test_periodic_bar_mod_rule(self):
        per = build_builtin("periodic", k_plus=2, k_minus=2)
        for i in range(1, 30):
            assert per.bar(i) == (1 if i % 3 == 1 else 0)
        for i in range(-30, 1):
            assert per.bar(i) == (0 if i % 3 == 0 else 1)

    def test_periodic_without_fan_warns(self):
        with pytest.warns(UserWarning):
            build_builtin("periodic", k_plus=1, k_minus=1)

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            build_builtin("two_corner", x=0, y=1)
        with pytest.raises(InvalidParameterError):
            build_builtin("bernoulli", p1=0.8, p2=0.2)
        with pytest.raises(InvalidParameterError):
            build_builtin("hammersley_periodic", lam=2.0, mu=1.0)
        with pytest.raises(InvalidParameterError):
            build_builtin("no_such_family")

    def test_hammersley_periodic_atoms(self):
        hp = build_builtin("hammersley_periodic", lam=1.0, mu=2.0)
        locs, masses = hp.materialize(0.0, 5.5)
        assert locs.tolist() == [1.0, 2.0, 3.0, 4.0, 5.0]
        assert masses.tolist() == [1] * 5
        locs, _ = hp.materialize(-2.2, 0.0)  # half-open on the left
        assert locs.tolist() == [-2.0, -1.5, -1.0, -0.5]
        locs, _ = hp.materialize(-2.0, 0.0)
        assert locs.tolist() == [-1.5, -1.0, -0.5]

    def test_boundary_atom_demo_counts(self):
        rb = build_builtin("boundary_atom_demo", left_intensity=2.0)
        assert rb.nu(12.0) == 12 - int(np.floor(12 ** (2.0 / 3.0)))
        locs, masses = rb.materialize(0.0, 30.0)
        assert np.all(masses >= 1)
        assert rb.nu(30.0) == masses.sum()


class TestRandomTails:
    def test_rereads_agree(self):
        eta = build_builtin("bernoulli", p1=0.2, p2=0.8, seed=11)
        first = [eta.eta(k) for k in range(-50, 51)]
        second = [eta.eta(k) for k in reversed(range(-50, 51))]
        assert first == second[::-1]

    def test_same_seed_agrees_sitewise(self):
        a = build_builtin("bernoulli", p1=0.2, p2=0.8, seed=7)
        b = build_builtin("bernoulli", p1=0.2, p2=0.8, seed=7)
        ks = np.arange(-200, 201)
        assert np.array_equal(a.eta_window(-200, 200), b.eta_window(-200, 200))
        assert [a.eta(int(k)) for k in ks[:10]] == [b.eta(int(k)) for k in ks[:10]]

    def test_different_seeds_differ(self):
        a = build_builtin("bernoulli", p1=0.5, p2=0.9, seed=1)
        b = build_builtin("bernoulli", p1=0.5, p2=0.9, seed=2)
        assert not np.array_equal(a.eta_window(1, 400), b.eta_window(1, 400))

    def test_tail_frequency(self):
        eta = build_builtin("bernoulli", p1=0.2, p2=0.8, seed=3)
        right = eta.eta_window(1, 4000)
        left = eta.eta_window(-4000, -1)
        assert abs(right.mean() - 0.2) < 0.03
        assert abs(left.mean() - 0.8) < 0.03


class TestCountingProcess:
    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=-20, max_value=20).filter(lambda v: abs(v) > 1e-6),
                st.integers(min_value=1, max_value=3),
            ),
            max_size=12,
        ),
        st.floats(min_value=-25, max_value=25),
        st.floats(min_value=-25, max_value=25),
    )
    @settings(max_examples=80, deadline=None)
    def test_signed_convention(self, atoms, a, b):
        locs = sorted(set(round(loc, 6) for loc, _ in atoms))
        masses = [1] * len(locs)
        nu = CountingProcess(
            locations=np.array(locs, dtype=float),
            masses=np.array(masses, dtype=np.int64),
            window=(-30.0, 30.0),
            left_tail=EmptyTail(),
            right_tail=EmptyTail(),
        )
        assert nu.nu(0.0) == 0
        if a > b:
            a, b = b, a
        mass = sum(1 for loc in locs if a < loc <= b)
        assert nu.nu(b) - nu.nu(a) == mass

    def test_marker_atom(self):
        nu = build_builtin("hammersley_periodic", lam=1.0, mu=2.0)
        marked = nu.with_marker_atom()
        assert marked.nu(0.0) == 1
        assert marked.nu(1.5) == nu.nu(1.5) + 1
        assert marked.nu(-0.7) == nu.nu(-0.7)

    def test_one_sided_parts(self):
        nu = build_builtin("hammersley_periodic", lam=1.0, mu=2.0)
        plus = nu.plus_part()
        minus = nu.minus_part()
        assert plus.left_infinite and plus.nu(-0.5) == -np.inf
        assert plus.nu(2.2) == nu.nu(2.2)
        assert minus.nu(3.0) == 0
        assert minus.nu(-1.2) == nu.nu(-1.2)

    def test_atom_at_origin_rejected(self):
        with pytest.raises(InvalidParameterError):
            CountingProcess(
                locations=np.array([0.0]),
                masses=np.array([1], dtype=np.int64),
                window=(-1.0, 1.0),
                left_tail=EmptyTail(),
                right_tail=EmptyTail(),
            )

    def test_quenched_poisson_tail_rereads(self):
        nu = build_builtin("hammersley_poisson", lam=1.0, mu=2.0, seed=5)
        l1, m1 = nu.materialize(-8.0, 8.0)
        l2, m2 = nu.materialize(-8.0, 8.0)
        assert np.array_equal(l1, l2) and np.array_equal(m1, m2)
        assert nu.nu(5.0) == m1[l1 <= 5.0][l1[l1 <= 5.0] > 0].sum()


class TestDensities:
    def test_bernoulli(self):
        rep = asymptotic_densities(build_builtin("bernoulli", p1=0.2, p2=0.8))
        assert (rep.lower, rep.upper) == (0.2, 0.8)
        assert rep.rarefaction

    def test_periodic(self):
        rep = asymptotic_densities(build_builtin("periodic", k_plus=2, k_minus=3))
        assert rep.lower == pytest.approx(1.0 / 3.0)
        assert rep.upper == pytest.approx(3.0 / 4.0)

    def test_hammersley_poisson(self):
        rep = asymptotic_densities(build_builtin("hammersley_poisson", lam=1.0, mu=2.0))
        assert (rep.lower, rep.upper) == (1.0, 2.0)
        assert rep.rarefaction

    def test_no_fan_flag(self):
        rep = asymptotic_densities(_constant_profile(1))
        assert not rep.rarefaction


class TestSerialization:
    @pytest.mark.parametrize(
        "family,params",
        [
            ("two_corner", {"x": 2, "y": 3}),
            ("periodic", {"k_plus": 2, "k_minus": 2}),
            ("bernoulli", {"p1": 0.2, "p2": 0.8}),
            ("hammersley_periodic", {"lam": 1.0, "mu": 2.0}),
            ("hammersley_poisson", {"lam": 1.0, "mu": 2.0}),
        ],
    )
    def test_round_trip(self, family, params):
        prof = build_builtin(family, **params)
        config = profile_to_config(prof)
        again = profile_from_config(config)
        assert profile_to_config(again) == config

    def test_round_trip_preserves_sites(self):
        prof = build_builtin("bernoulli", p1=0.3, p2=0.9, seed=21)
        again = profile_from_config(profile_to_config(prof))
        assert np.array_equal(prof.eta_window(-100, 100), again.eta_window(-100, 100))
