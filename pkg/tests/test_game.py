import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import lqnet as L
from conftest import random_profile, two_player


def dense_system(spec, A):
    # independent construction of Q - alpha/N (A kron I)
    N, n = spec.n_players, spec.dim
    M = np.zeros((N * n, N * n))
    for i in range(N):
        for j in range(N):
            blk = -spec.alpha / N * A[i, j] * np.eye(n)
            if i == j:
                blk = blk + spec.q[i]
            M[i * n:(i + 1) * n, j * n:(j + 1) * n] = blk
    return M


seeds = st.integers(0, 2**32 - 1)


class TestGameSpec:
    def test_rejects_asymmetric_q(self):
        with pytest.raises(ValueError, match="symmetric"):
            L.GameSpec(q=[[[1.0, 0.5], [0.0, 1.0]]], theta=[[0.0, 0.0]], alpha=0.0,
                       boxes=(L.StrategyBox([0, 0], [1, 1]),))

    def test_rejects_indefinite_q(self):
        with pytest.raises(ValueError, match="positive definite"):
            L.GameSpec(q=[[[1.0, 2.0], [2.0, 1.0]]], theta=[[0.0, 0.0]], alpha=0.0,
                       boxes=(L.StrategyBox([0, 0], [1, 1]),))

    def test_rejects_wrong_box_count(self):
        with pytest.raises(ValueError, match="boxes"):
            L.GameSpec(q=np.ones((2, 1, 1)), theta=[1.0, 1.0], alpha=0.0, boxes=(L.StrategyBox([0], [1]),))

    def test_box_needs_lo_le_hi(self):
        with pytest.raises(ValueError):
            L.StrategyBox([1.0], [0.0])

    def test_s_max_is_max_corner_norm(self):
        box = L.StrategyBox([-3.0, 0.0], [1.0, 4.0])
        assert box.s_max == pytest.approx(5.0)
        corners = [np.array([a, b]) for a in (-3, 1) for b in (0, 4)]
        assert box.s_max == pytest.approx(max(np.linalg.norm(c) for c in corners))

    def test_immutable(self, pair):
        spec, _ = pair
        with pytest.raises(ValueError):
            spec.q[0, 0, 0] = 5.0

    def test_json_round_trip(self, rng):
        spec, _ = L.random_game(rng, 4, 3)
        back = L.GameSpec.from_json(spec.to_json())
        np.testing.assert_array_equal(back.q, spec.q)
        np.testing.assert_array_equal(back.theta, spec.theta)
        np.testing.assert_array_equal(back.lo, spec.lo)
        np.testing.assert_array_equal(back.hi, spec.hi)
        assert back.alpha == spec.alpha

    def test_json_schema_fields(self, pair):
        d = json.loads(pair[0].to_json())
        assert set(d) == {"n_players", "dim", "q", "theta", "alpha", "boxes"}
        assert d["boxes"][0] == {"lo": [0.0], "hi": [10.0]}
        assert d["q"] == [[[1.0]], [[1.0]]]

    def test_theta_max_recorded(self, rng):
        spec, _ = L.random_game(rng, 5, 2)
        assert spec.theta_max == pytest.approx(max(np.linalg.norm(t) for t in spec.theta))


class TestCost:
    def test_single_player(self):
        spec = L.GameSpec(q=[[[2.0]]], theta=[3.0], alpha=7.0, boxes=(L.StrategyBox([-5], [5]),))
        assert L.cost(spec, 0, [1.0], [[0.0]]) == pytest.approx(-2.0)

    def test_two_player_hand_value(self, pair):
        spec, A = pair
        assert L.cost(spec, 0, [4 / 3, 4 / 3], A) == pytest.approx(-8 / 9, abs=1e-14)

    def test_pricing_hand_value(self):
        p = L.PricingParams.two_category(N=2, dbar_by_category=(2.0, 2.0))
        spec = L.pricing_to_lq(p)
        assert L.cost(spec, 0, [1.0, 0.0], np.zeros((2, 2))) == pytest.approx(-100.0)

    def test_index_and_shape_errors(self, pair):
        spec, A = pair
        with pytest.raises(IndexError):
            L.cost(spec, 2, [0.0, 0.0], A)
        with pytest.raises(ValueError):
            L.cost(spec, 0, [0.0, 0.0, 0.0], A)
        with pytest.raises(ValueError):
            L.cost(spec, 0, [0.0, 0.0], np.zeros((3, 3)))


class TestJacobian:
    def test_zero_alpha_is_decoupled(self, rng):
        spec, A = L.random_game(rng, 4, 2)
        spec0 = L.GameSpec(q=spec.q, theta=spec.theta, alpha=0.0, boxes=spec.boxes)
        s = random_profile(rng, spec)
        want = np.concatenate([spec.q[i] @ s[2 * i:2 * i + 2] - spec.theta[i] for i in range(4)])
        np.testing.assert_allclose(L.game_jacobian(spec0, s, A), want, rtol=1e-14, atol=1e-12)

    def test_vanishes_at_hand_equilibrium(self, pair):
        spec, A = pair
        np.testing.assert_allclose(L.game_jacobian(spec, [4 / 3, 4 / 3], A), 0.0, atol=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.integers(1, 5), st.integers(1, 3))
    def test_matches_finite_differences(self, seed, N, n):
        rng = np.random.default_rng(seed)
        spec, A = L.random_game(rng, N, n, box=2.0)
        s = random_profile(rng, spec)
        F = L.game_jacobian(spec, s, A)
        h = 1e-5
        for i in range(N):
            for c in range(n):
                e = np.zeros_like(s)
                e[i * n + c] = h
                fd = (L.cost(spec, i, s + e, A) - L.cost(spec, i, s - e, A)) / (2 * h)
                assert abs(fd - F[i * n + c]) <= 1e-6 * max(1.0, abs(F[i * n + c]))

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.integers(1, 6), st.integers(1, 3))
    def test_affine_in_profile(self, seed, N, n):
        rng = np.random.default_rng(seed)
        spec, A = L.random_game(rng, N, n)
        s, t = random_profile(rng, spec), random_profile(rng, spec)
        lhs = L.game_jacobian(spec, s, A) - L.game_jacobian(spec, t, A)
        np.testing.assert_allclose(lhs, dense_system(spec, A) @ (s - t), rtol=1e-10, atol=1e-9)


class TestConstants:
    def test_hand_values(self, pair):
        c = L.game_constants(*pair)
        assert c.L == pytest.approx(1.25, rel=1e-10)
        assert c.mu == pytest.approx(0.75, rel=1e-10)
        assert c.tau_star == pytest.approx(0.96, rel=1e-10)

    def test_no_network_term(self, rng):
        spec, A = L.random_game(rng, 4, 2)
        lo, hi = np.linalg.eigvalsh(spec.q)[:, 0].min(), np.linalg.eigvalsh(spec.q)[:, -1].max()
        for s2, net in [(L.GameSpec(q=spec.q, theta=spec.theta, alpha=0.0, boxes=spec.boxes), A),
                        (spec, np.zeros_like(A))]:
            c = L.game_constants(s2, net)
            assert c.L == pytest.approx(hi) and c.mu == pytest.approx(lo)

    def test_negative_alpha_uses_magnitude(self, pair):
        spec, A = two_player(alpha=-0.5)
        c = L.game_constants(spec, A)
        assert c.mu == pytest.approx(0.75) and c.L == pytest.approx(1.25)

    def test_violation_reported(self):
        spec, A = two_player(alpha=3.0)
        c = L.game_constants(spec, A)
        assert not c.strongly_monotone and c.tau_star < 0
        with pytest.raises(L.AssumptionViolated) as exc:
            L.game_constants(spec, A, require=True)
        assert exc.value.mu == pytest.approx(-0.5)

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.integers(1, 6), st.integers(1, 3))
    def test_lipschitz_and_monotone(self, seed, N, n):
        rng = np.random.default_rng(seed)
        spec, A = L.random_game(rng, N, n)
        c = L.game_constants(spec, A)
        assert c.L >= c.mu
        for _ in range(100):
            s, t = random_profile(rng, spec), random_profile(rng, spec)
            dF = L.game_jacobian(spec, s, A) - L.game_jacobian(spec, t, A)
            d = s - t
            assert np.linalg.norm(dF) <= c.L * np.linalg.norm(d) * (1 + 1e-10)
            assert dF @ d >= c.mu * (d @ d) * (1 - 1e-10)


class TestProjection:
    def test_feasible_point_unchanged(self, pair):
        spec, _ = pair
        np.testing.assert_array_equal(L.project([1.0, 9.5], spec), [1.0, 9.5])

    def test_clamps(self, pair):
        spec, _ = pair
        np.testing.assert_array_equal(L.project([-3.0, 12.0], spec), [0.0, 10.0])

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_idempotent_and_nonexpansive(self, seed):
        rng = np.random.default_rng(seed)
        spec, _ = L.random_game(rng, 3, 2, box=1.0)
        for _ in range(100):
            x, y = rng.normal(0, 3, 6), rng.normal(0, 3, 6)
            px, py = L.project(x, spec), L.project(y, spec)
            assert L.feasible(px, spec)
            np.testing.assert_array_equal(L.project(px, spec), px)
            assert np.linalg.norm(px - py) <= np.linalg.norm(x - y) + 1e-15


class TestNetworkCheck:
    @pytest.mark.parametrize("A", [[[0, 2], [0, 0]], [[0, -0.1], [0, 0]], [[1, 0], [0, 0]], [[0, 1, 0]]])
    def test_rejects(self, A):
        with pytest.raises(ValueError):
            L.check_network(A)
