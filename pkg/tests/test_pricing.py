import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import lqnet as L


def test_substitution_values():
    p = L.PricingParams.two_category(4, dbar_by_category=(2.0, 2.0))
    spec = L.pricing_to_lq(p)
    np.testing.assert_array_equal(spec.q[:, 0, 0], 200.0)
    np.testing.assert_array_equal(spec.theta[:, 0], 200.0)
    assert spec.alpha == pytest.approx(-80.0)
    np.testing.assert_array_equal(spec.lo, 0.0)
    np.testing.assert_array_equal(spec.hi, 20.0)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 12))
def test_cost_is_negative_profit(seed, N):
    rng = np.random.default_rng(seed)
    p = L.PricingParams(N=N, M=int(rng.integers(1, 200)), eta=rng.uniform(0.1, 3), alpha=rng.uniform(0, 2),
                        dbar=rng.uniform(0.5, 10, N), categories=L.even_split(N), block_probs=[[0.8, 0.3], [0.3, 0.8]])
    spec = L.pricing_to_lq(p)
    model = p.network_model()
    for _ in range(10):
        s = rng.uniform(0, p.price_cap, N)
        A = model.sample(rng)
        for i in range(N):
            want = p.M * (p.eta * s[i] ** 2 - s[i] * (p.dbar[i] - p.eta * p.alpha / N * (A[i] @ s)))
            assert L.cost(spec, i, s, A) == pytest.approx(want, rel=1e-10, abs=1e-10)
            # profit = price times demand
            assert -L.cost(spec, i, s, A) == pytest.approx(s[i] * L.demand(p, s, A)[i], rel=1e-10, abs=1e-10)


def test_monopoly_price_without_network_effect():
    for M in (1, 100):
        p = L.PricingParams.two_category(10, M=M, eta=2.0, alpha=0.0)
        s = L.solve_static(L.pricing_to_lq(p), p.mean_network())
        np.testing.assert_allclose(s, p.dbar / (2 * 2.0), atol=1e-9)


def test_demand_values():
    p = L.PricingParams.two_category(2, dbar_by_category=(2.0, 2.0), alpha=0.0)
    A = np.zeros((2, 2))
    np.testing.assert_allclose(L.demand(p, [1.0, 1.0], A), [100.0, 100.0])
    q = L.PricingParams.two_category(6)
    np.testing.assert_allclose(L.demand(q, np.zeros(6), q.mean_network()), q.M * q.dbar)
    with pytest.raises(ValueError):
        L.demand(q, np.zeros(5), q.mean_network())


def test_gradient_identity(rng):
    p = L.PricingParams.two_category(30)
    spec = L.pricing_to_lq(p)
    for _ in range(20):
        s = rng.uniform(0, 20, 30)
        A = p.network_model().sample(rng)
        want = -L.demand(p, s, A) + p.eta * p.M * s
        np.testing.assert_allclose(L.game_jacobian(spec, s, A), want, rtol=1e-10, atol=1e-10)


def test_even_split_and_category_demands():
    np.testing.assert_array_equal(L.even_split(6), [0, 0, 0, 1, 1, 1])
    np.testing.assert_array_equal(L.even_split(5), [0, 0, 0, 1, 1])
    p = L.PricingParams.two_category(4)
    np.testing.assert_array_equal(p.dbar, [2.0, 2.0, 10.0, 10.0])
    np.testing.assert_array_equal(p.mean_network(), L.block_mean([0, 0, 1, 1], [[0.8, 0.3], [0.3, 0.8]]))


def test_price_cap_not_binding_under_defaults():
    for N in (20, 50, 100):
        p = L.PricingParams.two_category(N)
        spec = L.pricing_to_lq(p)
        for net in (p.mean_network(), 0.9 * p.mean_network()):
            sol = L.solve_unconstrained(spec, net)
            assert sol.interior
            assert sol.s.max() < 0.3 * p.price_cap


def test_reference_equilibrium_constants():
    p = L.PricingParams.two_category(50)
    spec = L.pricing_to_lq(p)
    c = L.game_constants(spec, p.mean_network())
    norm = np.linalg.norm(p.mean_network(), 2)
    assert c.L == pytest.approx(200 + 80 / 50 * norm, rel=1e-10)
    assert c.mu == pytest.approx(200 - 80 / 50 * norm, rel=1e-10)


@pytest.mark.parametrize("bad", [dict(eta=0.0), dict(alpha=-1.0), dict(M=0), dict(price_cap=0.0), dict(pbar=0.0),
                                 dict(dbar_by_category=(0.0, 1.0)), dict(block_probs=((1.2, 0), (0, 1)))])
def test_validation(bad):
    with pytest.raises(ValueError):
        L.PricingParams.two_category(4, **bad)


def test_dict_round_trip():
    p = L.PricingParams.two_category(7, pbar=0.9)
    q = L.PricingParams.from_dict(p.to_dict())
    for f in ("dbar", "categories", "block_probs", "pbar"):
        np.testing.assert_array_equal(getattr(q, f), getattr(p, f))
    short = L.PricingParams.from_dict({"N": 7, "dbar_by_category": [2, 10], "pbar": 0.9})
    np.testing.assert_array_equal(short.dbar, p.dbar)
    with pytest.raises(ValueError):
        L.PricingParams.from_dict({"N": 3, "dbar": 1.0, "colour": "red"})
