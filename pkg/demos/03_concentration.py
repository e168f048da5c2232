"""
How good is the expected-network equilibrium on a given day?
============================================================

The equilibrium over the mean network is an epsilon-Nash equilibrium of the
game on each sampled network, with epsilon shrinking like sqrt(log N / N).
"""

import lqnet as L

for N in (20, 50, 100, 200):
    p = L.PricingParams.two_category(N)
    spec, model = L.pricing_to_lq(p), p.network_model()
    sbar = L.solve_static(spec, model.mean())
    rep = L.validate_concentration(spec, model, sbar, delta=0.1, trials=300, seed=0)
    print(f"N={N:4d}  median stage gap {rep.gap_quantiles['0.5']:.4f}  "
          f"worst {rep.max_observed_gap:.4f}  bound {rep.bound:.1f}  violations {rep.violations}")

# In the pricing game the coupling is -eta*M*alpha = -80 and the bound is
# loose. With unit boxes and coupling 0.8 it is a usable number:
print(L.epsilon_bound(alpha=0.8, s_max=1.0, n=1, N=100, delta=0.1))
