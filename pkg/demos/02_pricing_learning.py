"""
Sellers learning prices over a random co-purchase network
=========================================================

Each day a fresh network is drawn, every seller takes one projected
gradient step on their own revenue, and prices drift toward the
equilibrium of the game played over the expected network.
"""

import numpy as np
import lqnet as L

p = L.PricingParams.two_category(N=20)
spec = L.pricing_to_lq(p)
model = p.network_model()

sbar = L.solve_static(spec, model.mean())
print("equilibrium prices by category:", sbar[p.categories == 0][0].round(4), sbar[p.categories == 1][0].round(4))

runs = [L.run_time_varying(spec, model, L.FixedL(), 1000, seed=0, trial=t, probes=L.Probes(gap=True))
        for t in range(10)]
dist = np.mean([r.dist for r in runs], axis=0)
gap = np.mean([r.gap for r in runs], axis=0)
for k in (0, 10, 100, 500, 1000):
    print(f"k={k:5d}  mean distance {dist[k]:.5f}  mean normalized gap {gap[k]:.5f}")

# Now sellers show up on a given day with probability 0.9.
q = L.PricingParams.two_category(N=20, pbar=0.9)
pm = q.participation_model()
runs = [L.run_dynamic_population(spec, model, pm, L.FixedL(), 1000, seed=0, trial=t) for t in range(10)]
print("with absences, final mean distance:", np.mean([r.dist[-1] for r in runs]).round(5))
print("mean number of active sellers:", np.mean([r.participants.mean() for r in runs]).round(2))
