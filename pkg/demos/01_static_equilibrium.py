"""
Nash equilibrium of a small LQ network game
===========================================

Three players on a triangle, each choosing a 2-d strategy in a box.
"""

import numpy as np
import lqnet as L

rng = np.random.default_rng(1)
spec, A = L.random_game(rng, n_players=3, dim=2, box=1.0)

# constants of the game map over this network; mu > 0 means a unique equilibrium
c = L.game_constants(spec, A)
print(f"L = {c.L:.4f}   mu = {c.mu:.4f}   largest safe step = {c.tau_star:.4f}")

sbar = L.solve_static(spec, A)
print("equilibrium:", np.round(sbar, 6))
print("VI residual:", L.vi_residual(spec, A, sbar))

# nobody gains by deviating alone
for i in range(spec.n_players):
    print(f"player {i}: cost {L.cost(spec, i, sbar, A):+.8f}  best response {L.best_response_cost(spec, i, sbar, A):+.8f}")

# fixed-step gradient play contracts toward it from the box corner
traj = L.gradient_play(spec, A, 0.5 * c.tau_star, 30)
print("distance every 5 steps:", np.round(np.linalg.norm(traj - sbar, axis=1)[::5], 6))
