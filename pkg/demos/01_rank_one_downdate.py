"""
Dropping one row from a regression design
=========================================

Deleting a row ``x`` from ``Q`` changes the inverse information matrix by a
rank-one term. This script checks the shortcut against a full re-inversion
and shows that the A-criterion can only grow when data are thrown away.
"""

import numpy as np

from aopt_subdata import apply_removal, inverse_info, removal_score

rng = np.random.default_rng(3)
Q = rng.normal(size=(40, 4))

state = inverse_info(Q)
print(f"tr((Q^T Q)^-1) with all 40 rows: {state.trace:.5f}")

# Score every row, then delete the cheapest one.
scores = [removal_score(state, Q[i], i).score for i in range(len(Q))]
best = int(np.argmin(scores))
print(f"cheapest row to drop: {best}  (trace would become {scores[best]:.5f})")
print(f"most expensive row:   {int(np.argmax(scores))}  (trace {max(scores):.5f})")

new = apply_removal(state, removal_score(state, Q[best], best))
Q_small = np.delete(Q, best, axis=0)
direct = np.linalg.inv(Q_small.T @ Q_small)
err = np.linalg.norm(new.inv - direct) / np.linalg.norm(direct)
print(f"relative error against direct inverse: {err:.2e}")

# Rows with large leverage are the expensive ones to lose.
h = np.einsum("ij,jk,ik->i", Q, state.inv, Q)
print("correlation between leverage and deletion cost:",
      round(float(np.corrcoef(h, scores)[0, 1]), 3))
