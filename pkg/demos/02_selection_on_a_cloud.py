"""
Where the selectors put their points
====================================

A 2-D Gaussian cloud of 5,000 points, thinned to 60 rows by each selector.
A-optimal subsets hug the periphery of the cloud; random subsets look like
the cloud itself. The figure is written to ``selection_cloud.svg``.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from aopt_subdata.subselect import select_subdata, selection_trace

rng = np.random.default_rng(11)
X = rng.multivariate_normal([0, 0], [[1, 0.5], [0.5, 1]], size=5000)
k = 60

fig, axes = plt.subplots(1, 4, figsize=(14, 3.6), sharex=True, sharey=True)
for ax, alg in zip(axes, ("random", "levss", "alg1", "alg2")):
    res = select_subdata(X, k, alg, rng_seed=0)
    ax.scatter(X[:, 0], X[:, 1], s=2, c="0.85")
    ax.scatter(X[res.indices, 0], X[res.indices, 1], s=12, c="C3")
    tr = selection_trace(X, res.indices)
    ax.set_title(f"{alg}: tr = {tr:.4f}")
    print(f"{alg:>6}: A-criterion {tr:.5f}, {res.elapsed * 1e3:.1f} ms")

fig.tight_layout()
fig.savefig("selection_cloud.svg")
print("wrote selection_cloud.svg")
