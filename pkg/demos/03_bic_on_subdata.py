"""
Model selection on 500 rows instead of 20,000
=============================================

Simulate Case 1 data where only the first four predictors matter, pick 500
rows with ALG2, and run all-subset and forward BIC on the subdata. Model ids
are 0-based column tuples, so the true model reads ``(0, 1, 2, 3)``.
"""

import numpy as np

from aopt_subdata import (CaseSpec, DataMatrix, all_subset_bic, centralize, forward_bic,
                          gen_covariates, gen_response, gen_true_model, select_subdata)

seed = 2024
X = gen_covariates(CaseSpec(case_id=1, n=20_000, seed=seed))
truth = gen_true_model(seed)
y, mu = gen_response(X, truth, seed)
print("true beta:", np.round(truth.beta, 3), "active set:", truth.active_set)

full, cmap = centralize(DataMatrix(X, y))
rows = select_subdata(X, 500, "alg2").indices
sub = (full.X[rows], full.y[rows])

exhaustive = all_subset_bic(sub, x_means=cmap.x_means, y_mean=cmap.y_mean)
print("all-subset pick:", exhaustive.selected, f"BIC {exhaustive.best.bic:.2f}")
for fit in sorted(exhaustive.fits, key=lambda f: f.bic)[:5]:
    print(f"   {str(fit.model):<22} BIC {fit.bic:9.2f}")

greedy = forward_bic(sub, x_means=cmap.x_means, y_mean=cmap.y_mean)
print("forward path:", greedy.path, "->", greedy.selected)

on_full = all_subset_bic(full)
print("all-subset on the full 20,000 rows:", on_full.selected)
