"""
A pocket-sized accuracy/MSPE sweep
==================================

Twenty replicates of Cases 1 and 2 at n = 5,000. Expect accuracy to climb
and prediction error to fall as k grows. The full desk-scale run (100
replicates, n = 10,000) lives in the acceptance tests and takes minutes.
"""

from aopt_subdata.evalkit import SweepConfig, plot_summary, run_sweep

config = SweepConfig(cases=(1, 2), algorithms=("levss", "alg1", "alg2"),
                     ks=(200, 400, 800), replicates=20, n=5_000, master_seed=1)
summary = run_sweep(config)

print(f"{'case':>4} {'alg':>6} {'k':>5} {'acc':>6} {'mean mspe':>10}")
for c in summary.cells:
    print(f"{c.case:>4} {c.algorithm:>6} {c.k:>5} {c.accuracy:6.2f} {c.mean_mspe:10.4f}")

summary.to_csv("small_sweep.csv")
print("plots:", *plot_summary(summary, "."))
