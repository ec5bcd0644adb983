"""
Reweighted (gradient) updates versus plain Cadzow over a fixed number of
iterations: how often does the error go down, and where along the signal
is it largest?
"""
import numpy as np

from fastcadzow import ExperimentConfig, SolverOptions, add_noise, gen_spectral, run, run_trials
from fastcadzow.metrics import componentwise_mse

cfg = ExperimentConfig(dims=(256,), rank=5, eps=0.5, trials=50, max_iter=15, fixed_iter=True,
                       variants=("cadzow", "fast_cadzow", "gradient", "fast_gradient"), seed=3)
table = run_trials(cfg)
for g in table.summary():
    print(f"{g['variant']:14s} mean MSE {g['mse']:.4e}  positive {g['positive']:.2f}")

#%% entrywise error profile, averaged over trials
rng = np.random.default_rng(4)
profiles = {"cadzow": 0, "gradient": 0}
for _ in range(50):
    x, _ = gen_spectral(256, 5, rng)
    y = add_noise(x, 0.5, rng)
    for v in profiles:
        z = run(y, None, SolverOptions(variant=v, rank=5, max_iter=15, fixed_iter=True)).final
        profiles[v] = profiles[v] + componentwise_mse(z, x) / 50
for v, p in profiles.items():
    thirds = [np.mean(p[k * 85:(k + 1) * 85]) for k in range(3)]
    print(v, "first/middle/last third:", np.round(thirds, 4))
