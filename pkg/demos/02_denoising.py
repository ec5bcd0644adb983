"""
Denoising a sum of complex sinusoids with Cadzow and Fast Cadzow.
"""
import numpy as np

from fastcadzow import SolverOptions, add_noise, gen_spectral, mse, run

rng = np.random.default_rng(1)
N, r = 2048, 5
x, params = gen_spectral(N, r, rng)
y = add_noise(x, 0.5, rng)
print("frequencies", np.round(np.sort(params.frequencies.ravel()), 4))
print("noisy MSE", mse(y, x))

#%%
for variant in ("cadzow", "fast_cadzow"):
    res = run(y, None, SolverOptions(variant=variant, rank=r, tol=1e-6), truth=x)
    print(f"{variant:12s} MSE {mse(res.final, x):.4e}  iterations {res.iterations}  "
          f"time {res.wall_time:.2f}s")

#%% the trace holds the per-iteration history
for rec in res.trace[:4]:
    print(rec.iteration, f"{rec.rel_change:.2e}", f"{rec.mse:.4e}")
