"""
Filling in missing samples: noiseless completion and the blended update
for noisy, partial observations.
"""
import numpy as np

from fastcadzow import SolverOptions, add_noise, gen_spectral, mse, run, sample_mask

rng = np.random.default_rng(2)
N, r = 512, 5
x, _ = gen_spectral(N, r, rng)
mask = sample_mask(N, 0.5, rng)
observed = mask.to_bool()
print(len(mask), "of", N, "samples observed")

#%% exact observations: pin them (alpha = 1)
y = np.where(observed, x, 0)
res = run(y, None, SolverOptions(variant="fast_cadzow", rank=r, tol=1e-10, max_iter=3000,
                                 alpha=1.0), mask=mask, truth=x)
print("noiseless completion MSE", f"{res.trace[-1].mse:.2e}", "after", res.iterations, "iterations")

#%% noisy observations: keep only part of each observed value (alpha = 0.8)
y = np.where(observed, add_noise(x, 0.5, rng), 0)
for alpha in (1.0, 0.8):
    res = run(y, None, SolverOptions(variant="fast_cadzow", rank=r, alpha=alpha), mask=mask)
    print(f"alpha {alpha}: MSE {mse(res.final, x):.4e}")
