"""
A periodic stream of Diracs seen through a Dirichlet kernel: denoise the
Fourier coefficients computed from noisy time samples.
"""
import numpy as np

from fastcadzow import SolverOptions, add_noise, mse, run
from fastcadzow.signals import gen_dirac_fourier, random_dirac_params, samples_to_fourier

rng = np.random.default_rng(5)
p = random_dirac_params(r=7, bandwidth=71, rng=rng)
fourier, samples = gen_dirac_fourier(p)
print("locations", np.round(np.sort(p.locations), 3))

#%% the coefficients are recovered exactly from clean samples
print("consistency", np.abs(samples_to_fourier(samples, 71) - fourier).max())

#%% noise on the samples, denoising on the coefficients
noisy = samples_to_fourier(add_noise(samples, 0.1, rng), 71)
res = run(noisy, None, SolverOptions(variant="fast_cadzow", rank=7))
print(f"MSE before {mse(noisy, fourier):.4e}, after {mse(res.final, fourier):.4e}")
