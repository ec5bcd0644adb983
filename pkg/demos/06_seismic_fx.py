"""
Frequency-slice processing of a synthetic seismic volume with three plane
wave events on an 8 x 8 grid of traces.
"""
import numpy as np

from fastcadzow import SolverOptions, add_noise, mse, sample_mask
from fastcadzow.signals import gen_linear_events, ricker_spectrum
from fastcadzow.solvers import run_fx

rng = np.random.default_rng(6)
T = 256
vol = gen_linear_events((8, 8), T, 3, rng)
amp = ricker_spectrum(np.fft.rfftfreq(T), 0.05)
bins = np.flatnonzero(amp >= 1e-2 * amp.max())
band = (bins[0], bins[-1] + 1)
print("volume", vol.shape, "frequency bins", band)

#%% random noise
noisy = add_noise(vol, 1.0, rng)
for iters in (10, 100):
    opts = SolverOptions(variant="fast_cadzow", rank=3, max_iter=iters, fixed_iter=True)
    print(f"denoise, {iters} iterations: MSE {mse(run_fx(noisy, opts, band=band).volume, vol):.3f}")

#%% half of the traces missing
traces = sample_mask((8, 8), 0.5, rng).to_bool()
for iters in (10, 100, 1000):
    opts = SolverOptions(variant="fast_cadzow", rank=3, max_iter=iters, fixed_iter=True, alpha=1.0)
    out = run_fx(vol * traces, opts, trace_mask=traces, band=band).volume
    print(f"interpolation, {iters} iterations: MSE {mse(out, vol):.2e}")
