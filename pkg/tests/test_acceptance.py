"""
End-to-end acceptance checks. Each test prints one PASS/FAIL line, and the
collected verdicts are repeated in the terminal summary.

Run just this file with ``pytest tests/test_acceptance.py -v``.
"""
import time

import numpy as np
import pytest

from conftest import crandn, rel_err
from fastcadzow.hankel import (dehankelize, dehankelize_lowrank, hankel_adjoint_matvec,
                               hankel_matvec, hankelize_dense, make_plan)
from fastcadzow.lowrank import FactorTriple, tangent_project_dense
from fastcadzow.metrics import ExperimentConfig, componentwise_mse, mse, run_trials
from fastcadzow.signals import (add_noise, gen_linear_events, gen_spectral, ricker_spectrum,
                                sample_mask)
from fastcadzow.solvers import SolverOptions, fast_cadzow_step, run, run_fx

pytestmark = pytest.mark.slow


def random_dims(g, max_size, max_side=None):
    d = int(g.integers(1, 4))
    if d == 1:
        return (int(g.integers(1, max_size + 1)),)
    side = max_side or int(round(max_size ** (1 / d)))
    return tuple(int(n) for n in g.integers(1, side + 1, size=d))


def test_operator_correctness(record_criterion):
    t0 = time.perf_counter()
    g = np.random.default_rng(1)
    exact = 0
    for _ in range(100):
        dims = random_dims(g, 64, 8)
        plan = make_plan(dims)
        z = crandn(g, *dims)
        exact += np.array_equal(dehankelize(hankelize_dense(z, plan), plan), z)
    example = np.array_equal(dehankelize(np.arange(1, 10).reshape(3, 3), make_plan(5)), [1, 3, 5, 7, 9])
    elapsed = time.perf_counter() - t0
    ok = exact == 100 and example and elapsed < 1
    record_criterion(1, ok, f"exact left inverse {exact}/100, worked example {example}, {elapsed:.2f}s")
    assert ok


def test_fast_path_equivalence(record_criterion):
    t0 = time.perf_counter()
    g = np.random.default_rng(2)
    sizes = [(4096,), (4095,), (2048,), (64, 64), (16, 16, 16)]
    worst = 0.0
    for k in range(50):
        dims = sizes[k] if k < len(sizes) else random_dims(g, 1024, 12)
        plan = make_plan(dims)
        z = crandn(g, *dims)
        H = hankelize_dense(z, plan)
        v = crandn(g, plan.cols)
        u = crandn(g, plan.rows)
        r = int(min(3, *plan.shape))
        f = FactorTriple(np.linalg.qr(crandn(g, plan.rows, r))[0], np.sort(g.uniform(0.1, 2, r))[::-1],
                         np.linalg.qr(crandn(g, plan.cols, r))[0])
        worst = max(worst,
                    rel_err(hankel_matvec(z, v, plan), H @ v),
                    rel_err(hankel_adjoint_matvec(z, u, plan), H.conj().T @ u),
                    rel_err(dehankelize_lowrank(f, plan), dehankelize(f.to_dense(), plan)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 10
    record_criterion(2, ok, f"worst relative error {worst:.2e} over 50 instances, {elapsed:.2f}s")
    assert ok


def test_tangent_reduction_exactness(record_criterion):
    t0 = time.perf_counter()
    g = np.random.default_rng(3)
    worst = 0.0
    for k in range(25):
        dims = [(127,), (101,), (96,), (8, 8), (9, 14), (4, 5, 6)][k % 6]
        plan = make_plan(dims)
        assert max(plan.shape) <= 64
        r = int(g.integers(1, 5))
        x, _ = gen_spectral(dims, r, g)
        y = add_noise(x, float(g.uniform(0.1, 1.0)), g)
        z, anchor = fast_cadzow_step(y, None, r, plan)
        for _ in range(int(g.integers(1, 3))):
            P = tangent_project_dense(hankelize_dense(z, plan), anchor)
            U, s, Vh = np.linalg.svd(P)
            expected = dehankelize((U[:, :r] * s[:r]) @ Vh[:r], plan)
            z, anchor = fast_cadzow_step(z, anchor, r, plan)
            worst = max(worst, rel_err(z, expected))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10
    record_criterion(3, ok, f"worst relative error {worst:.2e} over 25 instances, {elapsed:.2f}s")
    assert ok


def test_exact_recovery(record_criterion):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(dims=(512,), rank=5, eps=0.0, fraction=0.5, trials=10, tol=1e-10,
                           max_iter=5000, alpha=1.0, variants=("cadzow", "fast_cadzow"), seed=4)
    table = run_trials(cfg)
    elapsed = time.perf_counter() - t0
    counts = {v: sum(r.mse <= 1e-8 for r in table.select(v)) for v in cfg.variants}
    ok = all(c >= 9 for c in counts.values()) and elapsed < 120
    record_criterion(4, ok, f"trials with MSE <= 1e-8: {counts}, "
                            f"mean MSE {table.mean('mse', 'fast_cadzow'):.2e}, {elapsed:.1f}s")
    assert ok


def test_denoising_agreement(record_criterion):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(dims=(1024,), rank=5, eps=0.5, trials=10, tol=1e-6, seed=5,
                           variants=("cadzow", "fast_cadzow"))
    table = run_trials(cfg)
    elapsed = time.perf_counter() - t0
    m_c, m_f = table.mean("mse", "cadzow"), table.mean("mse", "fast_cadzow")
    i_c, i_f = table.mean("iterations", "cadzow"), table.mean("iterations", "fast_cadzow")
    ok = abs(m_c - m_f) <= 0.01 * m_c and abs(i_c - i_f) <= 1 and elapsed < 120
    record_criterion(5, ok, f"MSE {m_c:.4e} vs {m_f:.4e}, iterations {i_c:.1f} vs {i_f:.1f}, "
                            f"{elapsed:.1f}s")
    assert ok


def test_gradient_superiority(record_criterion):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(dims=(256,), rank=5, eps=0.5, trials=100, max_iter=15, fixed_iter=True,
                           seed=6, variants=("cadzow", "fast_cadzow", "gradient", "fast_gradient"))
    table = run_trials(cfg)
    elapsed = time.perf_counter() - t0
    p = {v: table.positive_portion(v) for v in cfg.variants}
    ok = (p["gradient"] >= 0.9 and p["fast_gradient"] >= 0.9
          and 0.2 <= p["cadzow"] <= 0.7 and 0.2 <= p["fast_cadzow"] <= 0.7 and elapsed < 120)
    record_criterion(6, ok, "positive portions " + ", ".join(f"{v} {q:.2f}" for v, q in p.items())
                     + f", {elapsed:.1f}s")
    assert ok


def test_componentwise_dip(record_criterion):
    t0 = time.perf_counter()
    N, trials = 256, 200
    ratios = {}
    for variant in ("cadzow", "gradient"):
        opts = SolverOptions(variant=variant, rank=5, max_iter=15, fixed_iter=True)
        total = np.zeros(N)
        for seed in np.random.SeedSequence(7).spawn(trials):
            g = np.random.default_rng(seed)
            x, _ = gen_spectral(N, 5, g)
            y = add_noise(x, 0.5, g)
            total += componentwise_mse(run(y, None, opts).final, x)
        avg = total / trials
        middle = np.nanmean(avg[N // 3: 2 * N // 3])
        edges = np.nanmean(np.r_[avg[: N // 6], avg[N - N // 6:]])
        ratios[variant] = middle / edges
    elapsed = time.perf_counter() - t0
    ok = (ratios["cadzow"] < 1 and abs(1 - ratios["gradient"]) < abs(1 - ratios["cadzow"])
          and elapsed < 120)
    record_criterion(7, ok, f"middle/edge ratio cadzow {ratios['cadzow']:.3f}, "
                            f"gradient {ratios['gradient']:.3f}, {elapsed:.1f}s")
    assert ok


def test_dirac_denoising(record_criterion):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(generator="dirac", dims=(71,), rank=7, eps=0.1, trials=200, tol=1e-6,
                           seed=8, variants=("cadzow", "fast_cadzow"))
    table = run_trials(cfg)
    elapsed = time.perf_counter() - t0
    means = {v: table.mean("mse", v) for v in cfg.variants}
    ok = all(abs(m - 5.62e-2) <= 0.3 * 5.62e-2 for m in means.values()) and elapsed < 60
    record_criterion(8, ok, "mean MSE " + ", ".join(f"{v} {m:.3e}" for v, m in means.items())
                     + f" (reference 5.62e-02), {elapsed:.1f}s")
    assert ok


def test_speed_ratio(record_criterion):
    t0 = time.perf_counter()
    g = np.random.default_rng(9)
    x, _ = gen_spectral(4096, 10, g)
    y = add_noise(x, 0.5, g)
    plan = make_plan(4096)
    times = {"cadzow": [], "fast_cadzow": []}
    finals = {}
    for _ in range(5):
        for variant in times:
            opts = SolverOptions(variant=variant, rank=10, tol=1e-6, svd_method="gram")
            s = time.perf_counter()
            res = run(y, plan, opts)
            times[variant].append(time.perf_counter() - s)
            finals[variant] = (mse(res.final, x), res.iterations)
    elapsed = time.perf_counter() - t0
    med = {v: float(np.median(t)) for v, t in times.items()}
    ratio = med["fast_cadzow"] / med["cadzow"]
    ok = ratio <= 0.7 and elapsed < 300
    record_criterion(9, ok, f"median wall time fast {med['fast_cadzow']:.2f}s vs dense "
                            f"{med['cadzow']:.2f}s, ratio {ratio:.3f}; (MSE, iterations) {finals}, "
                            f"{elapsed:.1f}s")
    assert ok


def seismic_band(time_len, peak=0.05, floor=1e-2):
    freq = np.fft.rfftfreq(time_len)
    amp = ricker_spectrum(freq, peak)
    bins = np.flatnonzero(amp >= floor * amp.max())
    return int(bins[0]), int(bins[-1]) + 1


def test_seismic_synthetic(record_criterion):
    t0 = time.perf_counter()
    T, spatial = 256, (8, 8)
    g = np.random.default_rng(10)
    vol = gen_linear_events(spatial, T, 3, g)
    band = seismic_band(T)
    opts = SolverOptions(variant="fast_cadzow", rank=3, max_iter=10, fixed_iter=True, alpha=1.0)

    noisy = add_noise(vol, 1.0, g)
    denoised = run_fx(noisy, opts, band=band).volume
    mse_denoise = mse(denoised, vol)

    traces = sample_mask(spatial, 0.5, g).to_bool()
    recovered = run_fx(vol * traces, opts, trace_mask=traces, band=band).volume
    mse_recover = mse(recovered, vol)
    elapsed = time.perf_counter() - t0
    ok = mse_denoise <= 0.15 and mse_recover <= 1e-2 and elapsed < 300
    record_criterion(10, ok, f"denoise MSE {mse_denoise:.3e} (need <= 0.15), 50% trace recovery "
                             f"MSE {mse_recover:.3e} (need <= 1e-2), {elapsed:.1f}s")
    assert ok
