import itertools

import numpy as np
import pytest


def brute_hankel(z, splits):
    """Block Hankel matrix by explicit enumeration of (row, column) multi-indices."""
    z = np.asarray(z)
    row_shape = [L for L, _ in splits]
    col_shape = [K for _, K in splits]
    rows = list(itertools.product(*[range(L) for L in row_shape]))
    cols = list(itertools.product(*[range(K) for K in col_shape]))
    H = np.empty((len(rows), len(cols)), dtype=complex)
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            H[a, b] = z[tuple(p + q for p, q in zip(i, j))]
    return H


def brute_dehankel(Z, dims, splits):
    row_shape = [L for L, _ in splits]
    col_shape = [K for _, K in splits]
    rows = list(itertools.product(*[range(L) for L in row_shape]))
    cols = list(itertools.product(*[range(K) for K in col_shape]))
    sums = np.zeros(dims, dtype=complex)
    counts = np.zeros(dims, dtype=int)
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            idx = tuple(p + q for p, q in zip(i, j))
            sums[idx] += Z[a, b]
            counts[idx] += 1
    return sums / counts, counts


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rel_err(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = {}


@pytest.fixture
def record_criterion(request):
    """Store and echo a one-line verdict for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[number] = line
        with request.config.pluginmanager.getplugin("capturemanager").global_and_fixture_disabled():
            print("\n" + line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
