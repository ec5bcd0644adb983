"""
Hankel matrices of 1D and 2D signals, skew-diagonal averaging and
FFT-based products.
"""
import numpy as np

from fastcadzow.hankel import (dehankelize, dehankelize_lowrank, hankel_matvec, hankelize_dense,
                               make_plan)
from fastcadzow.lowrank import truncated_svd

#%% a length-5 signal gives a 3 x 3 Hankel matrix
plan = make_plan(5)
print(plan.shape, plan.weights)
print(hankelize_dense([1, 2, 3, 4, 5], plan).real)

#%% averaging the skew-diagonals of an arbitrary matrix
Z = np.arange(1, 10).reshape(3, 3)
print(dehankelize(Z, plan).real)  # [1 3 5 7 9]

#%% 2D signals use a Hankel matrix of Hankel blocks
plan2 = make_plan((3, 3))
print(plan2.shape)
print(plan2.weights)

#%% products with a large Hankel matrix never form it
rng = np.random.default_rng(0)
N = 4096
z = rng.standard_normal(N) + 1j * rng.standard_normal(N)
big = make_plan(N)
v = rng.standard_normal(big.cols)
fast = hankel_matvec(z, v, big)
dense = hankelize_dense(z, big) @ v
print("matvec error", np.linalg.norm(fast - dense) / np.linalg.norm(dense))

#%% averaging a rank-r matrix straight from its factors
f = truncated_svd(hankelize_dense(z, big), 4, method="gram")
a = dehankelize_lowrank(f, big)
b = dehankelize(f.to_dense(), big)
print("low-rank averaging error", np.linalg.norm(a - b) / np.linalg.norm(b))
