"""Seeded synthetic benchmarks drawn from the portable generator.

``gaussian_1d_binary``: 100 samples per class from N(-1, 1) and N(+1, 1),
seed 7, generated class 0 first then class 1.

``three_blobs``: isotropic 2-D Gaussians with std 1.0 centred at
(0, 0), (5, 0) and (2.5, 4.33); per class 200 training then 100 test
points, classes generated in order from one stream with seed 11.
"""

import numpy as np

from .data import Dataset
from .rng import SplitMix64

BLOB_CENTERS = ((0.0, 0.0), (5.0, 0.0), (2.5, 4.33))
BLOB_STD = 1.0
BLOB_SEED = 11
BINARY_SEED = 7


def gaussian_1d_binary(n_per_class=100, means=(-1.0, 1.0), std=1.0, seed=BINARY_SEED):
    rng = SplitMix64(seed)
    X, y = [], []
    for c, mu in enumerate(means):
        for _ in range(n_per_class):
            X.append([rng.normal(mu, std)])
            y.append(c)
    return Dataset(np.array(X), np.array(y), ("neg", "pos"))


def blobs(centers, n_train, n_test, std=1.0, seed=BLOB_SEED):
    rng = SplitMix64(seed)
    names = tuple(f"blob{c}" for c in range(len(centers)))
    tr_X, tr_y, te_X, te_y = [], [], [], []
    for c, center in enumerate(centers):
        for X, y, count in ((tr_X, tr_y, n_train), (te_X, te_y, n_test)):
            for _ in range(count):
                X.append([rng.normal(m, std) for m in center])
                y.append(c)
    return (
        Dataset(np.array(tr_X), np.array(tr_y), names),
        Dataset(np.array(te_X), np.array(te_y), names),
    )


def three_blobs():
    """600 training and 300 test points (balanced)."""
    return blobs(BLOB_CENTERS, 200, 100, BLOB_STD, BLOB_SEED)
