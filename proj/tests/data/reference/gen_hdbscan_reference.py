"""Freezes HDBSCAN reference outputs from scikit-learn for cross-checks.

Run from this directory:  python3 gen_hdbscan_reference.py > hdbscan_reference.json
"""
import json

import numpy as np
from sklearn.cluster import HDBSCAN

rng = np.random.default_rng(20170328)
cases = []


def add(name, X, mcs, ms, single=False):
    model = HDBSCAN(min_cluster_size=mcs, min_samples=ms, allow_single_cluster=single,
                    cluster_selection_method="eom", metric="euclidean")
    model.fit(X)
    cases.append({
        "name": name,
        "dim": int(X.shape[1]),
        "points": [float(v) for v in X.ravel()],
        "min_cluster_size": mcs,
        "min_samples": ms,
        "labels": [int(v) for v in model.labels_],
        "probabilities": [float(v) for v in model.probabilities_],
    })


add("five_uniform_points", rng.uniform(0.0, 1.0, size=(5, 2)), 4, 4)
blobs = np.vstack([rng.normal(c, 0.3, size=(30, 2)) for c in ([0, 0], [5, 5], [0, 6])])
add("three_blobs_2d", blobs, 5, 5)
add("three_blobs_2d_ms3", blobs, 8, 3)
noisy = np.vstack([blobs, rng.uniform(-3, 9, size=(15, 2))])
add("three_blobs_with_noise", noisy, 5, 5)
hd = np.vstack([rng.normal(0, 1, size=(40, 16)), rng.normal(0, 1, size=(40, 16)) + 8.0 / 4.0])
add("two_blobs_16d", hd, 10, 5)
add("uniform_square_60", rng.uniform(0.0, 1.0, size=(60, 2)), 6, 4)

print(json.dumps({"cases": cases}))
