"""Builds a fixture collaboration graph and freezes reference statistics
computed independently with numpy."""
import json
import random

import numpy as np

rng = random.Random(20170814)
nodes = [f"ch{i:02d}" for i in range(24)]
groups = ["Gaming", "Music", "Comedy", None]
channels = []
for n in nodes:
    channels.append({"channel_id": n, "category": rng.choice(groups) or "", "video_count": rng.randint(0, 40)})
adjacency = {}
for _ in range(70):
    a, b = rng.sample(nodes, 2)
    w = rng.choice([1, 1, 1, 2, 2, 3, 5, 8])
    adjacency.setdefault(a, {})
    adjacency[a][b] = adjacency[a].get(b, 0) + w

weights = np.array([w for row in adjacency.values() for w in row.values()], dtype=float)
internal = {n: 0 for n in nodes}
external = {n: 0 for n in nodes}
for a, row in adjacency.items():
    for b, w in row.items():
        external[a] += w
        internal[b] += w

labels = {c["channel_id"]: (c["category"] or "None") for c in channels}
names = sorted(set(labels.values()))
matrix = np.zeros((len(names), len(names)))
for a, row in adjacency.items():
    for b, w in row.items():
        matrix[names.index(labels[a]), names.index(labels[b])] += w

ratios = {}
for c in channels:
    if c["video_count"] > 0:
        ratios[c["channel_id"]] = internal[c["channel_id"]] / c["video_count"]

with open("fixture_graph.json", "w") as f:
    json.dump({"nodes": nodes, "adjacency": adjacency, "channels": channels}, f, indent=1, sort_keys=True)
with open("fixture_reference.json", "w") as f:
    json.dump({
        "weights": {
            "count": int(weights.size), "sum": float(weights.sum()), "mean": float(weights.mean()),
            "median": float(np.median(weights)), "p75": float(np.percentile(weights, 75)),
            "min": float(weights.min()), "max": float(weights.max()),
        },
        "internal": internal, "external": external, "ratio": ratios,
        "category_groups": names, "category_matrix": matrix.tolist(),
    }, f, indent=1, sort_keys=True)
