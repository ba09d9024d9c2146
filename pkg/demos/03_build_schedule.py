#!/usr/bin/env python3
"""From difficulty scores to concrete per-epoch training subsets.

The scheduler ramps the class mixture from uniform (epoch 1) toward the
fitted power law, overriding the final epoch to the complete dataset.
Within each class, epochs take prefixes of a fixed easy-to-hard queue.

The classic illustration: N=1000 samples, C=10 classes, T=10 epochs,
imbalance cap alpha(T)=5, gamma=0.3. Epoch 1 is ten classes x 10
samples; by epoch 10 the head class holds ~50% of the data.
"""

import numpy as np

from climd import (
    ClassDistribution,
    DifficultyRecord,
    DifficultyTable,
    build_schedule,
    epoch_rank_counts,
    synthetic_powerlaw_schedule,
)

schedule, dist = synthetic_powerlaw_schedule(
    n_samples=1000, total_epochs=10, n_classes=10, alpha_cap=5.0, gamma=0.3)
counts = epoch_rank_counts(schedule, dist)

print("epoch-by-rank subset sizes (rank 1 = largest class):")
print("epoch " + " ".join(f"r{r:<4}" for r in range(1, 11)))
for t, row in enumerate(counts, start=1):
    print(f"{t:>5} " + " ".join(f"{v:<5}" for v in row))
print(f"row sums: {counts.sum(axis=1).tolist()}  (= 100*t, full data at T)")

# The same machinery on a small dataset with real difficulty scores:
# class 0 has four samples scored 0.9 > 0.7 > 0.4 > 0.1, so epochs take
# prefixes of [a, b, c, d]; class 1 similarly.
records = [
    DifficultyRecord("a", 0, [0.45, 0.45], 0.45, 0.9),
    DifficultyRecord("b", 0, [0.35, 0.35], 0.35, 0.7),
    DifficultyRecord("c", 0, [0.20, 0.20], 0.20, 0.4),
    DifficultyRecord("d", 0, [0.05, 0.05], 0.05, 0.1),
    DifficultyRecord("e", 1, [0.40, 0.40], 0.40, 0.8),
    DifficultyRecord("f", 1, [0.10, 0.10], 0.10, 0.2),
]
table = DifficultyTable(records=records)
small = ClassDistribution.from_labels([r.label for r in records], gamma=0.3)
plan = build_schedule(table, small, total_epochs=3)

print("\nsix samples, two classes, three epochs (easy prefixes grow):")
for p in plan.plans:
    print(f"  epoch {p.t}: {p.sample_ids}  counts {p.counts}")
