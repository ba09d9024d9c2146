#!/usr/bin/env python3
"""End-to-end comparison on synthetic imbalanced multimodal data.

For each seed the lab:
  1. generates a long-tailed Gaussian-mixture dataset (3 modalities),
  2. holds out a balanced test split,
  3. trains a throwaway model for a few warm-up epochs to collect traces,
  4. scores difficulty, fits the class power law, builds the curriculum,
  5. trains the fusion classifier under the curriculum schedule and,
     from the same initialization, under a random baseline with exactly
     the same number of sample visits,
  6. reports accuracy / weighted F1 / macro F1 on the balanced test set.

Macro F1 is the honest long-tail metric: the curriculum's class-balanced
early epochs pay off on minority classes.

Equivalent CLI: climd simulate --seeds 5 --out <dir>
"""

import time

from climd import SyntheticSpec, TrainConfig, run_experiment

spec = SyntheticSpec(n_classes=5, dims=(8, 8, 8), n_samples=2000,
                     imbalance_exponent=1.5, class_separation=2.0,
                     noise_scale=1.0, redundancy=0.3, seed=0)
config = TrainConfig(learning_rate=0.01, epochs=20, warmup_epochs=3,
                     batch_size=32, hidden=16, seed=0)

print(f"dataset: N={spec.n_samples}, C={spec.n_classes}, "
      f"imbalance exponent {spec.imbalance_exponent}")
print(f"training: {config.epochs} epochs, lr {config.learning_rate}, "
      f"{config.resolved_warmup if config.warmup_epochs is None else config.warmup_epochs} "
      f"warm-up epochs\n")

start = time.perf_counter()
report = run_experiment(spec, config, n_seeds=5)
elapsed = time.perf_counter() - start

print("seed  arm        accuracy  weighted_f1  macro_f1   visits")
for row in report.rows:
    print(f"{row.seed:>4}  {row.arm:<9} {row.accuracy:9.4f} {row.weighted_f1:12.4f} "
          f"{row.macro_f1:9.4f} {row.visits:8d}")

print(f"\nmeans:     curriculum macro F1 {report.mean('climd', 'macro_f1'):.4f}  "
      f"vs baseline {report.mean('baseline', 'macro_f1'):.4f}")
print(f"curriculum wins {report.wins} of {len(report.seeds)} seeds "
      f"({elapsed:.1f}s total)")
