#!/usr/bin/env python3
"""How per-sample training difficulty is scored.

Each multimodal sample gets two signals:

  psi (per modality)  confidence in the true class, sigmoid((1/C) ln p_true),
                      always in (0, 0.5]: 0.5 means the modality is certain.
  phi                 complementarity: 1 minus the mean pairwise cosine
                      similarity of the modality embeddings, in [0, 2].
                      0 = modalities redundant, 2 = antipodal.

The combined score is r = phi + mean(psi). Under the default ordering a
LARGER r (confident and complementary) counts as an EASIER sample.
"""

import numpy as np

from climd import ModalityOutput, SampleTrace, score_dataset, score_sample

# Three hand-built samples for a 3-class problem with two modalities.
confident_redundant = SampleTrace(
    sample_id="confident-redundant", label=0,
    modalities=[
        ModalityOutput(probs=[0.97, 0.02, 0.01], embedding=[1.0, 2.0, 0.0]),
        ModalityOutput(probs=[0.95, 0.03, 0.02], embedding=[1.0, 2.0, 0.0]),
    ],
)

confident_complementary = SampleTrace(
    sample_id="confident-complementary", label=0,
    modalities=[
        ModalityOutput(probs=[0.97, 0.02, 0.01], embedding=[1.0, 0.0, 0.0]),
        ModalityOutput(probs=[0.95, 0.03, 0.02], embedding=[0.0, 1.0, 0.0]),
    ],
)

uncertain = SampleTrace(
    sample_id="uncertain", label=0,
    modalities=[
        ModalityOutput(probs=[0.36, 0.33, 0.31], embedding=[1.0, 0.2, 0.0]),
        ModalityOutput(probs=[0.20, 0.45, 0.35], embedding=[0.9, 0.3, 0.1]),
    ],
)

print("sample                        psi_1   psi_2    phi      r")
for trace in (confident_redundant, confident_complementary, uncertain):
    rec = score_sample(trace)
    psi = rec.psi_per_modality
    print(f"{rec.sample_id:<28} {psi[0]:6.4f}  {psi[1]:6.4f}  {rec.phi:5.3f}  {rec.r:5.3f}")

# The same scoring over a random batch, with the whole-table API.
rng = np.random.default_rng(0)
traces = []
for i in range(6):
    c = 4
    traces.append(SampleTrace(
        sample_id=f"rand-{i}", label=int(rng.integers(c)),
        modalities=[ModalityOutput(probs=rng.dirichlet(np.ones(c)),
                                   embedding=rng.standard_normal(5))
                    for _ in range(3)],
    ))
table = score_dataset(traces)

print("\nrandom batch, sorted easiest first (largest r):")
for rec in sorted(table, key=lambda rec: -rec.r):
    print(f"  {rec.sample_id}: r = {rec.r:.4f}  (phi {rec.phi:.3f}, "
          f"mean psi {np.mean(rec.psi_per_modality):.4f})")
