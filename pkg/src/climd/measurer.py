"""Per-sample training-difficulty scoring for multimodal classifiers.

Each sample is scored from two signals computed on model outputs:

* intra-modal confidence: a sigmoid-squashed mean log-probability of the
  true class, one score per modality, always in (0, 0.5];
* inter-modal complementarity: one minus the mean pairwise cosine
  similarity of the modality embeddings, in [0, 2] (0 = fully redundant
  modalities, 2 = antipodal).

The combined score is ``r = complementarity + mean(confidences)``.
Whether a large ``r`` counts as easy or hard is decided downstream by the
scheduler's ``difficulty_order`` setting; this module only computes scores.

All functions are pure and stateless: scoring different samples in
parallel yields the same table as sequential scoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

# Probabilities are floored at PROB_EPS inside the log so that a modality
# assigning ~0 to the true class scores near 0 instead of crashing.
PROB_EPS = 1e-12

PROB_SUM_TOL = 1e-6


@dataclass
class ModalityOutput:
    """One modality's class-probability vector and feature embedding."""

    probs: np.ndarray
    embedding: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        self.embedding = np.asarray(self.embedding, dtype=float)
        if self.probs.ndim != 1 or self.probs.size < 2:
            raise ValidationError(
                f"probs must be a vector over >= 2 classes, got shape {self.probs.shape}"
            )
        if np.any(self.probs < 0):
            raise ValidationError("probs has negative entries")
        total = float(self.probs.sum())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValidationError(f"probs sums to {total!r}, expected 1 within {PROB_SUM_TOL}")
        if self.embedding.ndim != 1 or self.embedding.size < 1:
            raise ValidationError("embedding must be a non-empty vector")
        if float(np.linalg.norm(self.embedding)) == 0.0:
            raise ValidationError("embedding has zero norm")

    @property
    def n_classes(self) -> int:
        return self.probs.size


@dataclass
class SampleTrace:
    """Model outputs for one sample across all of its modalities."""

    sample_id: str
    label: int
    modalities: list[ModalityOutput]

    def __post_init__(self):
        if len(self.modalities) < 2:
            raise ValidationError(
                f"sample {self.sample_id!r}: need >= 2 modalities, got {len(self.modalities)}"
            )
        cs = {m.n_classes for m in self.modalities}
        if len(cs) != 1:
            raise ValidationError(
                f"sample {self.sample_id!r}: modalities disagree on class count {sorted(cs)}"
            )
        c = cs.pop()
        if not 0 <= self.label < c:
            raise ValidationError(
                f"sample {self.sample_id!r}: label {self.label} outside [0, {c})"
            )

    @property
    def n_classes(self) -> int:
        return self.modalities[0].n_classes

    @property
    def n_modalities(self) -> int:
        return len(self.modalities)


@dataclass
class DifficultyRecord:
    """Per-sample difficulty breakdown: per-modality psi, phi, combined r."""

    sample_id: str
    label: int
    psi_per_modality: list[float]
    phi: float
    r: float


@dataclass
class DifficultyTable:
    """Ordered collection of difficulty records (row order = input order)."""

    records: list[DifficultyRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def by_id(self) -> dict[str, DifficultyRecord]:
        return {rec.sample_id: rec for rec in self.records}


def intra_modal_confidence(probs, label: int, n_classes: int | None = None) -> float:
    """Confidence of one modality in the true class.

    Computes sigmoid((1/C) * ln p[label]) with the probability floored at
    PROB_EPS. Strictly increasing in p[label]; equals 0.5 iff p[label]=1.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size < 2:
        raise ValidationError(f"probs must be a vector over >= 2 classes, got shape {probs.shape}")
    if np.any(probs < 0):
        raise ValidationError("probs has negative entries")
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ValidationError(f"probs sums to {total!r}, expected 1 within {PROB_SUM_TOL}")
    c = probs.size
    if n_classes is not None and n_classes != c:
        raise ValidationError(f"n_classes={n_classes} but probs has length {c}")
    if not 0 <= label < c:
        raise ValidationError(f"label {label} outside [0, {c})")
    p = max(float(probs[label]), PROB_EPS)
    x = math.log(p) / c
    # x <= 0 always, so exp(x) is safe from overflow.
    return math.exp(x) / (1.0 + math.exp(x))


def pairwise_similarity(a, b) -> float:
    """Cosine similarity of two embeddings, in [-1, 1]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("cannot take cosine similarity of a zero-norm embedding")
    s = float(np.dot(a, b)) / (na * nb)
    # Cosine can spill past +-1 by a few ulps.
    return min(1.0, max(-1.0, s))


def complementarity(embeddings: list) -> float:
    """How much the modality embeddings disagree, in [0, 2].

    One minus the mean pairwise cosine similarity over all ordered pairs
    m != m' (normalizer M*(M-1); for a symmetric similarity this equals
    the unordered-pair mean, so either form can be used to cross-check).
    """
    m = len(embeddings)
    if m < 2:
        raise ValidationError(f"complementarity needs >= 2 embeddings, got {m}")
    total = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            total += pairwise_similarity(embeddings[i], embeddings[j])
    mean_sim = 2.0 * total / (m * (m - 1))
    return 1.0 - mean_sim


def score_sample(trace: SampleTrace) -> DifficultyRecord:
    """Combined difficulty of one sample: r = phi + mean(psi)."""
    psis = [
        intra_modal_confidence(mod.probs, trace.label, trace.n_classes)
        for mod in trace.modalities
    ]
    phi = complementarity([mod.embedding for mod in trace.modalities])
    r = phi + sum(psis) / len(psis)
    return DifficultyRecord(
        sample_id=trace.sample_id,
        label=trace.label,
        psi_per_modality=psis,
        phi=phi,
        r=r,
    )


def score_dataset(traces: list[SampleTrace]) -> DifficultyTable:
    """Score every trace; order-preserving and deterministic.

    Rejects duplicate sample ids and traces with mismatched class counts,
    naming the offenders.
    """
    seen: set[str] = set()
    dupes = []
    for trace in traces:
        if trace.sample_id in seen:
            dupes.append(trace.sample_id)
        seen.add(trace.sample_id)
    if dupes:
        raise ValidationError(f"duplicate sample ids: {sorted(set(dupes))}")
    if traces:
        c0 = traces[0].n_classes
        bad = [t.sample_id for t in traces if t.n_classes != c0]
        if bad:
            raise ValidationError(
                f"traces disagree on class count (first sample has C={c0}); offenders: {bad}"
            )
    return DifficultyTable(records=[score_sample(t) for t in traces])
