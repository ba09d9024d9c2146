"""Turns difficulty scores and epoch targets into concrete training subsets.

For every class the samples are ordered easy to hard (direction set by
``difficulty_order``; by default a larger combined score means easier,
i.e. confident and complementary). Each epoch takes a prefix of every
class queue, with integer counts obtained by largest-remainder
apportionment of the epoch target, clamped to class availability. The
final epoch is overridden to the complete dataset so that every sample
participates at least once.

Everything here is deterministic: ties are broken by sample id
(lexicographic), largest-remainder ties by rank order, and schedules are
immutable once built, so they can be shared across parallel consumers.
"""

from __future__ import annotations

import hashlib
import json
import zlib
from dataclasses import dataclass, field

import numpy as np

from .distribution import ClassDistribution, epoch_target
from .errors import InfeasibleScheduleError, ValidationError
from .measurer import DifficultyRecord, DifficultyTable

EASY_HIGH_R = "high_r_easy"
EASY_LOW_R = "low_r_easy"


def _stream(seed: int, purpose: str) -> np.random.Generator:
    """Named deterministic RNG stream (stable across platforms/runs)."""
    return np.random.default_rng([int(seed), zlib.crc32(purpose.encode())])


@dataclass
class ScheduleConfig:
    difficulty_order: str = EASY_HIGH_R

    def __post_init__(self):
        if self.difficulty_order not in (EASY_HIGH_R, EASY_LOW_R):
            raise ValidationError(
                f"difficulty_order must be {EASY_HIGH_R!r} or {EASY_LOW_R!r}, "
                f"got {self.difficulty_order!r}"
            )


@dataclass
class ClassQueue:
    """All samples of one class, ordered easy to hard."""

    class_id: int
    rank: int
    ordered_samples: list[str]

    @property
    def size(self) -> int:
        return len(self.ordered_samples)


@dataclass
class EpochPlan:
    """Concrete subset for one epoch; samples listed in rank then queue order."""

    t: int
    counts: dict[int, int]  # class id -> number of samples taken
    sample_ids: list[str]

    @property
    def total(self) -> int:
        return len(self.sample_ids)


@dataclass
class Schedule:
    plans: list[EpochPlan]
    provenance: dict = field(default_factory=dict)

    @property
    def total_epochs(self) -> int:
        return len(self.plans)

    @property
    def total_visits(self) -> int:
        return sum(p.total for p in self.plans)

    def all_sample_ids(self) -> set[str]:
        out: set[str] = set()
        for plan in self.plans:
            out.update(plan.sample_ids)
        return out


def config_digest(payload: dict) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def build_queues(table: DifficultyTable, dist: ClassDistribution,
                 difficulty_order: str = EASY_HIGH_R) -> list[ClassQueue]:
    """One easy-to-hard queue per class, in rank order.

    Ordering is by combined score (descending when a high score means
    easy), ties by sample id.
    """
    ScheduleConfig(difficulty_order=difficulty_order)  # validates the flag
    per_class: dict[int, list] = {cid: [] for cid in dist.counts}
    for rec in table:
        if rec.label not in per_class:
            raise ValidationError(
                f"sample {rec.sample_id!r} has class {rec.label} not present "
                f"in the class distribution"
            )
        per_class[rec.label].append(rec)
    queues = []
    for cid in dist.classes_by_rank():
        recs = per_class[cid]
        if difficulty_order == EASY_HIGH_R:
            recs.sort(key=lambda rec: (-rec.r, rec.sample_id))
        else:
            recs.sort(key=lambda rec: (rec.r, rec.sample_id))
        queues.append(ClassQueue(
            class_id=cid,
            rank=dist.rank_of_class[cid],
            ordered_samples=[rec.sample_id for rec in recs],
        ))
    return queues


def largest_remainder(targets, total: int) -> np.ndarray:
    """Integer allocation of ``total`` matching fractional ``targets``.

    Floors first, then hands the leftover units to the largest fractional
    parts; ties go to the earlier position. Sums to ``total`` exactly.
    """
    targets = np.asarray(targets, dtype=float)
    if np.any(targets < 0):
        raise ValidationError("targets must be non-negative")
    floors = np.floor(targets).astype(int)
    leftover = int(total - floors.sum())
    if leftover < 0:
        raise ValidationError(
            f"targets sum to more than total ({targets.sum()} > {total})"
        )
    frac = targets - floors
    order = sorted(range(targets.size), key=lambda i: (-frac[i], i))
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def apportion(q, total: int, caps) -> np.ndarray:
    """Largest-remainder apportionment of ``total`` proportional to ``q``,
    clamped to per-class caps.

    Any class whose allocation exceeds its cap is pinned at the cap and
    the surplus is re-apportioned among the remaining classes; the loop
    repeats until no cap is violated. The result sums to ``total`` exactly
    and respects every cap.
    """
    q = np.asarray(q, dtype=float)
    caps = np.asarray(caps, dtype=int)
    if q.shape != caps.shape:
        raise ValidationError(f"q and caps length mismatch: {q.size} vs {caps.size}")
    if np.any(q < 0):
        raise ValidationError("q must be non-negative")
    if abs(float(q.sum()) - 1.0) > 1e-9:
        raise ValidationError(f"q must sum to 1, got {q.sum()!r}")
    if total < 0:
        raise ValidationError(f"total must be >= 0, got {total}")
    if total > int(caps.sum()):
        raise InfeasibleScheduleError(
            f"cannot draw {total} samples: only {int(caps.sum())} available"
        )
    counts = np.zeros(q.size, dtype=int)
    active = np.ones(q.size, dtype=bool)
    remaining = int(total)
    while remaining > 0:
        idx = np.flatnonzero(active)
        if idx.size == 0:
            raise InfeasibleScheduleError("no classes left to absorb the surplus")
        weight = q[idx]
        wsum = float(weight.sum())
        if wsum <= 0.0:
            targets = np.full(idx.size, remaining / idx.size)
        else:
            targets = weight / wsum * remaining
        alloc = largest_remainder(targets, remaining)
        over = alloc > caps[idx]
        if not over.any():
            counts[idx] = alloc
            break
        clamped = idx[over]
        counts[clamped] = caps[clamped]
        remaining -= int(caps[clamped].sum())
        active[clamped] = False
    return counts


def build_schedule(table: DifficultyTable, dist: ClassDistribution,
                   total_epochs: int,
                   config: ScheduleConfig | None = None) -> Schedule:
    """Full curriculum schedule: prefix subsets per epoch, full data at the end.

    The difficulty table and the class distribution must describe the same
    dataset (identical per-class counts).
    """
    if total_epochs < 1:
        raise ValidationError(f"total_epochs must be >= 1, got {total_epochs}")
    if len(table) == 0:
        raise ValidationError("cannot schedule an empty dataset")
    config = config or ScheduleConfig()
    queues = build_queues(table, dist, config.difficulty_order)
    for queue in queues:
        expected = dist.counts[queue.class_id]
        if queue.size != expected:
            raise ValidationError(
                f"class {queue.class_id}: difficulty table has {queue.size} samples "
                f"but the distribution says {expected}"
            )
    caps = np.array([queue.size for queue in queues], dtype=int)
    n_total = int(caps.sum())

    plans = []
    for t in range(1, total_epochs + 1):
        if t == total_epochs:
            counts = caps.copy()  # full-data final epoch
        else:
            target = epoch_target(t, total_epochs, n_total, dist)
            counts = apportion(target.q, target.subset_size, caps)
        sample_ids: list[str] = []
        for queue, k in zip(queues, counts):
            sample_ids.extend(queue.ordered_samples[: int(k)])
        plans.append(EpochPlan(
            t=t,
            counts={queue.class_id: int(k) for queue, k in zip(queues, counts)},
            sample_ids=sample_ids,
        ))

    digest = config_digest({
        "kind": "curriculum",
        "difficulty_order": config.difficulty_order,
        "gamma": dist.gamma,
        "alpha_hat": dist.alpha_hat,
        "total_epochs": total_epochs,
    })
    return Schedule(plans=plans, provenance={
        "kind": "curriculum",
        "seed": None,
        "config_digest": digest,
        "alpha_hat": dist.alpha_hat,
        "gamma": dist.gamma,
        "total_epochs": total_epochs,
    })


def random_baseline_schedule(labels_by_id: dict[str, int], total_epochs: int,
                             seed: int) -> Schedule:
    """Control schedule: every epoch is an independent shuffle of the full
    dataset. Deterministic given the seed."""
    if total_epochs < 1:
        raise ValidationError(f"total_epochs must be >= 1, got {total_epochs}")
    if not labels_by_id:
        raise ValidationError("cannot schedule an empty dataset")
    ids = sorted(labels_by_id)
    full_counts: dict[int, int] = {}
    for label in labels_by_id.values():
        full_counts[label] = full_counts.get(label, 0) + 1
    rng = _stream(seed, "baseline-shuffle")
    plans = []
    for t in range(1, total_epochs + 1):
        perm = list(rng.permutation(len(ids)))
        plans.append(EpochPlan(
            t=t,
            counts=dict(full_counts),
            sample_ids=[ids[i] for i in perm],
        ))
    digest = config_digest({
        "kind": "random-baseline",
        "seed": seed,
        "total_epochs": total_epochs,
    })
    return Schedule(plans=plans, provenance={
        "kind": "random-baseline",
        "seed": seed,
        "config_digest": digest,
        "alpha_hat": None,
        "gamma": None,
        "total_epochs": total_epochs,
    })


def truncate_schedule(schedule: Schedule, labels_by_id: dict[str, int],
                      budget: int) -> Schedule:
    """Trim a schedule to exactly ``budget`` total sample visits.

    Whole epochs are kept while they fit; the first epoch that would
    overshoot is cut to a prefix and the rest are dropped. Used to give
    the random baseline the same visit budget as a curriculum run.
    """
    if budget < 0 or budget > schedule.total_visits:
        raise ValidationError(
            f"budget {budget} outside [0, {schedule.total_visits}]"
        )
    plans = []
    used = 0
    for plan in schedule.plans:
        room = budget - used
        if room == 0:
            break
        if plan.total <= room:
            plans.append(plan)
            used += plan.total
            continue
        prefix = plan.sample_ids[:room]
        counts: dict[int, int] = {}
        for sid in prefix:
            label = labels_by_id[sid]
            counts[label] = counts.get(label, 0) + 1
        plans.append(EpochPlan(t=plan.t, counts=counts, sample_ids=prefix))
        used = budget
        break
    provenance = dict(schedule.provenance)
    provenance["truncated_to"] = budget
    return Schedule(plans=plans, provenance=provenance)


def epoch_rank_counts(schedule: Schedule, dist: ClassDistribution) -> np.ndarray:
    """(T, C) matrix of per-epoch counts ordered by class rank."""
    classes = dist.classes_by_rank()
    out = np.zeros((len(schedule.plans), len(classes)), dtype=int)
    for i, plan in enumerate(schedule.plans):
        for j, cid in enumerate(classes):
            out[i, j] = plan.counts.get(cid, 0)
    return out


def synthetic_powerlaw_schedule(n_samples: int = 1000, total_epochs: int = 10,
                                n_classes: int = 10, alpha_cap: float = 5.0,
                                gamma: float = 0.3):
    """Reference ramp on a synthetic long-tailed dataset.

    Class sizes are the largest-remainder rounding of the final-epoch
    power-law target (exponent gamma * alpha_cap) scaled to ``n_samples``,
    so the full-data final epoch lands exactly on that law. Returns
    (schedule, distribution).
    """
    ranks = np.arange(1, n_classes + 1, dtype=float)
    weights = ranks ** (-gamma * alpha_cap)
    weights /= weights.sum()
    sizes = largest_remainder(weights * n_samples, n_samples)
    counts = {cid: int(sizes[cid]) for cid in range(n_classes)}
    dist = ClassDistribution.from_counts(counts, gamma=gamma, alpha=alpha_cap)

    width = len(str(n_samples))
    records = []
    for cid in range(n_classes):
        for i in range(counts[cid]):
            records.append(DifficultyRecord(
                sample_id=f"c{cid}_s{i:0{width}d}",
                label=cid,
                psi_per_modality=[0.5, 0.5],
                phi=0.0,
                r=0.5,
            ))
    table = DifficultyTable(records=records)
    return build_schedule(table, dist, total_epochs), dist
