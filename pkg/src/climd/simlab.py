"""Desk-scale simulation lab: synthetic imbalanced multimodal data, a small
early-fusion classifier trained with plain SGD, and the end-to-end
curriculum-vs-random comparison.

The classifier is deliberately minimal: one affine encoder per modality
(its activation doubles as the modality embedding), a softmax head on the
concatenated embeddings, and one auxiliary softmax head per modality.
The auxiliary heads exist because difficulty scoring needs per-modality
class probabilities, which a pure fusion head does not expose; they are
trained jointly with equal loss weight. All gradients are closed-form.

Determinism: every random draw comes from a named generator derived from
(seed, purpose), so runs with the same seeds are bit-identical and
independent seeds can execute in parallel without affecting results.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .distribution import ClassDistribution, subset_size
from .errors import ValidationError
from .measurer import ModalityOutput, SampleTrace, score_dataset
from .metrics import accuracy, confusion, macro_f1, weighted_f1
from .scheduler import (
    EpochPlan,
    Schedule,
    apportion,
    build_schedule,
    config_digest,
    largest_remainder,
    random_baseline_schedule,
    truncate_schedule,
)


def _stream(seed: int, purpose: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(purpose.encode())])


# ---------------------------------------------------------------------------
# synthetic data
# ---------------------------------------------------------------------------

@dataclass
class SyntheticSpec:
    """Recipe for an imbalanced multimodal Gaussian-mixture dataset.

    ``redundancy`` is the correlation coefficient coupling per-class
    centroids across modalities: 1 makes all modalities carry the same
    class signal (up to dimension padding), 0 makes them independent.
    ``class_separation`` is the mean pairwise distance between class
    centroids within each modality, ``noise_scale`` the per-sample
    isotropic Gaussian noise.
    """

    n_classes: int = 5
    dims: tuple[int, ...] = (8, 8, 8)
    n_samples: int = 2000
    imbalance_exponent: float = 1.5
    class_separation: float = 2.0
    noise_scale: float = 1.0
    redundancy: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.n_classes < 2:
            raise ValidationError(f"need >= 2 classes, got {self.n_classes}")
        if len(self.dims) < 2:
            raise ValidationError(f"need >= 2 modalities, got {len(self.dims)}")
        if any(d < 1 for d in self.dims):
            raise ValidationError(f"all modality dims must be >= 1, got {self.dims}")
        if self.n_samples < self.n_classes:
            raise ValidationError(
                f"n_samples={self.n_samples} cannot cover {self.n_classes} classes"
            )
        if not 0.0 <= self.redundancy <= 1.0:
            raise ValidationError(f"redundancy must be in [0, 1], got {self.redundancy}")
        if self.imbalance_exponent < 0:
            raise ValidationError("imbalance_exponent must be >= 0")
        if self.class_separation <= 0 or self.noise_scale < 0:
            raise ValidationError("class_separation must be > 0 and noise_scale >= 0")

    @property
    def n_modalities(self) -> int:
        return len(self.dims)


@dataclass
class SyntheticDataset:
    sample_ids: list[str]
    labels: np.ndarray
    features: list[np.ndarray]  # one (N, d_m) array per modality
    centroids: list[np.ndarray]  # one (C, d_m) array per modality
    spec: SyntheticSpec

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def labels_by_id(self) -> dict[str, int]:
        return {sid: int(label) for sid, label in zip(self.sample_ids, self.labels)}

    def index_of(self) -> dict[str, int]:
        return {sid: i for i, sid in enumerate(self.sample_ids)}

    def modality_rows(self, indices) -> list[np.ndarray]:
        return [feat[indices] for feat in self.features]


def class_sizes(n_total: int, n_classes: int, exponent: float) -> np.ndarray:
    """Integer class sizes following a rank power law, summing to n_total.

    Largest-remainder rounding of the normalized rank^(-exponent) weights,
    then any zero-size class is topped up to 1 at the expense of the
    current largest class.
    """
    if n_total < n_classes:
        raise ValidationError(f"{n_total} samples cannot cover {n_classes} classes")
    ranks = np.arange(1, n_classes + 1, dtype=float)
    weights = ranks ** (-float(exponent))
    weights /= weights.sum()
    sizes = largest_remainder(weights * n_total, n_total)
    while (sizes == 0).any():
        sizes[int(np.argmax(sizes))] -= 1
        sizes[int(np.argmin(sizes))] += 1
    return sizes


def generate_dataset(spec: SyntheticSpec) -> SyntheticDataset:
    """Class-conditional Gaussian features per modality, deterministic per seed.

    Per-class centroids blend a cross-modality common component and a
    modality-specific one with weights sqrt(redundancy) and
    sqrt(1 - redundancy), then each modality is rescaled so its mean
    pairwise centroid distance equals ``class_separation``.
    """
    sizes = class_sizes(spec.n_samples, spec.n_classes, spec.imbalance_exponent)
    c, m = spec.n_classes, spec.n_modalities
    d_max = max(spec.dims)
    common = _stream(spec.seed, "centroids-common").standard_normal((c, d_max))
    rng_specific = _stream(spec.seed, "centroids-specific")
    rho = spec.redundancy
    centroids = []
    for d in spec.dims:
        specific = rng_specific.standard_normal((c, d))
        raw = math.sqrt(rho) * common[:, :d] + math.sqrt(1.0 - rho) * specific
        dists = [
            float(np.linalg.norm(raw[i] - raw[j]))
            for i in range(c) for j in range(i + 1, c)
        ]
        mean_dist = sum(dists) / len(dists)
        centroids.append(raw * (spec.class_separation / mean_dist))

    labels = np.repeat(np.arange(c), sizes)
    n = int(sizes.sum())
    width = max(5, len(str(n)))
    sample_ids = [f"s{i:0{width}d}" for i in range(n)]
    features = []
    for mi in range(m):
        rng = _stream(spec.seed, f"features-{mi}")
        noise = rng.standard_normal((n, spec.dims[mi]))
        features.append(centroids[mi][labels] + spec.noise_scale * noise)
    return SyntheticDataset(
        sample_ids=sample_ids,
        labels=labels,
        features=features,
        centroids=centroids,
        spec=spec,
    )


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class FusionModel:
    """Early-fusion classifier with per-modality auxiliary heads.

    encoder m:  z_m = x_m @ enc_w[m].T + enc_b[m]        (the embedding)
    fused head: softmax(concat(z) @ head_w.T + head_b)
    aux head m: softmax(z_m @ aux_w[m].T + aux_b[m])
    """

    enc_w: list[np.ndarray]
    enc_b: list[np.ndarray]
    head_w: np.ndarray
    head_b: np.ndarray
    aux_w: list[np.ndarray]
    aux_b: list[np.ndarray]

    @classmethod
    def init(cls, dims, hidden: int, n_classes: int,
             rng: np.random.Generator) -> "FusionModel":
        m = len(dims)
        enc_w = [rng.standard_normal((hidden, d)) / math.sqrt(d) for d in dims]
        enc_b = [np.zeros(hidden) for _ in range(m)]
        head_w = rng.standard_normal((n_classes, m * hidden)) / math.sqrt(m * hidden)
        head_b = np.zeros(n_classes)
        aux_w = [rng.standard_normal((n_classes, hidden)) / math.sqrt(hidden)
                 for _ in range(m)]
        aux_b = [np.zeros(n_classes) for _ in range(m)]
        return cls(enc_w, enc_b, head_w, head_b, aux_w, aux_b)

    @property
    def n_modalities(self) -> int:
        return len(self.enc_w)

    @property
    def n_classes(self) -> int:
        return self.head_w.shape[0]

    @property
    def hidden(self) -> int:
        return self.enc_w[0].shape[0]

    def copy(self) -> "FusionModel":
        return FusionModel(
            enc_w=[w.copy() for w in self.enc_w],
            enc_b=[b.copy() for b in self.enc_b],
            head_w=self.head_w.copy(),
            head_b=self.head_b.copy(),
            aux_w=[w.copy() for w in self.aux_w],
            aux_b=[b.copy() for b in self.aux_b],
        )

    def params(self) -> list[np.ndarray]:
        return [*self.enc_w, *self.enc_b, self.head_w, self.head_b,
                *self.aux_w, *self.aux_b]

    def forward_batch(self, xs: list[np.ndarray]):
        """Returns (fused probs, per-modality probs, per-modality embeddings)."""
        if len(xs) != self.n_modalities:
            raise ValidationError(
                f"model has {self.n_modalities} modalities, got {len(xs)} inputs"
            )
        for mi, (x, w) in enumerate(zip(xs, self.enc_w)):
            if x.shape[-1] != w.shape[1]:
                raise ValidationError(
                    f"modality {mi}: input dim {x.shape[-1]} != encoder dim {w.shape[1]}"
                )
        z = [x @ w.T + b for x, w, b in zip(xs, self.enc_w, self.enc_b)]
        zcat = np.concatenate(z, axis=-1)
        fused = _softmax(zcat @ self.head_w.T + self.head_b)
        aux = [_softmax(zi @ w.T + b) for zi, w, b in zip(z, self.aux_w, self.aux_b)]
        return fused, aux, z

    def loss(self, xs: list[np.ndarray], y: np.ndarray) -> float:
        """Fused cross-entropy plus the mean of the auxiliary cross-entropies."""
        fused, aux, _ = self.forward_batch(xs)
        b = np.arange(y.size)
        out = float(-np.log(np.maximum(fused[b, y], 1e-300)).mean())
        for pa in aux:
            out += float(-np.log(np.maximum(pa[b, y], 1e-300)).mean()) / len(aux)
        return out


def forward(model: FusionModel, sample_xs: list) -> tuple:
    """Single-sample forward pass: (fused probs, per-modality probs, embeddings)."""
    xs = [np.asarray(x, dtype=float).reshape(1, -1) for x in sample_xs]
    fused, aux, z = model.forward_batch(xs)
    return fused[0], [p[0] for p in aux], [zi[0] for zi in z]


def loss_and_grads(model: FusionModel, xs: list[np.ndarray], y: np.ndarray):
    """Batch loss and its analytic gradients, ordered like model.params()."""
    m = model.n_modalities
    h = model.hidden
    n = y.size
    z = [x @ w.T + b for x, w, b in zip(xs, model.enc_w, model.enc_b)]
    zcat = np.concatenate(z, axis=-1)
    fused = _softmax(zcat @ model.head_w.T + model.head_b)
    aux = [_softmax(zi @ w.T + b) for zi, w, b in zip(z, model.aux_w, model.aux_b)]

    rows = np.arange(n)
    onehot = np.zeros_like(fused)
    onehot[rows, y] = 1.0
    loss = float(-np.log(np.maximum(fused[rows, y], 1e-300)).mean())
    for pa in aux:
        loss += float(-np.log(np.maximum(pa[rows, y], 1e-300)).mean()) / m

    d_fused = (fused - onehot) / n
    g_head_w = d_fused.T @ zcat
    g_head_b = d_fused.sum(axis=0)
    dz = d_fused @ model.head_w  # (n, m*h)

    g_enc_w, g_enc_b, g_aux_w, g_aux_b = [], [], [], []
    for mi in range(m):
        d_aux = (aux[mi] - onehot) / (n * m)
        g_aux_w.append(d_aux.T @ z[mi])
        g_aux_b.append(d_aux.sum(axis=0))
        dz_m = dz[:, mi * h:(mi + 1) * h] + d_aux @ model.aux_w[mi]
        g_enc_w.append(dz_m.T @ xs[mi])
        g_enc_b.append(dz_m.sum(axis=0))

    grads = [*g_enc_w, *g_enc_b, g_head_w, g_head_b, *g_aux_w, *g_aux_b]
    return loss, grads


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

@dataclass
class TrainConfig:
    learning_rate: float = 5e-5
    epochs: int = 100
    warmup_epochs: int | None = None  # None -> max(1, epochs // 10)
    batch_size: int = 32
    hidden: int = 16
    gamma: float = 0.3
    test_fraction: float = 0.4
    refresh_every: int = 0  # re-score difficulty every k epochs; 0 = once
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if self.warmup_epochs is not None and self.warmup_epochs < 0:
            raise ValidationError("warmup_epochs must be >= 0")
        if self.gamma <= 0:
            raise ValidationError(f"gamma must be > 0, got {self.gamma}")
        if self.batch_size < 1 or self.hidden < 1:
            raise ValidationError("batch_size and hidden must be >= 1")
        if self.refresh_every < 0:
            raise ValidationError("refresh_every must be >= 0")

    @property
    def resolved_warmup(self) -> int:
        if self.warmup_epochs is not None:
            return self.warmup_epochs
        return max(1, self.epochs // 10)


@dataclass
class EpochStats:
    t: int
    visits: int
    mean_loss: float
    test_accuracy: float | None = None
    test_weighted_f1: float | None = None
    test_macro_f1: float | None = None


@dataclass
class TrainHistory:
    epochs: list[EpochStats] = field(default_factory=list)
    visited: list[list[str]] | None = None  # per-epoch visit order when recorded

    @property
    def total_visits(self) -> int:
        return sum(e.visits for e in self.epochs)


def evaluate(model: FusionModel, xs: list[np.ndarray], y: np.ndarray):
    """(accuracy, weighted F1, macro F1) of argmax fused predictions."""
    fused, _, _ = model.forward_batch(xs)
    pred = fused.argmax(axis=1)
    cm = confusion(y, pred, model.n_classes)
    return accuracy(cm), weighted_f1(cm), macro_f1(cm)


def train(dataset: SyntheticDataset, schedule: Schedule, config: TrainConfig,
          eval_set=None, init_model: FusionModel | None = None,
          arm: str = "train", record_visits: bool = False):
    """SGD over the schedule: epoch t visits exactly the samples of plan t,
    shuffled by a seeded generator. Returns (model, history).

    ``eval_set`` is an optional (xs, y) pair evaluated after every epoch.
    ``init_model``, when given, is copied, so callers can hand the same
    initialization to several arms.
    """
    index = dataset.index_of()
    unknown = [sid for sid in schedule.all_sample_ids() if sid not in index]
    if unknown:
        raise ValidationError(f"schedule references unknown sample ids: {sorted(unknown)[:5]}")

    if init_model is None:
        model = FusionModel.init(dataset.spec.dims, config.hidden,
                                 dataset.spec.n_classes, _stream(config.seed, "init"))
    else:
        model = init_model.copy()

    rng = _stream(config.seed, f"shuffle-{arm}")
    history = TrainHistory(visited=[] if record_visits else None)
    for plan in schedule.plans:
        idx = np.array([index[sid] for sid in plan.sample_ids], dtype=int)
        order = rng.permutation(idx.size)
        idx = idx[order]
        if record_visits:
            history.visited.append([dataset.sample_ids[i] for i in idx])
        losses = []
        for start in range(0, idx.size, config.batch_size):
            batch = idx[start:start + config.batch_size]
            xs = dataset.modality_rows(batch)
            y = dataset.labels[batch]
            loss, grads = loss_and_grads(model, xs, y)
            losses.append(loss)
            if config.learning_rate != 0.0:
                for p, g in zip(model.params(), grads):
                    p -= config.learning_rate * g
        stats = EpochStats(t=plan.t, visits=int(idx.size),
                           mean_loss=float(np.mean(losses)) if losses else float("nan"))
        if eval_set is not None:
            stats.test_accuracy, stats.test_weighted_f1, stats.test_macro_f1 = \
                evaluate(model, *eval_set)
        history.epochs.append(stats)
    return model, history


def collect_traces(model: FusionModel, dataset: SyntheticDataset,
                   indices=None) -> list[SampleTrace]:
    """One trace per sample: auxiliary-head probabilities plus the encoder
    activations as embeddings. Deterministic."""
    if indices is None:
        indices = np.arange(dataset.n_samples)
    indices = np.asarray(indices, dtype=int)
    xs = dataset.modality_rows(indices)
    _, aux, z = model.forward_batch(xs)
    traces = []
    for row, i in enumerate(indices):
        mods = [ModalityOutput(probs=aux[mi][row], embedding=z[mi][row])
                for mi in range(model.n_modalities)]
        traces.append(SampleTrace(
            sample_id=dataset.sample_ids[i],
            label=int(dataset.labels[i]),
            modalities=mods,
        ))
    return traces


# ---------------------------------------------------------------------------
# experiment harness
# ---------------------------------------------------------------------------

@dataclass
class ArmResult:
    seed: int
    arm: str
    accuracy: float
    weighted_f1: float
    macro_f1: float
    visits: int


@dataclass
class ExperimentReport:
    rows: list[ArmResult]
    seeds: list[int]
    wins: int  # seeds where the curriculum arm's macro F1 beats the baseline's
    config_digest: str

    def arm_rows(self, arm: str) -> list[ArmResult]:
        return [r for r in self.rows if r.arm == arm]

    def mean(self, arm: str, metric: str) -> float:
        vals = [getattr(r, metric) for r in self.arm_rows(arm)]
        return float(np.mean(vals))


def split_balanced_test(dataset: SyntheticDataset, test_fraction: float,
                        seed: int):
    """Stratified test split with an equal per-class count bounded by what
    the minority class can spare. Returns (train_idx, test_idx)."""
    labels = dataset.labels
    classes, counts = np.unique(labels, return_counts=True)
    n_min = int(counts.min())
    per_class = max(1, int(round(test_fraction * n_min)))
    per_class = min(per_class, n_min - 1)
    if per_class < 1:
        raise ValidationError("minority class too small to hold out a test set")
    rng = _stream(seed, "split")
    test_idx = []
    for cid in classes:
        members = np.flatnonzero(labels == cid)
        picked = rng.choice(members, size=per_class, replace=False)
        test_idx.append(np.sort(picked))
    test_idx = np.concatenate(test_idx)
    mask = np.ones(dataset.n_samples, dtype=bool)
    mask[test_idx] = False
    return np.flatnonzero(mask), test_idx


def uniform_warmup_schedule(labels_by_id: dict[str, int], n_epochs: int,
                            epoch_size: int, seed: int) -> Schedule:
    """Class-balanced warm-up: each epoch draws an (approximately) equal
    number of samples per class, fresh random picks per epoch."""
    per_class: dict[int, list[str]] = {}
    for sid in sorted(labels_by_id):
        per_class.setdefault(labels_by_id[sid], []).append(sid)
    class_ids = sorted(per_class)
    caps = np.array([len(per_class[c]) for c in class_ids], dtype=int)
    q = np.full(len(class_ids), 1.0 / len(class_ids))
    rng = _stream(seed, "warmup-order")
    plans = []
    counts = apportion(q, min(epoch_size, int(caps.sum())), caps)
    for t in range(1, n_epochs + 1):
        chosen: list[str] = []
        plan_counts = {}
        for cid, k in zip(class_ids, counts):
            members = per_class[cid]
            picked = rng.choice(len(members), size=int(k), replace=False)
            chosen.extend(members[i] for i in np.sort(picked))
            plan_counts[cid] = int(k)
        plans.append(EpochPlan(t=t, counts=plan_counts, sample_ids=chosen))
    return Schedule(plans=plans, provenance={
        "kind": "warmup-uniform",
        "seed": seed,
        "config_digest": config_digest({"kind": "warmup-uniform", "seed": seed,
                                        "n_epochs": n_epochs, "epoch_size": epoch_size}),
        "alpha_hat": None,
        "gamma": None,
        "total_epochs": n_epochs,
    })


def _train_subset_view(dataset: SyntheticDataset, train_idx: np.ndarray) -> SyntheticDataset:
    return SyntheticDataset(
        sample_ids=[dataset.sample_ids[i] for i in train_idx],
        labels=dataset.labels[train_idx],
        features=[f[train_idx] for f in dataset.features],
        centroids=dataset.centroids,
        spec=dataset.spec,
    )


def _train_curriculum_arm(trainset: SyntheticDataset, dist: ClassDistribution,
                          table, cfg: TrainConfig, init: FusionModel):
    """Train under the ramp, re-scoring difficulty every ``refresh_every``
    epochs when requested. Class counts are fixed by the distribution, so
    refreshing only re-orders the within-class queues and never changes
    the visit budget."""
    schedule = build_schedule(table, dist, cfg.epochs)
    if cfg.refresh_every == 0:
        model, _ = train(trainset, schedule, cfg, init_model=init, arm="climd")
        return model, schedule.total_visits

    budget = schedule.total_visits
    model = init
    start, chunk = 1, 0
    while start <= cfg.epochs:
        end = min(start + cfg.refresh_every - 1, cfg.epochs)
        part = Schedule(plans=schedule.plans[start - 1:end],
                        provenance=schedule.provenance)
        model, _ = train(trainset, part, cfg, init_model=model,
                         arm=f"climd-r{chunk}")
        start, chunk = end + 1, chunk + 1
        if start <= cfg.epochs:
            table = score_dataset(collect_traces(model, trainset))
            schedule = build_schedule(table, dist, cfg.epochs)
    return model, budget


def run_seed(spec: SyntheticSpec, config: TrainConfig, offset: int) -> list[ArmResult]:
    """One full comparison at seed offset ``offset``: generate, warm up,
    score, schedule, then train the curriculum arm and the budget-matched
    random baseline from identical initializations."""
    dspec = replace(spec, seed=spec.seed + offset)
    cfg = replace(config, seed=config.seed + offset)
    dataset = generate_dataset(dspec)
    train_idx, test_idx = split_balanced_test(dataset, cfg.test_fraction, cfg.seed)
    trainset = _train_subset_view(dataset, train_idx)
    test_xs = dataset.modality_rows(test_idx)
    test_y = dataset.labels[test_idx]
    labels_by_id = trainset.labels_by_id()
    n_train = trainset.n_samples

    # Warm-up pass: trains a throwaway model just to produce traces.
    warm_epoch_size = subset_size(1, cfg.epochs, n_train)
    warm_schedule = uniform_warmup_schedule(labels_by_id, cfg.resolved_warmup,
                                            warm_epoch_size, cfg.seed)
    warm_model, _ = train(trainset, warm_schedule, cfg, arm="warmup")
    traces = collect_traces(warm_model, trainset)
    table = score_dataset(traces)
    dist = ClassDistribution.from_labels(trainset.labels, cfg.gamma)

    init = FusionModel.init(dspec.dims, cfg.hidden, dspec.n_classes,
                            _stream(cfg.seed, "init"))
    climd_model, budget = _train_curriculum_arm(trainset, dist, table, cfg, init)

    base_epochs = math.ceil(budget / n_train)
    baseline = truncate_schedule(
        random_baseline_schedule(labels_by_id, base_epochs, cfg.seed),
        labels_by_id, budget,
    )
    base_model, _ = train(trainset, baseline, cfg, init_model=init, arm="baseline")

    results = []
    for arm, model, visits in (("climd", climd_model, budget),
                               ("baseline", base_model, baseline.total_visits)):
        acc, wf1, mf1 = evaluate(model, test_xs, test_y)
        results.append(ArmResult(seed=offset, arm=arm, accuracy=acc,
                                 weighted_f1=wf1, macro_f1=mf1, visits=visits))
    assert results[0].visits == results[1].visits
    return results


def _run_seed_star(args) -> list[ArmResult]:
    return run_seed(*args)


def run_experiment(spec: SyntheticSpec, config: TrainConfig, n_seeds: int,
                   max_workers: int = 1) -> ExperimentReport:
    """Curriculum vs budget-matched random baseline over ``n_seeds`` seeds.

    Seeds fan out to ``max_workers`` processes; results are merged in seed
    order, so parallelism never changes the report.
    """
    if n_seeds < 1:
        raise ValidationError(f"n_seeds must be >= 1, got {n_seeds}")
    jobs = [(spec, config, k) for k in range(n_seeds)]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=min(max_workers, n_seeds)) as pool:
            per_seed = list(pool.map(_run_seed_star, jobs))
    else:
        per_seed = [run_seed(*job) for job in jobs]

    rows = [r for pair in per_seed for r in pair]
    wins = 0
    for pair in per_seed:
        by_arm = {r.arm: r for r in pair}
        if by_arm["climd"].macro_f1 > by_arm["baseline"].macro_f1:
            wins += 1
    digest = config_digest({
        "spec": {k: (list(v) if isinstance(v, tuple) else v)
                 for k, v in vars(spec).items()},
        "config": vars(config),
        "n_seeds": n_seeds,
    })
    return ExperimentReport(rows=rows, seeds=list(range(n_seeds)), wins=wins,
                            config_digest=digest)
