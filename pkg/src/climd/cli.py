"""Command-line pipeline: fit, score, schedule, simulate, eval, figure2,
plus a pipeline command chaining score -> fit -> schedule.

Exit codes: 0 success, 1 validation error, 2 infeasible schedule,
3 I/O error. Commands read all inputs before writing anything, never
write outside their --out directory, and leave exactly one manifest.json
per output directory. ``CLIMD_THREADS`` caps seed-level parallelism for
``simulate``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from . import fileformats as ff
from .distribution import ClassDistribution
from .errors import InfeasibleScheduleError, ValidationError
from .measurer import score_dataset
from .metrics import accuracy, confusion, macro_f1, weighted_f1
from .scheduler import ScheduleConfig, build_schedule, synthetic_powerlaw_schedule
from .simlab import SyntheticSpec, TrainConfig, run_experiment


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; remap onto the
    # validation exit code instead.
    def error(self, message):
        raise ValidationError(message)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, config: dict, inputs: dict,
                    seeds: list[int]):
    manifest = ff.build_manifest(command, config, inputs, seeds, __version__)
    ff.write_manifest(out / "manifest.json", manifest)


def cmd_fit(args) -> int:
    pairs = ff.read_labels(args.labels)
    if not pairs:
        raise ValidationError(f"{args.labels}: no labeled samples found")
    dist = ClassDistribution.from_labels([label for _, label in pairs], args.gamma)
    out = _outdir(args)
    ff.write_distribution(out / "distribution.csv", dist)
    _write_manifest(out, "fit", {"gamma": args.gamma, "labels": str(args.labels)},
                    {"labels": args.labels}, [])
    print(f"classes: {dist.n_classes}  samples: {dist.n_total}  n_min: {dist.n_min}")
    if dist.degenerate:
        print(f"fit: degenerate (all classes equal); fallback alpha = {dist.alpha_hat:.6g}")
    else:
        print(f"fit: alpha_hat = {dist.alpha_hat:.6g} (gamma = {dist.gamma:g})")
    for cid in dist.classes_by_rank():
        print(f"  rank {dist.rank_of_class[cid]:>3}: class {cid} with {dist.counts[cid]} samples")
    return 0


def cmd_score(args) -> int:
    traces = ff.read_traces(args.traces)
    table = score_dataset(traces)
    out = _outdir(args)
    ff.write_difficulty(out / "difficulty.csv", table)
    _write_manifest(out, "score", {"traces": str(args.traces)},
                    {"traces": args.traces}, [])
    print(f"scored {len(table)} samples -> {out / 'difficulty.csv'}")
    return 0


def cmd_schedule(args) -> int:
    table = ff.read_difficulty(args.difficulty)
    dist = ff.read_distribution(args.distribution)
    config = ScheduleConfig(difficulty_order=args.order)
    schedule = build_schedule(table, dist, args.epochs, config)
    out = _outdir(args)
    ff.write_schedule(out / "schedule.csv", schedule, dist)
    ff.write_epoch_rank_table(out / "epoch_rank_counts.csv", schedule, dist)
    _write_manifest(out, "schedule",
                    {"epochs": args.epochs, "order": args.order,
                     "gamma": dist.gamma, "alpha_hat": dist.alpha_hat,
                     "config_digest": schedule.provenance["config_digest"]},
                    {"difficulty": args.difficulty, "distribution": args.distribution},
                    [])
    print(ff.format_epoch_rank_table(schedule, dist))
    return 0


def cmd_figure2(args) -> int:
    schedule, dist = synthetic_powerlaw_schedule()
    print(ff.format_epoch_rank_table(schedule, dist))
    if args.out:
        out = _outdir(args)
        ff.write_epoch_rank_table(out / "figure2.csv", schedule, dist)
        _write_manifest(out, "figure2",
                        {"n_samples": 1000, "epochs": 10, "classes": 10,
                         "alpha_cap": 5.0, "gamma": 0.3}, {}, [])
    return 0


def cmd_eval(args) -> int:
    rows = ff.read_predictions(args.predictions)
    if not rows:
        raise ValidationError(f"{args.predictions}: no prediction rows found")
    true = [t for _, t, _ in rows]
    pred = [p for _, _, p in rows]
    n_classes = args.classes or (max(max(true), max(pred)) + 1)
    cm = confusion(true, pred, n_classes)
    print(f"accuracy     {accuracy(cm):.6f}")
    print(f"weighted_f1  {weighted_f1(cm):.6f}")
    print(f"macro_f1     {macro_f1(cm):.6f}")
    print("confusion (rows = true, cols = predicted):")
    for row in cm.counts:
        print("  " + " ".join(f"{int(v):>6}" for v in row))
    return 0


def _parse_dims(dims: str, n_modalities: int) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in dims.split(","))
    except ValueError:
        raise ValidationError(f"--dims must be integers, got {dims!r}") from None
    if len(parts) == 1:
        parts = parts * n_modalities
    if len(parts) != n_modalities:
        raise ValidationError(
            f"--dims lists {len(parts)} dims but --modalities is {n_modalities}"
        )
    return parts


def cmd_simulate(args) -> int:
    spec = SyntheticSpec(
        n_classes=args.classes,
        dims=_parse_dims(args.dims, args.modalities),
        n_samples=args.n,
        imbalance_exponent=args.imbalance,
        class_separation=args.separation,
        noise_scale=args.noise,
        redundancy=args.redundancy,
        seed=args.base_seed,
    )
    config = TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        warmup_epochs=args.warmup,
        batch_size=args.batch,
        hidden=args.hidden,
        gamma=args.gamma,
        refresh_every=args.refresh,
        seed=args.base_seed,
    )
    max_workers = max(1, int(os.environ.get("CLIMD_THREADS", "1")))
    report = run_experiment(spec, config, args.seeds, max_workers=max_workers)

    out = _outdir(args)
    lines = ["seed,arm,accuracy,weighted_f1,macro_f1,visits"]
    for r in report.rows:
        lines.append(f"{r.seed},{r.arm},{r.accuracy!r},{r.weighted_f1!r},"
                     f"{r.macro_f1!r},{r.visits}")
    (out / "report.csv").write_text("\n".join(lines) + "\n")

    summary = ["arm,mean_accuracy,mean_weighted_f1,mean_macro_f1,macro_f1_wins"]
    for arm in ("climd", "baseline"):
        wins = report.wins if arm == "climd" else args.seeds - report.wins
        summary.append(
            f"{arm},{report.mean(arm, 'accuracy')!r},"
            f"{report.mean(arm, 'weighted_f1')!r},"
            f"{report.mean(arm, 'macro_f1')!r},{wins}"
        )
    (out / "summary.csv").write_text("\n".join(summary) + "\n")

    _write_manifest(out, "simulate",
                    {"spec": {k: (list(v) if isinstance(v, tuple) else v)
                              for k, v in vars(spec).items()},
                     "train": vars(config),
                     "n_seeds": args.seeds,
                     "config_digest": report.config_digest},
                    {}, list(range(args.seeds)))

    for arm in ("climd", "baseline"):
        print(f"{arm:>9}: acc {report.mean(arm, 'accuracy'):.4f}  "
              f"wF1 {report.mean(arm, 'weighted_f1'):.4f}  "
              f"mF1 {report.mean(arm, 'macro_f1'):.4f}")
    print(f"curriculum wins {report.wins} of {args.seeds} seeds on macro F1")
    return 0


def cmd_pipeline(args) -> int:
    def stage(name, fn):
        try:
            return fn()
        except Exception as exc:
            raise type(exc)(f"stage '{name}': {exc}") from exc

    traces_path = Path(args.dataset_dir) / "traces.jsonl" if args.dataset_dir \
        else Path(args.traces)
    traces = stage("read-traces", lambda: ff.read_traces(traces_path))
    table = stage("score", lambda: score_dataset(traces))
    dist = stage("fit", lambda: ClassDistribution.from_labels(
        [t.label for t in traces], args.gamma))
    config = ScheduleConfig(difficulty_order=args.order)
    schedule = stage("schedule", lambda: build_schedule(table, dist, args.epochs, config))

    out = _outdir(args)
    ff.write_difficulty(out / "difficulty.csv", table)
    ff.write_distribution(out / "distribution.csv", dist)
    ff.write_schedule(out / "schedule.csv", schedule, dist)
    ff.write_epoch_rank_table(out / "epoch_rank_counts.csv", schedule, dist)
    _write_manifest(out, "pipeline",
                    {"epochs": args.epochs, "gamma": args.gamma, "order": args.order,
                     "config_digest": schedule.provenance["config_digest"]},
                    {"traces": str(traces_path)}, [])
    print(f"pipeline complete: {len(table)} samples, {dist.n_classes} classes, "
          f"{args.epochs} epochs -> {out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="climd",
                     description="curriculum scheduling for class-imbalanced "
                                 "multimodal training")
    parser.add_argument("--version", action="version", version=f"climd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit the class distribution from a labels file")
    p.add_argument("--labels", required=True)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("score", help="score per-sample difficulty from a trace file")
    p.add_argument("--traces", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("schedule", help="build per-epoch training subsets")
    p.add_argument("--difficulty", required=True)
    p.add_argument("--distribution", required=True)
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--order", default="high_r_easy",
                   choices=["high_r_easy", "low_r_easy"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("figure2", help="print the reference ramp "
                                       "(N=1000, T=10, C=10, alpha cap 5)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("eval", help="metrics from a sample_id,true,pred file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--classes", type=int, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="end-to-end synthetic comparison")
    p.add_argument("--classes", type=int, default=5)
    p.add_argument("--modalities", type=int, default=3)
    p.add_argument("--dims", default="8")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--imbalance", type=float, default=1.5)
    p.add_argument("--redundancy", type=float, default=0.3)
    p.add_argument("--separation", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--hidden", type=int, default=16)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--refresh", type=int, default=0,
                   help="re-score difficulty every k epochs (0 = once, after warm-up)")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", help="score -> fit -> schedule from a trace file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--traces")
    group.add_argument("--dataset-dir")
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--order", default="high_r_easy",
                   choices=["high_r_easy", "low_r_easy"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InfeasibleScheduleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
