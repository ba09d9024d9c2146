"""Text-based interchange formats.

Every artifact is line-delimited text so pipeline stages stay diffable
and independently inspectable:

* traces: one JSON object per line with ``sample_id``, ``label`` and a
  ``modalities`` array of ``{"probs": [...], "embedding": [...]}``;
* difficulty table: CSV ``sample_id,label,phi,psi_1..psi_M,r`` in input order;
* labels: CSV ``sample_id,label``;
* distribution report: ``class_id,count,rank`` CSV preceded by ``#``
  header lines carrying n_min, gamma, alpha_hat and the degenerate flag;
* schedule manifest: one line per (epoch, class):
  ``epoch,class_id,rank,s_t,<sample ids...>``;
* epoch-by-rank summary: CSV ``epoch,rank_1..rank_C`` of counts;
* predictions: CSV ``sample_id,true,pred``;
* run manifest: a single JSON document with the resolved config, input
  digests, seeds, version and timestamp.

Floats are written with ``repr`` so they round-trip exactly and reruns
are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .distribution import ClassDistribution
from .errors import ValidationError
from .measurer import DifficultyRecord, DifficultyTable, ModalityOutput, SampleTrace
from .scheduler import Schedule, epoch_rank_counts


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# traces (JSON lines)
# ---------------------------------------------------------------------------

def write_traces(path, traces: list[SampleTrace]):
    lines = []
    for t in traces:
        lines.append(json.dumps({
            "sample_id": t.sample_id,
            "label": t.label,
            "modalities": [
                {"probs": [float(p) for p in m.probs],
                 "embedding": [float(e) for e in m.embedding]}
                for m in t.modalities
            ],
        }, separators=(",", ":")))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_traces(path) -> list[SampleTrace]:
    traces = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                traces.append(SampleTrace(
                    sample_id=str(obj["sample_id"]),
                    label=int(obj["label"]),
                    modalities=[
                        ModalityOutput(probs=m["probs"], embedding=m["embedding"])
                        for m in obj["modalities"]
                    ],
                ))
            except (KeyError, TypeError, ValueError, ValidationError) as exc:
                raise ValidationError(f"{path}: corrupt trace at line {lineno}: {exc}") from exc
    return traces


# ---------------------------------------------------------------------------
# difficulty table (CSV)
# ---------------------------------------------------------------------------

def write_difficulty(path, table: DifficultyTable):
    if len(table) == 0:
        Path(path).write_text("sample_id,label,phi,r\n")
        return
    m_counts = {len(rec.psi_per_modality) for rec in table}
    if len(m_counts) != 1:
        raise ValidationError(
            f"cannot write a table with mixed modality counts {sorted(m_counts)}"
        )
    m = m_counts.pop()
    header = "sample_id,label,phi," + ",".join(f"psi_{i}" for i in range(1, m + 1)) + ",r"
    lines = [header]
    for rec in table:
        psis = ",".join(_fmt(p) for p in rec.psi_per_modality)
        lines.append(f"{rec.sample_id},{rec.label},{_fmt(rec.phi)},{psis},{_fmt(rec.r)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_difficulty(path) -> DifficultyTable:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        if cols[:3] != ["sample_id", "label", "phi"] or cols[-1] != "r":
            raise ValidationError(f"{path}: unrecognized difficulty header {header!r}")
        n_psi = len(cols) - 4
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(cols):
                raise ValidationError(
                    f"{path}: line {lineno}: expected {len(cols)} fields, got {len(parts)}"
                )
            try:
                records.append(DifficultyRecord(
                    sample_id=parts[0],
                    label=int(parts[1]),
                    phi=float(parts[2]),
                    psi_per_modality=[float(p) for p in parts[3:3 + n_psi]],
                    r=float(parts[-1]),
                ))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
    return DifficultyTable(records=records)


# ---------------------------------------------------------------------------
# labels (CSV)
# ---------------------------------------------------------------------------

def write_labels(path, pairs):
    lines = ["sample_id,label"]
    lines += [f"{sid},{int(label)}" for sid, label in pairs]
    Path(path).write_text("\n".join(lines) + "\n")


def read_labels(path) -> list[tuple[str, int]]:
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line == "sample_id,label"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValidationError(
                    f"{path}: line {lineno}: expected 'sample_id,label', got {line!r}"
                )
            try:
                pairs.append((parts[0], int(parts[1])))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: bad label {parts[1]!r}") from exc
    return pairs


# ---------------------------------------------------------------------------
# fitted distribution report
# ---------------------------------------------------------------------------

def write_distribution(path, dist: ClassDistribution):
    lines = [
        f"# n_min={dist.n_min}",
        f"# gamma={_fmt(dist.gamma)}",
        f"# alpha_hat={_fmt(dist.alpha_hat)}",
        f"# degenerate={'true' if dist.degenerate else 'false'}",
        "class_id,count,rank",
    ]
    for cid in dist.classes_by_rank():
        lines.append(f"{cid},{dist.counts[cid]},{dist.rank_of_class[cid]}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_distribution(path) -> ClassDistribution:
    meta = {}
    counts = {}
    ranks = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line == "class_id,count,rank":
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                meta[key.strip()] = value.strip()
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValidationError(f"{path}: line {lineno}: expected 3 fields")
            try:
                cid, count, rank = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
            counts[cid] = count
            ranks[cid] = rank
    for key in ("gamma", "alpha_hat", "degenerate"):
        if key not in meta:
            raise ValidationError(f"{path}: missing '# {key}=' header line")
    return ClassDistribution(
        counts=counts,
        gamma=float(meta["gamma"]),
        alpha_hat=float(meta["alpha_hat"]),
        degenerate=meta["degenerate"] == "true",
        rank_of_class=ranks,
    )


# ---------------------------------------------------------------------------
# schedule artifacts
# ---------------------------------------------------------------------------

def write_schedule(path, schedule: Schedule, dist: ClassDistribution):
    lines = []
    for plan in schedule.plans:
        cursor = 0
        for cid in dist.classes_by_rank():
            k = plan.counts.get(cid, 0)
            ids = plan.sample_ids[cursor:cursor + k]
            cursor += k
            fields = [str(plan.t), str(cid), str(dist.rank_of_class[cid]), str(k), *ids]
            lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


def write_epoch_rank_table(path, schedule: Schedule, dist: ClassDistribution):
    counts = epoch_rank_counts(schedule, dist)
    header = "epoch," + ",".join(f"rank_{r}" for r in range(1, counts.shape[1] + 1))
    lines = [header]
    for i, row in enumerate(counts, start=1):
        lines.append(f"{i}," + ",".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def format_epoch_rank_table(schedule: Schedule, dist: ClassDistribution) -> str:
    counts = epoch_rank_counts(schedule, dist)
    header = "epoch " + " ".join(f"{f'rank{r}':>6}" for r in range(1, counts.shape[1] + 1))
    rows = [header]
    for i, row in enumerate(counts, start=1):
        rows.append(f"{i:>5} " + " ".join(f"{int(v):>6}" for v in row))
    return "\n".join(rows)


# ---------------------------------------------------------------------------
# predictions
# ---------------------------------------------------------------------------

def read_predictions(path) -> list[tuple[str, int, int]]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line.startswith("sample_id")):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValidationError(
                    f"{path}: line {lineno}: expected 'sample_id,true,pred', got {line!r}"
                )
            try:
                rows.append((parts[0], int(parts[1]), int(parts[2])))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
    return rows


def write_predictions(path, rows):
    lines = ["sample_id,true,pred"]
    lines += [f"{sid},{int(t)},{int(p)}" for sid, t, p in rows]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# run manifests
# ---------------------------------------------------------------------------

def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(command: str, config: dict, inputs: dict[str, str],
                   seeds: list[int], version: str) -> dict:
    return {
        "command": command,
        "config": config,
        "inputs": {name: sha256_file(p) for name, p in inputs.items()},
        "seeds": seeds,
        "version": version,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def write_manifest(path, manifest: dict):
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def manifest_data_fields(manifest: dict) -> dict:
    """Everything that must be identical across reruns (drops the timestamp)."""
    return {k: v for k, v in manifest.items() if k != "timestamp"}


def array_csv(values: np.ndarray) -> str:
    return ",".join(_fmt(v) for v in np.asarray(values, dtype=float))
