import numpy as np
import pytest

from climd import fileformats as ff
from climd.distribution import ClassDistribution
from climd.errors import ValidationError
from climd.measurer import DifficultyRecord, DifficultyTable, score_dataset
from climd.scheduler import synthetic_powerlaw_schedule
from climd.simlab import FusionModel, SyntheticSpec, collect_traces, generate_dataset


@pytest.fixture
def traces():
    spec = SyntheticSpec(n_classes=3, dims=(4, 3), n_samples=40,
                         imbalance_exponent=1.0, seed=9)
    dataset = generate_dataset(spec)
    model = FusionModel.init(spec.dims, 4, 3, np.random.default_rng(1))
    return collect_traces(model, dataset)


class TestTraceFormat:
    def test_round_trip_is_lossless(self, traces, tmp_path):
        path = tmp_path / "traces.jsonl"
        ff.write_traces(path, traces)
        back = ff.read_traces(path)
        assert len(back) == len(traces)
        for a, b in zip(traces, back):
            assert a.sample_id == b.sample_id and a.label == b.label
            for ma, mb in zip(a.modalities, b.modalities):
                assert np.max(np.abs(ma.probs - mb.probs)) <= 1e-9
                assert np.max(np.abs(ma.embedding - mb.embedding)) <= 1e-9

    def test_corrupt_line_names_its_number(self, traces, tmp_path):
        path = tmp_path / "traces.jsonl"
        ff.write_traces(path, traces)
        lines = path.read_text().splitlines()
        lines[4] = '{"sample_id": "x"}'
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValidationError, match="line 5"):
            ff.read_traces(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "traces.jsonl"
        ff.write_traces(path, [])
        assert ff.read_traces(path) == []


class TestDifficultyFormat:
    def test_round_trip(self, traces, tmp_path):
        table = score_dataset(traces)
        path = tmp_path / "difficulty.csv"
        ff.write_difficulty(path, table)
        back = ff.read_difficulty(path)
        assert [r.sample_id for r in back] == [r.sample_id for r in table]
        for a, b in zip(table, back):
            assert a.label == b.label
            assert b.phi == a.phi and b.r == a.r  # repr round-trips exactly
            assert b.psi_per_modality == pytest.approx(a.psi_per_modality, abs=0)

    def test_header_names_modalities(self, traces, tmp_path):
        path = tmp_path / "difficulty.csv"
        ff.write_difficulty(path, score_dataset(traces))
        header = path.read_text().splitlines()[0]
        assert header == "sample_id,label,phi,psi_1,psi_2,r"

    def test_mixed_modality_counts_rejected(self, tmp_path):
        table = DifficultyTable(records=[
            DifficultyRecord("a", 0, [0.5, 0.5], 0.0, 0.5),
            DifficultyRecord("b", 0, [0.5, 0.5, 0.5], 0.0, 0.5),
        ])
        with pytest.raises(ValidationError):
            ff.write_difficulty(tmp_path / "difficulty.csv", table)

    def test_bad_row_named(self, tmp_path):
        path = tmp_path / "difficulty.csv"
        path.write_text("sample_id,label,phi,psi_1,r\na,0,0.1,0.4\n")
        with pytest.raises(ValidationError, match="line 2"):
            ff.read_difficulty(path)


class TestLabelsFormat:
    def test_round_trip(self, tmp_path):
        pairs = [(f"s{i}", i % 3) for i in range(10)]
        path = tmp_path / "labels.csv"
        ff.write_labels(path, pairs)
        assert ff.read_labels(path) == pairs

    def test_bad_line(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("sample_id,label\na,0\nb,zebra\n")
        with pytest.raises(ValidationError, match="line 3"):
            ff.read_labels(path)


class TestDistributionFormat:
    def test_round_trip(self, tmp_path):
        dist = ClassDistribution.from_counts({0: 100, 1: 50, 2: 10}, gamma=0.3)
        path = tmp_path / "distribution.csv"
        ff.write_distribution(path, dist)
        back = ff.read_distribution(path)
        assert back.counts == dist.counts
        assert back.rank_of_class == dist.rank_of_class
        assert back.gamma == dist.gamma
        assert back.alpha_hat == dist.alpha_hat
        assert back.degenerate == dist.degenerate

    def test_degenerate_round_trip(self, tmp_path):
        dist = ClassDistribution.from_counts({0: 5, 1: 5}, gamma=0.3)
        assert dist.degenerate
        path = tmp_path / "distribution.csv"
        ff.write_distribution(path, dist)
        assert ff.read_distribution(path).degenerate

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "distribution.csv"
        path.write_text("class_id,count,rank\n0,5,1\n")
        with pytest.raises(ValidationError, match="gamma"):
            ff.read_distribution(path)


class TestScheduleFormat:
    def test_manifest_lines(self, tmp_path):
        schedule, dist = synthetic_powerlaw_schedule(n_samples=60, total_epochs=3,
                                                     n_classes=4)
        path = tmp_path / "schedule.csv"
        ff.write_schedule(path, schedule, dist)
        lines = path.read_text().splitlines()
        assert len(lines) == 3 * 4
        epoch, cid, rank, count, *ids = lines[0].split(",")
        assert (epoch, rank) == ("1", "1")
        assert len(ids) == int(count)
        total = sum(int(line.split(",")[3]) for line in lines if line.startswith("3,"))
        assert total == 60

    def test_epoch_rank_table(self, tmp_path):
        schedule, dist = synthetic_powerlaw_schedule()
        path = tmp_path / "counts.csv"
        ff.write_epoch_rank_table(path, schedule, dist)
        lines = path.read_text().splitlines()
        assert lines[0] == "epoch," + ",".join(f"rank_{r}" for r in range(1, 11))
        first = [int(v) for v in lines[1].split(",")]
        assert first == [1] + [10] * 10


class TestPredictionsFormat:
    def test_round_trip(self, tmp_path):
        rows = [("a", 0, 0), ("b", 0, 1), ("c", 1, 1)]
        path = tmp_path / "preds.csv"
        ff.write_predictions(path, rows)
        assert ff.read_predictions(path) == rows

    def test_bad_line(self, tmp_path):
        path = tmp_path / "preds.csv"
        path.write_text("sample_id,true,pred\na,0\n")
        with pytest.raises(ValidationError, match="line 2"):
            ff.read_predictions(path)


class TestManifest:
    def test_data_fields_drop_timestamp(self, tmp_path):
        src = tmp_path / "input.txt"
        src.write_text("hello")
        manifest = ff.build_manifest("fit", {"gamma": 0.3}, {"labels": src},
                                     [0, 1], "0.1.0")
        assert "timestamp" in manifest
        data = ff.manifest_data_fields(manifest)
        assert "timestamp" not in data
        assert data["inputs"]["labels"] == ff.sha256_file(src)

    def test_digest_tracks_content(self, tmp_path):
        src = tmp_path / "input.txt"
        src.write_text("hello")
        d1 = ff.sha256_file(src)
        src.write_text("changed")
        assert ff.sha256_file(src) != d1
