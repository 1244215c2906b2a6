import json

import pytest

from stemts import EventSequence, SymbolizerConfig, load_csv, load_events, write_events
from stemts.cli import main

SPEC_YAML = """\
classes:
  - label: run2
    motif:
      - [[up, 2], [down, 2]]
      - [[up, 2], [down, 2]]
  - label: run3
    motif:
      - [[up, 3], [down, 3]]
      - [[up, 3], [down, 3]]
  - label: run4
    motif:
      - [[up, 4], [down, 4]]
      - [[up, 4], [down, 4]]
  - label: run6
    motif:
      - [[up, 6], [down, 6]]
      - [[up, 6], [down, 6]]
samples_per_class: 10
length: 40
noise_amplitude: 0.0
seed: 7
separable: true
"""


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "spec.yaml"
    path.write_text(SPEC_YAML)
    return path


def strip_timings(payload):
    for method in payload["methods"].values():
        method.pop("timings")
    return payload


def text_without_cpu_section(text):
    return text.split("CPU time (seconds)")[0]


class TestSynth:
    def test_writes_loadable_dataset(self, spec_file, tmp_path, capsys):
        out = tmp_path / "data.csv"
        assert main(["synth", str(spec_file), "--out", str(out)]) == 0
        ds = load_csv(out)
        assert len(ds) == 40
        assert ds.dims == 2

    def test_identical_across_runs(self, spec_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["-q", "synth", str(spec_file), "--out", str(a)]) == 0
        assert main(["-q", "synth", str(spec_file), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_spec_names_path(self, tmp_path, capsys):
        rc = main(["synth", str(tmp_path / "nope.yaml"), "--out", str(tmp_path / "o.csv")])
        assert rc != 0
        assert "nope.yaml" in capsys.readouterr().err


class TestConvert:
    def test_constant_dataset_is_all_flat(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text(
            "sample_id,label,t,dim_0\n"
            + "".join(f"c,x,{t},5.0\n" for t in range(4))
        )
        out = tmp_path / "events.csv"
        assert main(["-q", "convert", "--in", str(data), "--out", str(out)]) == 0
        seqs, cfg, dims = load_events(out)
        assert dims == 1
        assert cfg.delta == 0.05
        assert seqs[0].codes == (1, 1, 1)

    def test_huge_delta_keeps_only_full_range_jumps(self, tmp_path):
        data = tmp_path / "d.csv"
        rows = [(0, 0.0), (1, 1.0), (2, 0.5), (3, 0.51)]
        data.write_text(
            "sample_id,label,t,dim_0\n"
            + "".join(f"s,x,{t},{v}\n" for t, v in rows)
        )
        out = tmp_path / "events.csv"
        assert main(["-q", "convert", "--in", str(data), "--delta", "0.99", "--out", str(out)]) == 0
        seqs, _, _ = load_events(out)
        assert seqs[0].codes == (2, 1, 1)

    def test_pad_flag_equalizes_lengths(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text(
            "sample_id,label,t,dim_0\n"
            "a,x,0,0.0\na,x,1,1.0\n"
            "b,x,0,0.0\nb,x,1,1.0\nb,x,2,0.0\nb,x,3,1.0\n"
        )
        out = tmp_path / "events.csv"
        assert main(["-q", "convert", "--in", str(data), "--pad", "--out", str(out)]) == 0
        seqs, _, _ = load_events(out)
        assert {len(s) for s in seqs} == {3}

    def test_parallel_jobs_output_identical(self, spec_file, tmp_path):
        data = tmp_path / "data.csv"
        assert main(["-q", "synth", str(spec_file), "--out", str(data)]) == 0
        one, three = tmp_path / "one.csv", tmp_path / "three.csv"
        assert main(["-q", "convert", "--in", str(data), "--out", str(one)]) == 0
        assert main(["-q", "convert", "--in", str(data), "--jobs", "3", "--out", str(three)]) == 0
        assert one.read_bytes() == three.read_bytes()


class TestMine:
    def write_toy_events(self, tmp_path):
        seqs = [
            EventSequence("A", None, 2, (4, 8, 4, 8)),
            EventSequence("B", None, 2, (4, 8, 0)),
        ]
        path = tmp_path / "events.csv"
        write_events(seqs, SymbolizerConfig(0.05), path)
        return path

    def test_toy_pair(self, tmp_path):
        events = self.write_toy_events(tmp_path)
        out = tmp_path / "features.json"
        rc = main(
            ["-q", "mine", "--in", str(events), "--min-support", "2", "--max-len", "2", "--out", str(out)]
        )
        assert rc == 0
        payload = json.loads(out.read_text())
        assert [tuple(r["codes"]) for r in payload["features"]] == [(8,), (4, 8)]

    def test_impossible_support_warns_but_succeeds(self, tmp_path, capsys):
        events = self.write_toy_events(tmp_path)
        out = tmp_path / "features.json"
        rc = main(["-q", "mine", "--in", str(events), "--min-support", "99", "--out", str(out)])
        assert rc == 0
        assert "warning" in capsys.readouterr().err
        assert json.loads(out.read_text())["features"] == []

    def test_deterministic_output(self, tmp_path):
        events = self.write_toy_events(tmp_path)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["-q", "mine", "--in", str(events), "--min-support", "2", "--out", str(a)])
        main(["-q", "mine", "--in", str(events), "--min-support", "2", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_fractional_support_flag(self, tmp_path):
        events = self.write_toy_events(tmp_path)
        out = tmp_path / "features.json"
        main(["-q", "mine", "--in", str(events), "--min-support", "0.9", "--out", str(out)])
        assert json.loads(out.read_text())["resolved_min_support"] == 2


class TestEval:
    def run_eval(self, spec_file, tmp_path, prefix, extra=()):
        data = tmp_path / "data.csv"
        if not data.exists():
            assert main(["-q", "synth", str(spec_file), "--out", str(data)]) == 0
        out = tmp_path / prefix
        args = [
            "-q", "eval", "--in", str(data), "--delta", "0.05",
            "--min-support", "2", "--max-len", "4", "--k", "1",
            "--metric", "euclidean", "--train-frac", "0.8", "--seed", "0",
            "--out", str(out), *extra,
        ]
        assert main(args) == 0
        return out

    def test_separable_data_reaches_perfect_accuracy(self, spec_file, tmp_path):
        out = self.run_eval(spec_file, tmp_path, "report")
        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["methods"]["stem"]["accuracy"] == 1.0
        assert (tmp_path / "report.txt").exists()
        assert (tmp_path / "report.vocab.json").exists()

    def test_baseline_flag_adds_method_row(self, spec_file, tmp_path):
        self.run_eval(spec_file, tmp_path, "report", extra=["--baseline"])
        payload = json.loads((tmp_path / "report.json").read_text())
        assert set(payload["methods"]) == {"stem", "baseline"}
        text = (tmp_path / "report.txt").read_text()
        assert "baseline" in text

    def test_identical_reports_modulo_timings(self, spec_file, tmp_path):
        self.run_eval(spec_file, tmp_path, "one", extra=["--baseline"])
        self.run_eval(spec_file, tmp_path, "two", extra=["--baseline"])
        one = strip_timings(json.loads((tmp_path / "one.json").read_text()))
        two = strip_timings(json.loads((tmp_path / "two.json").read_text()))
        assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)
        assert text_without_cpu_section(
            (tmp_path / "one.txt").read_text()
        ) == text_without_cpu_section((tmp_path / "two.txt").read_text())
        assert (tmp_path / "one.vocab.json").read_bytes() == (
            tmp_path / "two.vocab.json"
        ).read_bytes()

    def test_env_seed_fallback(self, spec_file, tmp_path, monkeypatch):
        monkeypatch.setenv("STEM_SEED", "123")
        data = tmp_path / "data.csv"
        assert main(["-q", "synth", str(spec_file), "--out", str(data)]) == 0
        out = tmp_path / "report"
        assert main(["-q", "eval", "--in", str(data), "--out", str(out)]) == 0
        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["methods"]["stem"]["config"]["seed"] == 123


class TestExplain:
    def test_single_code(self, capsys):
        assert main(["explain", "--code", "13", "--dims", "3"]) == 0
        assert capsys.readouterr().out.strip() == "dim_0: flat, dim_1: flat, dim_2: flat"

    def test_invalid_code(self, capsys):
        assert main(["explain", "--code", "99", "--dims", "2"]) != 0
        assert "error" in capsys.readouterr().err

    def test_code_without_dims(self, capsys):
        assert main(["explain", "--code", "3"]) != 0

    def test_feature_file_lines(self, tmp_path, capsys):
        seqs = [
            EventSequence("A", None, 2, (4, 8, 4, 8)),
            EventSequence("B", None, 2, (4, 8, 0)),
        ]
        events = tmp_path / "events.csv"
        write_events(seqs, SymbolizerConfig(0.05), events)
        features = tmp_path / "features.json"
        main(["-q", "mine", "--in", str(events), "--min-support", "2", "--max-len", "2", "--out", str(features)])
        capsys.readouterr()
        assert main(["explain", "--features", str(features)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert "dim_0: up, dim_1: up" in lines[0]


class TestPipelineContract:
    def test_convert_mine_explain_chain(self, spec_file, tmp_path, capsys):
        data = tmp_path / "data.csv"
        events = tmp_path / "events.csv"
        features = tmp_path / "features.json"
        assert main(["-q", "synth", str(spec_file), "--out", str(data)]) == 0
        assert main(["-q", "convert", "--in", str(data), "--out", str(events)]) == 0
        assert main(["-q", "mine", "--in", str(events), "--min-support", "5", "--out", str(features)]) == 0
        capsys.readouterr()
        assert main(["explain", "--features", str(features)]) == 0
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == len(json.loads(features.read_text())["features"])
