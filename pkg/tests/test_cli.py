import hashlib
import json

import numpy as np
import pytest

from graphscan.cli import main
from graphscan.io import load_instance, read_id_file


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def simulate(tmp_path, prefix="demo", **overrides):
    args = {"--topology": "grid", "--rows": "8", "--cols": "8",
            "--cluster-size": "6", "--mu": "3", "--seed": "11"}
    args.update(overrides)
    argv = ["simulate", "--out-prefix", str(tmp_path / prefix)]
    for key, val in args.items():
        if val is None:
            argv.append(key)
        else:
            argv.extend([key, val])
    assert main(argv) == 0
    return tmp_path / prefix


class TestSimulate:
    def test_grid_dimensions(self, tmp_path, capsys):
        simulate(tmp_path, **{"--rows": "20", "--cols": "20",
                              "--cluster-size": "15"})
        out = json.loads(capsys.readouterr().out.strip().split("\n")[-1])
        assert out["n"] == 400
        assert out["edges"] == 760

    def test_deterministic_files(self, tmp_path, capsys):
        p1 = simulate(tmp_path, "a")
        p2 = simulate(tmp_path, "b")
        for ext in (".edges", ".nodes", ".truth"):
            assert sha(p1.parent / ("a" + ext)) == sha(p2.parent / ("b" + ext))

    def test_roundtrip_parse(self, tmp_path, capsys):
        from graphscan.synth import SyntheticSpec, generate_instance
        prefix = simulate(tmp_path)
        g, ids, counts, baselines = load_instance(
            str(prefix) + ".edges", str(prefix) + ".nodes")
        assert g.n == 64
        assert g.num_edges == 2 * 8 * 7
        assert len(ids) == 64 and counts.shape == (64,)
        truth = read_id_file(str(prefix) + ".truth")
        assert len(truth) == 6
        # parsed instance is field-for-field the in-memory one
        spec = SyntheticSpec(topology="grid", rows=8, cols=8, cluster_size=6,
                             mu=3.0, seed=11)
        g2, counts2, truth2 = generate_instance(spec)
        assert np.array_equal(counts, counts2)
        assert g.edges == g2.edges
        assert [int(t) for t in truth] == list(truth2.members)

    def test_binary_full_flip(self, tmp_path, capsys):
        p0 = simulate(tmp_path, "f0", **{"--binary": None, "--noise": "0.0"})
        p1 = simulate(tmp_path, "f1", **{"--binary": None, "--noise": "1.0"})
        _, _, c0, _ = load_instance(str(p0) + ".edges", str(p0) + ".nodes")
        _, _, c1, _ = load_instance(str(p1) + ".edges", str(p1) + ".nodes")
        assert np.array_equal(c1, 1.0 - c0)


class TestDetect:
    def test_end_to_end_schema_and_quality(self, tmp_path, capsys):
        prefix = simulate(tmp_path, **{"--rows": "12", "--cols": "12",
                                       "--cluster-size": "8"})
        out_json = tmp_path / "result.json"
        code = main(["detect", "--graph", str(prefix) + ".edges",
                     "--signal", str(prefix) + ".nodes", "--stat", "ems",
                     "--k", "8", "--algo", "ghtp", "--out", str(out_json)])
        assert code == 0
        result = json.loads(out_json.read_text())
        assert sorted(result.keys()) == ["estimate", "iterations", "manifest",
                                         "score", "support", "trace",
                                         "wall_time_s"]
        truth = set(read_id_file(str(prefix) + ".truth"))
        detected = set(result["support"])
        assert truth & detected
        assert result["iterations"] == len(result["trace"])

    def test_three_node_toy(self, tmp_path, capsys):
        (tmp_path / "g.edges").write_text("a b\nb c\n")
        (tmp_path / "s.nodes").write_text("node,c\na,0.1\nb,0.9\nc,0.2\n")
        code = main(["detect", "--graph", str(tmp_path / "g.edges"),
                     "--signal", str(tmp_path / "s.nodes"),
                     "--stat", "ems", "--k", "1"])
        assert code == 0
        result = json.loads(capsys.readouterr().out)
        assert "b" in result["support"]

    def test_malformed_edge_line_exit_2(self, tmp_path, capsys):
        (tmp_path / "g.edges").write_text("a b c\n")
        (tmp_path / "s.nodes").write_text("node,c\na,1\nb,1\nc,1\n")
        code = main(["detect", "--graph", str(tmp_path / "g.edges"),
                     "--signal", str(tmp_path / "s.nodes"),
                     "--stat", "ems", "--k", "1"])
        assert code == 2
        assert ":1:" in capsys.readouterr().err

    def test_k_zero_exit_2(self, tmp_path, capsys):
        (tmp_path / "g.edges").write_text("a b\n")
        (tmp_path / "s.nodes").write_text("node,c\na,1\nb,1\n")
        code = main(["detect", "--graph", str(tmp_path / "g.edges"),
                     "--signal", str(tmp_path / "s.nodes"),
                     "--stat", "ems", "--k", "0"])
        assert code == 2

    def test_dimension_mismatch_exit_3(self, tmp_path, capsys):
        (tmp_path / "g.edges").write_text("a zz\n")
        (tmp_path / "s.nodes").write_text("node,c\na,1\nb,1\n")
        code = main(["detect", "--graph", str(tmp_path / "g.edges"),
                     "--signal", str(tmp_path / "s.nodes"),
                     "--stat", "ems", "--k", "1"])
        assert code == 3

    def test_missing_baseline_for_kulldorff(self, tmp_path, capsys):
        (tmp_path / "g.edges").write_text("a b\n")
        (tmp_path / "s.nodes").write_text("node,c\na,1\nb,1\n")
        code = main(["detect", "--graph", str(tmp_path / "g.edges"),
                     "--signal", str(tmp_path / "s.nodes"),
                     "--stat", "kulldorff", "--k", "1"])
        assert code == 2


class TestEvaluate:
    def _write(self, path, ids):
        path.write_text("".join(f"{i}\n" for i in ids))

    def test_identical_files(self, tmp_path, capsys):
        self._write(tmp_path / "t.txt", ["a", "b"])
        assert main(["evaluate", "--truth", str(tmp_path / "t.txt"),
                     "--detected", str(tmp_path / "t.txt")]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["f_measure"] == 1

    def test_disjoint_files(self, tmp_path, capsys):
        self._write(tmp_path / "t.txt", ["a", "b"])
        self._write(tmp_path / "d.txt", ["c"])
        main(["evaluate", "--truth", str(tmp_path / "t.txt"),
              "--detected", str(tmp_path / "d.txt")])
        assert json.loads(capsys.readouterr().out)["f_measure"] == 0

    def test_overlap_fixture(self, tmp_path, capsys):
        self._write(tmp_path / "t.txt", [f"n{i}" for i in range(15)])
        self._write(tmp_path / "d.txt", [f"n{i}" for i in range(9)] + ["x9"])
        main(["evaluate", "--truth", str(tmp_path / "t.txt"),
              "--detected", str(tmp_path / "d.txt")])
        out = json.loads(capsys.readouterr().out)
        assert out["precision"] == pytest.approx(0.9)
        assert out["recall"] == pytest.approx(0.6)
        assert out["f_measure"] == pytest.approx(0.72)


class TestBench:
    def test_unknown_suite_exit_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["bench", "--suite", "nope", "--out-prefix",
                  str(tmp_path / "b")])
        assert exc.value.code == 2
