import json

import pytest

from graphsketch.cli import main
from graphsketch.streamio import write_config, write_stream
from graphsketch import EdgeItem

from helpers import collision_free_config, tiny_config


@pytest.fixture
def workspace(tmp_path):
    cfg_path = tmp_path / "sketch.cfg"
    write_config(tiny_config(), cfg_path)
    stream_path = tmp_path / "stream.csv"
    items = [
        EdgeItem("a", "b", "grp0", "grp1", "edge4", 3, 1),
        EdgeItem("a", "c", "grp0", "grp1", "edge4", 1, 2),
        EdgeItem("b", "d", "grp1", "grp0", "edge0", 2, 3),
        EdgeItem("b", "e", "grp1", "grp1", "edge4", 1, 4),
        EdgeItem("c", "b", "grp1", "grp1", "edge0", 2, 5),
        EdgeItem("e", "c", "grp1", "grp1", "edge4", 1, 6),
    ]
    write_stream(items, stream_path)
    return tmp_path, cfg_path, stream_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


class TestIngest:
    def test_six_item_stream(self, workspace, capsys):
        tmp, cfg, stream = workspace
        snap = tmp / "out.snap"
        code, out = run(capsys, "ingest", "--config", cfg, "--stream", stream,
                        "--out", snap, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["items"] == 6
        assert report["inserted"] == 6
        assert 0.0 <= report["pool_fraction"] <= 1.0
        assert report["mean_insert_us"] > 0
        assert snap.exists()

    def test_empty_stream(self, workspace, capsys, tmp_path):
        tmp, cfg, _ = workspace
        empty = tmp_path / "empty.csv"
        empty.write_text("# nothing\n")
        code, out = run(capsys, "ingest", "--config", cfg, "--stream", empty,
                        "--out", tmp / "e.snap", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["items"] == 0 and report["subwindows_elapsed"] == 0

    def test_late_items_counted(self, workspace, capsys, tmp_path):
        tmp, cfg, _ = workspace
        stream = tmp_path / "late.csv"
        stream.write_text("a,b,grp0,grp1,e,1,9\nc,d,grp0,grp1,e,1,1\n")
        code, out = run(capsys, "ingest", "--config", cfg, "--stream", stream,
                        "--out", tmp / "l.snap", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["rejected_items"] == 1
        assert report["rejected_lines"] == [2]
        assert report["order_violations"] == 1


class TestQuery:
    def test_single_and_batch(self, workspace, capsys, tmp_path):
        tmp, cfg, stream = workspace
        snap = tmp / "out.snap"
        assert run(capsys, "ingest", "--config", cfg, "--stream", stream,
                   "--out", snap)[0] == 0
        code, out = run(capsys, "query", snap, "edge,a,grp0,b,grp1")
        assert code == 0 and out.strip() == "w=3"

        batch = tmp_path / "queries.txt"
        lines = ["edge,a,grp0,b,grp1,edge4",
                 "vertex-out,a,grp0",
                 "vertex-in,b,grp1",
                 "label-out,grp1",
                 "path,a,grp0,a,grp0",
                 "path,a,grp0,d,grp0",
                 "edge-group,a,grp0,grp1",
                 "subgraph,a:grp0:b:grp1;b:grp1:d:grp0"]
        batch.write_text("\n".join(lines) + "\n")
        code, out = run(capsys, "query", snap, "--batch", batch, "--json")
        assert code == 0
        answers = [json.loads(line) for line in out.strip().splitlines()]
        assert len(answers) == len(lines)
        assert answers[0] == {"kind": "edge", "w": 3, "w_l": 3}
        assert answers[4] == {"kind": "path", "reachable": True}
        assert answers[7]["matches"] >= 0

    def test_batch_answers_in_order(self, workspace, capsys, tmp_path):
        tmp, cfg, stream = workspace
        snap = tmp / "out.snap"
        run(capsys, "ingest", "--config", cfg, "--stream", stream, "--out", snap)
        batch = tmp_path / "big.txt"
        specs = [f"vertex-out,{v},grp0" for v in ("a", "zz")] * 250
        batch.write_text("\n".join(specs) + "\n")
        code, out = run(capsys, "query", snap, "--batch", batch)
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 500
        assert lines[0] == "w=4" and lines[1] == "w=0"

    def test_unknown_kind_is_usage_error(self, workspace, capsys):
        tmp, cfg, stream = workspace
        snap = tmp / "out.snap"
        run(capsys, "ingest", "--config", cfg, "--stream", stream, "--out", snap)
        assert run(capsys, "query", snap, "frobnicate,a,b")[0] == 1

    def test_missing_snapshot_is_data_error(self, workspace, capsys):
        tmp, *_ = workspace
        assert run(capsys, "query", tmp / "nope.snap", "edge,a,l,b,l")[0] == 2


class TestGenAndStats:
    def test_gen_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["gen", "--vertices", "20", "--edges", "200", "--vertex-labels",
                "2", "--edge-labels", "3", "--skew", "0.8", "--duplicates",
                "0.3", "--seed", "9"]
        assert run(capsys, *argv, "--out", a)[0] == 0
        assert run(capsys, *argv, "--out", b)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_gen_infeasible_is_usage_error(self, capsys, tmp_path):
        code, _ = run(capsys, "gen", "--vertices", "0", "--edges", "5",
                      "--out", tmp_path / "x.csv")
        assert code == 1

    def test_stats_recommends_width(self, capsys, tmp_path):
        # 4952 distinct edges should recommend a width around 50
        stream = tmp_path / "many.csv"
        lines = []
        n = 0
        t = 0
        for i in range(100):
            for j in range(50):
                if n >= 4952:
                    break
                lines.append(f"s{i},d{j},L0,L1,e0,1,{t}")
                n += 1
                t += 1
        stream.write_text("\n".join(lines) + "\n")
        code, out = run(capsys, "stats", "--stream", stream, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["distinct_edges"] == 4952
        assert doc["recommended_matrix_width"] == 50

    def test_stats_single_edge(self, capsys, tmp_path):
        stream = tmp_path / "one.csv"
        stream.write_text("a,b,L0,L1,e0,1,0\n")
        code, out = run(capsys, "stats", "--stream", stream, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["distinct_edges"] == 1
        assert doc["recommended_matrix_width"] >= 1

    def test_stats_histogram_reflects_skew(self, capsys, tmp_path):
        stream = tmp_path / "skewed.csv"
        run(capsys, "gen", "--vertices", "100", "--edges", "2000",
            "--vertex-labels", "2", "--skew", "0.9", "--seed", "3",
            "--out", stream)
        code, out = run(capsys, "stats", "--stream", stream, "--json",
                        "--slots", "2")
        assert code == 0
        doc = json.loads(out)
        hist = doc["vertex_label_histogram"]
        assert hist["L0"] > 0.8 * sum(hist.values())
        assert set(doc["label_slots"]) == {"L0", "L1"}

    def test_stats_snapshot(self, workspace, capsys):
        tmp, cfg, stream = workspace
        snap = tmp / "out.snap"
        run(capsys, "ingest", "--config", cfg, "--stream", stream, "--out", snap)
        code, out = run(capsys, "stats", "--snapshot", snap, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["items_inserted"] == 6


class TestBench:
    def test_collision_free_run_reports_zero_are(self, capsys, tmp_path):
        cfg_path = tmp_path / "wide.cfg"
        write_config(collision_free_config(), cfg_path)
        stream = tmp_path / "s.csv"
        run(capsys, "gen", "--vertices", "50", "--edges", "600",
            "--vertex-labels", "3", "--edge-labels", "5", "--duplicates",
            "0.4", "--seed", "17", "--out", stream)
        code, out = run(capsys, "bench", "--config", cfg_path, "--stream",
                        stream, "--per-kind", "60", "--json")
        assert code == 0
        doc = json.loads(out)
        for kind in ("vertex-out", "vertex-in", "label-out", "label-in",
                     "edge", "edge-group", "subgraph"):
            assert doc[f"{kind}.are"] in (0.0, None)
            assert doc[f"{kind}.false_hits"] == 0
        assert doc["path.false_positives"] == 0
        assert doc["path.false_negatives"] == 0

    def test_deterministic_modulo_timing(self, capsys, tmp_path):
        cfg_path = tmp_path / "tiny.cfg"
        write_config(tiny_config(), cfg_path)
        stream = tmp_path / "s.csv"
        run(capsys, "gen", "--vertices", "12", "--edges", "120",
            "--vertex-labels", "2", "--edge-labels", "2", "--seed", "5",
            "--out", stream)
        outs = []
        for _ in range(2):
            code, out = run(capsys, "bench", "--config", cfg_path, "--stream",
                            stream, "--per-kind", "40", "--seed", "2",
                            "--with-labels", "--json")
            assert code == 0
            doc = json.loads(out)
            outs.append({k: v for k, v in doc.items() if not k.endswith("_us")})
        assert outs[0] == outs[1]

    def test_oracle_cap_guard(self, capsys, tmp_path):
        cfg_path = tmp_path / "tiny.cfg"
        write_config(tiny_config(), cfg_path)
        stream = tmp_path / "s.csv"
        run(capsys, "gen", "--vertices", "10", "--edges", "50", "--seed", "1",
            "--out", stream)
        code, _ = run(capsys, "bench", "--config", cfg_path, "--stream", stream,
                      "--oracle-cap", "10")
        assert code == 3

    def test_unknown_kind_rejected(self, capsys, tmp_path):
        cfg_path = tmp_path / "tiny.cfg"
        write_config(tiny_config(), cfg_path)
        stream = tmp_path / "s.csv"
        run(capsys, "gen", "--vertices", "5", "--edges", "10", "--seed", "1",
            "--out", stream)
        assert run(capsys, "bench", "--config", cfg_path, "--stream", stream,
                   "--queries", "telepathy")[0] == 1


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        assert main(["ingest", "--config"]) == 1

    def test_bad_stream_is_two(self, workspace, capsys, tmp_path):
        tmp, cfg, _ = workspace
        bad = tmp_path / "bad.csv"
        bad.write_text("only,three,fields\n")
        assert run(capsys, "ingest", "--config", cfg, "--stream", bad,
                   "--out", tmp / "x.snap")[0] == 2

    def test_bad_config_is_one(self, workspace, capsys, tmp_path):
        tmp, _, stream = workspace
        bad = tmp_path / "bad.cfg"
        bad.write_text("matrix_width=7\nblocks=uniform:3\n")
        assert run(capsys, "ingest", "--config", bad, "--stream", stream,
                   "--out", tmp / "x.snap")[0] == 1
