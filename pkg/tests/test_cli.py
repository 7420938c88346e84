from __future__ import annotations

import numpy as np
import pytest

from linkpred import load_attributes, load_edge_list, save_attributes, save_edge_list
from linkpred.cli import main
from _helpers import graph_from_edges


@pytest.fixture()
def triangle_minus_edge(tmp_path):
    # nodes 0,1,2 with edges (0,1),(1,2): the missing edge (0,2) closes a triangle
    edges = tmp_path / "edges.txt"
    edges.write_text("0 1\n1 2\n")
    attrs = tmp_path / "attrs.txt"
    attrs.write_text("#dense 2\n0 1 1\n1 1 1\n2 1 1\n")
    return edges, attrs


@pytest.fixture()
def planted_files(tmp_path):
    out_edges = tmp_path / "gen_edges.txt"
    out_attrs = tmp_path / "gen_attrs.txt"
    rc = main(["generate", "--n", "60", "--groups", "3", "--p-in", "0.3",
               "--p-out", "0.02", "--attr-noise", "0.1", "--seed", "5",
               "--out-edges", str(out_edges), "--out-attrs", str(out_attrs)])
    assert rc == 0
    return out_edges, out_attrs


class TestPredict:
    def test_missing_triangle_edge_ranks_first(self, triangle_minus_edge, tmp_path):
        edges, _ = triangle_minus_edge
        out = tmp_path / "pred.csv"
        rc = main(["predict", "--edges", str(edges), "--method", "cn",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "i,j,score"
        assert lines[1].startswith("0,2,")

    def test_randwalk_planted_top_k_within_groups(self, tmp_path):
        out_edges = tmp_path / "e.txt"
        out_attrs = tmp_path / "a.txt"
        assert main(["generate", "--n", "45", "--groups", "3", "--p-in", "0.4",
                     "--p-out", "0.0001", "--attr-noise", "0", "--seed", "3",
                     "--out-edges", str(out_edges), "--out-attrs", str(out_attrs)]) == 0
        graph = load_attributes(out_attrs, load_edge_list(out_edges))
        # regenerate with p_out=0 semantics: drop any cross edges for the check
        group = np.argmax(graph.attributes, axis=1)
        out = tmp_path / "pred.csv"
        rc = main(["predict", "--edges", str(out_edges), "--attrs", str(out_attrs),
                   "--method", "randwalk", "--top-k", "20", "--out", str(out)])
        assert rc == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        scored = [(int(i), int(j), float(s)) for i, j, s in rows]
        positive = [(i, j) for i, j, s in scored if s > 0]
        assert positive, "expected some nonzero predictions"
        for i, j in positive:
            assert group[i] == group[j]

    def test_top_k_larger_than_pool(self, triangle_minus_edge, tmp_path):
        edges, _ = triangle_minus_edge
        out = tmp_path / "pred.csv"
        rc = main(["predict", "--edges", str(edges), "--method", "cn",
                   "--top-k", "999", "--out", str(out)])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 2  # header + single non-edge

    def test_randwalk_without_attrs_is_config_error(self, triangle_minus_edge):
        edges, _ = triangle_minus_edge
        assert main(["predict", "--edges", str(edges), "--method", "randwalk"]) == 1

    def test_unknown_method_lists_names(self, triangle_minus_edge, capsys):
        edges, _ = triangle_minus_edge
        assert main(["predict", "--edges", str(edges), "--method", "nope"]) == 1
        err = capsys.readouterr().err
        assert "randwalk" in err and "katz" in err

    def test_multiple_methods_rejected(self, triangle_minus_edge):
        edges, _ = triangle_minus_edge
        assert main(["predict", "--edges", str(edges), "--method", "cn,pa"]) == 1

    def test_missing_edges_file(self, tmp_path):
        assert main(["predict", "--edges", str(tmp_path / "nope.txt"),
                     "--method", "cn"]) == 1

    def test_parse_error_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1\nbroken\n")
        assert main(["predict", "--edges", str(bad), "--method", "cn"]) == 2

    def test_nonconvergence_exit_code_still_writes(self, planted_files, tmp_path):
        edges, attrs = planted_files
        out = tmp_path / "pred.csv"
        rc = main(["predict", "--edges", str(edges), "--attrs", str(attrs),
                   "--method", "randwalk", "--tol", "1e-14", "--max-iter", "2",
                   "--out", str(out)])
        assert rc == 3
        assert out.exists()

    def test_dump_files(self, triangle_minus_edge, tmp_path):
        edges, attrs = triangle_minus_edge
        sim_path = tmp_path / "sim.csv"
        score_path = tmp_path / "scores.csv"
        rc = main(["predict", "--edges", str(edges), "--attrs", str(attrs),
                   "--method", "randwalk", "--dump-sim", str(sim_path),
                   "--dump-scores", str(score_path), "--out", str(tmp_path / "p.csv")])
        assert rc == 0
        sim = np.loadtxt(sim_path, delimiter=",")
        assert sim.shape == (3, 3)
        assert np.allclose(sim, 1.0)
        scores = np.loadtxt(score_path, delimiter=",")
        assert scores.shape == (3, 3)
        assert (np.diag(scores) == 1.0).all()


class TestEvaluate:
    def test_report_written_and_deterministic(self, planted_files, tmp_path):
        edges, attrs = planted_files
        out_a = tmp_path / "report_a.txt"
        out_b = tmp_path / "report_b.txt"
        args = ["evaluate", "--edges", str(edges), "--attrs", str(attrs),
                "--method", "randwalk,cn", "--reps", "3", "--seed", "77"]
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_report_contains_all_methods(self, planted_files, tmp_path):
        edges, attrs = planted_files
        out = tmp_path / "report.txt"
        rc = main(["evaluate", "--edges", str(edges), "--attrs", str(attrs),
                   "--method", "cn,pa,lp", "--reps", "2", "--out", str(out)])
        assert rc == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        methods = [line.split(",")[1] for line in body[1:]]
        assert methods == ["cn", "pa", "lp"]

    def test_full_eleven_method_roster(self, planted_files, tmp_path):
        edges, attrs = planted_files
        out = tmp_path / "report.txt"
        roster = "randwalk,cn,salton,jaccard,sorensen,hpi,hdi,lhn-i,pa,lp,katz"
        rc = main(["evaluate", "--edges", str(edges), "--attrs", str(attrs),
                   "--method", roster, "--reps", "2", "--out", str(out)])
        assert rc == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert [line.split(",")[1] for line in body[1:]] == roster.split(",")

    def test_unknown_method(self, planted_files):
        edges, attrs = planted_files
        assert main(["evaluate", "--edges", str(edges), "--attrs", str(attrs),
                     "--method", "cn,bogus"]) == 1

    def test_sampled_mode(self, planted_files, tmp_path):
        edges, attrs = planted_files
        out = tmp_path / "report.txt"
        rc = main(["evaluate", "--edges", str(edges), "--method", "cn",
                   "--reps", "2", "--auc", "sampled", "--auc-samples", "5000",
                   "--out", str(out)])
        assert rc == 0
        assert out.exists()

    def test_config_file_precedence(self, planted_files, tmp_path, capsys):
        edges, attrs = planted_files
        cfg = tmp_path / "run.cfg"
        cfg.write_text("method=cn\nreps=2\nseed=123\nsplit=0.2\n")
        out = tmp_path / "report.txt"
        rc = main(["evaluate", "--edges", str(edges), "--config", str(cfg),
                   "--seed", "999", "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert "master_seed: 999" in text  # flag beats file
        assert "split_fraction: 0.2" in text  # file beats default

    def test_config_file_unknown_key(self, planted_files, tmp_path):
        edges, _ = planted_files
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mystery=1\n")
        assert main(["evaluate", "--edges", str(edges), "--method", "cn",
                     "--config", str(cfg)]) == 1


class TestStats:
    def test_row_printed(self, capsys, tmp_path):
        edges = tmp_path / "e.txt"
        edges.write_text("0 1\n1 2\n0 2\n")
        assert main(["stats", "--edges", str(edges)]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0].split() == ["N", "M", "Att", "NUM_C", "e", "C", "r", "K"]
        assert lines[1].split() == ["3", "3", "0", "3/1", "1.0000", "1.0000", "n/a", "2.0000"]

    def test_single_node_is_data_error(self, tmp_path):
        edges = tmp_path / "e.txt"
        edges.write_text("#nodes 1\n")
        assert main(["stats", "--edges", str(edges)]) == 2

    def test_id_map_written(self, tmp_path):
        edges = tmp_path / "e.txt"
        edges.write_text("1 2\n2 3\n")
        id_map = tmp_path / "map.csv"
        assert main(["stats", "--edges", str(edges), "--one-based",
                     "--id-map", str(id_map)]) == 0
        assert id_map.read_text().splitlines()[1] == "1,0"


class TestGenerate:
    def test_roundtrip_statistics(self, tmp_path, capsys):
        out_edges = tmp_path / "e.txt"
        out_attrs = tmp_path / "a.txt"
        rc = main(["generate", "--n", "100", "--groups", "4", "--p-in", "0.25",
                   "--p-out", "0.02", "--attr-noise", "0.1", "--seed", "21",
                   "--out-edges", str(out_edges), "--out-attrs", str(out_attrs)])
        assert rc == 0
        graph = load_attributes(out_attrs, load_edge_list(out_edges))
        assert graph.n == 100
        assert graph.attr_dim == 4
        summary = capsys.readouterr().out
        assert f"m={graph.m_edges}" in summary

    def test_generated_files_reload_identically(self, tmp_path):
        out_edges = tmp_path / "e.txt"
        out_attrs = tmp_path / "a.txt"
        assert main(["generate", "--n", "40", "--groups", "2", "--p-in", "0.3",
                     "--p-out", "0.05", "--attr-noise", "0.2", "--seed", "8",
                     "--out-edges", str(out_edges), "--out-attrs", str(out_attrs)]) == 0
        g1 = load_attributes(out_attrs, load_edge_list(out_edges))
        save_edge_list(g1, tmp_path / "e2.txt")
        save_attributes(g1, tmp_path / "a2.txt")
        g2 = load_attributes(tmp_path / "a2.txt", load_edge_list(tmp_path / "e2.txt"))
        assert np.array_equal(g1.edges, g2.edges)
        assert np.array_equal(g1.attributes, g2.attributes)

    def test_missing_outputs_rejected(self):
        assert main(["generate", "--n", "10", "--groups", "2"]) == 1

    def test_bad_probabilities(self, tmp_path):
        assert main(["generate", "--n", "10", "--groups", "2", "--p-in", "0.1",
                     "--p-out", "0.5", "--out-edges", str(tmp_path / "e"),
                     "--out-attrs", str(tmp_path / "a")]) == 1


class TestDeterminism:
    def test_predict_reruns_byte_identical(self, planted_files, tmp_path):
        edges, attrs = planted_files
        outputs = []
        for tag in ("a", "b"):
            out = tmp_path / f"pred_{tag}.csv"
            assert main(["predict", "--edges", str(edges), "--attrs", str(attrs),
                         "--method", "randwalk", "--top-k", "50",
                         "--out", str(out)]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_stats_reruns_byte_identical(self, planted_files, tmp_path):
        edges, attrs = planted_files
        outputs = []
        for tag in ("a", "b"):
            out = tmp_path / f"stats_{tag}.txt"
            assert main(["stats", "--edges", str(edges), "--attrs", str(attrs),
                         "--out", str(out)]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_generate_reruns_byte_identical(self, tmp_path):
        files = []
        for tag in ("a", "b"):
            e = tmp_path / f"e_{tag}.txt"
            a = tmp_path / f"a_{tag}.txt"
            assert main(["generate", "--n", "50", "--groups", "2", "--p-in", "0.3",
                         "--p-out", "0.03", "--attr-noise", "0.15", "--seed", "99",
                         "--out-edges", str(e), "--out-attrs", str(a)]) == 0
            files.append((e.read_bytes(), a.read_bytes()))
        assert files[0] == files[1]


def test_bad_usage_exits_one():
    with pytest.raises(SystemExit) as excinfo:
        main(["predict", "--no-such-flag"])
    assert excinfo.value.code == 1


def test_graph_helpers_roundtrip(tmp_path):
    g = graph_from_edges(4, [(0, 1), (2, 3)], attributes=np.eye(4))
    save_edge_list(g, tmp_path / "e.txt")
    save_attributes(g, tmp_path / "a.txt")
    reloaded = load_attributes(tmp_path / "a.txt", load_edge_list(tmp_path / "e.txt"))
    assert np.array_equal(reloaded.attributes, g.attributes)
