import json
import subprocess
import sys

import pytest

from multifact import Graph, clique_incidence, serialise_edge_list, serialise_multipartite
from multifact.cli import main
from tests.conftest import BOWTIE, DATA, DIAMOND, FIX_CHAIN


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.edges"
    path.write_text(serialise_edge_list(Graph.from_edge_list(DIAMOND)))
    return path


@pytest.fixture
def fix_chain_file(tmp_path):
    path = tmp_path / "chain.edges"
    path.write_text(serialise_edge_list(Graph.from_edge_list(FIX_CHAIN)))
    return path


class TestDecompose:
    def test_diamond_to_file(self, diamond_file, tmp_path, capsys):
        out = tmp_path / "diamond.mg"
        assert main(["decompose", str(diamond_file), "-o", str(out)]) == 0
        captured = capsys.readouterr()
        assert captured.out == "terminated rank=2\n"
        assert out.read_text().startswith("mgraph 3\n")

    def test_diamond_to_stdout_moves_status_to_stderr(self, diamond_file, capsys):
        assert main(["decompose", str(diamond_file)]) == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("mgraph 3\n")
        assert "terminated rank=2" in captured.err

    def test_empty_file_gives_the_empty_graph(self, tmp_path, capsys):
        empty = tmp_path / "empty.edges"
        empty.write_text("")
        assert main(["decompose", str(empty)]) == 0
        assert capsys.readouterr().out == "mgraph 2\n"

    def test_cap_reached_exits_2(self, capsys):
        rc = main(["decompose", str(DATA / "apex_witness.edges"), "--mode", "weak", "--cap", "50"])
        assert rc == 2
        assert "cap-reached cap=50" in capsys.readouterr().err

    def test_cap_ignored_for_clean_with_warning(self, diamond_file, capsys):
        assert main(["decompose", str(diamond_file), "--cap", "5"]) == 0
        assert "ignored" in capsys.readouterr().err

    def test_missing_input_exits_1(self, tmp_path, capsys):
        assert main(["decompose", str(tmp_path / "nope.edges")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_flag_exits_1_not_2(self, diamond_file, capsys):
        # 2 belongs to cap-reached; usage errors count as input errors
        with pytest.raises(SystemExit) as e:
            main(["decompose", str(diamond_file), "-m", "weak"])
        assert e.value.code == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_mode_choice_exits_1(self, diamond_file, capsys):
        with pytest.raises(SystemExit) as e:
            main(["decompose", str(diamond_file), "--mode", "bogus"])
        assert e.value.code == 1
        capsys.readouterr()

    def test_malformed_input_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.edges"
        bad.write_text("a b\nc c\n")
        assert main(["decompose", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_low_memory_same_output(self, diamond_file, capsys):
        assert main(["decompose", str(diamond_file)]) == 0
        full = capsys.readouterr().out
        assert main(["decompose", str(diamond_file), "--low-memory"]) == 0
        assert capsys.readouterr().out == full


class TestVerify:
    def test_diamond_passes(self, diamond_file, capsys):
        assert main(["verify", str(diamond_file)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] and report["rank"] == 2
        assert report["final_level_sizes"] == [4, 2, 1]
        assert set(report["checks"]) == {
            "charseq_theorem",
            "v2_bijection",
            "size_bound",
            "projection_roundtrip",
        }

    def test_k3_vacuous_pass(self, tmp_path, capsys):
        f = tmp_path / "k3.edges"
        f.write_text("a b\na c\nb c\n")
        assert main(["verify", str(f)]) == 0

    def test_random_suite_passes(self, capsys):
        assert main(["verify", "--random", "n=9", "seeds=25"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] and report["failed_instances"] == 0
        assert report["suite"] == {
            "n": 9,
            "p": 0.3,
            "seeds": 25,
            "base_seed": 9 * 7919 + 3 * 104729,
        }

    def test_dense_suite_fails_with_witnesses(self, capsys):
        rc = main(["verify", "--random", "n=12", "seeds=2", "p=0.7", "--seed", "828131"])
        assert rc == 3
        report = json.loads(capsys.readouterr().out)
        assert not report["pass"] and report["failed_instances"] >= 1
        first = report["failures"][0]
        assert first["seed"] == 828131
        assert first["failed"] == ["charseq_theorem"]

    def test_bad_suite_parameters(self, capsys):
        assert main(["verify", "--random", "m=3"]) == 1
        capsys.readouterr()
        assert main(["verify", "--random", "p=2.0"]) == 1

    def test_requires_an_input(self, capsys):
        assert main(["verify"]) == 1
        assert main(["verify", "x.edges", "--random", "n=4"]) == 1


class TestProject:
    def test_roundtrip_to_edge_list(self, diamond_file, tmp_path, capsys):
        mg = tmp_path / "diamond.mg"
        assert main(["decompose", str(diamond_file), "-o", str(mg)]) == 0
        capsys.readouterr()
        two = tmp_path / "two.mg"
        assert main(["project", str(mg), "-o", str(two)]) == 0
        assert two.read_text() == serialise_multipartite(
            clique_incidence(Graph.from_edge_list(DIAMOND))
        )
        assert main(["project", str(two), "--to-graph"]) == 0
        assert capsys.readouterr().out == diamond_file.read_text()

    def test_two_levels_without_flag_exits_1(self, tmp_path, capsys):
        b = tmp_path / "b.mg"
        b.write_text(serialise_multipartite(clique_incidence(Graph.from_edge_list(BOWTIE))))
        assert main(["project", str(b)]) == 1
        assert "at least 3 levels" in capsys.readouterr().err

    def test_to_graph_needs_two_levels(self, diamond_file, tmp_path, capsys):
        mg = tmp_path / "diamond.mg"
        main(["decompose", str(diamond_file), "-o", str(mg)])
        capsys.readouterr()
        assert main(["project", str(mg), "--to-graph"]) == 1

    def test_malformed_multipartite_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.mg"
        bad.write_text("mgraph 2\nv 0 0 a\nv 0 0 b\n")
        assert main(["project", str(bad)]) == 1
        assert "line 3" in capsys.readouterr().err


class TestStats:
    def test_diamond(self, diamond_file, capsys):
        assert main(["stats", str(diamond_file)]) == 0
        captured = capsys.readouterr()
        stats = json.loads(captured.out)
        assert len(stats["steps"]) == 2
        assert stats["final"]["level_sizes"] == [4, 2, 1]
        assert stats["final"]["bound"]["pass"]
        assert "elapsed_ms" not in captured.out
        assert "ms" in captured.err

    def test_edgeless_single_step(self, tmp_path, capsys):
        f = tmp_path / "none.edges"
        f.write_text("")
        assert main(["stats", str(f)]) == 0
        assert len(json.loads(capsys.readouterr().out)["steps"]) == 1

    def test_fix_chain_level2_size(self, fix_chain_file, capsys):
        assert main(["stats", str(fix_chain_file)]) == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats["final"]["level_sizes"][2] == 2

    def test_weak_mode_reports_no_bound(self, diamond_file, capsys):
        assert main(["stats", str(diamond_file), "--mode", "weak"]) == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats["final"]["bound"] is None


def test_stdout_is_byte_identical_across_runs(diamond_file):
    def snap(argv):
        return subprocess.run(
            [sys.executable, "-m", "multifact", *argv],
            capture_output=True,
            text=True,
        )

    for argv in (
        ["decompose", str(diamond_file)],
        ["verify", str(diamond_file)],
        ["stats", str(diamond_file)],
    ):
        first, second = snap(argv), snap(argv)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode


def test_console_entry_point_help():
    r = subprocess.run(
        [sys.executable, "-m", "multifact", "--help"], capture_output=True, text=True
    )
    assert r.returncode == 0
    for sub in ("decompose", "verify", "project", "stats"):
        assert sub in r.stdout
