import json
import pathlib

import pytest

from factorkit.cli import main
from factorkit.graphs import LabelledGraph, write_graph_file

DATA = pathlib.Path(__file__).parent / "data"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestFigure:
    def test_golden_n4_byte_exact(self, capsys):
        code, out, _ = run_cli(capsys, "figure", "--n", "4")
        assert code == 0
        assert out == (DATA / "figure_n4_golden.csv").read_text()

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "figure", "--n", "6", "--format", "json")
        assert code == 0
        body = json.loads(out)
        assert body["columns"][0] == "k"
        assert len(body["rows"]) == 4
        # keys are sorted for deterministic output
        assert out == json.dumps(body, sort_keys=True) + "\n"


class TestExitCodes:
    def test_invalid_input_is_2(self, capsys):
        code, _, err = run_cli(capsys, "asym", "--spec", "9:3,3,2")
        assert code == 2 and "every degree even" in err

    def test_regime_refused_is_3(self, capsys):
        code, _, err = run_cli(capsys, "exact", "--kind", "regular", "--n", "12", "--d", "4")
        assert code == 3 and "ceiling" in err

    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["figure", "--n", "4", "--no-such-flag"])
        assert exc.value.code == 2

    def test_success_is_0(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--demo")
        assert code == 0 and "sandwich_ok" in out


class TestConfigEcho:
    def test_header_carries_resolved_config(self, capsys):
        _, out, _ = run_cli(capsys, "mc", "--mode", "multi", "--n", "30", "--degrees", "1,1",
                            "--trials", "500", "--seed", "9")
        header = out.splitlines()[0]
        assert header.startswith("# config ")
        cfg = json.loads(header[len("# config "):])
        assert cfg["seed"] == 9 and cfg["trials"] == 500 and cfg["workers"] == 1
        assert cfg["format"] == "csv"


class TestDeterminism:
    def test_worker_count_does_not_change_rows(self, capsys):
        outs = []
        for w in ("1", "4"):
            code, out, _ = run_cli(capsys, "mc", "--mode", "multi", "--n", "30",
                                   "--degrees", "1,1", "--trials", "2000",
                                   "--seed", "3", "--workers", w, "--format", "json")
            assert code == 0
            outs.append(json.loads(out)["rows"])
        assert outs[0] == outs[1]

    def test_same_seed_same_bytes(self, capsys):
        runs = [run_cli(capsys, "mc", "--mode", "tail", "--n", "50", "--d", "2",
                        "--h", "2", "--trials", "1000", "--seed", "4")[1] for _ in range(2)]
        assert runs[0] == runs[1]


class TestGraphInputs:
    def test_edge_list_and_graph6_files(self, capsys, tmp_path):
        pm = LabelledGraph.perfect_matching(6)
        el = tmp_path / "pm.txt"
        g6 = tmp_path / "pm.g6"
        write_graph_file(pm, str(el))
        write_graph_file(pm, str(g6))
        for path in (el, g6):
            code, out, _ = run_cli(capsys, "mc", "--mode", "disjoint",
                                   "--graph", str(path), "--graph2", str(path),
                                   "--trials", "500", "--seed", "1", "--format", "json")
            assert code == 0
            row = dict(zip(json.loads(out)["columns"], json.loads(out)["rows"][0]))
            assert row["degrees"] == "1,1"

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "res.csv"
        code, out, _ = run_cli(capsys, "compare", "--spec", "4:1,2", "--out", str(target))
        assert code == 0 and out == ""
        assert "ratio" in target.read_text()


class TestSwitchCommand:
    def test_csv_columns(self, capsys):
        code, out, _ = run_cli(capsys, "switch", "--n", "6", "--d", "1", "--h", "1")
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "t,L_t,ratio_predicted,ratio_exact,forward_moves,reverse_moves"
        assert lines[2].startswith("0,384")
        assert lines[-1].startswith("# summary ")


class TestCompareCommand:
    def test_ratio_approaches_one_with_n(self, capsys):
        ratios = {}
        for spec in ("6:4,1", "10:8,1"):
            code, out, _ = run_cli(capsys, "compare", "--spec", spec, "--format", "json")
            assert code == 0
            body = json.loads(out)
            row = dict(zip(body["columns"], body["rows"][0]))
            ratios[spec] = row["ratio"]
        assert abs(ratios["10:8,1"] - 1) < abs(ratios["6:4,1"] - 1)


class TestFigureEngines:
    def test_dfs_and_memoized_emit_identical_tables(self, capsys):
        outs = {}
        for method in ("dfs", "memoized"):
            code, out, _ = run_cli(capsys, "figure", "--n", "6", "--method", method,
                                   "--format", "json")
            assert code == 0
            outs[method] = json.loads(out)["rows"]
        assert outs["dfs"] == outs["memoized"]


class TestServeParser:
    def test_serve_subcommand_exists(self):
        from factorkit.cli import build_parser

        parser = build_parser()
        args = parser.parse_args(["serve", "--port", "9000"])
        assert args.command == "serve" and args.port == 9000


class TestLiveServer:
    def test_cli_against_running_service(self, capsys, tmp_path):
        import socket
        import subprocess
        import sys
        import time

        import httpx

        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            port = s.getsockname()[1]
        proc = subprocess.Popen(
            [sys.executable, "-m", "factorkit", "serve", "--port", str(port)],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        try:
            base = f"http://127.0.0.1:{port}"
            for _ in range(100):
                try:
                    if httpx.get(base + "/v1/health", timeout=1).status_code == 200:
                        break
                except httpx.HTTPError:
                    time.sleep(0.1)
            else:
                pytest.fail("service did not come up")
            code, remote, _ = run_cli(capsys, "figure", "--n", "4", "--server", base)
            assert code == 0
            _, local, _ = run_cli(capsys, "figure", "--n", "4")
            assert remote == local
        finally:
            proc.terminate()
            proc.wait(timeout=10)
