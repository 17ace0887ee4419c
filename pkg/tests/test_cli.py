import csv
import json
import subprocess
import sys

import pytest

from hdioph import cli, schmidt


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, (json.loads(captured.out) if captured.out.strip() else None), captured


def value(node):
    return node["value"]


def walk_numbers(node):
    """Yield every leaf that is not a string, bool or None."""
    if isinstance(node, dict):
        if set(node) == {"value", "provenance"}:
            yield node
            return
        for v in node.values():
            yield from walk_numbers(v)
    elif isinstance(node, list):
        for v in node:
            yield from walk_numbers(v)
    elif not isinstance(node, (str, bool)) and node is not None:
        yield node


class TestExamples:
    def test_cf_expand(self, capsys):
        code, doc, _ = run_json(capsys, "cf", "expand", "--point", "0, 1/3i")
        assert code == 0
        res = doc["result"]
        assert [[value(c) for c in d] for d in res["digits"]] == [["0", "-3i"]]
        assert res["terminated"] is True

    def test_nt_sum(self, capsys):
        code, doc, _ = run_json(capsys, "nt", "sum", "--kind", "phi_starred", "--K", "10")
        assert code == 0
        assert float(value(doc["result"]["value"])) == pytest.approx(0.65)
        assert value(doc["result"]["exact"]) == "13/20"

    def test_count_carnot(self, capsys):
        code, doc, _ = run_json(
            capsys, "count", "carnot", "--C", "1/2", "--alpha", "5/4", "--N", "10000", "--samples", "50", "--seed", "7"
        )
        assert code == 0
        res = doc["result"]
        assert value(res["predicted_slope"]) == pytest.approx(1.0)
        assert abs(value(res["fitted_slope"]) - 1.0) <= 0.35

    def test_schema_and_seed(self, capsys):
        _, doc, _ = run_json(capsys, "nt", "totient", "--z", "3+4i", "--seed", "99")
        assert doc["schema"] == cli.SCHEMA
        assert doc["seed"] == 99
        assert doc["command"] == "nt"


class TestProvenance:
    @pytest.mark.parametrize(
        "argv",
        [
            ["nt", "sum", "--kind", "moebius_k", "--K", "200"],
            ["cf", "expand", "--point", "1/3+1/3i, 1/9+1/5i"],
            ["scan", "near", "--point", "1/3+1/3i, 1/9+1/5i", "--Nnorm", "30", "--C", "1", "--alpha", "1"],
            ["horo", "rational", "--point", "1/3+1/3i, 1/9+1/5i"],
            ["exponent", "--axis", "x_axis", "--samples", "2", "--N", "2000"],
        ],
    )
    def test_every_number_tagged(self, capsys, argv):
        code, doc, _ = run_json(capsys, *argv)
        assert code == 0
        leaves = list(walk_numbers(doc["result"]))
        assert leaves
        for leaf in leaves:
            assert isinstance(leaf, dict), leaf
            assert leaf["provenance"] in ("exact", "float(53)", "float(64)")

    def test_exact_and_float(self, capsys):
        _, doc, _ = run_json(capsys, "nt", "sum", "--kind", "phi_starred", "--K", "10")
        provs = {leaf["provenance"] for leaf in walk_numbers(doc["result"])}
        assert provs == {"exact", "float(64)"}

    def test_precision_bits_controls_rounding(self, capsys):
        _, doc, _ = run_json(capsys, "nt", "sum", "--kind", "moebius_k", "--K", "500", "--precision-bits", "128")
        leaf = doc["result"]["value"]
        assert leaf["provenance"] == "float(128)"
        assert len(leaf["value"].lstrip("-0.")) >= 39

    def test_words_stay_plain(self, capsys):
        _, doc, _ = run_json(capsys, "nt", "sum", "--kind", "phi_starred", "--K", "10")
        assert doc["result"]["kind"] == "phi_starred"


class TestDeterminism:
    def test_byte_identical(self, capsys):
        argv = ["count", "siegel", "--samples", "3", "--Nnorm", "40", "--C", "1", "--alpha", "1", "--seed", "5"]
        cli.run(argv)
        a = capsys.readouterr().out
        cli.run(argv)
        b = capsys.readouterr().out
        assert a == b

    def test_seed_changes_output(self, capsys):
        base = ["count", "carnot", "--samples", "2", "--N", "300"]
        cli.run(base + ["--seed", "1"])
        a = capsys.readouterr().out
        cli.run(base + ["--seed", "2"])
        b = capsys.readouterr().out
        assert a != b

    def test_thread_count_irrelevant(self, capsys, monkeypatch):
        argv = ["count", "carnot", "--samples", "4", "--N", "500"]
        monkeypatch.setenv("HDIOPH_THREADS", "1")
        cli.run(argv)
        a = capsys.readouterr().out
        monkeypatch.setenv("HDIOPH_THREADS", "4")
        cli.run(argv)
        assert capsys.readouterr().out == a


class TestExitCodes:
    def test_bad_point(self, capsys):
        code, _, cap = run_json(capsys, "cf", "expand", "--point", "1+i/3")
        assert code == 2
        assert "error" in cap.err

    def test_low_precision(self, capsys):
        code, _, _ = run_json(capsys, "nt", "sum", "--K", "10", "--precision-bits", "32")
        assert code == 2

    def test_seed_range(self, capsys):
        code, _, _ = run_json(capsys, "nt", "sum", "--K", "10", "--seed", str(2 ** 64))
        assert code == 2

    def test_invariant_violation(self, capsys, monkeypatch):
        monkeypatch.setattr(schmidt, "verify_strategy", lambda seq, cfg: False)
        code, _, cap = run_json(capsys, "cantor", "--n", "2", "--depth", "1")
        assert code == 3
        assert "invariant violation" in cap.err

    def test_unknown_command(self, capsys):
        assert cli.run(["frobnicate"]) == 2
        capsys.readouterr()


class TestValidate:
    def test_default_spec_valid(self, tmp_path, capsys):
        f = tmp_path / "heis.json"
        f.write_text(json.dumps({"builtin": "heis1"}))
        assert cli.validate_config(f) == []
        code, doc, _ = run_json(capsys, "validate", str(f))
        assert code == 0
        assert doc["result"]["valid"] is True

    def test_inadmissible_game(self, tmp_path, capsys):
        f = tmp_path / "game.json"
        f.write_text(json.dumps({"alpha": "1/4"}))
        problems = cli.validate_config(f)
        assert any("1 > L^4 (12 alpha)^delta" in p for p in problems)
        code, doc, _ = run_json(capsys, "validate", str(f))
        assert code == 2
        assert doc["result"]["valid"] is False

    def test_default_game_valid(self, tmp_path):
        f = tmp_path / "game.json"
        f.write_text(json.dumps({"game": schmidt.GameConfig().to_dict()}))
        assert cli.validate_config(f) == []

    def test_non_associative(self, tmp_path):
        f = tmp_path / "bad.json"
        spec = {
            "layer_dims": [1, 1, 1],
            "weights": ["1", "1/2", "1/4"],
            "law_polynomials": [[], [{"coeff": 1, "exponents": [2, 0, 0, 1, 0, 0]}]],
        }
        f.write_text(json.dumps(spec))
        problems = cli.validate_config(f)
        assert any("associativity fails for g=" in p for p in problems)

    def test_unreadable(self, tmp_path, capsys):
        code, _, _ = run_json(capsys, "validate", str(tmp_path / "missing.json"))
        assert code == 2


class TestOutputFiles:
    def test_out_dir(self, tmp_path):
        d = tmp_path / "run"
        code = cli.run(["scan", "near", "--point", "1/3+1/3i, 1/9+1/5i", "--Nnorm", "30",
                        "--C", "1", "--alpha", "1", "--out", str(d)])
        assert code == 0
        doc = json.loads((d / "summary.json").read_text())
        with open(d / "detail.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert doc["schema"] == cli.SCHEMA
        assert len(rows) - 1 == value(doc["result"]["hit_count"])

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hdioph", "cf", "expand", "--point", "0, 1/3i"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["result"]["terminated"] is True
