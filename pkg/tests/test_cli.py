"""Command line interface: exit codes, output determinism, error paths."""

import json
import subprocess
import sys

import pytest

from veltman.cli import main


@pytest.fixture()
def gen_model_file(tmp_path):
    doc = {"kind": "gen",
           "worlds": ["w", "u", "v", "z"],
           "R": [["w", "u"], ["w", "v"], ["w", "z"], ["v", "z"]],
           "S": {"w": {"u": [["u"], ["v"]]}},
           "valuation": {"p": ["u"]}}
    path = tmp_path / "model.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture()
def legal_model_file(tmp_path):
    doc = {"kind": "gen",
           "worlds": ["a", "b"],
           "R": [["a", "b"]],
           "S": {"a": {"b": [["b"]]}},
           "valuation": {"p": ["b"]}}
    path = tmp_path / "legal.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestParse:
    def test_ok(self, capsys):
        assert main(["parse", "p |> q -> [](p |> q)"]) == 0
        out = capsys.readouterr().out
        assert "p |> q -> [](p |> q)" in out

    def test_json_format(self, capsys):
        assert main(["parse", "p & q", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["formula"] == "p & q"
        assert doc["ast"]["op"] == "&"

    def test_syntax_error_exit_2(self, capsys):
        assert main(["parse", "p |>"]) == 2
        assert "syntax error" in capsys.readouterr().err


class TestCheckModel:
    def test_violations_exit_1(self, gen_model_file, capsys):
        assert main(["check-model", gen_model_file]) == 1
        out = capsys.readouterr().out
        assert "missing" in out

    def test_closure_repairs(self, gen_model_file, capsys):
        assert main(["check-model", gen_model_file, "--closure"]) == 0
        assert "legal" in capsys.readouterr().out

    def test_missing_file_exit_2(self):
        assert main(["check-model", "/no/such/file.json"]) == 2

    def test_bad_json_exit_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        assert main(["check-model", str(path)]) == 2

    def test_json_report(self, gen_model_file, capsys):
        main(["check-model", gen_model_file, "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["legal"] is False
        assert doc["violations"]


class TestModelCheck:
    def test_forced_exit_0(self, legal_model_file, capsys):
        assert main(["model-check", legal_model_file, "<>p", "--world", "a"]) == 0
        assert "forced" in capsys.readouterr().out

    def test_not_forced_exit_1(self, legal_model_file):
        assert main(["model-check", legal_model_file, "p", "--world", "a"]) == 1

    def test_unknown_world_exit_2(self, legal_model_file):
        assert main(["model-check", legal_model_file, "p", "--world", "nope"]) == 2

    def test_all_worlds_table(self, legal_model_file, capsys):
        rc = main(["model-check", legal_model_file, "p | ~p", "--format", "json"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["forced"] == {"a": True, "b": True}

    def test_illegal_model_exit_2(self, gen_model_file):
        assert main(["model-check", gen_model_file, "p"]) == 2


class TestCheckProperty:
    def test_failing_property_exit_1(self, gen_model_file, capsys):
        rc = main(["check-property", gen_model_file, "--closure",
                   "--property", "Mgen"])
        assert rc == 1
        out = capsys.readouterr().out
        assert "fails" in out and "witness" in out

    def test_holding_property_exit_0(self, legal_model_file):
        rc = main(["check-property", legal_model_file, "--property", "Mgen"])
        assert rc == 0

    def test_unknown_property_exit_2(self, legal_model_file, capsys):
        with pytest.raises(SystemExit):
            main(["check-property", legal_model_file, "--property", "Qgen"])


class TestSchemaValid:
    def test_valid_exit_0(self, legal_model_file):
        assert main(["schema-valid", legal_model_file, "--schema", "J5"]) == 0

    def test_falsified_exit_1(self, gen_model_file, capsys):
        rc = main(["schema-valid", gen_model_file, "--closure", "--schema", "M"])
        assert rc == 1
        assert "falsified" in capsys.readouterr().out

    def test_unknown_schema_exit_2(self, legal_model_file):
        assert main(["schema-valid", legal_model_file, "--schema", "ZZ"]) == 2


class TestBisim:
    def test_partition_output(self, legal_model_file, capsys):
        assert main(["bisim", legal_model_file, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["classes"] == {"a": ["a"], "b": ["b"]}


class TestFiltrate:
    def test_quotient_and_partition(self, legal_model_file, capsys):
        assert main(["filtrate", legal_model_file, "p", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["violations"] == []
        assert doc["quotient"]["kind"] == "gen"
        assert set(doc["partition"]) == {"a", "b"}

    def test_bad_seed_formula_exit_2(self, legal_model_file):
        assert main(["filtrate", legal_model_file, "p |>"]) == 2


class TestCheckProof:
    def test_accepted(self, tmp_path, capsys):
        path = tmp_path / "proof.ilp"
        path.write_text("1. p -> p ; taut\n"
                        "2. [](p -> p) ; nec 1\n"
                        "3. [](p -> p) -> (p |> p) ; ax J1\n"
                        "4. p |> p ; mp 2 3\n")
        assert main(["check-proof", str(path)]) == 0
        assert "accepted" in capsys.readouterr().out

    def test_rejected_with_line(self, tmp_path, capsys):
        path = tmp_path / "proof.ilp"
        path.write_text("1. p |> p ; taut\n")
        assert main(["check-proof", str(path)]) == 1
        out = capsys.readouterr().out
        assert "line 1" in out and "not a classical tautology" in out

    def test_malformed_exit_2(self, tmp_path):
        path = tmp_path / "proof.ilp"
        path.write_text("one. p ; taut\n")
        assert main(["check-proof", str(path)]) == 2

    def test_logic_gate(self, tmp_path):
        path = tmp_path / "proof.ilp"
        path.write_text("1. (p |> q) -> ((p & []r) |> (q & []r)) ; ax M\n")
        assert main(["check-proof", str(path), "--logic", "ILM"]) == 0
        assert main(["check-proof", str(path), "--logic", "IL"]) == 1


class TestSearch:
    def test_refuted_exit_1(self, capsys):
        rc = main(["search", "--logic", "IL", "--max-worlds", "2", "p |> q",
                   "--format", "json"])
        assert rc == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "refuted"
        assert doc["refuted_at"] == "w0"
        assert doc["countermodel"]["valuation"] == {"p": ["w1"], "q": []}

    def test_no_countermodel_exit_0(self, capsys):
        rc = main(["search", "--logic", "IL", "--max-worlds", "2", "<>p |> p"])
        assert rc == 0
        assert "no countermodel" in capsys.readouterr().out

    def test_deterministic_output(self, capsys):
        main(["search", "--max-worlds", "3", "p |> q", "--format", "json"])
        first = capsys.readouterr().out
        main(["search", "--max-worlds", "3", "p |> q", "--format", "json"])
        second = capsys.readouterr().out
        assert first == second

    def test_timeout_exit_2(self, capsys):
        rc = main(["search", "--max-worlds", "4", "--time-limit", "1e-9",
                   "<>p |> p"])
        assert rc == 2
        assert "budget" in capsys.readouterr().err


class TestBench:
    def test_agreement_exit_0(self, capsys):
        rc = main(["bench", "--property", "Pgen", "--max-worlds", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "n=1" in out and "n=2" in out

    def test_json_shape(self, capsys):
        main(["bench", "--property", "Mgen", "--max-worlds", "2",
              "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["agree"] is True
        assert [row["n"] for row in doc["sizes"]] == [1, 2]


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "veltman.cli", "parse", "p"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
