import json

import pytest

from main import COMMANDS, build_parser, main
from modules.errors import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED
from modules.gf_linalg import FpMatrix, inverse
from modules.verification import SUITES


def run(capsys, *argv):
    status = main([str(a) for a in argv])
    return status, capsys.readouterr().out


def test_bar_matrix_json(capsys, quiver_file):
    status, out = run(capsys, "bar-matrix", "--quiver", quiver_file, "--dim", "1,1", "--format", "json")
    assert status == EXIT_OK
    doc = json.loads(out)
    assert doc["kind"] == "bar-matrix"
    assert doc["labels"] == ["P12", "S1+S2"]
    assert doc["entries"]["P12,S1+S2"] == [-1, 1]
    assert doc["entries"]["S1+S2,P12"] == []
    assert doc["provenance"]["dim"] == [1, 1]


def test_reruns_are_byte_identical(capsys, quiver_file, tmp_path):
    argv = ("hall-poly", "--quiver", quiver_file, "--dim", "2,1", "--format", "json", "--seed", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    cached = ("bar-matrix", "--quiver", quiver_file, "--dim", "2,1", "--format", "json", "--cache", tmp_path)
    cold = run(capsys, *cached)
    warm = run(capsys, *cached)
    assert cold == warm
    assert json.loads(warm[1])["provenance"]["degree_bounds"]


def test_bar_matrix_text(capsys, quiver_file):
    status, out = run(capsys, "bar-matrix", "--quiver", quiver_file, "--dim", "2,1")
    assert status == EXIT_OK
    assert "q^2 - 1" in out


def test_hall_poly_and_cache(capsys, quiver_file, tmp_path):
    cache = tmp_path / "cache"
    status, out = run(capsys, "hall-poly", "--quiver", quiver_file, "--dim", "1,1", "--format", "json",
                      "--cache", cache)
    assert status == EXIT_OK
    doc = json.loads(out)
    assert doc["entries"]["S1+S2|S1|S2"] == [1]
    assert doc["entries"]["P12|S1|S2"] == [1]
    assert "P12|S2|S1" not in doc["entries"]
    assert doc["provenance"]["degree_bounds"]["P12|S1|S2"] == 0
    assert len(list(cache.glob("*.json"))) == 1


def test_slice_census_tsv(capsys, quiver_file):
    status, out = run(capsys, "slice-census", "--quiver", quiver_file, "--dim", "1,1", "--primes", "2,3,5",
                      "--format", "tsv")
    assert status == EXIT_OK
    assert "S1+S2|P12|3\t2" in out.splitlines()
    assert "P12|P12|5\t1" in out.splitlines()


def test_preprojective_census(capsys, quiver_file):
    status, out = run(capsys, "preproj-census", "--quiver", quiver_file, "--dim", "1,1", "--primes", "2,3,5")
    assert status == EXIT_OK
    assert "S1+S2|P12|5: 4" in out


def test_roots_and_labels(capsys, quiver_file):
    status, out = run(capsys, "roots", "--quiver", quiver_file, "--format", "json")
    assert status == EXIT_OK
    assert json.loads(out)["entries"]["P12"] == [1, 1]
    status, out = run(capsys, "labels", "--quiver", quiver_file, "--dim", "2,1")
    assert status == EXIT_OK
    assert "S1^2+S2: 1,0,2" in out


def test_verify(capsys, quiver_file):
    status, out = run(capsys, "verify", "row-sum", "--quiver", quiver_file, "--dim", "2,1")
    assert status == EXIT_OK
    assert "d=(2,1): pass" in out


@pytest.mark.parametrize("argv", [
    ["labels", "--quiver", "missing.txt", "--dim", "1,1"],
    ["labels", "--dim", "1,1"],
    ["verify", "--quiver", "{quiver}"],
    ["verify", "everything", "--quiver", "{quiver}"],
    ["labels", "--quiver", "{quiver}"],
    ["labels", "--quiver", "{quiver}", "--dim", "1,1,1"],
    ["labels", "--quiver", "{quiver}", "--dim", "1,x"],
    ["bar-matrix", "--quiver", "{quiver}", "--dim", "1,1", "--primes", "2,4,5"],
    ["roots", "extra", "--quiver", "{quiver}"],
])
def test_configuration_errors(capsys, quiver_file, argv):
    argv = [a.replace("{quiver}", str(quiver_file)) for a in argv]
    assert main(argv) == EXIT_CONFIG_ERROR


def test_non_dynkin_quiver(tmp_path):
    path = tmp_path / "cycle.txt"
    path.write_text("vertices: 1 2\narrows: 1->2 2->1\n", encoding="utf-8")
    assert main(["roots", "--quiver", str(path)]) == EXIT_CONFIG_ERROR


def test_interactive_menu(capsys, quiver_file, monkeypatch):
    answers = iter(["9x", str(list(SUITES).index("row-sum") + 1), "0"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    status = main(["--quiver", str(quiver_file), "--max-total-dim", "2"])
    out = capsys.readouterr().out
    assert status == EXIT_OK
    assert "Invalid choice" in out
    assert "row-sum:" in out and "passed" in out


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["plot"])


def test_computational_errors_are_not_configuration_errors(quiver_file, monkeypatch):
    def singular(session):
        return inverse(FpMatrix.zeros(3, 2, 2))

    monkeypatch.setitem(COMMANDS, "labels", singular)
    assert main(["labels", "--quiver", str(quiver_file), "--dim", "1,1"]) == EXIT_VERIFICATION_FAILED


@pytest.fixture
def a3_file(tmp_path):
    path = tmp_path / "A3.txt"
    path.write_text("vertices: 1 2 3\narrows: 1->2 2->3\n", encoding="utf-8")
    return path


def test_preprojective_census_skips_non_transversal_fiber_over_f2(capsys, a3_file, caplog):
    status, out = run(capsys, "preproj-census", "--quiver", a3_file, "--dim", "1,2,1", "--primes", "2,3,5",
                      "--format", "json")
    assert status == EXIT_OK
    entries = json.loads(out)["entries"]
    assert not any(key.startswith("P12+P23|") and key.endswith("|2") for key in entries)
    assert entries["P12+P23|P123+S2|3"] == 2
    assert "skipping P12+P23 over F_2" in caplog.text


def test_verify_three_route_on_a3(capsys, a3_file):
    status, out = run(capsys, "verify", "three-route", "--quiver", a3_file, "--dim", "1,2,1", "--primes", "2,3,5")
    assert status == EXIT_OK
    assert "FAIL" not in out
    assert "characteristic 2" in out
