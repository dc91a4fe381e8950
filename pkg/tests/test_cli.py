import json

import pytest

from quadtmf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_form_analyze_e8(capsys):
    code, out, _ = run(capsys, "form", "analyze", "--builtin", "E8")
    assert code == 0
    sig = json.loads(out)["signature"]
    assert (sig["b_plus"], sig["b_minus"], sig["b_zero"], sig["parity"], sig["det"]) == (8, 0, 0, "even", "1")


def test_edge_image(capsys):
    code, out, _ = run(capsys, "theta", "edge-image", "--builtin", "E8", "-N", "10")
    assert code == 0
    data = json.loads(out)
    assert data["conjectural"] is True and data["lowest"] == -1 and data["coeffs"][:2] == ["1", "264"]


def test_z4_cp2(capsys):
    code, out, _ = run(capsys, "manifold", "z4", "--gram", "[[1]]")
    data = json.loads(out)
    assert code == 0 and (data["degree"], data["element"], data["sign_ambiguous"]) == (3, "nu", True)


def test_z3_and_reverse_builtins(capsys):
    code, out, _ = run(capsys, "manifold", "z3", "--builtin", "S2xS1")
    assert code == 0 and json.loads(out)["text"] == "TMF + TMF[-1]"
    code, out, _ = run(capsys, "manifold", "reverse", "--builtin", "L2")
    assert code == 0


def test_text_output(capsys):
    code, out, _ = run(capsys, "tmf", "mul", "eta", "eta", "--text")
    assert code == 0 and "eta^2" in out


def test_domain_error_exit_1(capsys):
    code, _, err = run(capsys, "manifold", "z4", "--gram", "[[2]]")
    assert code == 1
    assert json.loads(err)["error"] == "NotUnimodular"


@pytest.mark.parametrize("argv", [
    ["form", "analyze", "--gram", "[[1, 2"],
    ["theta", "series", "--builtin", "E8", "-N", "0"],
    ["nosuch"],
    ["form", "analyze"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_schema_violation(tmp_path, capsys):
    path = tmp_path / "moves.json"
    path.write_text(json.dumps({"link": {"framings": [0]}, "moves": [{"twist": 1}]}))
    code, _, _ = run(capsys, "kirby", "apply", "--input", str(path))
    assert code == 2


def test_kirby_random_deterministic(capsys):
    first = run(capsys, "kirby", "random", "--seed", "11", "--sequences", "5")
    second = run(capsys, "kirby", "random", "--seed", "11", "--sequences", "5")
    assert first == second and first[0] == 0


def test_jacobi_check(capsys):
    code, out, _ = run(capsys, "jacobi", "check", "--form", "A1", "--element", "T", "--samples", "3")
    assert code == 0 and json.loads(out)["ok"] is True


def test_cobordism_files(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"V0": [], "V1": [[1]], "inclusion": [[]]}))
    code, out, _ = run(capsys, "cobordism", "degree", "--data", str(path))
    assert code == 0 and json.loads(out)["degree"] == 3


def test_table_validate(capsys):
    code, out, _ = run(capsys, "tmf", "validate")
    assert code == 0
