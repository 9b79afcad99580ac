import json

import pytest

from mvmt import loads_structure, make_lukasiewicz, save_structure
from mvmt.cli import main

from support import build


@pytest.fixture()
def two_point_file(tmp_path):
    s = build(
        make_lukasiewicz(3),
        ("a", "b"),
        preds={"P": (1, 0, {("a",): 2, ("b",): 1}), "Q": (1, 0, {("a",): 2})},
    )
    path = tmp_path / "m.json"
    save_structure(s, path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval(capsys, two_point_file):
    code, out, _ = run(capsys, "eval", "--structure", two_point_file, "--formula", "E x . P(x)")
    assert code == 0
    assert out == "value 2 (2/2)\n"


def test_eval_with_assignment_and_json(capsys, two_point_file):
    code, out, _ = run(
        capsys,
        "eval",
        "--structure",
        two_point_file,
        "--formula",
        "P(x)",
        "--assign",
        "x=b",
        "--json",
    )
    assert code == 0
    assert json.loads(out) == {"value": 1, "label": "1/2"}


def test_solve(capsys, two_point_file):
    code, out, _ = run(
        capsys, "solve", "--structure", two_point_file, "--formula", "E x . P(x) & Q(x)", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 2 and data["witness"] == {"x": "a"} and data["decided_top"]


def test_classify_without_structure(capsys):
    code, out, _ = run(capsys, "classify", "--formula", "E x . P(x) \\/ Q(x)")
    assert code == 0
    assert out == "tags existential_positive sentence\nfree -\n"


def test_normalize_pp_and_ep(capsys):
    code, out, _ = run(capsys, "normalize", "--formula", "E x . P(x) & (Q(x) /\\ R(x))")
    assert code == 0
    assert out == "E x . P(x) & Q(x) /\\ P(x) & R(x)\n"
    code, out, _ = run(capsys, "normalize", "--formula", "E x . P(x) \\/ Q(x)", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["formulas"] == ["E x . P(x)", "E x . Q(x)"]
    # machine output feeds back through the parser
    from mvmt import infer_formula

    for text in data["formulas"]:
        infer_formula(text)


def test_normalize_rejects_other_fragments(capsys):
    code, _, err = run(capsys, "normalize", "--formula", "P(x) -> Q(x)")
    assert code == 1
    assert "error" in err


def test_hom_listing_deterministic(capsys, two_point_file):
    code, out, _ = run(
        capsys, "hom", "--from", two_point_file, "--to", two_point_file, "--all"
    )
    assert code == 0
    assert out == "a->a,b->a\na->a,b->b\n"
    code2, out2, _ = run(
        capsys, "hom", "--from", two_point_file, "--to", two_point_file, "--all", "--json"
    )
    assert code2 == 0
    data = json.loads(out2)
    assert data["homomorphisms"] == [{"map": {"a": "a", "b": "a"}}, {"map": {"a": "a", "b": "b"}}]


def test_product_emits_loadable_structure(capsys, two_point_file, tmp_path):
    code, out, _ = run(capsys, "product", two_point_file, two_point_file)
    assert code == 0
    prod = loads_structure(out)
    assert prod.domain == ("(a|a)", "(a|b)", "(b|a)", "(b|b)")
    out_path = tmp_path / "p.json"
    code, _, _ = run(
        capsys,
        "product",
        two_point_file,
        two_point_file,
        "--weak",
        "scrambled",
        "--seed",
        "4",
        "--out",
        str(out_path),
    )
    assert code == 0
    scrambled = loads_structure(out_path.read_text())
    top = scrambled.chain.top
    assert {k for k, v in scrambled.predicates["P"].entries.items() if v == top} == {
        k for k, v in prod.predicates["P"].entries.items() if v == top
    }


def test_diagram(capsys, two_point_file):
    code, out, _ = run(capsys, "diagram", "--structure", two_point_file)
    assert code == 0
    lines = out.splitlines()
    assert "P(c_a)" in lines and "Q(c_a)" in lines and "c_b = c_b" in lines
    assert "P(c_b)" not in lines


def test_check_pass_and_report(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        "check",
        "--suite",
        "hom",
        "--trials",
        "120",
        "--seed",
        "5",
        "--report",
        str(report),
    )
    assert code == 0
    assert "verdict pass" in out
    data = json.loads(report.read_text())
    assert data["suite"] == "hom" and data["verdict"] == "pass"


def test_check_violation_exit_code(capsys):
    code, out, _ = run(
        capsys,
        "check",
        "--suite",
        "ep",
        "--seed",
        "42",
        "--trials",
        "130",
        "--allow-implication",
    )
    assert code == 2
    assert "verdict fail" in out


def test_check_inconclusive_exit_code(capsys, tmp_path):
    axioms = tmp_path / "axioms.txt"
    axioms.write_text("0\n")
    code, out, _ = run(
        capsys,
        "check",
        "--suite",
        "closure",
        "--trials",
        "40",
        "--axioms",
        str(axioms),
    )
    assert code == 3
    assert "verdict inconclusive" in out


def test_check_closure_default_axioms(capsys):
    code, out, _ = run(capsys, "check", "--suite", "closure", "--trials", "60")
    assert code == 0
    assert "verdict pass" in out


def test_check_product_and_ep_suites(capsys):
    code, out, _ = run(
        capsys, "check", "--suite", "product", "--trials", "60", "--max-domain", "2"
    )
    assert code == 0 and "suite product" in out
    code, out, _ = run(capsys, "check", "--suite", "ep", "--trials", "80", "--seed", "5")
    assert code == 0 and "suite ep" in out


def test_solve_ep_sentence_reports_disjunct(capsys, two_point_file):
    code, out, _ = run(
        capsys,
        "solve",
        "--structure",
        two_point_file,
        "--formula",
        "E x . P(x) \\/ Q(x)",
        "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 2 and data["disjunct"] == 0


def test_usage_errors(capsys, two_point_file):
    code, _, err = run(capsys, "eval", "--structure", two_point_file, "--formula", "P(x, y)")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "eval", "--structure", two_point_file, "--formula", "E x . P(x")
    assert code == 1
    code, _, err = run(capsys, "solve", "--structure", two_point_file, "--formula", "A x . P(x)")
    assert code == 1
    code, _, err = run(capsys, "nonsense")
    assert code == 1


def test_input_file_errors(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--structure", "/definitely/missing.json", "--formula", "1")
    assert code == 4
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    code, _, err = run(capsys, "eval", "--structure", str(bad), "--formula", "1")
    assert code == 4


def test_byte_determinism(capsys, two_point_file):
    args = ("solve", "--structure", two_point_file, "--formula", "E x . P(x)", "--json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_eval_unbound_variable(capsys, two_point_file):
    code, _, err = run(capsys, "eval", "--structure", two_point_file, "--formula", "P(x)")
    assert code == 1 and "unbound" in err
