from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from kanweigh.core import opposite, product
from kanweigh.documents import (
    canonical_json,
    category_doc,
    category_from_doc,
    detect_kind,
    load_entity,
    module_doc,
    module_from_doc,
    set_functor_doc,
    set_functor_from_doc,
    weight_doc,
    weight_from_doc,
)
from kanweigh.errors import ValidationError
from kanweigh.fixtures import (
    arrow_category,
    delta1,
    discrete_pair,
    finite_set_presheaf,
    terminal_category,
    walking_idempotent,
)
from kanweigh.promod import functor_modules, hom_module, module_of_presheaf
from kanweigh.core import functor

FIXTURES = Path(__file__).parent.parent / "fixtures"


def run_cli(*args: str):
    proc = subprocess.run(
        [sys.executable, "-m", "kanweigh.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout


def test_category_roundtrip():
    for c in (terminal_category(), arrow_category(), walking_idempotent()):
        assert category_from_doc(category_doc(c)) == c


def test_setfunctor_roundtrip():
    f = finite_set_presheaf(3)
    assert set_functor_from_doc(set_functor_doc(f)) == f


def test_weight_roundtrip():
    w = delta1(discrete_pair(), "colimit")
    back = weight_from_doc(weight_doc(w))
    assert back.variance == "colimit"
    assert back.functor == w.functor


def test_module_roundtrip():
    i, idem = terminal_category(), walking_idempotent()
    t = functor(i, idem, {"*": "x"}, {"id*": "id"})
    low, _ = functor_modules(t)
    back = module_from_doc(module_doc(low))
    assert back.carrier == low.carrier
    assert back.source == low.source and back.target == low.target


def test_opposite_and_product_wrappers():
    two = arrow_category()
    doc = {"opposite_of": category_doc(two)}
    assert category_from_doc(doc) == opposite(two)
    pdoc = {"product_of": [category_doc(two), category_doc(two)]}
    assert category_from_doc(pdoc) == product(two, two).cat


def test_detect_kinds():
    two = arrow_category()
    assert detect_kind(category_doc(two)) == "category"
    assert detect_kind(set_functor_doc(finite_set_presheaf(1))) == "set_functor"
    assert detect_kind(weight_doc(delta1(two, "limit"))) == "weight"
    low, _ = functor_modules(functor(terminal_category(), two, {"*": "a"}, {"id*": "ida"}))
    assert detect_kind(module_doc(low)) == "module"


def test_malformed_document_rejected():
    with pytest.raises(ValidationError):
        load_entity({"objects": ["x"]})
    with pytest.raises(ValidationError):
        load_entity({"nonsense": 1})


def test_cli_validate_ok():
    code, out = run_cli("validate", str(FIXTURES / "idem.json"))
    assert code == 0
    assert json.loads(out)["result"] == {"kind": "category", "valid": True}


def test_cli_validate_rejects_bad_document(tmp_path):
    doc = json.loads((FIXTURES / "idem.json").read_text())
    doc["morphisms"][1]["tgt"] = "nowhere"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run_cli("validate", str(bad))
    assert code == 1
    assert json.loads(out)["result"]["valid"] is False


def test_cli_cauchy_report():
    code, out = run_cli("cauchy", "--category", str(FIXTURES / "idem.json"))
    assert code == 0
    report = json.loads(out)
    assert sorted(report["result"]["hom_sizes"].values(), reverse=True) == [2, 1, 1, 1]


def test_cli_commute_search_counterexample():
    code, out = run_cli(
        "commute",
        "--colimit-weight", str(FIXTURES / "coprod2.json"),
        "--limit-weight", str(FIXTURES / "prod2.json"),
        "--search", "--max-size", "1",
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["counterexample"] is not None
    assert report["stamps"]["bound"] == 1


def test_cli_commute_at_singleton_sizes():
    code, out = run_cli(
        "commute",
        "--colimit-weight", str(FIXTURES / "coprod2.json"),
        "--limit-weight", str(FIXTURES / "prod2.json"),
        "--at", str(FIXTURES / "singleton_bifunctor.json"),
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["lhs_size"] == 2
    assert report["result"]["rhs_size"] == 4
    assert report["result"]["invertible"] is False


def test_cli_resource_cap_exit_code():
    code, out = run_cli(
        "colimit",
        "--weight", str(FIXTURES / "coprod2.json"),
        "--diagram", str(FIXTURES / "pair_2_3.json"),
        "--max-candidates", "2",
    )
    assert code == 2
    assert json.loads(out)["result"]["error"] == "resource_cap"


def test_cli_negative_verdict_is_exit_zero():
    code, out = run_cli("adjoint", "--module", str(FIXTURES / "mod_two_elt.json"))
    assert code == 0
    assert json.loads(out)["result"]["has_right_adjoint"] is False


@pytest.mark.parametrize(
    "args",
    [
        ("cauchy", "--category", str(FIXTURES / "idem.json")),
        ("adjoint", "--module", str(FIXTURES / "mod_t_lower.json")),
        ("flat", "--weight", str(FIXTURES / "repr_idem_colimit.json")),
        (
            "commute",
            "--colimit-weight", str(FIXTURES / "coprod2.json"),
            "--limit-weight", str(FIXTURES / "prod2.json"),
            "--search", "--max-size", "1",
        ),
        (
            "closure",
            "--category", str(FIXTURES / "terminal.json"),
            "--weights", str(FIXTURES / "coprod2.json"),
            "--depth", "2",
        ),
        ("isbell", "--category", str(FIXTURES / "idem.json"), "--check", "--total", "2"),
        ("rlift", str(FIXTURES / "mod_t_lower.json"), str(FIXTURES / "mod_t_lower.json")),
    ],
)
def test_cli_certificates_reverify(tmp_path, args):
    report_path = tmp_path / "report.json"
    code, _ = run_cli(*args, "--out", str(report_path))
    assert code == 0
    code2, out2 = run_cli("validate", str(report_path), "--certificate")
    assert code2 == 0
    verdict = json.loads(out2)["result"]
    assert verdict["all_ok"] is True
    assert verdict["certificates_verified"] >= 1


def test_cli_tampered_certificate_fails(tmp_path):
    report_path = tmp_path / "report.json"
    run_cli("cauchy", "--category", str(FIXTURES / "idem.json"), "--out", str(report_path))
    report = json.loads(report_path.read_text())
    report["certificates"][0]["claim"]["comparison_fully_faithful"] = False
    report_path.write_text(json.dumps(report))
    code, out = run_cli("validate", str(report_path), "--certificate")
    assert code == 0
    assert json.loads(out)["result"]["all_ok"] is False


def test_cli_byte_identical_reports():
    args = ("cauchy", "--category", str(FIXTURES / "idem.json"))
    _, out1 = run_cli(*args)
    _, out2 = run_cli(*args)
    assert out1 == out2


def test_cli_op_flag():
    code, out = run_cli("validate", str(FIXTURES / "arrow.json"), "--op")
    assert code == 0


def test_canonical_json_sorted_keys():
    text = canonical_json({"b": 1, "a": {"d": 2, "c": 3}})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
