import json
from pathlib import Path

import numpy as np
import pytest

from logoswb.cli import main
from logoswb.document import dumps_document, make_document
from logoswb.graph import build_commutation_graph
from logoswb.psa import evaluate_psa, informationally_complete_family
from logoswb.randomstates import random_density

FIXTURES = Path(__file__).parents[1] / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
TWO = str(FIXTURES / "two_basis_dim2.json")
MIXED = str(FIXTURES / "mixed_dim2.json")
PURE = str(FIXTURES / "pure_qubit.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="doc.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else dumps_document(doc))
        return str(path)

    return _write


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--input", TWO)
    assert code == 0 and "FAIL" not in out


def test_validate_reports_failures(capsys, write):
    doc = make_document(2, rho=np.eye(2), projectors=[("a", np.diag([0.5, 0.5]))])
    code, out, _ = run(capsys, "validate", "--input", write(doc))
    assert code == 1
    assert "FAIL  rho" in out and "FAIL  projector a" in out


def test_validate_noncommuting_context(capsys, write, two_bases):
    doc = make_document(2, projectors=two_bases, contexts=[["P0", "Pp"]])
    code, out, _ = run(capsys, "validate", "--input", write(doc))
    assert code == 1 and "FAIL  context 0" in out


def test_psa(capsys):
    d = run_json(capsys, "psa", "--input", TWO)
    assert d["rows"] == [["P0", 1.0], ["P1", 0.0], ["Pp", pytest.approx(0.5)], ["Pm", pytest.approx(0.5)]]


def test_perspectives_pure_state(capsys):
    d = run_json(capsys, "perspectives", "--input", PURE)
    own = d["perspectives"][1]
    assert own["ids"] == ["v", "w"]
    assert own["potentia"] == pytest.approx([1.0, 0.0], abs=1e-12)
    comp = d["perspectives"][0]
    assert comp["potentia"] == pytest.approx([0.36, 0.64], abs=1e-12)
    assert [c[0] for c in comp["coefficients"]] == pytest.approx([0.6, 0.8], abs=1e-12)


def test_perspectives_mixed_has_no_coefficients(capsys):
    d = run_json(capsys, "perspectives", "--input", MIXED)
    assert all("coefficients" not in p for p in d["perspectives"])


def test_purity(capsys):
    d = run_json(capsys, "purity", "--input", MIXED)
    assert d["trace_purity"] == pytest.approx(0.5, abs=1e-12)
    assert d["rank"] == 2 and d["is_pure"] is False
    assert run_json(capsys, "purity", "--input", PURE)["is_pure"] is True


def test_reconstruct_from_rho(capsys, write, rng):
    rho = random_density(3, rng)
    d = run_json(capsys, "reconstruct", "--input", write(make_document(3, rho=rho.matrix)))
    got = np.array([[complex(*z) for z in row] for row in d["rho"]])
    assert np.linalg.norm(got - rho.matrix) < 1e-8


def test_reconstruct_from_psa_file(capsys, write, tmp_path, rng):
    rho = random_density(2, rng)
    family = informationally_complete_family(2)
    psa = evaluate_psa(rho, build_commutation_graph(family))
    table = tmp_path / "psa.json"
    table.write_text(json.dumps({i: p for i, p in psa.rows()}))
    d = run_json(capsys, "reconstruct", "--input", write(make_document(2)), "--psa", str(table))
    got = np.array([[complex(*z) for z in row] for row in d["rho"]])
    assert np.linalg.norm(got - rho.matrix) < 1e-8


def test_reconstruct_not_ic_is_computation_error(capsys):
    code, _, err = run(capsys, "reconstruct", "--input", MIXED)
    assert code == 2 and "NotInformationallyComplete" in err


def test_reconstruct_needs_source(capsys, write):
    code, _, _ = run(capsys, "reconstruct", "--input", write(make_document(2)))
    assert code == 3


def test_contexts(capsys):
    assert run_json(capsys, "contexts", "--input", TWO)["contexts"] == [["P0", "P1"], ["Pm", "Pp"]]


def test_ks_fixture(capsys):
    d = run_json(capsys, "ks", "--fixture", "ks18")
    assert d["exists"] is False and d["explored"] > 0


def test_ks_document(capsys):
    d = run_json(capsys, "ks", "--input", MIXED)
    assert d["exists"] is True
    assert d["intensive"]["passed"] is True
    assert d["intensive"]["sums"] == pytest.approx([1.0, 1.0], abs=1e-9)


def test_ks_needs_contexts(capsys, write, two_bases):
    code, _, _ = run(capsys, "ks", "--input", write(make_document(2, projectors=two_bases)))
    assert code == 3


def test_dasein(capsys):
    d = run_json(capsys, "dasein", "--input", MIXED, "--projector", "P0")
    assert d["born_recovery"]["minimum"] == pytest.approx(0.5, abs=1e-9)
    assert d["born_recovery"]["attained_at"] == "P0+P1"
    assert [c["label"] for c in d["contexts"]] == ["P0+P1", "Pp+Pm", "trivial"]


def test_dasein_close(capsys):
    d = run_json(capsys, "dasein", "--input", MIXED, "--projector", "Pp", "--close")
    assert d["born_recovery"]["attained_at"] == "Pp+Pm"


def test_dasein_usage(capsys):
    assert run(capsys, "dasein", "--input", MIXED)[0] == 3
    assert run(capsys, "dasein", "--input", MIXED, "--projector", "nope")[0] == 3


def test_sample_deterministic(capsys):
    a = run_json(capsys, "sample", "--input", MIXED, "--shots", "500", "--seed", "9")
    b = run_json(capsys, "sample", "--input", MIXED, "--shots", "500", "--seed", "9")
    assert a == b and sum(a["counts"].values()) == 500
    assert a["estimate"]["low_statistics"] is False


def test_sample_low_statistics_warning(capsys):
    code, out, _ = run(capsys, "sample", "--input", MIXED, "--shots", "1", "--context", "1")
    assert code == 0 and "warning" in out


def test_sample_bad_context(capsys):
    assert run(capsys, "sample", "--input", MIXED, "--context", "5")[0] == 3


def test_dot_golden(capsys):
    code, out, _ = run(capsys, "dot", "--input", TWO, "--highlight", "P0,P1")
    assert code == 0
    assert out.encode() == (GOLDEN / "two_basis_dim2.dot").read_bytes()


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.dot"
    code, out, _ = run(capsys, "dot", "--input", TWO, "--highlight", "P0,P1", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes() == (GOLDEN / "two_basis_dim2.dot").read_bytes()


def test_tol_flag_changes_acceptance(capsys, write):
    rho = np.diag([0.5, 0.5 + 1e-6])
    path = write(make_document(2, rho=rho))
    assert run(capsys, "purity", "--input", path)[0] == 1
    assert run(capsys, "purity", "--input", path, "--tol", "1e-5")[0] == 0


def test_invalid_state_is_exit_one(capsys, write):
    code, _, err = run(capsys, "psa", "--input", write(make_document(2, rho=np.eye(2))))
    assert code == 1 and "TraceNotOne" in err


def test_malformed_json_is_exit_one(capsys, write):
    assert run(capsys, "psa", "--input", write("{not json"))[0] == 1


def test_missing_input_is_usage_error(capsys, tmp_path):
    assert run(capsys, "psa")[0] == 3
    assert run(capsys, "psa", "--input", str(tmp_path / "absent.json"))[0] == 3


def test_argparse_errors_exit_three(capsys):
    for argv in (["bogus"], [], ["sample", "--shots", "many"], ["psa", "--format", "xml"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 3
