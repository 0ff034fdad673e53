"""Exit-code contract, report determinism, and round trips through the CLI."""

import json

import numpy as np
import pytest

from liftlab import jsonio
from liftlab.cli import main
from liftlab.verify import swap_similarity_operator


def _write_matrix(path, m):
    path.write_text(jsonio.dumps(jsonio.matrix_to_obj(np.asarray(m, dtype=complex))))


@pytest.fixture
def swap_files(tmp_path):
    t_path = tmp_path / "ex35_T.json"
    a_path = tmp_path / "diag14.json"
    _write_matrix(t_path, swap_similarity_operator(1))
    _write_matrix(a_path, np.diag([1.0, 4.0]))
    return t_path, a_path


def test_lift_natural_hypotheses_exit_3(swap_files, capsys):
    t_path, a_path = swap_files
    code = main(["lift", "natural", "--input", str(t_path), "--cert", str(a_path)])
    assert code == 3
    err = capsys.readouterr().err
    assert "R((A-T*T)" in err  # names the failing range-equality clause


def test_lift_quasicontraction_exit_0(tmp_path):
    t_path = tmp_path / "nilpotent2.json"
    _write_matrix(t_path, [[0.0, 2.0], [0.0, 0.0]])
    out = tmp_path / "q.json"
    code = main(
        ["lift", "quasicontraction", "--input", str(t_path), "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["report"]["overall"] == "PASS"
    assert payload["operator"]["kind"] == "QUASICONTRACTION_25"


def test_lift_natural_trivial_exit_0(tmp_path):
    t_path = tmp_path / "zero.json"
    a_path = tmp_path / "eye.json"
    _write_matrix(t_path, np.zeros((2, 2)))
    _write_matrix(a_path, np.eye(2))
    code = main(
        ["lift", "natural", "--input", str(t_path), "--cert", str(a_path),
         "--out", str(tmp_path / "s.json")]
    )
    assert code == 0


def test_lift_then_verify_reproduces_verdicts(tmp_path):
    t_path = tmp_path / "t.json"
    _write_matrix(t_path, 0.5 * np.eye(3))
    out = tmp_path / "s.json"
    assert main(["lift", "natural", "--input", str(t_path), "--out", str(out)]) == 0
    lifted = json.loads(out.read_text())
    ver_out = tmp_path / "v.json"
    code = main(
        ["verify", str(out), "--use-embedded-config", "--out", str(ver_out)]
    )
    assert code == 0
    verified = json.loads(ver_out.read_text())
    assert verified["report"] == lifted["report"]


def test_verify_flags_tampered_operator(tmp_path):
    t_path = tmp_path / "t.json"
    _write_matrix(t_path, 0.5 * np.eye(2))
    out = tmp_path / "s.json"
    assert main(["lift", "natural", "--input", str(t_path), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    # perturb the coupling block X0 by 1e-3
    payload["operator"]["blocks"]["X0"]["data"][0][0] += 1e-3
    payload["operator"]["action"]["CT0"]["data"][0][0] += 1e-3
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(payload))
    code = main(["verify", str(tampered), "--use-embedded-config"])
    assert code == 1


def test_input_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 1, "cols": 1, "data": [[1.0]]}')
    assert main(["lift", "natural", "--input", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert main(["spectral", "--input", str(missing)]) == 2


def test_example_ex35_refutes_everything(tmp_path, capsys):
    out = tmp_path / "ex35.json"
    code = main(
        ["example", "ex35", "--dim-half", "1", "--samples", "100", "--seed", "7",
         "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["report"]["meta"]["refuted"] == 100
    err = capsys.readouterr().err
    assert "100/100" in err


def test_example_cor28_reports_certificate(tmp_path):
    out = tmp_path / "cor28.json"
    code = main(["example", "cor28", "--dim", "4", "--seed", "3", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["trichotomy"]["verdict"] == "LT_ONE"
    assert payload["certificate"]["rows"] == 4
    names = [c["name"] for c in payload["conditions"]["checks"]]
    assert "psd_tt" in names and "range_equality" in names


def test_example_thm37_pipeline(tmp_path):
    out = tmp_path / "thm37.json"
    code = main(
        ["example", "thm37", "--a", "2", "--m", "1", "--seed", "3", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["report"]["overall"] == "PASS"
    assert payload["null_space_alignment"]["overall"] == "PASS"


def test_spectral_exit_codes(tmp_path):
    ok = tmp_path / "half.json"
    _write_matrix(ok, 0.5 * np.eye(2))
    assert main(["spectral", "--input", str(ok)]) == 0
    swap = tmp_path / "swap.json"
    _write_matrix(swap, swap_similarity_operator(1))
    assert main(["spectral", "--input", str(swap), "--max-terms", "50"]) == 3


def test_search_cli(tmp_path):
    out = tmp_path / "search.json"
    code = main(
        ["search", "--class", "quasicontraction", "--dims", "2,4", "--trials", "10",
         "--seed", "1", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["outcome"]["trials"] == 10
    assert payload["outcome"]["violations"] == []
    assert main(["search", "--class", "bogus", "--trials", "1", "--seed", "1"]) == 1


def test_reports_are_byte_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code = main(
            ["example", "ex35", "--dim-half", "2", "--samples", "20", "--seed", "5",
             "--out", str(path)]
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()

    t_path = tmp_path / "t.json"
    _write_matrix(t_path, 0.5 * np.eye(2))
    s1 = tmp_path / "s1.json"
    s2 = tmp_path / "s2.json"
    for path in (s1, s2):
        assert main(
            ["lift", "natural", "--input", str(t_path), "--seed", "11",
             "--out", str(path)]
        ) == 0
    assert s1.read_bytes() == s2.read_bytes()
