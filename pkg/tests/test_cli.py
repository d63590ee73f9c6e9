import json
import re
import subprocess
import sys

import pytest

from cofibred.cli import main

DEGREE_LINE = re.compile(r"\bH\d+\b|total degree \d")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_of_z2_degree_three(capsys):
    code, out, _ = run(capsys, "homology", "@z2-group", "--cap", "4", "--degree", "3")
    assert code == 0
    assert "H3 = Z/2" in out


def test_spectral_converges(capsys):
    code, out, _ = run(capsys, "spectral", "@z2", "--name", "Z/2-on-CIRC",
                       "--field", "F2", "--rmax", "4")
    assert code == 0
    assert "E^2" in out and "E^∞" in out
    assert out.rstrip().endswith("CONVERGED")


def test_verify_codiag3_on_grothendieck_fixture(capsys):
    code, out, _ = run(capsys, "verify", "codiag3", "@diagrams", "--cap", "3")
    assert code == 0
    assert out.startswith("PASS codiag3")
    assert "sizes [3, 6, 10, 15]" in out


def test_every_degree_line_states_guarantee(capsys):
    outputs = [
        run(capsys, "homology", "@z2-group", "--cap", "4")[1],
        run(capsys, "homology", "@loop3", "--name", "bad", "--cap", "3")[1],
        run(capsys, "coeff-homology", "@circ", "--name", "CIRCx[1]->[1]",
            "--fiber-degree", "1", "--cap", "3")[1],
        run(capsys, "spectral", "@circ", "--name", "CIRCx[1]->[1]", "--field", "Q")[1],
        run(capsys, "homology", "@stair", "--name", "STAIR", "--cap", "3", "--degree", "4")[1],
    ]
    seen = 0
    for out in outputs:
        for line in out.splitlines():
            if DEGREE_LINE.search(line):
                seen += 1
                assert "guaranteed: degrees <=" in line, line
    assert seen > 10


def test_counterexample_through_cli(capsys):
    code, out, _ = run(capsys, "homology", "@loop3", "--name", "bad", "--cap", "3", "--degree", "1")
    assert code == 0
    sections = out.split("\n")
    h1 = [l.strip() for l in sections if l.strip().startswith("H1")]
    assert h1[0].startswith("H1 = 0") and h1[1].startswith("H1 = 0")
    assert h1[2].startswith("H1 = Z ")


def test_degree_above_guarantee(capsys):
    code, out, _ = run(capsys, "homology", "@stair", "--name", "STAIR", "--cap", "3", "--degree", "3")
    assert code == 0 and "not reported" in out
    code, _, err = run(capsys, "homology", "@stair", "--name", "STAIR", "--cap", "3",
                       "--degree", "3", "--strict-degrees")
    assert code == 2 and "ValidationError" in err
    code, out, _ = run(capsys, "homology", "@stair", "--name", "STAIR", "--cap", "3",
                       "--degree", "3", "--unguaranteed")
    assert code == 0 and "NOT guaranteed" in out


def test_structured_output_is_json(capsys):
    code, out, _ = run(capsys, "homology", "@z2-group", "--cap", "4", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "homology" and doc["status"] == 0
    assert list(doc) == sorted(doc)


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", "@stair")[0] == 0
    assert run(capsys, "nerve", "@missing-fixture")[0] == 2
    bad = tmp_path / "bad.cat"
    bad.write_text("category C\n  object a\n  arrow f : a -> b\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert f"{bad}:3:" in err and "UnknownName" in err
    assert run(capsys, "verify", "no-such-battery")[0] == 2
    assert run(capsys, "homology", "@z2-group", "--coeff", "F4")[0] == 2


def test_structured_error_document(capsys, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text("category C\n  object\n")
    code, out, err = run(capsys, "check", str(bad), "--format", "structured")
    assert code == 2
    doc = json.loads(out)
    assert doc["error"]["kind"] == "SyntaxError"
    assert doc["error"]["line"] == 2


def test_failed_verification_exits_one(capsys, monkeypatch):
    from cofibred import verify as V

    def broken(ctx, cap):
        return V.CheckResult("broken", False, ["forced failure"])

    monkeypatch.setitem(V.BATTERIES, "broken", (broken, 3))
    code, out, _ = run(capsys, "verify", "broken", "s-sigma")
    assert code == 1
    assert "FAIL broken" in out and "PASS s-sigma" in out
    assert out.index("FAIL broken") < out.index("PASS s-sigma")


def test_reports_are_byte_identical():
    argv = [sys.executable, "-m", "cofibred.cli", "spectral", "@z2", "--name", "Z/2-on-CIRC",
            "--field", "F2", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


@pytest.mark.parametrize("command", ["check", "nerve", "fibred-nerve", "cleaved-nerve"])
def test_commands_run_on_fixtures(capsys, command):
    name = {"check": [], "nerve": ["--name", "CIRC"], "fibred-nerve": ["--name", "CIRCx[1]->[1]"],
            "cleaved-nerve": ["--name", "CIRCx[1]->[1]"]}[command]
    code, out, _ = run(capsys, command, "@circ", *name, "--cap", "2")
    assert code == 0 and out
