import json
import shutil
import subprocess
import sys

import pytest

from oreloc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_eval(capsys):
    assert run(capsys, "eval", "--ring", "klein", "t^-1 * x + 1") == (0, {"value": "1 + x^-1*t^-1"})
    code, out = run(capsys, "eval", "--ring", "Qx;tau=shift", "t*x")
    assert out["value"] == "(x + 1)*t"
    assert run(capsys, "eval", "--ring", "klein", "--", "-x^2") == (0, {"value": "-x^2"})


def test_rank(capsys):
    code, out = run(capsys, "rank", "--ring", "klein", "[[t, x], [x*t, x^2]]")
    assert code == 0 and out["rank"] == 1
    code, out = run(capsys, "rank", "--ring", "mn2", "[[g1, 1], [g1^2, g1]]")
    assert code == 0 and out["rank"] == 1 and out["attempts"] == 1


def test_invert(capsys):
    code, out = run(capsys, "invert", "--ring", "Qx;tau=inv", "[[t, 1], [0, t]]")
    assert code == 0 and out["inverse"] == [["t^-1", "-t^-2"], ["0", "t^-1"]]
    code, out = run(capsys, "invert", "--ring", "z2", "[[t, x], [x*t, x^2]]")
    assert code == 1 and out == {"invertible": False, "rank": 1}
    code, out = run(capsys, "invert", "--ring", "mn1", "--frontier", "3", "1 - g1")
    assert out["inverse"] == "1 + g1 + g1^2 + O(g1^3)"


def test_certify(capsys):
    code, out = run(capsys, "certify", "--ring", "z2", "--witness", "[[t, x], [1, 1]]")
    assert code == 0 and out["verdict"] == "StablyFull" and len(out["witness"]) == 2
    code, out = run(capsys, "certify", "--ring", "klein", "[[t, x], [x*t, x^2]]")
    assert code == 1 and out == {"verdict": "NotStablyFull", "rank": 1}


def test_finite_rank_verbs(capsys):
    code, out = run(capsys, "innerrank", "--ring", "z4", "[[2, 0], [0, 2]]")
    assert code == 0 and out["rho"] == 2
    code, out = run(capsys, "stablerank", "--ring", "gf2", "[[1, 1], [0, 1]]")
    assert code == 0 and (out["rho"], out["rho_star"], out["stabilized_at"]) == (2, 2, 0)
    code, out = run(capsys, "nullity", "--ring", "z4", "[[2]]", "[[2]]")
    assert code == 1 and out["holds"] is False
    code, out = run(capsys, "nullity", "--ring", "gf2", "[[1, 0]]", "[[0], [1]]")
    assert code == 0 and out["holds"] is True


def test_crosscheck(capsys):
    code, out = run(capsys, "crosscheck", "--count", "3", "--seed", "4")
    assert code == 0 and out["checked"] == 3 and out["agree"]
    code, out = run(capsys, "crosscheck", "--ring", "z2", "[[x, t], [x*t, t^2]]")
    assert code == 0 and out["results"][0]["ore_rank"] == 1


def test_input_errors(capsys):
    code, out = run(capsys, "eval", "--ring", "z2", "x +")
    assert code == 2 and out["error"] == "ExprSyntaxError" and out["position"] == 3
    code, out = run(capsys, "eval", "x")
    assert code == 2
    code, out = run(capsys, "rank", "--ring", "z4", "[[1]]")
    assert code == 2
    code, out = run(capsys, "eval", "--ring", "nowhere", "1")
    assert code == 2 and out["error"] == "InputError"
    assert main(["frobnicate"]) == 2
    capsys.readouterr()
    code, out = run(capsys, "crosscheck", "--ring", "klein")
    assert code == 2


def test_resource_errors(capsys):
    code, out = run(capsys, "innerrank", "--ring", "z4", "--budget", "3", "[[2, 1, 0], [0, 2, 1], [1, 0, 2]]")
    assert code == 3 and out["error"] == "SearchBudgetExceeded"
    assert out["lower"] <= out["upper"]
    code, out = run(capsys, "stablerank", "--ring", "z4", "--smax", "0", "[[2]]")
    assert code == 3 and out["error"] == "NotStabilized"


def test_output_is_deterministic(capsys):
    first = run(capsys, "certify", "--ring", "klein", "--witness", "[[x + t, 1], [1, t]]")
    second = run(capsys, "certify", "--ring", "klein", "--witness", "[[x + t, 1], [1, t]]")
    assert first == second


@pytest.mark.skipif(shutil.which("oreloc") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["oreloc", "eval", "--ring", "z4", "3*3"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"value": "1"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "oreloc.cli", "eval", "--ring", "gf3", "2*2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"value": "1"}
