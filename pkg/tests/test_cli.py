import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from adnil.cli import run

DATA = resources.files("adnil").joinpath("data")


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def structured(*argv):
    code, text = call(*argv, "--structured")
    return code, json.loads(text)


def test_validate_heisenberg():
    code, doc = structured("validate", str(DATA / "heisenberg.lie"))
    assert code == 0 and doc["status"] == "pass"
    assert set(doc) >= {"command", "inputs", "status", "witnesses", "timing"}


def test_identity_check_fails_with_witness():
    code, doc = structured("identity", "check", str(DATA / "heisenberg.lie"), "--expr", "[x1,x2]")
    assert code == 1 and doc["status"] == "fail"
    assert doc["witnesses"] == [["x", "y"]]


def test_zassenhaus_d4():
    code, doc = structured("zassenhaus", str(DATA / "d4.grp"), "-p", "2")
    assert code == 0 and doc["grades"] == [2, 1]


def test_failing_fixtures_exit_1():
    assert call("validate", str(DATA / "bad_jacobi.lie"))[0] == 1
    assert call("validate", str(DATA / "m2_corrupt.jord"))[0] == 1
    assert call("jordan", "verify", str(DATA / "m2_corrupt.jord"))[0] == 1


def test_errors_exit_2(tmp_path):
    assert call("validate", str(tmp_path / "missing.lie"))[0] == 2
    bad = tmp_path / "bad.lie"
    bad.write_text("field p=5\ndim 2\nbasis a b\nbracket a a = b\n")
    code, doc = structured("validate", str(bad))
    assert code == 2 and doc["status"] == "error" and "ParseError" in doc["error"]
    assert call("nonsense")[0] == 2
    assert call()[0] == 2
    assert call("identity", "jacobson")[0] == 2


def test_structured_is_deterministic():
    argv = ("kostrikin", "@filiform5", "--element", "e1", "--structured")
    assert call(*argv) == call(*argv)


def test_timing_only_on_request():
    _, doc = structured("series", "@heisenberg")
    assert doc["timing"] is None and doc["series"] == [3, 1, 0]
    _, doc = structured("series", "@heisenberg", "--timing")
    assert isinstance(doc["timing"], float)


def test_lieset_and_text_output():
    code, text = call("lieset", "@heisenberg", "--gens", "x,y", "--length", "3")
    assert code == 0 and "[x,y] = z" in text


def test_jordan_ops():
    assert call("jordan", "fgg", str(DATA / "sl2_f7.lie"), "--s", "e")[0] == 0
    assert call("jordan", "azd", str(DATA / "nil3.jord"), "--n", "3")[0] == 0
    code, doc = structured("jordan", "pushforward", "@upper4", "--a", "e12+e34", "--b", "e23")
    assert code == 0 and doc["image"] == "e14"
    assert call("jordan", "sym", "@sym2_nil")[0] == 0
    assert call("jordan", "azd", "@m2", "--n", "3")[0] == 2  # precondition fails


def test_identity_ops():
    assert call("identity", "jacobson", "-p", "3")[0] == 0
    assert call("identity", "linearization", "--trials", "10")[0] == 0
    _, doc = structured("identity", "shadow", "--expr", "[[x1,x2],x3]")
    assert doc["shadow"] == "[x1,x2,x3]"
    assert call("identity", "check", "@heisenberg", "--expr", "[x,y,y]")[0] == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "adnil", "validate", str(DATA / "heisenberg.lie")], capture_output=True, text=True)
    assert r.returncode == 0 and "pass" in r.stdout
