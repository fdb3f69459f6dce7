import io
import json
import subprocess
import sys

from fractions import Fraction

import jsonschema
import pytest

from mldo.cli import JSON_SCHEMA, build_series, load_settings, main
from mldo.modform import E2, E4, E6
from mldo.operators import format_operator
from mldo.parsing import parse_operator
from mldo.qseries import eta_variant


def run(*argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err, environ=environ if environ is not None else {})
    return code, out.getvalue().strip(), err.getvalue().strip()


def test_annihilate_e2():
    code, out, _ = run("annihilate", "--weight", "1", "--order", "3", "E2")
    assert code == 0
    assert out == "D^3 - (23/144)*E4*D - (1/216)*E6"


def test_charpoly_phi2():
    code, out, _ = run("charpoly", "--weight", "0", "phi(2)")
    assert code == 0
    assert out == "(λ - 1/12)(λ + 1/24)(λ - 11/24)"


def test_verify_exit_zero():
    code, out, _ = run("verify", "--terms", "10")
    assert code == 0
    assert out.splitlines()[-1].endswith("passed")


def test_expand_normal_form():
    assert run("expand", "D*E4 - E4*D")[1] == "-(1/3)*E6"
    assert run("expand", "D*E4")[1] == "E4*D - (1/3)*E6"


def test_apply_vanishes():
    code, out, _ = run("apply", "phi(2)", "--weight", "1", "--series", "eta2z^2")
    assert code == 0 and out == "O(q^(10))"


def test_divide_and_quo():
    code, out, _ = run("divide", "D^2", "E4*D")
    assert code == 0
    assert "multiplier: E4^2" in out and "quotient: E4*D + (1/3)*E6" in out
    assert run("quo", "D^3 - (1/6)*E4*D", "D^2 - (1/6)*E4", "--side", "left")[1] == "D"


def test_mapspace_example():
    code, out, _ = run("mapspace", "phi(2)", "D^2 + (1/144)*E4", "--weight", "0")
    assert code == 0
    assert out.splitlines()[0] == "c: D^3 - (167/576)*E4*D + (9/256)*E6"


SUBCOMMANDS = [
    ["expand", "D^2 - (1/6)*E4"],
    ["expand", "--series", "thetaD:3:s", "-T", "4"],
    ["expand", "--qexp", "E4", "-T", "4"],
    ["apply", "dn(3)", "--weight", "3/2", "--series", "thetaD:3:t"],
    ["divide", "D^2", "E4*D"],
    ["quo", "(D + E4)*(D^2 - E6)", "D^2 - E6"],
    ["gcrd", "kz(4)", "D*kz(4)"],
    ["lclm", "D", "E4"],
    ["orepair", "E4", "D"],
    ["charpoly", "phi(2)", "--weight", "0"],
    ["construct", "--weight", "0", "--roots", "1/12,-1/24,11/24"],
    ["mapspace", "phi(6)", "D^2 - (1/48)*E4", "--weight", "0"],
    ["annihilate", "E4", "--weight", "4", "--order", "2"],
    ["mord", "E4^2", "--weight", "8"],
    ["dwt", "E2"],
    ["frobenius", "kz(4)", "--weight", "4", "-T", "3"],
    ["mason", "--weight", "3/2", "--series", "thetaD:3:0", "--series", "thetaD:3:s",
     "--series", "thetaD:3:t", "-T", "12"],
    ["symprod", "kz(4)", "kz(6)", "--weight", "4", "--weight2", "6"],
    ["verify", "-T", "6"],
]


@pytest.mark.parametrize("argv", SUBCOMMANDS, ids=lambda a: " ".join(a[:2]))
def test_json_output_validates(argv):
    code, out, _ = run(*argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, JSON_SCHEMA)
    assert doc["command"] == argv[0]
    assert doc["status"] == "ok", doc
    assert code == 0


def test_json_error_validates():
    code, out, _ = run("quo", "D", "E4*D^2", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, JSON_SCHEMA)
    assert code == 1 and doc["status"] == "error"
    assert doc["result"]["error"] == "NotDivisible"


@pytest.mark.parametrize("argv", [
    ["gcrd", "kz(4)", "D*kz(4)"],
    ["symprod", "kz(4)", "kz(6)", "--weight", "4", "--weight2", "6"],
    ["orepair", "E4", "D"],
    ["divide", "D^2", "E4*D"],
    ["construct", "--weight", "0", "--roots", "1/12,-1/24,11/24"],
])
def test_printed_operators_parse_back(argv):
    _, out, _ = run(*argv, "--json")
    result = json.loads(out)["result"]
    for key, value in result.items():
        if isinstance(value, str) and value and value[0] in "D(-E0123456789" and "λ" not in value:
            x = parse_operator(value)
            assert format_operator(x) == value


def test_exit_codes():
    assert run("charpoly", "D")[0] == 2                      # missing --weight
    assert run("expand", "E4 +")[0] == 2                     # malformed expression
    assert run("charpoly", "D", "--weight", "x")[0] == 2     # bad rational
    assert run("quo", "D", "E4*D^2")[0] == 1                 # computation error
    assert run("mapspace", "phi(2)", "phi(2)", "--weight", "0")[0] == 1
    assert run("nosuchcommand")[0] == 2


def test_error_message_is_typed():
    code, _, err = run("quo", "D", "E4*D^2")
    assert err.startswith("NotDivisible:")
    code, _, err = run("expand", "E4 + * D")
    assert "column 5" in err


# --- configuration ------------------------------------------------------------

def test_settings_precedence(tmp_path):
    cfg = tmp_path / "mldo.conf"
    cfg.write_text("# defaults\nterms = 7\ngrid=96\n")
    s = load_settings(str(cfg), {})
    assert s["terms"] == 7 and s["grid"] == 96 and s["guard"] == 5
    s = load_settings(None, {"MLDO_CONFIG": str(cfg), "MLDO_TERMS": "4"})
    assert s["terms"] == 4 and s["grid"] == 96
    code, out, _ = run("expand", "--qexp", "E4", environ={"MLDO_TERMS": "3"})
    assert out.endswith("O(q^(3))")
    code, out, _ = run("expand", "--qexp", "E4", "-T", "2", environ={"MLDO_TERMS": "3"})
    assert out.endswith("O(q^(2))")


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("terms: 7\n")
    assert run("dwt", "E2", "--config", str(cfg))[0] == 2
    cfg.write_text("colour = 7\n")
    assert run("dwt", "E2", "--config", str(cfg))[0] == 2
    assert run("dwt", "E2", environ={"MLDO_TERMS": "-1"})[0] == 2


def test_cyclotomic_order_limits_phases():
    code, _, err = run("expand", "--series", "--keep-phase", "etahalfshift^1",
                       environ={"MLDO_CYCLOTOMIC_ORDER": "24"})
    assert code == 2 and "cyclotomic order" in err
    assert run("expand", "--series", "--keep-phase", "etahalfshift^1")[0] == 0


# --- series specs ---------------------------------------------------------------

def test_series_specs():
    assert build_series("eta2z^8", 6) == eta_variant("eta2z", 8, 6)
    assert build_series("eta^(1/2)", 4) == eta_variant("eta", Fraction(1, 2), 4)
    assert build_series("E4*E6", 5).agrees_with((E4 * E6).qexp(5), 5)
    assert build_series("E4^2 - 3*E6*E2", 4).agrees_with((E4 * E4 - (E6 * E2).scale(3)).qexp(4), 4)


def test_bad_series_specs():
    assert run("apply", "D", "--weight", "0", "--series", "thetaD:3:x")[0] == 2
    assert run("apply", "D", "--weight", "0", "--series", "eta^q")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mldo", "dwt", "E2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
