"""Command-line front end.

Every subcommand prints a plain-text result, or with ``--json`` a single
object ``{"command", "inputs", "result", "status"}``. Exit codes: 0 on
success, 1 on a computation error, 2 on a usage error (bad flags or a
malformed expression).

Defaults come from, in increasing priority: built-in values, a key=value
config file (``--config`` or ``$MLDO_CONFIG``), the environment variables
``MLDO_TERMS``, ``MLDO_GRID``, ``MLDO_CYCLOTOMIC_ORDER``, ``MLDO_GUARD``,
``MLDO_CAP``, and finally explicit flags.
"""

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import annihilate as ann
from . import families, merore, spectra
from .errors import MldoError, ParseError
from .merore import MerMldo
from .modform import Form, format_form
from .operators import Mldo, divide_general_left, divide_general_right, divide_monic_left
from .operators import divide_monic_right, exact_div, format_operator
from .parsing import parse, parse_form, parse_operator, parse_rational
from .qseries import COSETS, apply_mldo, eisenstein, eta_variant, format_series, theta_dn
from .scalar import Cyc

DEFAULTS = {"terms": 10, "grid": 48, "cyclotomic_order": 48, "guard": 5, "cap": 10}

JSON_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "result", "status"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "result": {},
        "status": {"enum": ["ok", "error"]},
    },
}

_ETA_NAMES = ("eta", "eta2z", "etahalf", "etahalfshift", "eta3z", "etathird",
              "etathirdshift1", "etathirdshift2")
_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?$")


class UsageError(Exception):
    pass


# --- configuration ----------------------------------------------------------

def _positive_int(key, value):
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be an integer, got {value!r}") from None
    if n < 1:
        raise UsageError(f"{key} must be positive, got {n}")
    return n


def read_config(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _positive_int(key, value)
    return out


def load_settings(config_path=None, environ=None):
    environ = os.environ if environ is None else environ
    settings = dict(DEFAULTS)
    path = config_path or environ.get("MLDO_CONFIG")
    if path:
        try:
            settings.update(read_config(path))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for key in DEFAULTS:
        env = environ.get("MLDO_" + key.upper())
        if env is not None:
            settings[key] = _positive_int("MLDO_" + key.upper(), env)
    return settings


# --- builtin series ---------------------------------------------------------

def _factor_series(name, power, T, grid, strip_phase):
    if name in _ETA_NAMES:
        return eta_variant(name, power, T, grid=grid, strip_phase=strip_phase)
    if power != 1:
        base = _factor_series(name, Fraction(1), T, grid, strip_phase)
        if power.denominator != 1 or power < 0:
            from .qseries import pow_rational

            return pow_rational(base, power)
        out = base
        for _ in range(int(power) - 1):
            out = out * base
        return out
    if name in ("E2", "E4", "E6"):
        return eisenstein(int(name[1]), T)
    if name == "delta":
        return eta_variant("eta", 24, T, grid=grid)
    raise UsageError(f"unknown series {name!r}")


def build_series(spec, T, grid=48, strip_phase=True, cyclotomic_order=None):
    """Series for a builtin spec such as ``eta2z^8``, ``thetaD:3:s`` or
    ``eta^3*thetaD:3:0``. Anything else is read as a form expression."""
    T = Fraction(T)
    factors = spec.replace(" ", "").split("*")
    parsed = []
    for f in factors:
        if f.startswith("thetaD:"):
            parts = f.split(":")
            if len(parts) != 3 or parts[2] not in COSETS or not parts[1].isdigit():
                raise UsageError(f"bad theta spec {f!r}; want thetaD:n:coset with coset in {COSETS}")
            parsed.append(("theta", int(parts[1]), parts[2]))
            continue
        m = _FACTOR.match(f)
        if m and (m.group(1) in _ETA_NAMES or m.group(1) in ("E2", "E4", "E6", "delta")):
            p = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            parsed.append(("named", m.group(1), p))
            continue
        parsed = None
        break
    if parsed is None:
        s = parse_form(spec).qexp(T)
    else:
        # each factor has valuation >= 0, so truncating every factor at T suffices
        s = None
        for item in parsed:
            if item[0] == "theta":
                g = theta_dn(item[1], item[2], T)
            else:
                g = _factor_series(item[1], item[2], T, grid, strip_phase)
            s = g if s is None else s * g
        s = s.truncate(T)
    if cyclotomic_order is not None:
        for c in s.terms.values():
            if isinstance(c, Cyc) and cyclotomic_order % c.order:
                raise UsageError(
                    f"series {spec!r} needs roots of unity of order {c.order}, "
                    f"outside the configured cyclotomic order {cyclotomic_order}")
    return s


# --- formatting -------------------------------------------------------------

def show(x):
    if isinstance(x, Form):
        return format_form(x)
    if isinstance(x, Mldo):
        return format_operator(x)
    return str(x)


def _kind(x):
    if isinstance(x, Form):
        return "form"
    if isinstance(x, MerMldo):
        return "meromorphic operator"
    return "operator"


def _weight_or_none(x):
    try:
        w = x.weight()
    except MldoError:
        return None
    return None if w is None else str(w)


def _describe(x):
    out = {"value": show(x), "kind": _kind(x), "weight": _weight_or_none(x)}
    if isinstance(x, Form):
        out["depth"] = x.depth() if x else None
        out["modular"] = x.is_modular()
    else:
        out["order"] = x.ord() if x.coeffs else None
        if not isinstance(x, MerMldo):
            out["class"] = x.classify() if x.coeffs else "zero"
    return out


def _text_lines(d):
    return "\n".join(f"{k}: {v}" for k, v in d.items())


def _op(text):
    v = parse_operator(text)
    if isinstance(v, Form):
        v = Mldo.scalar(v)
    return v


def _poly_op(text, what="operator"):
    v = _op(text)
    if isinstance(v, MerMldo):
        raise UsageError(f"{what} must have polynomial coefficients: {text!r}")
    return v


# --- subcommands --------------------------------------------------------------
# Each returns (result_for_json, text).

def cmd_expand(args, cfg):
    if args.series:
        s = build_series(args.expr, cfg["terms"], cfg["grid"], not args.keep_phase, cfg["cyclotomic_order"])
        text = format_series(s)
        return {"series": text}, text
    x = parse(args.expr)
    if args.qexp:
        if not isinstance(x, Form):
            raise UsageError("--qexp needs a form")
        text = format_series(x.qexp(cfg["terms"]))
        return {"value": show(x), "series": text}, text
    d = _describe(x)
    return d, d["value"] if not args.verbose else _text_lines(d)


def cmd_apply(args, cfg):
    a = _op(args.operator)
    s = build_series(args.series, cfg["terms"], cfg["grid"], not args.keep_phase, cfg["cyclotomic_order"])
    out = apply_mldo(a, args.weight, s, cfg["terms"])
    vanishes = out.is_zero()
    text = format_series(out)
    return {"series": text, "vanishes": vanishes}, text


def cmd_divide(args, cfg):
    a, b = _poly_op(args.a), _poly_op(args.b)
    if b.is_monic():
        if args.side == "right":
            q, r = divide_monic_right(a, b)
        else:
            q, r = divide_monic_left(a, b)
        res = {"multiplier": "1", "quotient": show(q), "remainder": show(r)}
    else:
        d = parse_form(args.d) if args.d else None
        fn = divide_general_right if args.side == "right" else divide_general_left
        m, c, r = fn(a, b, d)
        res = {"multiplier": show(m), "quotient": show(c), "remainder": show(r)}
    res["side"] = args.side
    return res, _text_lines(res)


def cmd_quo(args, cfg):
    a, b = _op(args.a), _op(args.b)
    if isinstance(a, MerMldo) or isinstance(b, MerMldo):
        a, b = MerMldo.from_mldo(a), MerMldo.from_mldo(b)
        fn = merore.euclid_div_right if args.side == "right" else merore.euclid_div_left
        q, r = fn(a, b)
        if r.coeffs:
            from .errors import NotDivisible

            raise NotDivisible(f"nonzero remainder {show(r)}")
    else:
        q = exact_div(a, b, args.side)
    return {"quotient": show(q), "side": args.side}, show(q)


def cmd_gcrd(args, cfg):
    res = merore.gcrd_full(_op(args.a), _op(args.b))
    u, v = res.bezout
    out = {"gcrd": show(res.gcrd), "order": res.gcrd.ord(), "u": show(u), "v": show(v),
           "lclm": show(res.lclm)}
    text = _text_lines({"gcrd": out["gcrd"], "u": out["u"], "v": out["v"]})
    return out, text


def cmd_lclm(args, cfg):
    l = merore.lclm(_op(args.a), _op(args.b))
    return {"lclm": show(l), "order": l.ord()}, show(l)


def cmd_orepair(args, cfg):
    a2, b2 = merore.ore_pair(_poly_op(args.a), _poly_op(args.b), args.max_order)
    out = {"a2": show(a2), "b2": show(b2)}
    return out, _text_lines(out)


def cmd_charpoly(args, cfg):
    cd = spectra.charpoly(args.weight, _op(args.operator))
    out = {
        "factored": str(cd),
        "coefficients": [str(c) for c in cd.poly],
        "rational_roots": [str(r) for r in cd.sorted_roots()],
        "residual": [str(c) for c in cd.residual],
    }
    return out, str(cd)


def _roots(text):
    try:
        return [parse_rational(t) for t in text.split(",") if t.strip()]
    except ParseError as exc:
        raise UsageError(f"bad root list {text!r}: {exc}") from None


def cmd_construct(args, cfg):
    roots = _roots(args.roots)
    if args.target_weight is None:
        a = spectra.construct_monic(args.weight, roots)
    else:
        a = spectra.construct_quasimonic(args.weight, roots, args.target_weight)
    return {"operator": show(a)}, show(a)


def cmd_mapspace(args, cfg):
    r = spectra.map_solution_space(args.weight, _poly_op(args.a), _poly_op(args.b), args.drop, args.force)
    out = {"c": show(r.c), "d": show(r.d), "lambda_star": str(r.lam_star),
           "common_roots": [str(x) for x in r.common], "remainder": show(r.remainder),
           "remainder_in_Z": r.remainder_in_Z, "forced": r.forced}
    return out, _text_lines({k: out[k] for k in ("c", "d", "lambda_star")})


def cmd_annihilate(args, cfg):
    phi = parse_form(args.form)
    cert = ann.monic_annihilator(phi, args.weight, args.order)
    if cert is None:
        return {"operator": None}, f"no monic annihilator of order {args.order} at weight {args.weight}"
    rec = cert.record()
    return rec, rec["operator"]


def cmd_mord(args, cfg):
    cap = args.cap or cfg["cap"]
    v = ann.mord(parse_form(args.form), args.weight, cap)
    return {"mord": v if isinstance(v, int) else str(v), "cap": cap}, str(v)


def cmd_dwt(args, cfg):
    cap = args.cap or cfg["cap"]
    r = ann.dwt(parse_form(args.form), cap)
    out = {"dwt": str(r.value), "witness": str(r.witness.operator) if r.witness else None}
    return out, str(r.value)


def cmd_frobenius(args, cfg):
    sols = ann.frobenius_solve(_poly_op(args.operator), args.weight, cfg["terms"])
    texts = [format_series(s) for s in sols]
    return {"solutions": texts}, "\n".join(texts)


def cmd_mason(args, cfg):
    series = [build_series(s, cfg["terms"], cfg["grid"], not args.keep_phase, cfg["cyclotomic_order"])
              for s in args.series]
    r = ann.mason_mlde(series, args.weight, cfg["guard"])
    out = {"operator": show(r.operator), "monic": r.monic is not None,
           "multiplier_exponent": None if r.multiplier_exponent is None else str(r.multiplier_exponent),
           "exponent_sum": str(r.exponent_sum), "bound": str(r.bound),
           "inequality_ok": r.inequality_ok}
    return out, out["operator"]


def cmd_symprod(args, cfg):
    l = args.weight2 if args.weight2 is not None else args.weight
    s = merore.symmetric_product(_op(args.a), _op(args.b), args.weight, l)
    return {"operator": show(s), "order": s.ord()}, show(s)


def cmd_verify(args, cfg):
    report = families.verify_suite(cfg["terms"])
    out = {"all_pass": report.all_pass, "entries": report.to_records()}
    if not report.all_pass:
        raise _ReportFailed(out, report.to_text())
    return out, report.to_text()


class _ReportFailed(Exception):
    def __init__(self, result, text):
        super().__init__("verification failed")
        self.result = result
        self.text = text


# --- argument parsing -------------------------------------------------------

def _rational(text):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} ({exc})") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--terms", "-T", type=int, help="truncation order T (series known to O(q^T))")
    common.add_argument("--grid", type=int, help="exponent grid denominator for eta products")
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="mldo", description="Exact arithmetic for modular linear differential operators.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("expand", cmd_expand, "normal form of an expression, or a q-expansion")
    sp.add_argument("expr")
    sp.add_argument("--series", action="store_true", help="treat EXPR as a builtin series spec")
    sp.add_argument("--qexp", action="store_true", help="print the q-expansion of a form")
    sp.add_argument("--keep-phase", action="store_true")
    sp.add_argument("--verbose", "-v", action="store_true", help="also print weight, order, class")

    sp = add("apply", cmd_apply, "apply an operator to a builtin series")
    sp.add_argument("operator")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--series", required=True)
    sp.add_argument("--keep-phase", action="store_true")

    for name, fn, help_ in (("divide", cmd_divide, "division with remainder"),
                            ("quo", cmd_quo, "exact quotient")):
        sp = add(name, fn, help_)
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("--side", choices=("right", "left"), default="right")
        if name == "divide":
            sp.add_argument("--d", help="prescribed multiplier weight-form for general division")

    for name, fn, help_ in (("gcrd", cmd_gcrd, "greatest common right divisor with Bezout data"),
                            ("lclm", cmd_lclm, "least common left multiple"),
                            ("orepair", cmd_orepair, "monic a2 and b2 with a2*a = b2*b")):
        sp = add(name, fn, help_)
        sp.add_argument("a")
        sp.add_argument("b")
        if name == "orepair":
            sp.add_argument("--max-order", type=int, default=12)

    sp = add("charpoly", cmd_charpoly, "characteristic polynomial and its rational roots")
    sp.add_argument("operator")
    sp.add_argument("--weight", "-k", type=_rational, required=True)

    sp = add("construct", cmd_construct, "operator with prescribed characteristic roots")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--roots", required=True, help="comma-separated rationals")
    sp.add_argument("--target-weight", "-l", type=int, help="quasimonic of this weight (default: monic)")

    sp = add("mapspace", cmd_mapspace, "monic c and d with c*b = d*a")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--drop", "-N", type=int, default=1, help="number of common roots to drop")
    sp.add_argument("--force", action="store_true")

    sp = add("annihilate", cmd_annihilate, "monic annihilator of given weight and order")
    sp.add_argument("form")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--order", "-n", type=int, required=True)

    sp = add("mord", cmd_mord, "minimal order of a monic annihilator")
    sp.add_argument("form")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--cap", type=int)

    sp = add("dwt", cmd_dwt, "distinguished weight with witness")
    sp.add_argument("form")
    sp.add_argument("--cap", type=int)

    sp = add("frobenius", cmd_frobenius, "series solutions at the cusp")
    sp.add_argument("operator")
    sp.add_argument("--weight", "-k", type=_rational, required=True)

    sp = add("mason", cmd_mason, "recover the differential equation from solutions")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--series", action="append", required=True)
    sp.add_argument("--keep-phase", action="store_true")

    sp = add("symprod", cmd_symprod, "annihilator of products of solutions")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--weight", "-k", type=_rational, required=True)
    sp.add_argument("--weight2", "-l", type=_rational)

    add("verify", cmd_verify, "run the identity verification suite")
    return p


def _settings(args, environ=None):
    cfg = load_settings(args.config, environ)
    if args.terms is not None:
        cfg["terms"] = _positive_int("--terms", args.terms)
    if args.grid is not None:
        cfg["grid"] = _positive_int("--grid", args.grid)
    return cfg


def _inputs(args, cfg=None):
    skip = {"func", "json", "config", "command"}
    out = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in vars(args).items() if k not in skip}
    if cfg is not None:
        out["terms"] = cfg["terms"]
        out["grid"] = cfg["grid"]
    return out


def main(argv=None, stdout=None, stderr=None, environ=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    cfg = None

    def emit(status, result, text, code):
        if args.json:
            doc = {"command": args.command, "inputs": _inputs(args, cfg), "result": result, "status": status}
            print(json.dumps(doc), file=stdout)
        elif status == "ok":
            print(text, file=stdout)
        else:
            print(text, file=stderr)
        return code

    try:
        cfg = _settings(args, environ)
        result, text = args.func(args, cfg)
    except (UsageError, ParseError) as exc:
        return emit("error", {"error": type(exc).__name__, "message": str(exc)}, f"usage error: {exc}", 2)
    except _ReportFailed as exc:
        return emit("error", exc.result, exc.text, 1)
    except MldoError as exc:
        return emit("error", {"error": type(exc).__name__, "message": str(exc)}, f"{type(exc).__name__}: {exc}", 1)
    return emit("ok", result, text, 0)


if __name__ == "__main__":
    sys.exit(main())
