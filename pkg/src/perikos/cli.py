"""Command-line interface: ``perikos <command> [flags] [--json FILE]``.

Every command validates its parameters against a strict schema, computes,
and prints one JSON document (sorted keys) to stdout.  Exit codes: 0 ok,
2 domain violation, 3 precision or convergence failure, 4 schema error.
The default precision block comes from ``PERIKOS_DEFAULT_PREC``, a JSON
object with keys ``p``, ``prec`` and ``order``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from fractions import Fraction

from . import __version__, actions, ff_curve, formal_groups, isocrystals, linalg, period_map
from .errors import DomainError, PrecisionError, SchemaError
from .parith.finite_field import is_prime
from .parith.padic import Padic
from .parith.witt import WittElem

log = logging.getLogger("perikos")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_SCHEMA = 0, 2, 3, 4
REQUIRED = object()
BUILTIN_DEFAULTS = {"p": 5, "prec": 10, "order": 20}


# -- field parsers -----------------------------------------------------------


def _int(lo=None, hi=None):
    def parse(v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"expected an integer, got {v!r}")
        if lo is not None and v < lo:
            raise SchemaError(f"expected an integer >= {lo}, got {v}")
        if hi is not None and v > hi:
            raise SchemaError(f"expected an integer <= {hi}, got {v}")
        return v
    return parse


def _prime(v):
    v = _int(2)(v)
    if not is_prime(v):
        raise SchemaError(f"{v} is not prime")
    return v


def _optional(parse):
    def inner(v):
        return None if v is None else parse(v)
    return inner


def _rational(v):
    if isinstance(v, bool):
        raise SchemaError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {v!r}") from exc
    raise SchemaError(f"expected an integer or 'a/b' string, got {v!r}")


def _radius(v):
    if v is None or v == "inf":
        return None
    r = _rational(v)
    if r <= 0:
        raise SchemaError("logarithmic radii must be positive")
    return r


def _bool(v):
    if not isinstance(v, bool):
        raise SchemaError(f"expected true/false, got {v!r}")
    return v


def _list(parse, length=None):
    def inner(v):
        if not isinstance(v, list):
            raise SchemaError(f"expected a list, got {v!r}")
        if length is not None and len(v) != length:
            raise SchemaError(f"expected {length} entries, got {len(v)}")
        return [parse(x) for x in v]
    return inner


def _str(choices=None):
    def inner(v):
        if not isinstance(v, str):
            raise SchemaError(f"expected a string, got {v!r}")
        if choices and v not in choices:
            raise SchemaError(f"expected one of {sorted(choices)}, got {v!r}")
        return v
    return inner


def _slopes(v):
    try:
        return isocrystals.SlopeData.from_json(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad slope list {v!r}: {exc}") from exc


def _bundle(v):
    try:
        return ff_curve.BundleFF.from_json(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad bundle {v!r}: {exc}") from exc


def _raw(v):
    return v


# -- element decoding --------------------------------------------------------


def _element(v, p, m, prec):
    """int | 'a/b' | coordinate list | padic/witt record -> WittElem over (p, m)."""
    try:
        if isinstance(v, dict):
            kind = v.get("type")
            if kind == "padic":
                x = Padic.from_json(v)
                if x.prime != p:
                    raise SchemaError("element prime mismatch")
                return WittElem.from_padic(x, m)
            if kind == "witt":
                x = WittElem.from_json(v)
                if (x.prime, x.m) != (p, m):
                    raise SchemaError("element ring mismatch")
                return x
            raise SchemaError(f"unknown element type {kind!r}")
        if isinstance(v, list):
            if len(v) != m or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
                raise SchemaError(f"coordinate vectors need {m} integers")
            return WittElem.from_coords(p, m, v, prec)
        return WittElem.from_rational(p, m, _rational(v), prec)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad element {v!r}") from exc


def _padic(v, p, prec):
    x = _element(v, p, 1, prec)
    return x.to_padic()


def _matrix(v, n=None):
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise SchemaError("expected a matrix (list of rows)")
    size = len(v)
    if any(len(r) != size for r in v):
        raise SchemaError("matrix must be square")
    if n is not None and size != n:
        raise SchemaError(f"matrix must be {n}x{n}")
    return v


def _u_values(raw, p):
    out = []
    for x in raw:
        try:
            v = formal_groups._value_from_json(x)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad deformation parameter {x!r}") from exc
        if getattr(v, "prime", p) != p:
            raise SchemaError("deformation parameter prime differs from p")
        out.append(v)
    return out


def _frac_json(x):
    if x == float("inf"):
        return "inf"
    x = Fraction(x)
    return str(x)


# -- commands ----------------------------------------------------------------


def cmd_fgl_check(a, prov):
    h, p = a["h"], a["p"]
    u = _u_values(a["u"] if a["u"] is not None else [0] * (h - 1), p)
    if len(u) != h - 1:
        raise SchemaError(f"height {h} needs {h - 1} parameters")
    params = formal_groups.DeformationParams(h, tuple(u))
    if not params.is_integral_point(p):
        raise DomainError("law coefficients need parameters of valuation >= 1")
    law = formal_groups.deformation_law(h, p, params, M=a["order"], prec=a["prec"])
    axioms = law.axioms(associativity=a["associativity"])
    prov["oracle_flags"].update(axioms)
    result = {"axioms": axioms, "law": law.to_json()}
    prov["working_precision"] = law.meta["working_precision"]
    prov["precision"] = a["prec"]
    if a["height"]:
        M = max(a["order"], p**h + 1)
        hl = law if M == law.order else formal_groups.deformation_law(h, p, params, M=M, prec=2)
        ht = formal_groups.height_mod_p(hl, h_max=h)
        result["height_mod_p"] = None if ht == float("inf") else ht
        prov["height_order"] = M
    return result


def _rigid(a):
    h, p = a["h"], a["p"]
    u = _u_values(a["u"] if a["u"] is not None else [0] * (h - 1), p)
    if len(u) != h - 1:
        raise SchemaError(f"height {h} needs {h - 1} parameters")
    return period_map.RigidPoint(h, p, tuple(u))


def _point_json(P):
    return {"point": P.to_json(), "values": [str(v) if isinstance(v, Fraction) else v.to_json()
                                             for v in P.values()]}


def cmd_period_eval(a, prov):
    x = _rigid(a)
    if not period_map.radius_check(x):
        raise DomainError("u lies outside the open unit polydisc")
    P = period_map.period_point(x, a["prec"])
    prov.update({k: P.meta[k] for k in ("n_max", "working_precision") if k in P.meta})
    prov["precision"] = a["prec"]
    prov["oracle_flags"]["three_level_agreement"] = "level" in P.meta or x.h == 1
    return _point_json(P)


def cmd_global_eval(a, prov):
    x = _rigid(a)
    if not period_map.radius_check(x):
        raise DomainError("u lies outside the open unit polydisc")
    g = ff_curve.global_point(x, a["prec"])
    prov.update({k: g.meta[k] for k in ("n_max", "working_precision") if k in g.meta})
    prov["precision"] = a["prec"]
    prov["oracle_flags"]["commutes"] = g.commutes()
    out = g.to_json()
    out["values"] = _point_json(g.point)["values"]
    return out


def cmd_newton(a, prov):
    p, m, prec = a["p"], a["m"], a["prec"]
    rows = _matrix(a["matrix"])
    A = [[_element(x, p, m, prec) for x in row] for row in rows]
    X = isocrystals.Isocrystal.from_matrix(p, m, A, prec)
    sd = isocrystals.newton_polygon(X)
    prov["precision"] = X.precision
    if X.n <= 4:
        L = isocrystals.linearize(X)
        fast, slow = linalg.charpoly(L), linalg.charpoly_leibniz(L)
        prov["oracle_flags"]["charpoly_leibniz"] = all(a.agrees(b) for a, b in zip(fast, slow))
    return {"slopes": sd.to_json(), "rank": sd.rank, "degree": sd.degree,
            "vertices": [[x, str(y)] for x, y in sd.vertices()]}


def cmd_kottwitz(a, prov):
    classes = isocrystals.kottwitz_enumerate(a["h"], a["d"], a["lo"], a["hi"])
    return {"count": len(classes), "classes": [c.to_json() for c in classes]}


def cmd_bundles(a, prov):
    out = []
    for E in ff_curve.pdiv_bundle_classes(a["h"]):
        r, d, s = E.rank_deg_slope()
        out.append({"bundle": E.to_json(), "name": str(E), "rank": r, "degree": d, "slope": str(s),
                    "hn_polygon": E.hn_polygon(), "fiber": ff_curve.perdom_fiber(E).to_json()})
    return {"count": len(out), "classes": out}


def cmd_kappa(a, prov):
    def enc(v):
        return float("inf") if v is None else v
    x = ff_curve.AdicPoint(a["p"], enc(a["log_p"]), enc(a["log_w"]))
    out = {"point": x.to_json(), "tag": x.tag, "kappa": _frac_json(ff_curve.kappa(x))}
    if a["n"]:
        y = ff_curve.frobenius_move(x, a["n"])
        out["moved"] = {"point": y.to_json(), "kappa": _frac_json(ff_curve.kappa(y))}
    if x.tag == ff_curve.Y_POINT:
        rep, n = ff_curve.fundamental_domain(x)
        out["fundamental_domain"] = {"point": rep.to_json(), "n": n, "kappa": _frac_json(ff_curve.kappa(rep))}
    return out


def cmd_hecke_check(a, prov):
    t = ff_curve.ModificationTriple(a["E"], a["F"], a["length"], a["locus"])
    ff_curve.hecke_validate(t)
    return {"valid": True, "triple": t.to_json(),
            "rank": t.E.rank, "degree_difference": t.E.degree - t.F.degree}


def _odelem(v, h, p, prec):
    if isinstance(v, dict):
        try:
            x = actions.ODElem.from_json(v)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad O_D element: {exc}") from exc
        if (x.h, x.p) != (h, p):
            raise SchemaError("O_D element parameters differ from h, p")
        return x
    if not isinstance(v, list) or len(v) > h:
        raise SchemaError(f"O_D elements are lists of at most {h} coefficients")
    return actions.ODElem(h, p, tuple(_element(c, p, h, prec) for c in list(v) + [0] * (h - len(v))))


def cmd_od_mul(a, prov):
    h, p, prec = a["h"], a["p"], a["prec"]
    x, y = _odelem(a["a"], h, p, prec), _odelem(a["b"], h, p, prec)
    z = actions.od_mul(x, y)
    prov["precision"] = z.precision
    return {"product": z.to_json(), "is_unit": z.is_unit()}


def cmd_act(a, prov):
    h, p, prec = a["h"], a["p"], a["prec"]
    rng = random.Random(a["seed"])
    if a["point"] is not None:
        try:
            x = actions.TowerPoint.from_json(a["point"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad tower point: {exc}") from exc
    else:
        x = actions.random_tower_point(rng, h, p, prec)
    kind = a["action"]
    if kind == "J":
        s = _odelem(a["s"], h, p, prec) if a["s"] is not None else actions.random_odelem(rng, h, p, prec)
        y = actions.act_J(s, x)
        operand = s.to_json()
    elif kind == "GL":
        if a["g"] is not None:
            g = [[_padic(e, p, prec) for e in row] for row in _matrix(a["g"], h)]
        else:
            g = actions.random_gl(rng, h, p, prec)
        y = actions.act_GL(g, x)
        operand = [[e.to_json() for e in row] for row in g]
    elif kind == "transition":
        y = actions.tower_transition(x)
        operand = None
    elif kind == "Weil":
        w = actions.WeilElem(a["n"], tuple(a["inertia"]))
        y = actions.act_Weil(w, x)
        operand = w.to_json()
    else:  # J-period
        s = _odelem(a["s"], h, p, prec) if a["s"] is not None else actions.random_odelem(rng, h, p, prec)
        raw = a["y"] if a["y"] is not None else [1] + [0] * (h - 1)
        coords = [_element(c, p, h, prec) for c in _list(_raw, h)(raw)]
        Y = period_map.ProjPoint.canonical(coords)
        Z = actions.act_J_on_period(s, Y)
        return {"action": kind, "operand": s.to_json(), "input": Y.to_json(), "output": Z.to_json()}
    return {"action": kind, "operand": operand, "input": x.to_json(), "output": y.to_json()}


def cmd_commute_check(a, prov):
    h, p, prec = a["h"], a["p"], a["prec"]
    rng = random.Random(a["seed"])
    passed = 0
    for _ in range(a["trials"]):
        s = actions.random_odelem(rng, h, p, prec)
        g = actions.random_gl(rng, h, p, prec)
        x = actions.random_tower_point(rng, h, p, prec)
        passed += actions.commute_check(s, g, x)
    return {"trials": a["trials"], "passed": passed, "all_true": passed == a["trials"]}


_COMMON_P = {"p": (_prime, "default:p")}
_PREC = {"prec": (_int(1, 10_000), "default:prec")}

COMMANDS = {
    "fgl-check": (cmd_fgl_check, "formal group law axioms and height of a deformation", {
        "h": (_int(1, 8), REQUIRED), **_COMMON_P, "u": (_optional(_list(_raw)), None),
        "order": (_int(2, 400), "default:order"), **_PREC,
        "associativity": (_bool, False), "height": (_bool, True)}),
    "period-eval": (cmd_period_eval, "crystalline period point of a deformation", {
        "h": (_int(1, 8), REQUIRED), **_COMMON_P, "u": (_optional(_list(_raw)), None), **_PREC}),
    "global-eval": (cmd_global_eval, "Hecke triple, fiber and period point", {
        "h": (_int(1, 8), REQUIRED), **_COMMON_P, "u": (_optional(_list(_raw)), None), **_PREC}),
    "newton": (cmd_newton, "Newton polygon of an isocrystal", {
        **_COMMON_P, "m": (_int(1, 12), 1), "matrix": (_raw, REQUIRED), **_PREC}),
    "kottwitz": (cmd_kottwitz, "enumerate slope data of given rank and degree", {
        "h": (_int(1, 40), REQUIRED), "d": (_int(), REQUIRED),
        "lo": (_rational, Fraction(0)), "hi": (_rational, Fraction(1))}),
    "bundles": (cmd_bundles, "bundles E(G) of one-dimensional p-divisible groups", {
        "h": (_int(1, 40), REQUIRED)}),
    "kappa": (cmd_kappa, "kappa, tag and fundamental domain of an adic point", {
        **_COMMON_P, "log_p": (_radius, REQUIRED), "log_w": (_radius, REQUIRED), "n": (_int(), 0)}),
    "hecke-check": (cmd_hecke_check, "validate a modification triple", {
        "E": (_bundle, REQUIRED), "F": (_bundle, REQUIRED), "length": (_int(0), 1),
        "locus": (_str(), "inf")}),
    "od-mul": (cmd_od_mul, "multiply two elements of O_D", {
        "h": (_int(1, 8), REQUIRED), **_COMMON_P, "a": (_raw, REQUIRED), "b": (_raw, REQUIRED), **_PREC}),
    "act": (cmd_act, "apply a J, GL_h, Weil or transition action", {
        "action": (_str({"J", "GL", "Weil", "transition", "J-period"}), REQUIRED),
        "h": (_int(1, 8), REQUIRED), **_COMMON_P, **_PREC, "seed": (_int(), 0),
        "point": (_raw, None), "s": (_raw, None), "g": (_raw, None), "n": (_int(), 0),
        "inertia": (_list(_str()), []), "y": (_raw, None)}),
    "commute-check": (cmd_commute_check, "randomized check that J and GL_h actions commute", {
        "h": (_int(1, 6), REQUIRED), **_COMMON_P, **_PREC, "trials": (_int(1, 100_000), 100),
        "seed": (_int(), 0)}),
}


for _name, (_h, _d, _schema) in COMMANDS.items():
    _schema.setdefault("seed", (_optional(_int()), None))


# -- plumbing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


def default_block() -> dict:
    raw = os.environ.get("PERIKOS_DEFAULT_PREC")
    block = dict(BUILTIN_DEFAULTS)
    if not raw:
        return block
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"PERIKOS_DEFAULT_PREC is not JSON: {exc}") from exc
    if not isinstance(data, dict) or set(data) - set(block):
        raise SchemaError("PERIKOS_DEFAULT_PREC must be an object with keys p, prec, order")
    block.update(data)
    _prime(block["p"])
    _int(1)(block["prec"])
    _int(2)(block["order"])
    return block


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perikos", description="p-adic period maps at desk scale")
    parser.add_argument("--version", action="version", version=f"perikos {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text, schema) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--json", dest="json_file", metavar="FILE",
                        help="read parameters from a JSON object (flags override)")
        for field in schema:
            sp.add_argument("--" + field.replace("_", "-"), dest="f_" + field, metavar="VALUE",
                            help="JSON value (bare strings allowed)")
    return parser


def _decode_flag(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _validate(schema: dict, given: dict, defaults: dict) -> dict:
    unknown = sorted(set(given) - set(schema))
    if unknown:
        raise SchemaError(f"unknown field(s): {', '.join(unknown)}")
    out = {}
    for name, (parse, default) in schema.items():
        if name in given:
            out[name] = parse(given[name])
        elif default is REQUIRED:
            raise SchemaError(f"missing required field {name!r}")
        elif isinstance(default, str) and default.startswith("default:"):
            out[name] = parse(defaults[default.split(":", 1)[1]])
        else:
            out[name] = default
    return out


def _echo(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (isocrystals.SlopeData, ff_curve.BundleFF)):
        return value.to_json()
    if isinstance(value, list):
        return [_echo(v) for v in value]
    return value


def run(argv: list[str]) -> tuple[dict, int]:
    """Execute one command; returns the output document and exit code."""
    doc = {"schema_version": SCHEMA_VERSION, "version": __version__}
    try:
        args = build_parser().parse_args(argv)
        doc["command"] = args.command
        handler, _, schema = COMMANDS[args.command]
        given = {}
        if args.json_file:
            try:
                with open(args.json_file, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise SchemaError(f"cannot read {args.json_file}: {exc}") from exc
            if not isinstance(data, dict):
                raise SchemaError("the --json file must hold a JSON object")
            given.update(data)
        for name in schema:
            text = getattr(args, "f_" + name)
            if text is not None:
                given[name] = _decode_flag(text)
        params = _validate(schema, given, default_block())
        doc["input"] = {k: _echo(v) for k, v in params.items()}
        prov: dict = {"oracle_flags": {}}
        if params.get("seed") is not None:
            prov["seed"] = params["seed"]
        doc["result"] = handler(params, prov)
        doc["provenance"] = prov
        doc["status"] = "ok"
        return doc, EXIT_OK
    except SchemaError as exc:
        return _fail(doc, "schema_error", exc), EXIT_SCHEMA
    except DomainError as exc:
        return _fail(doc, "domain_error", exc), EXIT_DOMAIN
    except PrecisionError as exc:
        doc = _fail(doc, "precision_error", exc)
        if exc.achieved is not None:
            doc["provenance"] = {"achieved": _frac_json(exc.achieved) if exc.achieved != float("-inf") else None}
        return doc, EXIT_PRECISION
    except (ValueError, TypeError, KeyError) as exc:
        # constructors reject malformed values (wrong sizes, bad slopes, ...)
        return _fail(doc, "schema_error", SchemaError(str(exc))), EXIT_SCHEMA


def _fail(doc, status, exc):
    doc["status"] = status
    doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
    log.error("%s: %s", type(exc).__name__, exc)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="perikos: %(message)s")
    if argv is None:
        argv = sys.argv[1:]
    if any(a in ("-h", "--help", "--version") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    doc, code = run(argv)
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
