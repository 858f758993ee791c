"""Command-line front end: ``abmod <command> ...``.

Modules are read from JSON files of two kinds::

    {"rank": 2, "precision": 10, "matrix": [["0", "1*b^0"], ["0", "2*b^1"]]}
    {"construct": "Epair", "lambda": "2", "mu": "0", "precision": 10}

Exit codes: 0 success, 2 parse error, 3 precondition error, 4 precision error,
1 for any other library error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import abmodule as am
from .coefficients import GaussianRational, format_series, parse_series
from .errors import AbModError, ParseError, PrecisionError, PreconditionError

MATRIX_FIELDS = {"rank", "precision", "matrix", "label"}
CONSTRUCT_PARAMS = {
    "E": ("lambda",),
    "Elog": ("lambda", "n"),
    "Epair": ("lambda", "mu"),
    "Ealpha": ("lambda", "n", "alpha"),
    "J": ("k", "lambda"),
    "F": ("k", "lambda", "rho"),
    "Rank3Example": (),
    "DirectSum": ("summands",),
}
INT_PARAMS = {"n", "k"}
DEFAULT_MAX_PRECISION = 96


# -- module files ----------------------------------------------------------------------


def _locate(text, needle):
    """Line and column (1-based) of the first occurrence of ``needle``."""
    idx = text.find(needle)
    if idx < 0:
        return 1, 1
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _scalar(value, text, name):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"parameter {name!r} must be an integer or an exact string", *_locate(text, f'"{name}"'))
    try:
        return GaussianRational.parse(value) if isinstance(value, str) else GaussianRational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar for {name!r}: {exc}", *_locate(text, f'"{name}"')) from None


def _integer(value, text, name):
    if isinstance(value, bool):
        raise ParseError(f"parameter {name!r} must be an integer", *_locate(text, f'"{name}"'))
    if isinstance(value, str):
        try:
            value = int(value)
        except ValueError:
            raise ParseError(f"parameter {name!r} must be an integer", *_locate(text, f'"{name}"')) from None
    if not isinstance(value, int):
        raise ParseError(f"parameter {name!r} must be an integer", *_locate(text, f'"{name}"'))
    return value


def module_from_data(data, text="", precision=None):
    """Build a module from decoded ModuleFile JSON; ``precision`` overrides the file's."""
    if not isinstance(data, dict):
        raise ParseError("module file must hold a JSON object", 1, 1)
    if "construct" in data:
        name = data["construct"]
        if name not in CONSTRUCT_PARAMS:
            raise ParseError(f"unknown family {name!r}", *_locate(text, f'"{name}"'))
        allowed = {"construct", "precision", "label", *CONSTRUCT_PARAMS[name]}
        extra = set(data) - allowed
        if extra:
            key = sorted(extra)[0]
            raise ParseError(f"unknown field {key!r}", *_locate(text, f'"{key}"'))
        missing = [p for p in CONSTRUCT_PARAMS[name] if p not in data]
        if missing:
            raise ParseError(f"missing parameter {missing[0]!r} for {name}", *_locate(text, f'"{name}"'))
        N = precision or data.get("precision")
        if N is not None:
            N = _integer(N, text, "precision")
            if N < 1:
                raise ParseError("precision must be positive", *_locate(text, '"precision"'))
        if name == "DirectSum":
            parts = data["summands"]
            if not isinstance(parts, list) or not parts:
                raise ParseError("summands must be a non-empty list", *_locate(text, '"summands"'))
            mods = [module_from_data(p, text, N) for p in parts]
            return am.DirectSum(mods)
        args = []
        for p in CONSTRUCT_PARAMS[name]:
            v = data[p]
            args.append(_integer(v, text, p) if p in INT_PARAMS else _scalar(v, text, p))
        return am.construct_standard(name, *args, N=N)
    extra = set(data) - MATRIX_FIELDS
    if extra:
        key = sorted(extra)[0]
        raise ParseError(f"unknown field {key!r}", *_locate(text, f'"{key}"'))
    for key in ("rank", "precision", "matrix"):
        if key not in data:
            raise ParseError(f"missing field {key!r}", 1, 1)
    p = _integer(data["rank"], text, "rank")
    N_file = _integer(data["precision"], text, "precision")
    if p < 1:
        raise ParseError("rank must be at least 1", *_locate(text, '"rank"'))
    if N_file < 1:
        raise ParseError("precision must be positive", *_locate(text, '"precision"'))
    rows = data["matrix"]
    if not isinstance(rows, list) or len(rows) != p or any(not isinstance(r, list) or len(r) != p for r in rows):
        raise ParseError(f"matrix must be {p}x{p}", *_locate(text, '"matrix"'))
    # entries are polynomials; a larger working precision reads them as exact
    N = max(N_file, precision or 0)
    mat = []
    for row in rows:
        out = []
        for s in row:
            if not isinstance(s, str):
                raise ParseError("matrix entries must be series strings", *_locate(text, '"matrix"'))
            try:
                out.append(parse_series(s, N))
            except ParseError as exc:
                line, col = _locate(text, json.dumps(s))
                msg = str(exc).split(" (line ")[0]
                raise ParseError(msg, line, col + (exc.column or 1)) from None
        mat.append(out)
    return am.make_module(mat, N, data.get("label", ""))


def load_module(path, precision=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 1, 1) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return module_from_data(data, text, precision)


def module_to_data(E):
    data = {
        "rank": E.rank,
        "precision": E.known_order,
        "matrix": [[format_series(x) for x in row] for row in E.matrix],
    }
    if E.label:
        data["label"] = E.label
    return data


def dumps(data):
    return json.dumps(data, indent=2) + "\n"


# -- reports ----------------------------------------------------------------------------


def _s(x):
    return str(x)


def invariants_report(E):
    from .invariants import alpha_invariant, biggest_simple_pole, index_delta, regularity_order, saturate, widths
    from .jets import determination_bound
    from .structure import jordan_holder

    sat = saturate(E)
    low = biggest_simple_pole(E)
    w = widths(E)
    return {
        "rank": E.rank,
        "simple_pole": am.is_simple_pole(E),
        "or": regularity_order(E),
        "saturation_steps": sat.steps,
        "delta": index_delta(E),
        "spectrum_sharp": [_s(v) for v in am.spectrum(sat.module).as_list()],
        "spectrum_b": [_s(v) for v in am.spectrum(low.module).as_list()],
        "widths": [{"lambda_min": _s(c.lambda_min), "lambda_max": _s(c.lambda_max), "width": c.width}
                   for c in w.classes],
        "width": w.width,
        "alpha": _s(alpha_invariant(E)),
        "jh_exponents": [_s(v) for v in jordan_holder(E).exponents],
        "N0": determination_bound(E),
    }


def _smat_strings(P):
    return [[format_series(x) for x in row] for row in P]


# -- commands ---------------------------------------------------------------------------


def cmd_invariants(args, precision):
    return invariants_report(load_module(args.file, precision))


def cmd_jet_iso(args, precision):
    from .jets import jet_isomorphism

    A = load_module(args.a, precision)
    B = load_module(args.b, precision)
    r = jet_isomorphism(A, B, args.order, seed=args.seed)
    out = {"status": r.status, "order": r.order, "certified": r.certified, "solution_dim": r.solution_dim}
    if r.is_iso:
        out["witness"] = _smat_strings(r.P)
    if r.status == "UndecidedRandomized":
        out["trials"] = r.trials
    return out


def cmd_dual(args, precision):
    return module_to_data(am.dual(load_module(args.file, precision)))


def cmd_saturate(args, precision):
    from .invariants import saturate

    return module_to_data(saturate(load_module(args.file, precision)).module)


def cmd_classify(args, precision):
    from .structure import classify_rank2

    c = classify_rank2(load_module(args.file, precision), seed=args.seed)
    return {**c.as_dict(), "verified_order": c.verified_order}


def cmd_jh(args, precision):
    from .structure import jordan_holder

    jh = jordan_holder(load_module(args.file, precision))
    return {"exponents": [_s(v) for v in jh.exponents], "sum": _s(jh.total())}


def cmd_ext(args, precision):
    from .structure import ext_dims

    e0, e1 = ext_dims(load_module(args.a, precision), load_module(args.b, precision))
    return {"ext0": e0, "ext1": e1}


def cmd_verify_bound(args, precision):
    """Jet isomorphism at the determination bound, then a unique lift."""
    from .jets import determination_bound, intertwines, jet_isomorphism, lift_jet_isomorphism

    E = load_module(args.file, precision)
    other = load_module(args.other, precision) if args.other else E
    N0 = determination_bound(E)
    r = jet_isomorphism(E, other, N0, seed=args.seed)
    out = {"N0": N0, "jet_status": r.status}
    if not r.is_iso:
        out["verified"] = False
        return out
    from . import linalg as la
    from .errors import LiftNotFound

    try:
        lift = lift_jet_isomorphism(E, other, r)
        out["jet_map_lifts"] = True
    except LiftNotFound:
        # the jet map is not induced by a module map; lift the restriction of a genuine one
        out["jet_map_lifts"] = False
        T = min(E.known_order, other.known_order)
        full = jet_isomorphism(E, other, T, seed=args.seed)
        if not full.is_iso:
            out["verified"] = False
            return out
        lift = lift_jet_isomorphism(E, other, la.smat_truncate(full.P, N0), N=N0)
    out.update({
        "lift_unique_order": lift.unique_order,
        "lift_agreement_order": lift.agreement_order,
        "verified": intertwines(E, other, lift.P, lift.unique_order),
    })
    return out


COMMANDS = {
    "invariants": cmd_invariants,
    "jet-iso": cmd_jet_iso,
    "dual": cmd_dual,
    "saturate": cmd_saturate,
    "classify": cmd_classify,
    "jh": cmd_jh,
    "ext": cmd_ext,
    "verify-bound": cmd_verify_bound,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="abmod", description="Exact computations with regular (a,b)-modules.")
    parser.add_argument("--precision", type=int, default=None,
                        help="working precision (raises the files' known order)")
    sub = parser.add_subparsers(dest="command", required=True)

    def one(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--precision", type=int, default=argparse.SUPPRESS)
        return p

    def two(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--precision", type=int, default=argparse.SUPPRESS)
        return p

    one("invariants", "JSON report of the regularity invariants")
    p = two("jet-iso", "decide whether two jets are isomorphic")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    one("dual", "module file of the dual module")
    one("saturate", "module file of the saturation")
    one("classify", "rank-2 normal form").add_argument("--seed", type=int, default=0)
    one("jh", "Jordan-Hoelder exponents")
    two("ext", "dimensions of Hom and Ext^1")
    p = one("verify-bound", "jet isomorphism at the determination bound and its lift")
    p.add_argument("--other", default=None, help="second module (default: the module itself)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _error(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        payload.update(line=exc.line, column=exc.column)
    needed = getattr(exc, "needed", None)
    if needed is not None:
        payload["needed_precision"] = needed
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def run(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    cap = int(os.environ.get("ABMOD_MAX_PRECISION", DEFAULT_MAX_PRECISION))
    precision = args.precision
    handler = COMMANDS[args.command]
    while True:
        try:
            result = handler(args, precision)
        except ParseError as exc:
            return _error(exc, 2)
        except PrecisionError as exc:
            needed = getattr(exc, "needed", None) or 0
            current = precision or 0
            nxt = max(needed, 2 * current if current else 16, current + 1)
            if nxt > cap:
                return _error(exc, 4)
            precision = nxt
            continue
        except PreconditionError as exc:
            return _error(exc, 3)
        except AbModError as exc:
            return _error(exc, 1)
        out.write(dumps(result))
        return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
