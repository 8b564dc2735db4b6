"""``multisidon`` command-line front end.

Every report is a JSON object carrying the resolved run configuration under
``config``. Verdicts are data: a "false" verification still exits 0.
Exit status 1 marks operational errors and 3 an exceeded enumeration cap
(argparse uses 2 for usage errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .codes import build_code, code_equivalence, distance_profile, simulate, subspace_distance
from .construct import (MonomialParams, find_monomial_params, monomial_family, monomial_field,
                        roth_code_params)
from .errors import CapExceededError, FieldError, HypothesisError, InvariantError, ParameterError
from .field import Extension, make_field, parse_field_spec
from .linset import (DEFAULT_CAP, heavy_points_analysis, hyperplane_weights, max_rank_spectrum_formula,
                     product_space, weight_spectrum)
from .serialize import (code_from_json, dumps, family_from_json, family_to_json, load,
                        subspace_from_json)
from .sidon import (SubspaceFamily, canonical_form, family_equivalence, is_multi_sidon, is_sidon,
                    is_weak_multi_sidon, poly_criterion, span_class)

EXIT_ERROR = 1
EXIT_CAP = 3


def _kv(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ParameterError(f"expected key=value, got {item!r}")
        out[key] = val
    return out


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _family_of(doc: dict) -> SubspaceFamily:
    if "subspaces" in doc:
        return family_from_json(doc)
    if "generators" in doc:
        return code_from_json(doc)
    if "basis" in doc:
        return SubspaceFamily.of([subspace_from_json(doc)])
    raise ParameterError("input is neither a family, a code manifest nor a subspace")


# -- subcommands ------------------------------------------------------------------

def cmd_field(args) -> dict:
    if args.spec:
        F = parse_field_spec(args.spec)
    else:
        if args.p is None or args.m is None:
            raise ParameterError("give a field spec or both --p and --m")
        F = make_field(args.p, args.m)
    ext = Extension(F, args.q)
    return {"field": F.spec, "p": F.p, "m": F.m, "order": F.order, "modulus": list(F.modulus),
            "q": ext.q, "n": ext.n, "primitive_element": F.primitive, "class_count": ext.class_count,
            "tables": F.has_tables}


def cmd_construct(args) -> dict:
    if args.roth is not None:
        kv = _kv(args.roth)
        R = roth_code_params(int(kv["q"]), int(kv["t"]), int(kv.get("s", 1)))
        P = R.as_monomial(args.subfield)
        params = R.to_dict()
    elif args.monomial is not None:
        kv = _kv(args.monomial)
        q, t, s = int(kv["q"]), int(kv["t"]), int(kv.get("s", 1))
        if "mus" in kv:
            P = MonomialParams(monomial_field(q, t), t, s, int(kv["xi"]), _ints(kv["mus"]), args.subfield)
        else:
            P = find_monomial_params(q, t, s, int(kv.get("r", 1)), args.subfield,
                                     xi=int(kv["xi"]) if "xi" in kv else None)
        params = P.to_dict()
    else:
        raise ParameterError("choose --monomial or --roth")
    fam = monomial_family(P)
    if args.manifest:
        report = build_code(fam).to_dict()
    else:
        report = family_to_json(fam)
    report["params"] = params
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(report) + "\n")
    return report


def cmd_verify(args) -> dict:
    fam = _family_of(load(args.input))
    mode = args.mode or "multi-sidon"
    if mode == "sidon":
        verdicts = [is_sidon(U, route=args.route) for U in fam]
        result = all(bool(v) for v in verdicts)
        out = {"result": result, "route": verdicts[0].route if verdicts else None,
               "members": [v.to_dict(args.emit_witness) for v in verdicts]}
        return out
    if mode == "multi-sidon":
        v = is_multi_sidon(fam)
    elif mode == "weak":
        v = is_weak_multi_sidon(fam)
    elif mode == "poly-criterion":
        v = poly_criterion(canonical_form(fam))
    else:
        rep = span_class(fam)
        return {"result": rep.label, "route": "span", "total": rep.total, "lower": rep.lower,
                "upper": rep.upper, "square_dims": list(rep.square_dims),
                "bounds_checked": rep.bounds_checked}
    return v.to_dict(args.emit_witness)


def cmd_spectrum(args) -> dict:
    fam = _family_of(load(args.input))
    V = product_space(list(fam))
    spec = weight_spectrum(V, args.cap)
    out = spec.to_dict()
    ext = fam.ext
    if args.heavy or args.hyperplanes:
        out["heavy_points"] = heavy_points_analysis(V, args.cap).to_dict()
    if args.hyperplanes:
        out["hyperplanes"] = hyperplane_weights(V, args.cap).to_dict()
    if ext.n % 2 == 0 and all(2 * k == ext.n for k in fam.dims):
        out["closed_form"] = max_rank_spectrum_formula(ext.q, ext.n, fam.r)
    return out


def cmd_distance(args) -> dict:
    if args.other:
        U = subspace_from_json(load(args.input))
        V = subspace_from_json(load(args.other))
        return {"distance": subspace_distance(U, V)}
    C = build_code(_family_of(load(args.input)))
    out = {"size": C.size, "orbit_sizes": list(C.orbit_sizes), "t": C.t,
           "min_distance": C.min_distance(), "statement_value": 2 * C.t - 2}
    if args.emit_witness:
        out["profile"] = {f"{i},{j}": v for (i, j), v in distance_profile(C).items()}
    return out


def cmd_equiv(args) -> dict:
    A = _family_of(load(args.first))
    B = _family_of(load(args.second))
    if args.mode == "family":
        w = family_equivalence(A, B, check_hypothesis=not args.no_hypothesis)
        out = {"result": w is not None, "route": "family"}
    else:
        res = code_equivalence(build_code(A), build_code(B), args.mode,
                               check_hypothesis=not args.no_hypothesis)
        w = res.witness
        out = {"result": bool(res), "route": f"code-{args.mode}"}
    if args.emit_witness and w is not None:
        out["witness"] = w.to_dict()
    return out


def cmd_simulate(args) -> dict:
    if args.seed is None:
        raise ParameterError("simulate needs --seed")
    C = build_code(_family_of(load(args.code)))
    rep = simulate(C, args.rho, args.e, args.trials, args.seed, audit=args.audit, threads=args.threads)
    out = rep.to_dict()
    out["min_distance"] = C.min_distance()
    return out


# -- plumbing ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--emit-witness", action="store_true", help="include certificates")
    common.add_argument("--seed", type=int, default=None)

    ap = argparse.ArgumentParser(prog="multisidon", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="describe a finite field")
    p.add_argument("spec", nargs="?", help="gf(p^m; c0,...,1)")
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--q", type=int, help="subfield order for the relative view")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("construct", parents=[common], help="build a monomial family")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--monomial", nargs="+", metavar="KEY=VAL",
                   help="q, t, s, r (searched) or q, t, s, xi, mus=a,b,...")
    g.add_argument("--roth", nargs="+", metavar="KEY=VAL", help="q, t, s")
    p.add_argument("--subfield", action="store_true", help="append F_{q^t} as a member")
    p.add_argument("--manifest", action="store_true", help="emit a code manifest")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="verify a family")
    g = p.add_mutually_exclusive_group()
    for flag in ("sidon", "multi-sidon", "weak", "poly-criterion", "span"):
        g.add_argument(f"--{flag}", dest="mode", action="store_const", const=flag)
    p.add_argument("--route", choices=("orbit", "definitional"), default="orbit")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", parents=[common], help="weight spectrum of the product linear set")
    p.add_argument("input")
    p.add_argument("--heavy", action="store_true")
    p.add_argument("--hyperplanes", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("distance", parents=[common], help="code size and minimum distance")
    p.add_argument("input")
    p.add_argument("other", nargs="?", help="second subspace: report d(U, V)")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("equiv", parents=[common], help="equivalence of families or codes")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--mode", choices=("family", "linear", "semilinear"), default="semilinear")
    p.add_argument("--no-hypothesis", action="store_true", help="skip the pairwise-intersection check")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("simulate", parents=[common], help="operator-channel decoding trials")
    p.add_argument("--code", required=True)
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--audit", type=int, default=0, help="trials to re-check by rank computations")
    p.set_defaults(func=cmd_simulate)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["version"] = __version__
    return cfg


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], json.dumps(obj) if isinstance(obj, list) else obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    rows = list(_flatten(report))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.cap <= 0 or args.threads <= 0:
        ap.error("--cap and --threads must be positive")
    try:
        report = args.func(args)
    except CapExceededError as exc:
        print(f"multisidon: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParameterError, FieldError, HypothesisError, InvariantError, OSError, KeyError, ValueError) as exc:
        print(f"multisidon: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report["config"] = _config(args)
    print(render(report, args.format))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
