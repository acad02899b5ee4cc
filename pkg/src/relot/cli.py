"""``relot`` command line.

    relot dist INSTANCE A B [--p P] [--coupling] [--certify] [--rational]
    relot dist A.csv B.csv --format csv [--norm linf|l2] ...
    relot coupling INSTANCE A B ...            (dist with --coupling)
    relot dual INSTANCE A B [--method lp|network] [--mk]
    relot norm INSTANCE SIGMA
    relot lattice INSTANCE OP A [B] [--eps E] [--delta D]
    relot batch INSTANCE QUERIES [--jobs N]

Exit status: 0 on success, 2 for bad input, 3 when a solver fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import jsonschema

from . import io
from .duality import kr_dual, mk_dual, op_norm
from .errors import RelotError, SolverError
from .measure import band, inf_measure, jordan, residual, sup_measure, truncate_lower, \
    truncate_upper
from .solver import kr_norm, solve_wp

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 2, 3

LATTICE_OPS = ("sup", "inf", "residual", "jordan", "truncate")


class InputError(Exception):
    pass


def _number(text):
    """Parse ``3``, ``1.5`` or ``3/4`` from the command line."""
    try:
        v = Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if isinstance(v, float) and v.is_integer() and "." not in text and "e" not in text.lower():
        v = int(v)
    return v


def _parser():
    ap = argparse.ArgumentParser(prog="relot", description="Relative optimal transport on metric pairs.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rational", action="store_true", help="exact rational arithmetic")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled metric validation")

    pairwise = argparse.ArgumentParser(add_help=False, parents=[common])
    pairwise.add_argument("inputs", nargs="+",
                          help="INSTANCE A B for json, or A.csv B.csv for csv")
    pairwise.add_argument("--format", choices=("json", "csv"), default="json")
    pairwise.add_argument("--norm", choices=("linf", "l2"), default="linf",
                          help="halfplane norm for csv diagrams")

    for name in ("dist", "coupling"):
        p = sub.add_parser(name, parents=[pairwise],
                           help="relative Wasserstein distance" if name == "dist"
                           else "optimal coupling (dist --coupling)")
        p.add_argument("--p", type=_number, default=1, help="cost exponent, >= 1")
        p.add_argument("--coupling", action="store_true", help="emit the optimal plan")
        p.add_argument("--certify", action="store_true", help="attach a duality-gap certificate (p=1)")
        p.add_argument("--emit-dot", metavar="PATH", help="write the optimal plan as Graphviz")

    p = sub.add_parser("dual", parents=[pairwise], help="dual potentials with gap certificate")
    p.add_argument("--method", choices=("lp", "network"), default="lp")
    p.add_argument("--mk", action="store_true", help="Monge-Kantorovich dual for the instance cost block")

    p = sub.add_parser("norm", parents=[common], help="KR and operator norm of a signed measure")
    p.add_argument("instance")
    p.add_argument("sigma")

    p = sub.add_parser("lattice", parents=[common], help="lattice operations on measures")
    p.add_argument("instance")
    p.add_argument("op", help="one of " + ", ".join(LATTICE_OPS))
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.add_argument("--eps", type=_number, default=None)
    p.add_argument("--delta", type=_number, default=None)

    p = sub.add_parser("batch", parents=[common], help="many dist queries, evaluated concurrently")
    p.add_argument("instance")
    p.add_argument("queries", help='JSON list of {"a": name, "b": name, "p": number}')
    p.add_argument("--jobs", type=int, default=4)
    return ap


# ----------------------------------------------------------------------


def _load(args):
    """Return ``(pair, mu, nu, dropped, instance_or_None)``."""
    if args.format == "csv":
        if len(args.inputs) != 2:
            raise InputError("csv input takes two diagram files")
        dgms = [io.read_diagram_csv(f, rational=args.rational) for f in args.inputs]
        pair, ms = io.diagram_instance(dgms, args.norm, rational=args.rational, seed=args.seed)
        (mu, da), (nu, db) = ms
        return pair, mu, nu, [da, db], None
    if len(args.inputs) != 3:
        raise InputError("json input takes INSTANCE A B")
    inst = io.load_instance(args.inputs[0], rational=args.rational, seed=args.seed)
    mu, da = inst.measure(args.inputs[1])
    nu, db = inst.measure(args.inputs[2])
    return inst.pair, mu, nu, [da, db], inst


def _dist_payload(mu, nu, dropped, p, *, want_coupling=False, certify=False, dot=None):
    if certify and p != 1:
        raise InputError("--certify needs p = 1")
    res = solve_wp(mu, nu, p)
    out = {"p": p, "value": res.value, "dropped_mass": dropped}
    if want_coupling:
        out["coupling"] = io.coupling_to_json(res.coupling)
    if certify:
        cert = kr_dual(mu, nu)
        out["certificate"] = {"dual": cert.value, "gap": cert.gap}
    if dot:
        with open(dot, "w", encoding="utf-8") as fh:
            fh.write(io.coupling_to_dot(res.coupling))
    return out


def _cmd_dist(args):
    if not args.p >= 1:
        raise InputError("--p must be >= 1")
    _, mu, nu, dropped, _ = _load(args)
    return _dist_payload(mu, nu, dropped, args.p,
                         want_coupling=args.coupling or args.command == "coupling",
                         certify=args.certify, dot=args.emit_dot)


def _potentials(f):
    return None if f is None else {str(k): v for k, v in sorted(f.items())}


def _cmd_dual(args):
    _, mu, nu, _, inst = _load(args)
    if args.mk:
        if inst is None or inst.cost is None:
            raise InputError("--mk needs an instance with a cost block")
        cert = mk_dual(inst.cost, mu, nu)
    else:
        cert = kr_dual(mu, nu, method=args.method)
    return {"value": cert.value, "primal": cert.primal, "gap": cert.gap,
            "potential_f": _potentials(cert.potential_f),
            "potential_g": _potentials(cert.potential_g)}


def _cmd_norm(args):
    inst = io.load_instance(args.instance, rational=args.rational, seed=args.seed)
    sigma = inst.signed(args.sigma)
    kr = kr_norm(sigma)
    op = op_norm(sigma)
    return {"kr_norm": kr, "op_norm": op, "gap": abs(kr - op)}


def _cmd_lattice(args):
    if args.op not in LATTICE_OPS:
        raise InputError(f"unknown lattice op {args.op!r}; expected one of {', '.join(LATTICE_OPS)}")
    inst = io.load_instance(args.instance, rational=args.rational, seed=args.seed)
    if args.op == "jordan":
        pos, neg = jordan(inst.signed(args.a))
        return {"op": "jordan", "positive": io.measure_to_json(pos),
                "negative": io.measure_to_json(neg)}
    mu, _ = inst.measure(args.a)
    if args.op == "truncate":
        if args.eps is None:
            raise InputError("truncate needs --eps")
        if args.delta is not None:
            return {"op": "truncate", "band": io.measure_to_json(band(mu, args.eps, args.delta))}
        return {"op": "truncate", "lower": io.measure_to_json(truncate_lower(mu, args.eps)),
                "upper": io.measure_to_json(truncate_upper(mu, args.eps))}
    if args.b is None:
        raise InputError(f"{args.op} needs two measures")
    nu, _ = inst.measure(args.b)
    fn = {"sup": sup_measure, "inf": inf_measure, "residual": residual}[args.op]
    return {"op": args.op, "result": io.measure_to_json(fn(mu, nu))}


def _cmd_batch(args):
    inst = io.load_instance(args.instance, rational=args.rational, seed=args.seed)
    with open(args.queries, encoding="utf-8") as fh:
        queries = json.load(fh)
    if not isinstance(queries, list):
        raise InputError("queries file must hold a JSON list")
    prepared = []
    for q in queries:
        if not isinstance(q, dict) or "a" not in q or "b" not in q:
            raise InputError("each query needs keys 'a' and 'b'")
        p = q.get("p", 1)
        if not (isinstance(p, (int, float)) and p >= 1):
            raise InputError("query p must be a number >= 1")
        mu, da = inst.measure(q["a"])
        nu, db = inst.measure(q["b"])
        prepared.append((mu, nu, [da, db], p))

    def run(item):
        mu, nu, dropped, p = item
        try:
            return _dist_payload(mu, nu, dropped, p)
        except SolverError as exc:
            return {"p": p, "error": str(exc)}

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(run, prepared))
    return {"results": results}


_COMMANDS = {"dist": _cmd_dist, "coupling": _cmd_dist, "dual": _cmd_dual, "norm": _cmd_norm,
             "lattice": _cmd_lattice, "batch": _cmd_batch}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        payload = _COMMANDS[args.command](args)
        text = io.dumps(payload)
    except SolverError as exc:
        print(f"relot: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (InputError, RelotError, ValueError, KeyError, IndexError, TypeError, OSError,
            json.JSONDecodeError, jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else exc
        print(f"relot: input error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text + "\n")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
