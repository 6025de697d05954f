"""``emk`` command line.

Exit status: 0 success, 1 a verification did not hold, 2 usage or capacity
error.  Integers in JSON output are decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import _accel
from .baranyai import decompose, read_decomposition, to_json, verify_decomposition
from .constructions import lift, p_build, p_spec, pprime_build, pprime_spec
from .core import Params, SetFamily, format_family, read_family, write_family
from .errors import CapacityError, DomainError, InfeasibleError
from .exactsolve import BlockerInstance, has_s_matching, solve_blocker
from .formulas import (IDENTITIES, a3_size, appendix_identity, binom, blocker_bound,
                       certify_identity, coefficient_gap_sides, h_k, lambda_layer,
                       lambda_minus_a3, lambda_total, p_size, phi, pprime_size,
                       reduced_gap_sides, t_threshold, theta)
from .lemmalab import (deficit_completion_check, demo_deficit_instance,
                       verify_counting_claim, verify_low_layer_comparison)
from .search import e_exact, enumerate_extremal
from .tables import KINDS, build_table, render


class UsageError(Exception):
    pass


def _emit(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_strings(doc), indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(_strings(doc)):
        w.writerow([k, v])
    return buf.getvalue()


def _strings(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _strings(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strings(v) for v in obj]
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        val = "true" if obj is True else "false" if obj is False else obj
        yield prefix[:-1], val


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.verb} needs " + " ".join(f"--{n}" for n in missing))


def _params(args) -> Params:
    _need(args, "m", "s", "l")
    return Params(args.m, args.s, args.l)


def _hex_list(text: str) -> list[int]:
    try:
        return [int(x, 16) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--sets expects comma-separated hex masks, got {text!r}")


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_formulas(args) -> tuple[str, int]:
    p = _params(args)
    doc = dict(p.as_dict())
    doc["lambda_layers"] = [lambda_layer(p, j) for j in range(p.m + 1)]
    doc["lambda_total"] = lambda_total(p)
    doc["p_size"] = p_size(p)
    if p.m == 3:
        doc["a3_size"] = a3_size(p.s, p.l)
        doc["pprime_size"] = pprime_size(p.s, p.l)
        doc["lambda_minus_a3"] = lambda_minus_a3(p.s, p.l)
        t = t_threshold(p.s)
        doc["t_discriminant"] = t.disc
        doc["t_floor"] = t.floor()
        doc["t_integral"] = t.is_integer
        if p.n >= p.a + 3:
            doc["h3"] = h_k(p.n, p.a, 3)
    return _emit(doc, args.out), 0


def cmd_construct(args) -> tuple[str, int]:
    kind = args.what
    if kind == "p":
        p = _params(args)
        F = p_build(p_spec(p.m, p.s, p.l))
    elif kind == "pprime":
        _need(args, "s", "l")
        F = pprime_build(pprime_spec(args.s, args.l))
    else:
        p = _params(args)
        G = read_family(args.family) if args.family else SetFamily.empty(p.n)
        F = lift(G, p.m, p.n)
    if args.file:
        write_family(F, args.file)
        doc = {"construction": kind, "n": F.n, "size": len(F), "file": str(args.file)}
        return _emit(doc, args.out), 0
    return format_family(F), 0


def _verify_blocker(args):
    _need(args, "q", "t", "d")
    res = solve_blocker(BlockerInstance(args.q, args.t, args.d))
    bound = blocker_bound(args.q, args.t, args.d)
    doc = {"claim": "blocker", "instance": {"q": args.q, "t": args.t, "d": args.d},
           "lhs": res.min_blocker, "rhs": bound, "holds": res.min_blocker >= bound,
           "witnesses": {"max_family": res.max_family, "tight": res.min_blocker == bound}}
    return doc


def _family_or_p(args, p: Params) -> tuple[SetFamily, int]:
    spec = p_spec(p.m, p.s, p.l)
    F = read_family(args.file) if args.file else p_build(spec)
    A = int(args.cover, 16) if args.cover else spec.kernel
    return F, A


def _verify_counting(args):
    p = _params(args)
    F, A = _family_or_p(args, p)
    return verify_counting_claim(A, F, p, terminal=args.terminal).to_dict()


def _verify_deficit(args):
    p = _params(args)
    if args.file:
        if not args.sets:
            raise UsageError("verify deficit with --file also needs --sets")
        F, Q = read_family(args.file), _hex_list(args.sets)
    else:
        F, Q = demo_deficit_instance(p)
    return deficit_completion_check(F, Q, p).to_dict()


def _verify_lowlayer(args):
    p = _params(args)
    F, _ = _family_or_p(args, p)
    return verify_low_layer_comparison(F, p).to_dict()


def _verify_coeff(args):
    _need(args, "m")
    m = args.m
    lhs, rhs = coefficient_gap_sides(m)
    rl, rr = reduced_gap_sides(m)
    top = theta(m) - Fraction(1, 100)
    grid = [top * k / 100 for k in range(101)]
    phi_min = min(phi(m, al) for al in grid)
    return {"claim": "coefficient-comparison", "instance": {"m": m},
            "lhs": lhs, "rhs": rhs, "holds": lhs > rhs and rl > rr and phi_min > 0,
            "witnesses": {"reduced_lhs": rl, "reduced_rhs": rr, "theta": theta(m),
                          "phi_grid_points": len(grid), "phi_min": phi_min}}


def _verify_appendix(args):
    names = [args.identity] if args.identity else sorted(IDENTITIES)
    for name in names:
        if name not in IDENTITIES:
            raise DomainError(f"unknown identity {name!r}; choose from {sorted(IDENTITIES)}")
    checks = {}
    holds = True
    if args.s is not None:
        second = args.p if args.p is not None else args.l
        if second is None:
            raise UsageError("verify appendix at a point needs --s and --l (or --p)")
        for name in names:
            lhs, rhs = appendix_identity(name, args.s, second)
            checks[name] = {"s": args.s, "second": second, "lhs": lhs, "rhs": rhs}
            holds &= lhs == rhs
    else:
        anchors = {"good-emc": (10, 1), "h3-gap": (10, 1), "h3-gap-factor": (1, 1),
                   "case2-h3-1": (10, 4), "case2-h3-2": (10, 3), "case2-clique-1": (10, 4),
                   "case2-clique-2": (10, 3), "endpoint-cubic": (10, 1)}
        for name in names:
            ok, pts = certify_identity(name, *anchors[name])
            checks[name] = {"grid_points": pts, "equal": ok}
            holds &= ok
    return {"claim": "appendix-identities", "instance": {"identities": names},
            "lhs": None, "rhs": None, "holds": holds, "witnesses": checks}


def _verify_decomposition(args):
    if args.file:
        D = read_decomposition(args.file)
    else:
        _need(args, "q", "t")
        D = decompose(args.q, args.t)
    ok, why = verify_decomposition(D)
    return {"claim": "decomposition", "instance": {"q": D.q, "t": D.t},
            "lhs": len(D), "rhs": binom(D.q * D.t - 1, D.q - 1), "holds": ok,
            "witnesses": {"diagnostic": why}}


_VERIFIERS = {
    "blocker": _verify_blocker,
    "counting": _verify_counting,
    "deficit": _verify_deficit,
    "lowlayer": _verify_lowlayer,
    "coeff": _verify_coeff,
    "appendix": _verify_appendix,
    "decomposition": _verify_decomposition,
}


def cmd_verify(args) -> tuple[str, int]:
    doc = _VERIFIERS[args.what](args)
    return _emit(doc, args.out), 0 if doc["holds"] else 1


def cmd_baranyai(args) -> tuple[str, int]:
    _need(args, "q", "t")
    D = decompose(args.q, args.t)
    ok, why = verify_decomposition(D)
    text = to_json(D)
    if args.file:
        Path(args.file).write_text(text)
        text = _emit({"q": D.q, "t": D.t, "matchings": len(D), "verified": ok,
                      "file": str(args.file)}, args.out)
    if not ok:
        print(f"emk: decomposition failed verification: {why}", file=sys.stderr)
    return text, 0 if ok else 1


def cmd_search(args) -> tuple[str, int]:
    _need(args, "n", "s")
    res = e_exact(args.n, args.s)
    witnesses = enumerate_extremal(args.n, args.s) if args.enumerate else res.witnesses
    files = []
    if args.file:
        out = Path(args.file)
        out.mkdir(parents=True, exist_ok=True)
        for i, W in enumerate(witnesses):
            path = out / f"e_{args.n}_{args.s}_{i}.fam"
            write_family(W, path)
            files.append(path.name)
    ok = all(has_s_matching(W, args.s) is None and len(W) == res.value for W in witnesses)
    doc = {"n": args.n, "s": args.s, "value": res.value, "witness_files": files,
           "witnesses": [[format(x, "x") for x in W] for W in witnesses],
           "witnesses_verified": ok, "nodes": res.nodes}
    if args.timing:
        doc["seconds"] = f"{res.seconds:.3f}"
    return _emit(doc, args.out), 0 if ok else 1


def cmd_table(args) -> tuple[str, int]:
    lo = args.from_ if args.from_ is not None else args.s
    hi = args.to if args.to is not None else args.s
    if lo is None or hi is None:
        raise UsageError("table needs --s or --from/--to")
    cols, rows = build_table(args.kind, lo, hi)
    return render(args.kind, cols, rows, args.out), 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    for flag in ("m", "s", "l", "q", "t", "d", "n", "p"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--file", help="input or output path, depending on the verb")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emk", description="Exact tools for families without s pairwise disjoint sets.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("formulas", help="closed forms for (m, s, l)")
    _common(p)
    p.set_defaults(func=cmd_formulas)

    p = sub.add_parser("construct", help="build P, P' or a lifted family")
    p.add_argument("what", choices=("p", "pprime", "lift"))
    p.add_argument("--family", help="m-uniform family file to lift (default: empty)")
    _common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check one claim on an instance")
    p.add_argument("what", choices=sorted(_VERIFIERS))
    p.add_argument("--cover", help="hex mask of the cover A (counting, lowlayer)")
    p.add_argument("--sets", help="comma-separated hex masks of Q (deficit)")
    p.add_argument("--terminal", action="store_true", help="m = 3 form of the counting claim")
    p.add_argument("--identity", help="a single polynomial identity")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("baranyai", help="decompose all q-subsets of [qt] into perfect matchings")
    _common(p)
    p.set_defaults(func=cmd_baranyai)

    p = sub.add_parser("search", help="exact e(n, s)")
    p.add_argument("--enumerate", action="store_true", help="list every extremal class")
    p.add_argument("--timing", action="store_true", help="include wall time (not reproducible)")
    _common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="tabulate closed forms")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--from", dest="from_", type=int)
    p.add_argument("--to", type=int)
    _common(p)
    p.set_defaults(func=cmd_table)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _accel.thread_cap()
        text, code = args.func(args)
    except (UsageError, DomainError, CapacityError, InfeasibleError, ValueError, OSError) as exc:
        print(f"emk: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
