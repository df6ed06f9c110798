"""Command-line front end: ``asepchain <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
errors.  Output is JSON (default) or plain text, always in a fixed order.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import reference as ref
from .ansatz import check_relations, transfer_psi
from .arborescence import (
    TreeCapExceeded,
    default_cap,
    enumerate_arborescences,
    mctt_measure,
    open_ratio_at_ones,
    psi_tree,
    psi_tree_at,
    ratio_q,
)
from .markov import (
    ChainError,
    Measure,
    check_global_balance,
    classify,
    chain_to_json,
    measure_to_json,
    stationary_compact,
)
from .models import (
    ModelError,
    build_model,
    check_partition,
    open_states,
    ring_stationary,
    rotation_class,
)
from .polyring import PolyError, exact_div, gcd_all
from .schubert import Permutation, schubert_poly, tasep_measure, verify_kw
from .tableaux import (
    enumerate_tableaux,
    psi_all_types,
    psi_tableaux,
    tableau_to_json,
)

MODELS = ("open3", "open5", "masep", "tasep", "example42")


class UsageError(Exception):
    pass


# -- helpers ---------------------------------------------------------------

def parse_parts(text: str | None):
    if text is None:
        return None
    try:
        return check_partition(int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --lambda {text!r}: {exc}") from None


def parse_point(text: str, names) -> dict[str, Fraction]:
    """``1,1,1`` (ring order) or ``alpha=1,beta=2,q=1``."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        if all("=" in s for s in items):
            point = {k.strip(): Fraction(v) for k, v in (s.split("=", 1) for s in items)}
        else:
            if len(items) != len(names):
                raise UsageError(f"--at needs {len(names)} values for {', '.join(names)}")
            point = dict(zip(names, map(Fraction, items)))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --at value {text!r}") from None
    missing = [n for n in names if n not in point]
    if missing:
        raise UsageError(f"--at does not cover {', '.join(missing)}")
    return point


def number(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def chain_for(args):
    if args.model == "example42":
        return ref.example_chain()
    if args.model in ("open3", "open5"):
        if args.n is None:
            raise UsageError(f"--model {args.model} needs --n")
        if not 1 <= args.n <= 8:
            raise UsageError("--n must be between 1 and 8")
        return build_model(args.model, n=args.n)
    parts = parse_parts(args.parts)
    if parts is None:
        raise UsageError(f"--model {args.model} needs --lambda")
    return build_model(args.model, parts=parts, with_y=getattr(args, "with_y", False))


def solve_chain(c, model: str) -> Measure:
    if model in ("masep", "tasep"):
        return ring_stationary(c)
    return stationary_compact(c)


def measure_payload(m: Measure, at: str | None) -> dict:
    if at is None:
        return {str(s): str(v) for s, v in zip(m.states, m.values)}
    point = parse_point(at, m.ring.names)
    return {str(s): number(v.evaluate(point)) for s, v in zip(m.states, m.values)}


def emit(obj, args) -> None:
    if args.format == "json":
        text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    else:
        text = "".join(_text_lines(obj))
    if args.out:
        path = Path(args.out)
        try:
            path.write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _flat(v) -> bool:
    return isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v)


def _text_lines(obj, indent: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _flat(v):
                yield f"{indent}{k}: [{', '.join(map(str, v))}]\n"
            elif isinstance(v, (dict, list)):
                yield f"{indent}{k}:\n"
                yield from _text_lines(v, indent + "  ")
            else:
                yield f"{indent}{k}: {v}\n"
    elif isinstance(obj, list):
        for v in obj:
            if _flat(v):
                yield f"{indent}- [{', '.join(map(str, v))}]\n"
            elif isinstance(v, (dict, list)):
                yield f"{indent}-\n"
                yield from _text_lines(v, indent + "  ")
            else:
                yield f"{indent}- {v}\n"
    else:
        yield f"{indent}{obj}\n"


# -- commands --------------------------------------------------------------

def cmd_solve(args) -> int:
    c = chain_for(args)
    emit(measure_payload(solve_chain(c, args.model), args.at), args)
    return 0


def cmd_export(args) -> int:
    c = chain_for(args)
    kind = args.measure or ("tree" if args.model == "example42" else "compact")
    m = mctt_measure(c) if kind == "tree" else solve_chain(c, args.model)
    if not args.out:
        raise UsageError("export needs --out DIR")
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        chain_file, measure_file = out / "chain.json", out / "measure.json"
        chain_file.write_text(json.dumps(chain_to_json(c), indent=2) + "\n")
        if args.at is None:
            data = measure_to_json(m)
        else:
            data = {"variables": list(m.ring.names), "at": args.at,
                    "states": [str(s) for s in m.states],
                    "values": measure_payload(m, args.at)}
        measure_file.write_text(json.dumps(data, indent=2) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write under {out}: {exc.strerror}") from None
    sys.stdout.write(f"{chain_file}\n{measure_file}\n")
    return 0


def cmd_tableaux(args) -> int:
    mode = args.mode
    if args.gf:
        if args.type:
            payload = {args.type: str(psi_tableaux(args.n, args.type, mode))}
        else:
            payload = {w: str(p) for w, p in psi_all_types(args.n, mode).items()}
    else:
        ts = enumerate_tableaux(args.n, mode, args.type)
        payload = {"count": len(ts),
                   "tableaux": [tableau_to_json(t, args.weights) for t in ts]}
    emit(payload, args)
    return 0


def cmd_ansatz(args) -> int:
    if args.check_relations:
        dim = args.dim if args.dim is not None else 10
        ok = check_relations(dim)
        emit({"dim": dim, "relations_hold": ok}, args)
        return 0 if ok else 1
    if args.state:
        emit({args.state: str(transfer_psi(args.state))}, args)
        return 0
    if args.n is None:
        raise UsageError("ansatz needs --n, --state or --check-relations")
    emit({w: str(transfer_psi(w)) for w in open_states(args.n)}, args)
    return 0


def _reference_measure(c, model: str, n: int | None):
    if model == "open3":
        psi = psi_all_types(n)
        return [psi[s] for s in c.states]
    return solve_chain(c, model).values


def cmd_trees(args) -> int:
    c = chain_for(args)
    names = c.ring.names
    point = parse_point(args.at, names) if args.at else None
    states = c.states
    if args.root is not None:
        root = _state_arg(c, args.root)
        payload = {"root": str(root)}
        if point is not None:
            payload["psi_tree"] = number(Fraction(psi_tree_at(c, root, point)))
        else:
            payload["psi_tree"] = str(psi_tree(c, root))
        if args.list:
            trees = enumerate_arborescences(c, root, args.cap)
            payload["arborescences"] = [
                {"edges": [[str(a), str(b)] for a, b in t.edges], "weight": str(t.weight(c))}
                for t in trees]
        emit(payload, args)
        return 0
    if point is not None:
        values = {str(s): number(Fraction(psi_tree_at(c, s, point))) for s in states}
    else:
        values = {str(s): str(v) for s, v in zip(states, mctt_measure(c).values)}
    payload = {"psi_tree": values}
    if args.ratio:
        reference = _reference_measure(c, args.model, args.n)
        if point is not None:
            ratios = {Fraction(psi_tree_at(c, s, point)) / r.evaluate(point)
                      for s, r in zip(states, reference)}
            payload["ratio"] = number(ratios.pop()) if len(ratios) == 1 else None
        else:
            payload["ratio"] = str(ratio_q(c, reference))
    emit(payload, args)
    return 0


def _state_arg(c, text: str):
    for s in c.states:
        if str(s) == text:
            return s
    raise UsageError(f"unknown state {text!r}")


def cmd_schubert(args) -> int:
    w = Permutation.parse(args.perm)
    emit({"perm": str(w), "schubert": str(schubert_poly(w))}, args)
    return 0


def cmd_verify_kw(args) -> int:
    if not 2 <= args.n <= 5:
        raise UsageError("verify-kw supports 2 <= n <= 5")
    report = verify_kw(args.n)
    emit(report, args)
    return 0 if report["ok"] else 1


# -- verify --table ----------------------------------------------------------

def _check(name, expected, computed) -> dict:
    return {"name": name, "expected": expected, "computed": computed,
            "pass": expected == computed}


def verify_table(table: int, max_n: int = 5) -> list[dict]:
    checks = []
    if table == 1:
        c = build_model("open3", n=2)
        m = stationary_compact(c)
        want = ref.parse_table(c.ring, ref.OPEN_N2)
        solved = {s: str(m[s]) for s in c.states}
        tab = {s: str(p) for s, p in psi_all_types(2).items()}
        ans = {s: str(transfer_psi(s)) for s in c.states}
        expected = {s: str(want[s]) for s in c.states}
        checks += [_check("solver", expected, solved), _check("tableaux", expected, tab),
                   _check("matrix ansatz", expected, ans)]
    elif table == 2:
        c = build_model("masep", parts=(4, 3, 2, 1))
        m = stationary_compact(c)
        want = ref.parse_table(c.ring, ref.MASEP_4321)
        checks.append(_check("listed states", {s: str(v) for s, v in want.items()},
                             {s: str(m[s]) for s in want}))
        rot = all(m[s] == m[rotation_class(s)] for s in c.states)
        checks.append(_check("rotation invariance", True, rot))
    elif table == 3:
        c, m = tasep_measure(4)
        want = ref.tasep_psi(m.ring)
        checks.append(_check("listed states", {s: str(v) for s, v in want.items()},
                             {s: str(m[s]) for s in want}))
        report = {e["state"]: e for e in verify_kw(4)["states"]}
        for state, (_, mono, factors) in ref.TASEP_4321.items():
            e = report[state]
            got = {"k": e["k"], "monomial": e.get("monomial"),
                   "factors": sorted(e.get("factors", []))}
            checks.append(_check(f"factorization {state}",
                                 {"k": len(factors), "monomial": mono, "factors": sorted(factors)},
                                 got))
    elif table == 4:
        c = ref.example_chain()
        m = mctt_measure(c)
        want = ref.parse_table(c.ring, ref.EXAMPLE_TREE_MEASURE)
        checks.append(_check("tree measure", {str(s): str(want[s]) for s in c.states},
                             {str(s): str(m[s]) for s in c.states}))
        weights = sorted(str(t.weight(c)) for t in enumerate_arborescences(c, 1))
        checks.append(_check("trees at root 1", sorted(ref.EXAMPLE_ROOT1_TREES), weights))
        cls = classify(m)
        checks.append(_check("classification", [True, False],
                             [cls.manifestly_positive, cls.compact]))
    elif table == 5:
        c = ref.example_chain()
        tree = mctt_measure(c)
        g = gcd_all(tree.values)
        checks.append(_check("common factor", ref.EXAMPLE_COMMON_FACTOR, str(g)))
        reduced = [exact_div(v, g) for v in tree.values]
        m = stationary_compact(c)
        want = ref.parse_table(c.ring, ref.EXAMPLE_COMPACT_MEASURE)
        expected = {str(s): str(want[s]) for s in c.states}
        checks.append(_check("tree measure / common factor", expected,
                             {str(s): str(v) for s, v in zip(c.states, reduced)}))
        checks.append(_check("solver", expected, {str(s): str(m[s]) for s in c.states}))
        checks.append(_check("global balance", True, check_global_balance(c, m)))
        cls = classify(m)
        checks.append(_check("classification", [False, True],
                             [cls.manifestly_positive, cls.compact]))
    elif table == 6:
        for n in range(2, max_n + 1):
            if n not in ref.TREE_RATIO_AT_ONES:
                raise UsageError(f"no reference value for n={n}")
            checks.append(_check(f"Q_{n}(1,1,1)", ref.TREE_RATIO_AT_ONES[n], open_ratio_at_ones(n)))
    else:
        raise UsageError("--table must be between 1 and 6")
    return checks


def cmd_verify(args) -> int:
    max_n = args.max_n if args.max_n is not None else 5
    checks = verify_table(args.table, max_n)
    ok = all(ch["pass"] for ch in checks)
    emit({"table": args.table, "checks": checks, "pass": ok}, args)
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asepchain",
                                description="Exact stationary measures of exclusion processes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", help="write output to this path")

    def model_args(sp, models=MODELS):
        sp.add_argument("--model", required=True, choices=models)
        sp.add_argument("--n", type=int, help="lattice size (open models)")
        sp.add_argument("--lambda", dest="parts", help="partition, e.g. 4,3,2,1 (ring models)")
        sp.add_argument("--with-y", action="store_true", help="TASEP rates x_a - y_b")
        sp.add_argument("--at", help="evaluate at a point: 1,1,1 or alpha=1,beta=1,q=1")

    sp = sub.add_parser("solve", help="compact stationary measure")
    model_args(sp, MODELS[:4])
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="reproduce a reference table")
    sp.add_argument("--table", type=int, required=True)
    sp.add_argument("--max-n", type=int)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export", help="write chain.json and measure.json")
    model_args(sp)
    sp.add_argument("--measure", choices=("compact", "tree"),
                    help="which measure to write (default: tree for example42, else compact)")
    common(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("tableaux", help="enumerate staircase tableaux")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=("ab", "abgd"), default="ab")
    sp.add_argument("--type", help="restrict to one type word (B/O)")
    sp.add_argument("--weights", action="store_true", help="include q boxes and weights")
    sp.add_argument("--gf", action="store_true", help="print weight generating functions")
    common(sp)
    sp.set_defaults(func=cmd_tableaux)

    sp = sub.add_parser("ansatz", help="transfer-matrix products")
    sp.add_argument("--n", type=int)
    sp.add_argument("--check-relations", action="store_true")
    sp.add_argument("--dim", type=int)
    sp.add_argument("--state", help="a B/O word")
    common(sp)
    sp.set_defaults(func=cmd_ansatz)

    sp = sub.add_parser("trees", help="tree-theorem measure")
    model_args(sp)
    sp.add_argument("--root")
    sp.add_argument("--list", action="store_true", help="list the arborescences at --root")
    sp.add_argument("--ratio", action="store_true",
                    help="quotient by the tableaux (open3) or solver measure")
    sp.add_argument("--cap", type=int, default=None,
                    help=f"enumeration cap (default {default_cap()}, env ASEPCHAIN_TREE_CAP)")
    common(sp)
    sp.set_defaults(func=cmd_trees)

    sp = sub.add_parser("schubert", help="Schubert polynomial of a permutation")
    sp.add_argument("--perm", required=True)
    common(sp)
    sp.set_defaults(func=cmd_schubert)

    sp = sub.add_parser("verify-kw", help="Schubert factorizations for the TASEP")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_verify_kw)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError, ChainError, PolyError, TreeCapExceeded, ValueError) as exc:
        print(f"asepchain: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
