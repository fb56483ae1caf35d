"""Batch command line: structure files in, verdicts and JSON reports out.

Exit codes: 0 for a definitive result (a computed value, Connected, or
Disconnected), 2 for Unknown (budget exhausted), 1 for input errors.  JSON
reports are canonical (sorted keys, big integers as decimal strings, no
volatile fields), so identical inputs produce byte-identical reports.
"""

import argparse
import json
import sys
import time

from . import horoball
from .words import format_word
from .presentations import load_structure, StructureError
from .cusped_space import (
    CuspedSpace, ConstantsLedger, compute_constants, toy_constants,
    build_ball, distance, ResourceBudget,
)
from .bm_checker import check_connectivity, ddagger
from .splittings import (
    SplitBudgets, TietzeBudget, check_multi_ended, exists_finite_splitting,
    dunwoody_decomposition, grushko_decomposition, edge_group_closure,
)

_TOY_FIELDS = {"delta", "C", "M", "k", "K", "K1", "R"}


def _load_toy(path):
    with open(path) as fh:
        doc = json.load(fh)
    unknown = set(doc) - _TOY_FIELDS
    if unknown:
        raise StructureError(f"unknown toy-constants field(s) {sorted(unknown)}",
                             sorted(unknown)[0])
    return toy_constants(doc)


def _ledger(args, structure=None):
    if getattr(args, "toy_constants", None):
        return _load_toy(args.toy_constants)
    delta = getattr(args, "delta", None)
    if delta is None and structure is not None:
        delta = structure.delta
    if delta is None:
        raise StructureError(
            "supply --delta, --toy-constants, or a structure with delta", "delta")
    return compute_constants(delta, K_iso=getattr(args, "iso", None))


def _structure(args):
    if not getattr(args, "structure", None):
        raise StructureError("supply --structure FILE", "structure")
    return load_structure(args.structure)


def encode_vertex(v, structure=None):
    names = structure.presentation.gen_names if structure else None
    if v[0] == "c":
        word = structure.oracle.key_word(v[1]) if structure else v[1]
        return {"kind": "cayley",
                "word": format_word(word, names) if names else list(word)}
    out = {"kind": "horoball", "parabolic": v[1], "coords": list(v[3]),
           "depth": v[4]}
    if structure:
        t_word = structure.oracle.key_word(v[2])
        out["transversal"] = format_word(t_word, names)
    else:
        out["transversal"] = list(v[2])
    return out


def decode_vertex(doc, structure):
    if doc["kind"] == "cayley":
        key = structure.oracle.normal_key(structure.presentation.parse(doc["word"]))
        return ("c", key)
    t = structure.oracle.normal_key(structure.presentation.parse(doc["transversal"]))
    return ("h", doc["parabolic"], t, tuple(doc["coords"]), doc["depth"])


def encode_splitting(gog, tables=None):
    out = {"vertices": [], "edges": []}
    for v in gog.vertices:
        out["vertices"].append({
            "generators": list(v.pres.gen_names),
            "relators": [v.pres.format(r) for r in v.pres.relators],
            "colour": v.colour,
            "ambient_images": [format_word(w) for w in v.gen_map],
        })
    for idx, e in enumerate(gog.edges):
        doc = {"ends": list(e.ends),
               "gens_in_first_end": [list(w) for w in e.gens_a],
               "gens_in_second_end": [list(w) for w in e.gens_b],
               "ambient_gens": [format_word(w) for w in e.ambient_gens]}
        if tables is not None and idx < len(tables):
            doc["edge_group_order"] = tables[idx].size
        out["edges"].append(doc)
    return out


def canonical_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_constants(args, report):
    ledger = _ledger(args)
    report["ledger"] = ledger.as_dict()
    lines = [f"delta = {ledger.delta}",
             f"C     = {ledger.C}",
             f"M     = {ledger.M}",
             f"k     = {ledger.k}",
             f"K     = {ledger.K}",
             f"R(n)  = {ledger.R_slope}*n + {ledger.R_intercept}"]
    if ledger.K1 is not None:
        lines.append(f"K1    = {ledger.K1}")
    if not ledger.certified:
        lines.append("note: uncertified constants"
                     + (" (toy override)" if ledger.toy else ""))
    return 0, lines


def cmd_ball(args, report):
    structure = _structure(args)
    space = CuspedSpace(structure)
    try:
        ball = build_ball(space, args.radius, max_vertices=args.ball_budget)
    except ResourceBudget as e:
        report["error"] = {"kind": "resource", "message": str(e),
                           "attained_radius": e.attained}
        return 2, [f"budget exceeded: {e} (attained radius {e.attained})"]
    verts = [encode_vertex(v, structure) for v in ball.vertices]
    index = {v: i for i, v in enumerate(ball.vertices)}
    report["ball"] = {
        "radius": args.radius,
        "vertex_count": len(ball),
        "vertices": verts,
        "distance": [ball.dist[v] for v in ball.vertices],
        "adjacency": [[index[w] for w in ball.adjacency[v]]
                      for v in ball.vertices],
    }
    return 0, [f"ball of radius {args.radius}: {len(ball)} vertices"]


def cmd_dist(args, report):
    structure = _structure(args)
    space = CuspedSpace(structure)
    x = ("c", structure.oracle.normal_key(structure.presentation.parse(args.frm)))
    y = ("c", structure.oracle.normal_key(structure.presentation.parse(args.to)))
    d = distance(space, x, y, args.bound)
    report["distance"] = {"from": args.frm, "to": args.to, "bound": args.bound,
                          "value": d if d is not None else "exceeds bound"}
    if d is None:
        return 2, [f"d({args.frm}, {args.to}) exceeds bound {args.bound}"]
    return 0, [f"d({args.frm}, {args.to}) = {d}"]


def _parse_hb_vertex(text):
    coords, _, depth = text.partition("@")
    point = tuple(int(t) for t in coords.split(","))
    return point, int(depth or "0")


def cmd_horoball(args, report):
    torsion = tuple(int(t) for t in args.torsion.split(",")) if args.torsion else ()
    base = horoball.LatticeBase(args.rank, torsion, box=args.box)
    v = _parse_hb_vertex(args.vertex)
    base.check_point(v[0])
    nbrs = horoball.neighbors(v, base)
    report["probe"] = {"vertex": [list(v[0]), v[1]],
                       "neighbors": [[list(p), d] for p, d in nbrs]}
    lines = [f"vertex {v}: {len(nbrs)} neighbors"]
    if args.to:
        w = _parse_hb_vertex(args.to)
        base.check_point(w[0])
        d = horoball.horoball_distance(v, w, base)
        geo = horoball.horoball_geodesic(v, w, base)
        report["probe"]["to"] = [list(w[0]), w[1]]
        report["probe"]["distance"] = d
        report["probe"]["geodesic"] = [[list(p), dd] for p, dd in geo]
        lines.append(f"d({v}, {w}) = {d}")
        lines.append("geodesic: " + " -> ".join(str(p) for p in geo))
    return 0, lines


def cmd_check_connectivity(args, report):
    structure = _structure(args)
    ledger = _ledger(args, structure)
    space = CuspedSpace(structure)
    verdict = check_connectivity(space, ledger, args.n_start, args.n_budget,
                                 ball_budget=args.ball_budget)
    report["ledger"] = ledger.as_dict()
    report["certified"] = verdict.certified
    report["verdict"] = verdict.kind
    report["detail"] = verdict.report
    lines = [f"verdict: {verdict.kind}"]
    if verdict.kind == "connected":
        lines.append(f"all near-pairs pass at n = {verdict.n}")
    if verdict.witness is not None:
        x, y = verdict.witness
        # revalidate the violating pair before reporting it
        radius = ledger.R(args.n_budget) + args.n_budget
        ball = build_ball(space, radius, max_vertices=args.ball_budget)
        holds, _ = ddagger(ball, x, y, 10 * ledger.delta, args.n_budget, ledger)
        if holds:
            raise RuntimeError("violating pair failed revalidation")
        report["violating_pair"] = [encode_vertex(x, structure),
                                    encode_vertex(y, structure)]
        lines.append(f"violating pair: {x} | {y}")
    if not verdict.certified:
        lines.append("note: uncertified run"
                     + (" (toy constants)" if ledger.toy else ""))
    return verdict.exit_code(), lines


def _split_budgets(args):
    return SplitBudgets(
        tietze=TietzeBudget(moves=args.tietze_moves,
                            word_length=args.word_length,
                            count=args.count),
        closure=args.closure_budget,
        conj=args.conj_budget,
        n_start=getattr(args, "n_start", 1),
        n_budget=getattr(args, "n_budget", 0),
        ball_budget=getattr(args, "ball_budget", 200000),
        recursion=getattr(args, "recursion", 4),
    )


def _validated_splitting_report(verdict, structure, report):
    gog, tables, item = verdict.witness
    # the witness must revalidate: every relator of the presentation it was
    # found in maps to the identity, and the edge tables are closed
    oracle = structure.oracle
    for r in item.pres.relators:
        if not oracle.is_trivial(item.to_ambient(r)):
            raise RuntimeError("witness presentation failed revalidation")
    for e, t in zip(gog.edges, tables):
        again = edge_group_closure(e.ambient_gens, oracle, t.size + 1)
        if again is None or again.size != t.size:
            raise RuntimeError("witness edge table failed revalidation")
    report["witness"] = encode_splitting(gog, tables)
    report["witness"]["found_in"] = {
        "generators": list(item.pres.gen_names),
        "relators": [item.pres.format(r) for r in item.pres.relators],
        "tietze_moves": [m.kind for m in item.moves],
    }


def cmd_find_splitting(args, report):
    structure = _structure(args)
    budgets = _split_budgets(args)
    verdict = check_multi_ended(structure.presentation, structure.oracle,
                                budgets)
    report["verdict"] = verdict.kind
    report["detail"] = verdict.report
    lines = [f"verdict: {verdict.kind}"]
    if verdict.kind == "disconnected":
        _validated_splitting_report(verdict, structure, report)
        gog = verdict.witness[0]
        lines.append("splitting over a finite group: "
                     + " * ".join(str(v.pres.gen_names) for v in gog.vertices))
    return verdict.exit_code(), lines


def cmd_decide_connectivity(args, report):
    structure = _structure(args)
    ledger = _ledger(args, structure)
    budgets = _split_budgets(args)
    verdict = exists_finite_splitting(structure, ledger, budgets)
    report["ledger"] = ledger.as_dict()
    report["certified"] = verdict.certified
    report["verdict"] = verdict.kind
    report["detail"] = verdict.report
    lines = [f"verdict: {verdict.kind}"]
    if verdict.kind == "disconnected" and verdict.witness is not None:
        _validated_splitting_report(verdict, structure, report)
        lines.append("boundary disconnected: nontrivial splitting over a "
                     "finite group found")
    if verdict.kind == "connected":
        lines.append("boundary connected" +
                     ("" if verdict.certified else " (UNCERTIFIED: toy constants)"))
    if not verdict.certified and verdict.kind != "unknown":
        lines.append("note: uncertified verdict")
    return verdict.exit_code(), lines


def _decomposition_report(dec, report, label):
    report[label] = encode_splitting(dec.gog, dec.edge_tables or None)
    report[label]["complete"] = dec.complete
    report[label]["leaves"] = [[i, status] for i, status in dec.leaf_status]
    lines = [f"{label}: {len(dec.gog.vertices)} vertices, "
             f"{len(dec.gog.edges)} edges"
             + ("" if dec.complete else " (incomplete: unknown leaves remain)")]
    for v in dec.gog.vertices:
        rel = ", ".join(v.pres.format(r) for r in v.pres.relators) or "-"
        lines.append(f"  vertex <{' '.join(v.pres.gen_names)} | {rel}>")
    return lines


def cmd_dunwoody(args, report):
    structure = _structure(args)
    ledger = _ledger(args, structure)
    dec = dunwoody_decomposition(structure, ledger, _split_budgets(args))
    lines = _decomposition_report(dec, report, "dunwoody")
    return 0 if dec.complete else 2, lines


def cmd_grushko(args, report):
    structure = _structure(args)
    ledger = _ledger(args, structure)
    dec = grushko_decomposition(structure, ledger, _split_budgets(args))
    lines = _decomposition_report(dec, report, "grushko")
    lines.append(f"free factors: {len(dec.gog.vertices)}")
    return 0 if dec.complete else 2, lines


# ---------------------------------------------------------------------------


def _add_common(sub, budgets=False, ledger=False):
    sub.add_argument("--structure", help="structure JSON file")
    sub.add_argument("--json", dest="json_out", help="write the JSON report here")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for sampling operations")
    if ledger:
        sub.add_argument("--delta", type=int)
        sub.add_argument("--iso", type=int, dest="iso",
                         help="isoperimetric constant (sets K1)")
        sub.add_argument("--toy-constants", dest="toy_constants",
                         help="JSON file of small override constants")
    if budgets:
        sub.add_argument("--tietze-moves", type=int, default=1)
        sub.add_argument("--word-length", type=int, default=6)
        sub.add_argument("--count", type=int, default=50)
        sub.add_argument("--closure-budget", type=int, default=64)
        sub.add_argument("--conj-budget", type=int, default=1)
        sub.add_argument("--recursion", type=int, default=4)
        sub.add_argument("--n-start", type=int, default=1)
        sub.add_argument("--n-budget", type=int, default=0)
        sub.add_argument("--ball-budget", type=int, default=200000)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cuspkit",
        description="cusped spaces, exact constants, and splitting detection "
                    "for relatively hyperbolic groups with abelian peripherals")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("constants", help="exact constants ledger")
    _add_common(s, ledger=True)

    s = subs.add_parser("ball", help="materialize a ball of the cusped space")
    _add_common(s)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--ball-budget", type=int, default=200000)

    s = subs.add_parser("dist", help="distance between two group elements")
    _add_common(s)
    s.add_argument("--from", dest="frm", required=True)
    s.add_argument("--to", required=True)
    s.add_argument("--bound", type=int, required=True)

    s = subs.add_parser("horoball", help="horoball diagnostics")
    hsubs = s.add_subparsers(dest="horoball_command", required=True)
    p = hsubs.add_parser("probe", help="neighbors / distance / geodesic")
    _add_common(p)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--torsion", default="", help="comma-separated orders")
    p.add_argument("--box", type=int, default=None)
    p.add_argument("--vertex", required=True, help='e.g. "0,0@2"')
    p.add_argument("--to", default=None)

    s = subs.add_parser("check-connectivity",
                        help="pair-condition connectivity semi-decision")
    _add_common(s, ledger=True)
    s.add_argument("--n-start", type=int, default=1)
    s.add_argument("--n-budget", type=int, required=True)
    s.add_argument("--ball-budget", type=int, default=200000)

    for name, helptext in (("find-splitting", "detect a splitting over a finite group"),
                           ("decide-connectivity", "combined boundary-connectivity decision"),
                           ("dunwoody", "iterated splitting over finite groups"),
                           ("grushko", "free-product decomposition")):
        s = subs.add_parser(name, help=helptext)
        _add_common(s, budgets=True, ledger=True)
    return parser


_HANDLERS = {
    "constants": cmd_constants,
    "ball": cmd_ball,
    "dist": cmd_dist,
    "horoball": cmd_horoball,
    "check-connectivity": cmd_check_connectivity,
    "find-splitting": cmd_find_splitting,
    "decide-connectivity": cmd_decide_connectivity,
    "dunwoody": cmd_dunwoody,
    "grushko": cmd_grushko,
}


def _echo_args(argv):
    """The invocation without the report destination (the destination is not
    an input of the computation, and reports must be byte-reproducible)."""
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--json":
            skip = True
            continue
        out.append(a)
    return out


def run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"command": _echo_args(argv)}
    started = time.monotonic()
    try:
        code, lines = _HANDLERS[args.command](args, report)
    except StructureError as e:
        field = f" (field: {e.field_name})" if e.field_name else ""
        print(f"input error: {e}{field}", file=sys.stderr)
        return 1, None
    except FileNotFoundError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 1, None
    except ResourceBudget as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 2, None
    report["exit_code"] = code
    for line in lines:
        print(line)
    # wall-clock time goes to stderr only: JSON reports stay byte-identical
    print(f"elapsed: {time.monotonic() - started:.3f}s", file=sys.stderr)
    if args.json_out:
        text = canonical_json(report)
        if args.json_out == "-":
            sys.stdout.write(text)
        else:
            with open(args.json_out, "w") as fh:
                fh.write(text)
    return code, report


def main():
    code, _ = run(sys.argv[1:])
    raise SystemExit(code)


if __name__ == "__main__":
    main()
