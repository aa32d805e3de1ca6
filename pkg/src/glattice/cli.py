"""Command-line front end.

Exit status: 0 on success, 1 on input or resource errors, 2 when --strict
is set and some verdict is "unknown".
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io
from .cohomology import H2_BOUND, h0, h1, h2, is_coflabby, is_flabby, sha2_omega_direct, tate_h0, tate_h_minus1
from .errors import InputError, ResourceError
from .groups import is_sylow_cyclic, prime_divisors, subgroups_up_to_conjugacy
from .lattices import chevalley_module, verify_exactness
from .rationality import (
    EtaleSpec,
    _common_gsets,
    classify_norm_one,
    hasse_text,
    render_markdown,
    sha2_omega,
    verify_tensor_splitting,
    verify_product_torus,
)
from .resolutions import permutation_order

COMMANDS = ("group-info", "lattice-cohomology", "pord", "classify", "tensor-check", "hasse", "verify-seq")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glattice", description="Exact computations with G-lattices and norm one tori.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", help="group JSON file")
    p.add_argument("--subgroup", help="subgroup JSON file")
    p.add_argument("--lattice", help="lattice JSON file")
    p.add_argument("--spec", action="append", default=[], help="étale spec JSON file (repeatable)")
    p.add_argument("--sequence", help="exact sequence JSON file")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $GLATTICE_SEED or 0)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bound-subgroups", type=int, default=512)
    p.add_argument("--bound-h2", type=int, default=H2_BOUND)
    p.add_argument("--trials", type=int, default=2000, help="witness search budget")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.add_argument("--strict", action="store_true", help="exit 2 on unknown verdicts")
    p.add_argument("--output", help="write the report here instead of stdout")
    return p


def resolve_seed(seed) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("GLATTICE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"GLATTICE_SEED is not an integer: {env!r}") from exc


def _need(args, *names):
    for n in names:
        if getattr(args, n) in (None, []):
            raise InputError(f"--{n.replace('_', '-')} is required for {args.command}")


def _group(args):
    _need(args, "group")
    return io.group_from_json(io.load_json(args.group))


def _lattice(args):
    _need(args, "lattice")
    data = io.load_json(args.lattice)
    G = _group(args) if args.group else None
    return io.lattice_from_json(data, G)


def _spec_from_args(args) -> list:
    if args.spec:
        cache: dict = {}
        return [io.spec_from_json(io.load_json(p), cache) for p in args.spec]
    G = _group(args)
    H = io.subgroup_from_json(io.load_json(args.subgroup), G) if args.subgroup else G.trivial
    return [EtaleSpec.over(G, [H])]


def _structure_md(title, rows) -> str:
    out = [f"## {title}", "", "| quantity | value |", "|---|---|"]
    out += [f"| {k} | {v} |" for k, v in rows]
    return "\n".join(out) + "\n"


def cmd_group_info(args):
    G = _group(args)
    classes = subgroups_up_to_conjugacy(G, args.bound_subgroups)
    rep = {
        "group": G.to_json(),
        "order": G.order,
        "abelian": G.is_abelian,
        "exponent": G.exponent,
        "primes": prime_divisors(G.order),
        "sylow_cyclic": is_sylow_cyclic(G),
        "subgroup_classes": [
            {"order": H.order, "normal": H.is_normal(), "cyclic": H.is_cyclic(), "generators": [[x + 1 for x in G.elements[g]] for g in H.gens]}
            for H in classes
        ],
    }
    md = _structure_md(G.id, [("order", G.order), ("abelian", rep["abelian"]), ("exponent", rep["exponent"]),
                              ("Sylow subgroups cyclic", rep["sylow_cyclic"]),
                              ("subgroup classes", len(classes)),
                              ("class orders", ", ".join(str(H.order) for H in classes))])
    return rep, md, False


def cmd_lattice_cohomology(args):
    M = _lattice(args)
    G = M.group
    H = io.subgroup_from_json(io.load_json(args.subgroup), G) if args.subgroup else None
    rows = {
        "H0_rank": h0(M, H)[0],
        "H1": h1(M, H, bound=args.bound_subgroups),
        "tate_H-1": tate_h_minus1(M, H),
        "tate_H0": tate_h0(M, H),
    }
    order = G.order if H is None else H.order
    if order <= args.bound_h2:
        rows["H2"] = h2(M, H, bound=args.bound_h2)
    if H is None:
        rows["flabby"] = is_flabby(M, args.bound_subgroups)
        rows["coflabby"] = is_coflabby(M, args.bound_subgroups)
    rep = {"lattice": io.lattice_to_json(M), **{k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in rows.items()}}
    md = _structure_md(f"{M.name or 'M'} over {G.id}", [(k, v) for k, v in rows.items()])
    return rep, md, False


def cmd_pord(args):
    M = _lattice(args)
    res = permutation_order(M, certificate=True, bound=args.bound_subgroups)
    rep = {"pord": res.order, "certificate": res.to_json(), "verified": res.verify()}
    md = _structure_md(f"permutation order over {M.group.id}", [("p-ord", res.order), ("certificate verified", rep["verified"])])
    return rep, md, False


def _classify_one(payload):
    spec, seed, trials, bound_h2, bound_sub = payload
    return classify_norm_one(spec, seed=seed, trials=trials, bound_h2=bound_h2, bound_subgroups=bound_sub)


def cmd_classify(args):
    specs = _spec_from_args(args)
    seed = resolve_seed(args.seed)
    payloads = [(s, seed, args.trials, args.bound_h2, args.bound_subgroups) for s in specs]
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_classify_one, payloads))
    else:
        reports = [_classify_one(p) for p in payloads]
    rep = {"reports": [r.to_json() for r in reports]}
    unknown = any(r.stably_rational == "unknown" for r in reports)
    return rep, render_markdown(reports), unknown


def cmd_hasse(args):
    specs = _spec_from_args(args)
    out, md = [], []
    for s in specs:
        X = s.gset()
        J, _ = chevalley_module(X)
        S = sha2_omega(J)
        d = {"group": X.group.id, "orbit_sizes": X.orbit_sizes, "sha2_omega": S.to_json(), "statement": hasse_text(S)}
        if X.group.order <= args.bound_h2:
            D = sha2_omega_direct(J, args.bound_h2)
            d["sha2_omega_direct"] = D.to_json()
            d["routes_agree"] = D == S
        out.append(d)
        md.append(f"- {X.group.id}, orbit sizes {X.orbit_sizes}: {hasse_text(S)}")
    return {"results": out}, "\n".join(md) + "\n", False


def cmd_tensor_check(args):
    if len(args.spec) != 2:
        raise InputError("tensor-check needs exactly two --spec files")
    cache: dict = {}
    A, B = (io.spec_from_json(io.load_json(p), cache) for p in args.spec)
    seed = resolve_seed(args.seed)
    G, X, Y = _common_gsets(A, B)
    split = verify_tensor_splitting(X, Y)
    prod = verify_product_torus(A, B, seed=seed, trials=args.trials, bound=args.bound_subgroups)
    rep = {"group": G.id, "splitting": split.to_json(), "flabby_bookkeeping": prod.to_json()}
    rows = [("image of f is I_{X×Y}", split.image_is_augmentation_ideal), ("coprime", split.coprime),
            ("isomorphism verified", split.verified)]
    if split.refused:
        rows.append(("refused", split.reason))
        rows.append(("order of the left half", split.nonsplit_order))
    if not prod.refused:
        rows += [("H^1 bookkeeping", prod.bookkeeping_h1), ("invertibility bookkeeping", prod.bookkeeping_invertibility),
                 ("consistent with the product theorem", prod.theorem_consistent)]
    unknown = any(v.get("stable") == "unknown" for v in prod.verdicts.values())
    return rep, _structure_md(f"tensor check over {G.id}", rows), unknown


def cmd_verify_seq(args):
    _need(args, "sequence")
    E = io.sequence_from_json(io.load_json(args.sequence))
    r = verify_exactness(E)
    md = "exact\n" if r.ok else f"not exact at node {r.failing_node}: {r.reason}\n"
    if not r.ok:
        raise InputError(f"sequence is not exact at node {r.failing_node}: {r.reason}", r.to_json(), md)
    return r.to_json(), md, False


HANDLERS = {
    "group-info": cmd_group_info,
    "lattice-cohomology": cmd_lattice_cohomology,
    "pord": cmd_pord,
    "classify": cmd_classify,
    "tensor-check": cmd_tensor_check,
    "hasse": cmd_hasse,
    "verify-seq": cmd_verify_seq,
}


def _emit(args, rep, md):
    text = io.dumps(rep) if args.format == "json" else md
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1 or args.bound_subgroups < 1 or args.bound_h2 < 1 or args.trials < 1:
        print("error: bounds, trials and jobs must be positive", file=sys.stderr)
        return 1
    try:
        rep, md, unknown = HANDLERS[args.command](args)
    except InputError as exc:
        if len(exc.args) == 3:
            _emit(args, exc.args[1], exc.args[2])
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(args, rep, md)
    if unknown and args.strict:
        print("unknown verdict under --strict", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
