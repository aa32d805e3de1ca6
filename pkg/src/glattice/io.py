"""JSON formats for groups, subgroups, lattices, étale specs and sequences.

Permutations in files are 1-indexed image arrays.  A group may also be
given by name, e.g. {"name": "C2xC2"}.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .groups import FiniteGroup, Subgroup, hom_from_function, hom_from_generator_images, named_group
from .lattices import ExactSequenceOfLattices, GLattice, LatticeMap


def load_json(path) -> object:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from exc


def _to_plain(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_to_plain, ensure_ascii=False) + "\n"


def group_from_json(data) -> FiniteGroup:
    if isinstance(data, str):
        return named_group(data)
    if not isinstance(data, dict):
        raise InputError("group spec must be an object or a name")
    if "generators" not in data and "name" in data:
        return named_group(data["name"])
    return FiniteGroup.from_json(data)


def subgroup_from_json(data, G: FiniteGroup) -> Subgroup:
    """A list of 1-indexed permutations (elements or generators), "trivial" or "full"."""
    if isinstance(data, dict):
        data = data.get("elements", data.get("generators", data.get("subgroup")))
    if data == "trivial" or data == []:
        return G.trivial
    if data == "full":
        return G.full
    if not isinstance(data, list):
        raise InputError("subgroup spec must be a list of permutations")
    return G.subgroup_from_perms(data, one_indexed=True)


def subgroup_to_json(H: Subgroup) -> list:
    return [[x + 1 for x in H.parent.elements[i]] for i in H.indices]


def lattice_from_json(data, group: FiniteGroup | None = None) -> GLattice:
    if not isinstance(data, dict):
        raise InputError("lattice spec must be an object")
    g = data.get("group")
    if isinstance(g, dict) or (group is None and isinstance(g, str)):
        group = group_from_json(g)
    if group is None:
        raise InputError("lattice spec needs a group (embed it or pass one)")
    return GLattice.from_json(data, group)


def lattice_to_json(M: GLattice, embed_group: bool = True) -> dict:
    d = M.to_json()
    if embed_group:
        d["group"] = M.group.to_json()
    return d


def spec_from_json(data, cache: dict | None = None):
    """Étale spec: {"factors": [{"group", "subgroup", "multiplicity"}], "joint": {"group", "projections"}}.

    Without "joint", factors sharing one group description act through that
    group; otherwise the joint group is the direct product of the factor
    groups.  Each projection lists the images (1-indexed permutations) of the
    joint group's generators.  Specs parsed with a shared ``cache`` use one
    group object for identical group descriptions.
    """
    from .rationality import EtaleSpec

    try:
        facs = data["factors"]
    except (KeyError, TypeError) as exc:
        raise InputError("spec needs a list of factors") from exc
    if not facs:
        raise InputError("spec has no factors")
    cache = {} if cache is None else cache
    groups = []
    for f in facs:
        key = json.dumps(f["group"], sort_keys=True)
        if key not in cache:
            cache[key] = group_from_json(f["group"])
        groups.append(cache[key])
    factors = []
    for f, G in zip(facs, groups):
        H = subgroup_from_json(f.get("subgroup", "trivial"), G)
        factors.append((G, H, int(f.get("multiplicity", 1))))
    joint = data.get("joint")
    if joint is not None:
        J = group_from_json(joint["group"])
        projs = joint.get("projections")
        if projs is None or len(projs) != len(factors):
            raise InputError("joint group needs one projection per factor")
        homs = []
        for (G, _, _), imgs in zip(factors, projs):
            ims = [G.index[tuple(x - 1 for x in p)] if tuple(x - 1 for x in p) in G.index else None for p in imgs]
            if None in ims:
                raise InputError("projection image is not an element of the factor group")
            homs.append(hom_from_generator_images(J, G, ims))
        return EtaleSpec(factors, J, homs)
    distinct = list(dict.fromkeys(groups))
    if len(distinct) == 1:
        G = distinct[0]
        return EtaleSpec.over(G, [(H, m) for _, H, m in factors])
    return _product_spec(factors, distinct)


def _product_spec(factors, distinct):
    from .rationality import EtaleSpec

    offs, gens, deg = [], [], sum(G.degree for G in distinct)
    off = 0
    for G in distinct:
        offs.append(off)
        for g in G.generators:
            img = list(range(deg))
            for i, x in enumerate(g):
                img[off + i] = off + x
            gens.append(tuple(img))
        off += G.degree
    P = FiniteGroup(deg, gens, id="x".join(G.id for G in distinct))
    proj = {}
    for G, o in zip(distinct, offs):
        proj[id(G)] = hom_from_function(P, G, lambda g, o=o, d=G.degree: tuple(x - o for x in g[o:o + d]))
    return EtaleSpec(factors, P, [proj[id(G)] for G, _, _ in factors])


def sequence_from_json(data) -> ExactSequenceOfLattices:
    """{"group": ..., "terms": [lattice, ...], "maps": [matrix, ...]}; maps are not checked here."""
    try:
        G = group_from_json(data["group"])
        terms = [lattice_from_json(t, G) for t in data["terms"]]
        raw = data["maps"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"sequence spec missing field {exc}") from exc
    if len(raw) != len(terms) - 1:
        raise InputError("need one map between each pair of consecutive terms")
    maps = []
    for k, A in enumerate(raw):
        try:
            maps.append(LatticeMap(terms[k], terms[k + 1], np.array(A, dtype=np.int64).reshape(terms[k + 1].rank, terms[k].rank), check=False))
        except ValueError as exc:
            raise InputError(f"map {k} has the wrong shape") from exc
    return ExactSequenceOfLattices(terms, maps)


def sequence_to_json(E: ExactSequenceOfLattices) -> dict:
    return {
        "group": E.terms[0].group.to_json(),
        "terms": [lattice_to_json(T, embed_group=False) for T in E.terms],
        "maps": [f.matrix.tolist() for f in E.maps],
    }
