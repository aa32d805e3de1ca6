"""Finite permutation groups, subgroups, G-sets and subdirect products.

Permutations are stored 0-indexed as image tuples; (g*h)(x) = g(h(x)).
JSON and user-facing input use 1-indexed image lists.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, gcd

from .errors import InputError, ResourceError

DEFAULT_SUBGROUP_BOUND = 512

Perm = tuple


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[x] for x in h)


def invert(g: Perm) -> Perm:
    inv = [0] * len(g)
    for x, y in enumerate(g):
        inv[y] = x
    return tuple(inv)


def _check_perm(p, degree: int, one_indexed: bool) -> Perm:
    try:
        imgs = [int(x) - (1 if one_indexed else 0) for x in p]
    except (TypeError, ValueError) as exc:
        raise InputError(f"permutation {p!r} is not a list of integers") from exc
    if len(imgs) != degree or sorted(imgs) != list(range(degree)):
        base = 1 if one_indexed else 0
        raise InputError(f"{list(p)!r} is not a bijection of {{{base}..{degree - 1 + base}}}")
    return tuple(imgs)


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation like "(1 2)(3 4 5)" into a 0-indexed image tuple."""
    img = list(range(degree))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) - 1 for x in re.split(r"[ ,]+", cyc.strip()) if x]
        if any(not 0 <= x < degree for x in pts) or len(set(pts)) != len(pts):
            raise InputError(f"bad cycle ({cyc}) for degree {degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


class FiniteGroup:
    """A permutation group given by generators.

    Elements are sorted lexicographically by image tuple, so the identity
    always has index 0 and every derived matrix is reproducible.
    """

    def __init__(self, degree: int, generators, id: str | None = None, *, one_indexed: bool = False):
        if degree < 1:
            raise InputError("degree must be positive")
        gens = [_check_perm(g, degree, one_indexed) for g in generators]
        self.degree = degree
        self.generators: list[Perm] = gens
        self._id = id

    @property
    def id(self) -> str:
        return self._id or f"G{self.order}_d{self.degree}"

    def __repr__(self):
        return f"FiniteGroup({self.id}, order={self.order})"

    @cached_property
    def elements(self) -> list[Perm]:
        e = tuple(range(self.degree))
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.generators:
                    y = compose(s, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    @cached_property
    def index(self) -> dict[Perm, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    @cached_property
    def gen_indices(self) -> list[int]:
        return [self.index[g] for g in self.generators]

    @cached_property
    def table(self) -> list[list[int]]:
        idx = self.index
        els = self.elements
        return [[idx[compose(g, h)] for h in els] for g in els]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inverse(self) -> list[int]:
        idx = self.index
        return [idx[invert(g)] for g in self.elements]

    @cached_property
    def _bfs(self):
        tree: list = [None] * self.order
        order = [0]
        seen = {0}
        t = self.table
        for j in order:
            for s, gi in enumerate(self.gen_indices):
                i = t[gi][j]
                if i not in seen:
                    seen.add(i)
                    tree[i] = (s, j)
                    order.append(i)
        return tree, order

    @property
    def words(self) -> list:
        """BFS tree over the Cayley graph: words[i] = (s, j) with e_i = gen_s * e_j."""
        return self._bfs[0]

    @property
    def bfs_order(self) -> list[int]:
        """Element indices in BFS order, so parents come before children."""
        return self._bfs[1]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[i][x]
            k += 1
        return k

    def power(self, i: int, k: int) -> int:
        x = 0
        for _ in range(k):
            x = self.table[i][x]
        return x

    @cached_property
    def is_abelian(self) -> bool:
        gi = self.gen_indices
        return all(self.table[a][b] == self.table[b][a] for a in gi for b in gi)

    @cached_property
    def exponent(self) -> int:
        e = 1
        for i in range(self.order):
            k = self.element_order(i)
            e = e * k // gcd(e, k)
        return e

    def conjugate_mask(self, mask: int, g: int) -> int:
        t, ginv = self.table, self.inverse[g]
        out = 0
        for i in _bits(mask):
            out |= 1 << t[t[g][i]][ginv]
        return out

    def closure(self, gens, start_mask: int = 1) -> int:
        """Bitmask of the subgroup generated by element indices ``gens``
        together with the subgroup ``start_mask``."""
        t = self.table
        gens = [g for g in gens if not (start_mask >> g) & 1]
        if not gens:
            return start_mask
        base = list(_bits(start_mask))
        gens = base + gens
        mask = start_mask | 1
        frontier = list(_bits(mask))
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = t[s][x]
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def subgroup(self, elements=None, *, gens=None, mask: int | None = None) -> "Subgroup":
        """Subgroup from element indices, generating indices, or a bitmask."""
        if mask is None:
            if gens is not None:
                mask = self.closure(list(gens))
            else:
                mask = 0
                for i in elements:
                    mask |= 1 << i
                if not is_subgroup_mask(self, mask):
                    raise InputError("element set is not a subgroup")
        return Subgroup(self, mask)

    def subgroup_from_perms(self, perms, one_indexed: bool = True) -> "Subgroup":
        idx = []
        for p in perms:
            q = _check_perm(p, self.degree, one_indexed)
            if q not in self.index:
                raise InputError(f"{list(p)!r} is not an element of {self.id}")
            idx.append(self.index[q])
        return self.subgroup(gens=idx)

    @cached_property
    def full(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [[x + 1 for x in g] for g in self.generators],
            "id": self.id,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        try:
            return cls(int(data["degree"]), data["generators"], data.get("id"), one_indexed=True)
        except KeyError as exc:
            raise InputError(f"group spec missing field {exc}") from exc


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def is_subgroup_mask(G: FiniteGroup, mask: int) -> bool:
    if not mask & 1:
        return False
    els = list(_bits(mask))
    t = G.table
    return all((mask >> t[a][b]) & 1 for a in els for b in els)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    mask: int

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.id})"

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self):
        return self.order

    def __contains__(self, i: int) -> bool:
        return bool((self.mask >> i) & 1)

    @property
    def elements(self) -> list[Perm]:
        return [self.parent.elements[i] for i in self.indices]

    @cached_property
    def gens(self) -> list[int]:
        """A small generating set (greedy, by element index)."""
        G = self.parent
        # elements of largest order first tend to give short generating sets
        cand = sorted(self.indices[1:], key=lambda i: (-G.element_order(i), i))
        gens: list[int] = []
        cur = 1
        for i in cand:
            if cur == self.mask:
                break
            if not (cur >> i) & 1:
                gens.append(i)
                cur = G.closure([i], cur)
        return gens

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conjugate_mask(self.mask, g) == self.mask for g in G.gen_indices)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def as_group(self) -> FiniteGroup:
        gens = [self.parent.elements[i] for i in self.gens] or [tuple(range(self.parent.degree))]
        return FiniteGroup(self.parent.degree, gens, id=f"{self.parent.id}_sub{self.order}")

    def is_cyclic(self) -> bool:
        G = self.parent
        return any(G.element_order(i) == self.order for i in self.indices)

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, self.parent.conjugate_mask(self.mask, g))

    def to_json(self) -> list:
        return [[x + 1 for x in self.parent.elements[i]] for i in self.gens]


def group_from_generators(degree: int, gens, id: str | None = None, one_indexed: bool = True) -> FiniteGroup:
    G = FiniteGroup(degree, gens, id, one_indexed=one_indexed)
    if factorial(degree) % G.order:
        raise InputError("generated set does not form a group")  # pragma: no cover
    return G


def _cyclic_masks(G: FiniteGroup) -> list[int]:
    seen = set()
    out = []
    for i in range(G.order):
        m = G.closure([i])
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


def _class_of(G: FiniteGroup, mask: int) -> set[int]:
    return {G.conjugate_mask(mask, g) for g in range(G.order)}


def subgroups_up_to_conjugacy(G: FiniteGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[Subgroup]:
    """One representative per conjugacy class, sorted by order then mask."""
    if G.order > bound:
        raise ResourceError(f"|G| = {G.order} exceeds subgroup bound {bound}")
    cache = G.__dict__.setdefault("_subgroup_cache", {})
    if "classes" in cache:
        return cache["classes"]
    cyclic = _cyclic_masks(G)
    seen: set[int] = set()
    reps: list[int] = []
    frontier = []
    for m in cyclic:
        if m not in seen:
            seen |= _class_of(G, m)
            reps.append(m)
            frontier.append(m)
    while frontier:
        nxt = []
        for a in frontier:
            for c in cyclic:
                if c & a == c:
                    continue
                j = G.closure(list(_bits(c)), a)
                if j not in seen:
                    seen |= _class_of(G, j)
                    reps.append(j)
                    nxt.append(j)
        frontier = nxt
    reps.sort(key=lambda m: (bin(m).count("1"), m))
    out = [Subgroup(G, m) for m in reps]
    cache["classes"] = out
    return out


def all_subgroups(G: FiniteGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[Subgroup]:
    masks = set()
    for H in subgroups_up_to_conjugacy(G, bound):
        masks |= _class_of(G, H.mask)
    return [Subgroup(G, m) for m in sorted(masks, key=lambda m: (bin(m).count("1"), m))]


def normal_subgroups(G: FiniteGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[Subgroup]:
    return [H for H in subgroups_up_to_conjugacy(G, bound) if H.is_normal()]


def cyclic_subgroups_up_to_conjugacy(G: FiniteGroup) -> list[Subgroup]:
    seen: set[int] = set()
    out = []
    for m in sorted(_cyclic_masks(G), key=lambda m: (bin(m).count("1"), m)):
        if m not in seen:
            seen |= _class_of(G, m)
            out.append(Subgroup(G, m))
    return out


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def prime_divisors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one step at a time inside normalizers."""
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    target = 1
    n = G.order
    while n % p == 0:
        n //= p
        target *= p
    mask = 1
    size = 1
    while size < target:
        for x in range(1, G.order):
            if (mask >> x) & 1:
                continue
            if G.conjugate_mask(mask, x) != mask:
                continue
            if not (mask >> G.power(x, p)) & 1:
                continue
            mask = G.closure([x], mask)
            size = bin(mask).count("1")
            break
        else:  # pragma: no cover - Sylow's theorem
            raise AssertionError("no p-element in normalizer")
    return Subgroup(G, mask)


def is_sylow_cyclic(G: FiniteGroup) -> bool:
    return all(sylow_subgroup(G, p).is_cyclic() for p in prime_divisors(G.order))


class GSet:
    """A finite G-set; ``table[g][x]`` is the image of point x under element g."""

    def __init__(self, group: FiniteGroup, points, table):
        self.group = group
        self.points = list(points)
        self.table = [list(row) for row in table]
        if len(self.table) != group.order or any(len(r) != len(self.points) for r in self.table):
            raise InputError("action table has the wrong shape")

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"GSet({self.group.id}, orbits={self.orbit_sizes})"

    def act(self, g: int, x: int) -> int:
        return self.table[g][x]

    @cached_property
    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(len(self.points)):
            if x in seen:
                continue
            orb = sorted({self.table[g][x] for g in range(self.group.order)})
            seen.update(orb)
            out.append(orb)
        return out

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    def stabilizer(self, x: int) -> Subgroup:
        mask = 0
        for g in range(self.group.order):
            if self.table[g][x] == x:
                mask |= 1 << g
        return Subgroup(self.group, mask)

    def check(self) -> None:
        G = self.group
        n = len(self.points)
        if self.table[0] != list(range(n)):
            raise InputError("identity does not act trivially")
        for a in G.gen_indices:
            for b in range(G.order):
                ab = G.table[a][b]
                for x in range(n):
                    if self.table[ab][x] != self.table[a][self.table[b][x]]:
                        raise InputError("table is not an action")
            if sorted(self.table[a]) != list(range(n)):
                raise InputError("generator does not act bijectively")

    def fixed_count(self, H: Subgroup) -> int:
        return sum(1 for x in range(len(self.points)) if all(self.table[h][x] == x for h in H.gens))

    def restrict_to_orbits(self, orbits) -> "GSet":
        pts = [x for o in orbits for x in o]
        pos = {x: i for i, x in enumerate(pts)}
        table = [[pos[row[x]] for x in pts] for row in self.table]
        return GSet(self.group, [self.points[x] for x in pts], table)

    def product(self, other: "GSet") -> "GSet":
        """X × Y with the diagonal action; points ordered row-major."""
        if other.group is not self.group:
            raise InputError("G-sets over different groups")
        n2 = len(other)
        pts = [(a, b) for a in self.points for b in other.points]
        table = [[ra[i] * n2 + rb[j] for i in range(len(self)) for j in range(n2)] for ra, rb in zip(self.table, other.table)]
        return GSet(self.group, pts, table)

    def pullback(self, hom: "GroupHom") -> "GSet":
        if hom.target is not self.group:
            raise InputError("homomorphism does not land in the acting group")
        return GSet(hom.source, self.points, [self.table[hom.images[g]] for g in range(hom.source.order)])

    def disjoint_union(self, other: "GSet") -> "GSet":
        if other.group is not self.group:
            raise InputError("G-sets over different groups")
        n = len(self)
        pts = [(0, p) for p in self.points] + [(1, p) for p in other.points]
        table = [ra + [n + y for y in rb] for ra, rb in zip(self.table, other.table)]
        return GSet(self.group, pts, table)

    def __mul__(self, other):
        return self.product(other)


def coset_gset(G: FiniteGroup, H: Subgroup) -> GSet:
    """Left cosets gH with left translation; the coset of the identity comes first."""
    if H.parent is not G:
        raise InputError("subgroup belongs to a different group")
    t = G.table
    coset_of = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            c = len(reps)
            reps.append(g)
            for h in H.indices:
                coset_of[t[g][h]] = c
    table = [[coset_of[t[g][r]] for r in reps] for g in range(G.order)]
    X = GSet(G, [f"g{r}H" for r in reps], table)
    X.reps = reps
    X.stabilizer_of_base = H
    return X


def regular_gset(G: FiniteGroup) -> GSet:
    return coset_gset(G, G.trivial)


def trivial_gset(G: FiniteGroup, n: int = 1) -> GSet:
    return GSet(G, list(range(n)), [list(range(n)) for _ in range(G.order)])


def natural_gset(G: FiniteGroup) -> GSet:
    return GSet(G, list(range(1, G.degree + 1)), [list(g) for g in G.elements])


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def image_of(self, H: Subgroup) -> Subgroup:
        mask = 0
        for i in H.indices:
            mask |= 1 << self.images[i]
        return Subgroup(self.target, mask)

    def preimage(self, K: Subgroup) -> Subgroup:
        mask = 0
        for i, j in enumerate(self.images):
            if (K.mask >> j) & 1:
                mask |= 1 << i
        return Subgroup(self.source, mask)

    @cached_property
    def kernel(self) -> Subgroup:
        return self.preimage(self.target.trivial)


def hom_from_function(G: FiniteGroup, T: FiniteGroup, fn) -> GroupHom:
    """Homomorphism given by a function on permutations; verified on all products with generators."""
    imgs = []
    for g in G.elements:
        h = fn(g)
        if h not in T.index:
            raise InputError("map does not land in the target group")
        imgs.append(T.index[h])
    hom = GroupHom(G, T, tuple(imgs))
    _check_hom(hom)
    return hom


def hom_from_generator_images(G: FiniteGroup, T: FiniteGroup, gen_images) -> GroupHom:
    imgs = [None] * G.order
    imgs[0] = 0
    gi = [T.index[tuple(x)] if not isinstance(x, int) else x for x in gen_images]
    for i in G.bfs_order[1:]:
        s, j = G.words[i]
        imgs[i] = T.table[gi[s]][imgs[j]]
    hom = GroupHom(G, T, tuple(imgs))
    _check_hom(hom)
    return hom


def _check_hom(hom: GroupHom) -> None:
    G, T = hom.source, hom.target
    im = hom.images
    for a in G.gen_indices:
        for b in range(G.order):
            if im[G.table[a][b]] != T.table[im[a]][im[b]]:
                raise InputError("map is not a group homomorphism")


class DirectProduct(FiniteGroup):
    """G1 × G2 acting on the disjoint union of the two point sets."""

    def __init__(self, G1: FiniteGroup, G2: FiniteGroup, id: str | None = None):
        d1, d2 = G1.degree, G2.degree
        e1, e2 = tuple(range(d1)), tuple(range(d2))
        gens = [g + tuple(x + d1 for x in e2) for g in G1.generators]
        gens += [e1 + tuple(x + d1 for x in g) for g in G2.generators]
        super().__init__(d1 + d2, gens, id or f"{G1.id}x{G2.id}")
        self.factors = (G1, G2)

    @cached_property
    def projections(self) -> tuple[GroupHom, GroupHom]:
        G1, G2 = self.factors
        d1 = G1.degree
        p1 = GroupHom(self, G1, tuple(G1.index[g[:d1]] for g in self.elements))
        p2 = GroupHom(self, G2, tuple(G2.index[tuple(x - d1 for x in g[d1:])] for g in self.elements))
        return p1, p2

    def pair(self, i: int, j: int) -> int:
        G1, G2 = self.factors
        d1 = G1.degree
        return self.index[G1.elements[i] + tuple(x + d1 for x in G2.elements[j])]


def direct_product(G1: FiniteGroup, G2: FiniteGroup, id: str | None = None) -> DirectProduct:
    return DirectProduct(G1, G2, id)


@dataclass(eq=False)
class SubdirectProduct:
    factors: tuple[FiniteGroup, FiniteGroup]
    group: FiniteGroup
    projections: tuple[GroupHom, GroupHom]
    triple: tuple = field(default=None, repr=False)

    def __post_init__(self):
        for p, F in zip(self.projections, self.factors):
            if p.source is not self.group or p.target is not F or not p.is_surjective():
                raise InputError("projection is not a surjection onto the factor")


def _quotient(G: FiniteGroup, N: Subgroup):
    """Cosets of a normal subgroup: (coset index per element, representatives)."""
    t = G.table
    coset_of = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            c = len(reps)
            reps.append(g)
            for n in N.indices:
                coset_of[t[g][n]] = c
    return coset_of, reps


def _quotient_isomorphisms(G1, N1, G2, N2):
    """All isomorphisms G1/N1 -> G2/N2, as coset-index maps."""
    c1, r1 = _quotient(G1, N1)
    c2, r2 = _quotient(G2, N2)
    if len(r1) != len(r2):
        return [], c1, c2, r1, r2
    k = len(r1)
    t1, t2 = G1.table, G2.table
    # quotient multiplication tables
    q1 = [[c1[t1[a][b]] for b in r1] for a in r1]
    q2 = [[c2[t2[a][b]] for b in r2] for a in r2]
    # greedy generators of Q1
    gens = []
    span = {0}
    for x in range(k):
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        span = set(span)
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = q1[s][y]
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    # BFS words for Q1 elements in the generators
    word = {0: None}
    order = [0]
    for y in order:
        for si, s in enumerate(gens):
            z = q1[s][y]
            if z not in word:
                word[z] = (si, y)
                order.append(z)
    ords1 = [_qorder(q1, g) for g in gens]
    isos = []
    for imgs in itertools.product(range(k), repeat=len(gens)):
        if any(_qorder(q2, im) != o for im, o in zip(imgs, ords1)):
            continue
        phi = [None] * k
        phi[0] = 0
        for z in order[1:]:
            si, y = word[z]
            phi[z] = q2[imgs[si]][phi[y]]
        if len(set(phi)) != k:
            continue
        if all(phi[q1[a][b]] == q2[phi[a]][phi[b]] for a in gens for b in range(k)):
            isos.append(tuple(phi))
    return isos, c1, c2, r1, r2


def _qorder(q, x):
    k, y = 1, x
    while y != 0:
        y = q[x][y]
        k += 1
    return k


def subdirect_products(G1: FiniteGroup, G2: FiniteGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[SubdirectProduct]:
    """One subdirect product of G1 × G2 per triple (N1, N2, G1/N1 ≅ G2/N2)."""
    if G1.order * G2.order > bound * bound:
        raise ResourceError("direct product too large")
    P = direct_product(G1, G2)
    out = []
    for N1 in normal_subgroups(G1, bound):
        for N2 in normal_subgroups(G2, bound):
            if G1.order // N1.order != G2.order // N2.order:
                continue
            isos, c1, c2, r1, r2 = _quotient_isomorphisms(G1, N1, G2, N2)
            for phi in isos:
                gens = [P.pair(g, r2[phi[c1[g]]]) for g in G1.gen_indices]
                gens += [P.pair(0, n) for n in N2.gens]
                sub = Subgroup(P, P.closure(gens))
                H = sub.as_group()
                H._id = f"{G1.id}x{G2.id}_sd{len(out)}"
                d1 = G1.degree
                p1 = hom_from_function(H, G1, lambda g: g[:d1])
                p2 = hom_from_function(H, G2, lambda g: tuple(x - d1 for x in g[d1:]))
                out.append(SubdirectProduct((G1, G2), H, (p1, p2), triple=(N1, N2, phi)))
    return out


def disjoint_union_gset(specs, G=None) -> GSet:
    """Disjoint union of coset sets G_i/H_i pulled back to a common group.

    ``specs`` is a list of (G_i, H_i) or (G_i, H_i, projection).  When no
    projection is given, G_i must be the acting group itself.
    """
    parts = []
    for spec in specs:
        Gi, Hi = spec[0], spec[1]
        proj = spec[2] if len(spec) > 2 else None
        X = coset_gset(Gi, Hi)
        if proj is None:
            if G is not None and Gi is not G:
                raise InputError("factor group differs from acting group and no projection given")
            parts.append(X)
        else:
            if not proj.is_surjective():
                raise InputError("projection is not surjective")
            parts.append(X.pullback(proj))
    if not parts:
        raise InputError("no factors")
    out = parts[0]
    for p in parts[1:]:
        out = out.disjoint_union(p)
    return out


# Small named groups, handy for tests and the CLI.

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(n, [tuple((i + 1) % n for i in range(n))], id=f"C{n}")


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup(1, [(0,)], id="S1")
    gens = [tuple([1, 0] + list(range(2, n))), tuple((i + 1) % n for i in range(n))]
    return FiniteGroup(n, gens, id=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    gens = []
    for k in range(2, n):
        img = list(range(n))
        img[0], img[1], img[k] = 1, k, 0
        gens.append(tuple(img))
    return FiniteGroup(n, gens or [tuple(range(n))], id=f"A{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    return FiniteGroup(n, [r, s], id=f"D{n}")


def quaternion_group() -> FiniteGroup:
    # regular representation on {±1, ±i, ±j, ±k}
    names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    table = {
        ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
        ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
        ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1",
    }

    def mult(a, b):
        sa = a.startswith("-")
        sb = b.startswith("-")
        a0, b0 = a.lstrip("-"), b.lstrip("-")
        if a0 == "1":
            r = b0
        elif b0 == "1":
            r = a0
        else:
            r = table[(a0, b0)]
        neg = sa ^ sb ^ r.startswith("-")
        r = r.lstrip("-")
        return ("-" + r) if neg else r

    gens = [tuple(names.index(mult(g, x)) for x in names) for g in ("i", "j")]
    return FiniteGroup(8, gens, id="Q8")


def named_group(name: str) -> FiniteGroup:
    """Parse names like C6, S3, A4, D4, Q8, C2xC2, C3xC3."""
    name = name.strip()
    parts = [p for p in re.split(r"[x×]", name) if p]
    if len(parts) > 1:
        G = named_group(parts[0])
        for p in parts[1:]:
            G = direct_product(G, named_group(p))
        G._id = name.replace("×", "x")
        return G
    m = re.fullmatch(r"([CSADQ])(\d+)", name)
    if not m:
        raise InputError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "C":
        return cyclic_group(n)
    if kind == "S":
        return symmetric_group(n)
    if kind == "A":
        return alternating_group(n)
    if kind == "D":
        return dihedral_group(n)
    if n == 8:
        return quaternion_group()
    raise InputError(f"unknown group name {name!r}")
