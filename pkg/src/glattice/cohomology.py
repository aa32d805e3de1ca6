"""Group cohomology of lattices: H^0, H^1, H^2, Tate groups and Sha^2_omega.

For a lattice M and i >= 1 the cocycles Z^i form a saturated subgroup of the
cochains and Z^i ⊗ Q = B^i ⊗ Q (H^i is finite).  Hence H^i is the torsion
part of the cokernel of the coboundary d^{i-1}, which is what we compute:
one Smith normal form, no kernels.  The bar route for H^1 builds Z^1 and B^1
explicitly and is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import linalg
from .errors import InputError, ResourceError
from .groups import Subgroup, cyclic_subgroups_up_to_conjugacy, subgroups_up_to_conjugacy
from .lattices import GLattice, fixed_points, norm_element

H1_BOUND = 512
H2_BOUND = 24


@dataclass(frozen=True)
class AbelianGroupStructure:
    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion if int(d) != 1)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise InputError(f"{t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders, free_rank: int = 0) -> "AbelianGroupStructure":
        """Normalize an arbitrary list of cyclic orders into invariant factors."""
        orders = [int(d) for d in orders if int(d) != 1]
        if not orders:
            return cls((), free_rank)
        sf = linalg.SmithForm([[d if i == j else 0 for j in range(len(orders))] for i, d in enumerate(orders)])
        return cls(tuple(sf.torsion()), free_rank)

    @property
    def invariant_factors(self) -> list[int]:
        return list(self.torsion)

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    def is_trivial(self) -> bool:
        return not self.torsion and not self.free_rank

    def __add__(self, other: "AbelianGroupStructure") -> "AbelianGroupStructure":
        return AbelianGroupStructure.from_orders(self.torsion + other.torsion, self.free_rank + other.free_rank)

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroupStructure":
        return cls(tuple(data.get("torsion", ())), int(data.get("free_rank", 0)))


ZERO = AbelianGroupStructure()


@dataclass
class CohomologyElement:
    ambient: AbelianGroupStructure
    coordinates: list[int]
    representative_cocycle: list[int] = field(repr=False)

    @property
    def order(self) -> int:
        return linalg.order_mod(self.coordinates, list(self.ambient.torsion))

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient.to_json(),
            "coordinates": list(self.coordinates),
            "representative_cocycle": list(self.representative_cocycle),
        }


def _subgroup(M: GLattice, H: Subgroup | None) -> Subgroup:
    if H is None:
        return M.group.full
    if H.parent is not M.group:
        raise ValueError("subgroup of a different group")
    return H


def h0(M: GLattice, H: Subgroup | None = None):
    return fixed_points(M, _subgroup(M, H))


class H1Group:
    """H^1(H, M) with explicit class coordinates.

    A 1-cocycle is recorded by its values on the chosen generators s_1..s_k
    of H, concatenated into one vector of length k*rank.  The coboundary of
    m is ((s_j - 1) m)_j, and a vector of generator values comes from a
    cocycle exactly when it lies in the saturation of the coboundaries.
    """

    def __init__(self, M: GLattice, H: Subgroup | None = None, bound: int = H1_BOUND, gens=None):
        H = _subgroup(M, H)
        if H.order > bound:
            raise ResourceError(f"|H| = {H.order} exceeds H^1 bound {bound}")
        self.lattice = M
        self.subgroup = H
        # generator values must be recorded on a generating set of H
        self.gens = list(gens) if gens is not None else list(H.gens)
        r = M.rank
        I = np.eye(r, dtype=np.int64)
        if self.gens and r:
            D = np.vstack([M.matrix(s) - I for s in self.gens])
        else:
            D = np.zeros((len(self.gens) * r, r), dtype=np.int64)
        self._D = D
        self._sf = linalg.SmithForm(D.tolist(), ncols=r)
        self.structure = AbelianGroupStructure(tuple(self._sf.torsion()))

    def coordinates(self, values) -> list[int] | None:
        """Class coordinates of a cocycle given by generator values (None if not a cocycle)."""
        z = np.asarray(values, dtype=object).reshape(-1).tolist()
        return self._sf.class_of(z)

    def is_cocycle(self, values) -> bool:
        return self.coordinates(values) is not None

    def order_of(self, values) -> int:
        c = self.coordinates(values)
        if c is None:
            raise ValueError("values do not define a cocycle")
        return linalg.order_mod(c, list(self.structure.torsion))

    def generators(self) -> list[list[int]]:
        return linalg.torsion_generators(self._D.tolist(), self._sf)

    def element(self, values) -> CohomologyElement:
        c = self.coordinates(values)
        if c is None:
            raise ValueError("values do not define a cocycle")
        return CohomologyElement(self.structure, c, [int(x) for x in np.asarray(values).reshape(-1)])

    def extend(self, values) -> list[np.ndarray]:
        """Values of the cocycle on every element of H (in H.indices order)."""
        M = self.lattice
        vals = np.asarray(values, dtype=np.int64).reshape(len(self.gens), M.rank)
        return extend_cocycle(M, self.subgroup, self.gens, list(vals))


def extend_cocycle(M: GLattice, H: Subgroup, gens: list[int], gen_values) -> dict[int, np.ndarray]:
    """Extend a cocycle from generator values via f(sh) = f(s) + s f(h)."""
    G = M.group
    f = {0: np.zeros(M.rank, dtype=np.int64)}
    frontier = [0]
    while frontier:
        nxt = []
        for h in frontier:
            for s, v in zip(gens, gen_values):
                sh = G.table[s][h]
                if sh not in f:
                    f[sh] = np.asarray(v, dtype=np.int64) + M.matrix(s) @ f[h]
                    nxt.append(sh)
        frontier = nxt
    return f


def _bar_d0(M: GLattice, els: list[int]) -> np.ndarray:
    r = M.rank
    I = np.eye(r, dtype=np.int64)
    return np.vstack([M.matrix(g) - I for g in els]) if els else np.zeros((0, r), dtype=np.int64)


def _bar_d1(M: GLattice, els: list[int]) -> np.ndarray:
    """Normalized d^1: f -> ((g,h) -> g f(h) - f(gh) + f(g)) on non-identity g, h."""
    G = M.group
    r = M.rank
    n = len(els)
    pos = {g: k for k, g in enumerate(els)}
    D = np.zeros((n * n * r, n * r), dtype=np.int64)
    I = np.eye(r, dtype=np.int64)
    for a, g in enumerate(els):
        A = M.matrix(g)
        for b, h in enumerate(els):
            row = (a * n + b) * r
            D[row:row + r, b * r:(b + 1) * r] += A
            gh = G.table[g][h]
            if gh != 0:
                c = pos[gh]
                D[row:row + r, c * r:(c + 1) * r] -= I
            D[row:row + r, a * r:(a + 1) * r] += I
    return D


def h1(M: GLattice, H: Subgroup | None = None, method: str = "generators", bound: int = H1_BOUND) -> AbelianGroupStructure:
    H = _subgroup(M, H)
    if H.order > bound:
        raise ResourceError(f"|H| = {H.order} exceeds H^1 bound {bound}")
    if method == "generators":
        return H1Group(M, H, bound).structure
    if method != "bar":
        raise ValueError(f"unknown method {method!r}")
    els = [g for g in H.indices if g != 0]
    if not els or M.rank == 0:
        return ZERO
    d0 = _bar_d0(M, els)
    d1 = _bar_d1(M, els)
    Z1 = linalg.kernel(d1.tolist(), ncols=d1.shape[1])
    B1 = d0.T.tolist()
    tors, free = linalg.quotient_structure(B1, Z1)
    return AbelianGroupStructure(tuple(tors), free)


def h1_cyclic_direct(M: GLattice, H: Subgroup) -> AbelianGroupStructure:
    """ker N / (g - 1)M for cyclic H = <g>."""
    if not H.is_cyclic():
        raise ValueError("subgroup is not cyclic")
    G = M.group
    g = next(i for i in H.indices if G.element_order(i) == H.order)
    N = norm_element(M, H)
    K = linalg.kernel(N.tolist(), ncols=M.rank) if M.rank else []
    img = (M.matrix(g) - np.eye(M.rank, dtype=np.int64)).T.tolist()
    tors, free = linalg.quotient_structure(img, K)
    return AbelianGroupStructure(tuple(tors), free)


class H2Group:
    """H^2(H, M) as the torsion of the cokernel of normalized d^1."""

    def __init__(self, M: GLattice, H: Subgroup | None = None, bound: int = H2_BOUND):
        H = _subgroup(M, H)
        if H.order > bound:
            raise ResourceError(f"|H| = {H.order} exceeds H^2 bound {bound}")
        self.lattice = M
        self.subgroup = H
        self.els = [g for g in H.indices if g != 0]
        self._D = _bar_d1(M, self.els)
        self._sf = linalg.SmithForm(self._D.tolist(), ncols=self._D.shape[1])
        self.structure = AbelianGroupStructure(tuple(self._sf.torsion()))

    def coordinates(self, cochain) -> list[int] | None:
        return self._sf.class_of(list(cochain))

    def generators(self) -> list[list[int]]:
        return linalg.torsion_generators(self._D.tolist(), self._sf)

    def cochain_dict(self, vec) -> dict:
        n, r = len(self.els), self.lattice.rank
        out = {}
        for a, g in enumerate(self.els):
            for b, h in enumerate(self.els):
                k = (a * n + b) * r
                out[(g, h)] = vec[k:k + r]
        return out

    def restrict_cochain(self, vec, K: Subgroup) -> list[int]:
        """Restriction of a normalized 2-cochain on H to the subgroup K."""
        d = self.cochain_dict(vec)
        sub = [g for g in K.indices if g != 0]
        out = []
        for g in sub:
            for h in sub:
                out.extend(d[(g, h)])
        return out


def h2(M: GLattice, H: Subgroup | None = None, bound: int = H2_BOUND) -> AbelianGroupStructure:
    return H2Group(M, H, bound).structure


def tate_h_minus1(M: GLattice, H: Subgroup | None = None) -> AbelianGroupStructure:
    """ker N_H / I_H M."""
    H = _subgroup(M, H)
    r = M.rank
    if r == 0:
        return ZERO
    N = norm_element(M, H)
    K = linalg.kernel(N.tolist(), ncols=r)
    I = np.eye(r, dtype=np.int64)
    img = []
    for s in H.gens:
        img.extend((M.matrix(s) - I).T.tolist())
    tors, free = linalg.quotient_structure(img, K)
    return AbelianGroupStructure(tuple(tors), free)


def tate_h0(M: GLattice, H: Subgroup | None = None) -> AbelianGroupStructure:
    """M^H / N_H M."""
    H = _subgroup(M, H)
    if M.rank == 0:
        return ZERO
    _, B = fixed_points(M, H)
    N = norm_element(M, H)
    tors, free = linalg.quotient_structure(N.T.tolist(), B.T.tolist())
    return AbelianGroupStructure(tuple(tors), free)


def flabby_certificate(M: GLattice, bound: int = 512) -> dict[int, AbelianGroupStructure]:
    """Ĥ^{-1}(H, M) for one H per conjugacy class, keyed by subgroup mask."""
    return {H.mask: tate_h_minus1(M, H) for H in subgroups_up_to_conjugacy(M.group, bound)}


def coflabby_certificate(M: GLattice, bound: int = 512) -> dict[int, AbelianGroupStructure]:
    return {H.mask: h1(M, H) for H in subgroups_up_to_conjugacy(M.group, bound)}


def is_flabby(M: GLattice, bound: int = 512) -> bool:
    return all(tate_h_minus1(M, H).is_trivial() for H in subgroups_up_to_conjugacy(M.group, bound))


def is_coflabby(M: GLattice, bound: int = 512) -> bool:
    return all(h1(M, H).is_trivial() for H in subgroups_up_to_conjugacy(M.group, bound))


def finite_hom_kernel(R: list[list[int]], a: list[int], b: list[int]) -> AbelianGroupStructure:
    """Kernel of the map ⊕Z/a_i -> ⊕Z/b_j given by the integer matrix R (rows j, columns i)."""
    n = len(a)
    if n == 0:
        return ZERO
    m = len(b)
    if m == 0:
        return AbelianGroupStructure.from_orders(a)
    # x with R x ∈ diag(b) Z^m: kernel of [R | -diag(b)], projected to x
    big = [list(R[j]) + [(-b[j] if k == j else 0) for k in range(m)] for j in range(m)]
    K = linalg.kernel(big, ncols=n + m)
    L = [v[:n] for v in K]
    sub = [[a[i] if k == i else 0 for k in range(n)] for i in range(n)]
    tors, free = linalg.quotient_structure(sub, L)
    return AbelianGroupStructure(tuple(tors), free)


def sha2_omega_direct(M: GLattice, bound: int = H2_BOUND) -> AbelianGroupStructure:
    """Kernel of H^2(G, M) -> ⊕ H^2(C, M) over cyclic C, one per conjugacy class."""
    G = M.group
    if G.order > bound:
        raise ResourceError(f"|G| = {G.order} exceeds H^2 bound {bound}")
    HG = H2Group(M, G.full, bound)
    a = list(HG.structure.torsion)
    if not a:
        return ZERO
    gens = HG.generators()
    rows: list[list[int]] = []
    b: list[int] = []
    for C in cyclic_subgroups_up_to_conjugacy(G):
        if C.order == 1:
            continue
        HC = H2Group(M, C, bound)
        bc = list(HC.structure.torsion)
        if not bc:
            continue
        cols = []
        for w in gens:
            c = HC.coordinates(HG.restrict_cochain(w, C))
            if c is None:  # pragma: no cover - restriction of a cocycle is a cocycle
                raise AssertionError("restriction did not produce a cocycle")
            cols.append(c)
        for j in range(len(bc)):
            rows.append([col[j] for col in cols])
        b.extend(bc)
    return finite_hom_kernel(rows, a, b)


def restriction_h1(M: GLattice, H: Subgroup, K: Subgroup, values) -> list[int] | None:
    """Class in H^1(K, M) of the restriction of an H-cocycle given on H's generators."""
    src = H1Group(M, H)
    f = extend_cocycle(M, H, src.gens, np.asarray(values, dtype=np.int64).reshape(len(src.gens), M.rank))
    tgt = H1Group(M, K)
    return tgt.coordinates(np.concatenate([f[s] for s in tgt.gens]) if tgt.gens else [])


def corestriction_h1(M: GLattice, H: Subgroup, K: Subgroup, values) -> list[int] | None:
    """Class in H^1(H, M) of cor(f) for f a K-cocycle, K ≤ H.

    Uses cor(f)(g) = Σ_i ρ(r_i) f(k_i) where g r_j = r_i k_i over left
    coset representatives r of K in H.
    """
    G = M.group
    tgt = H1Group(M, H)
    srcK = H1Group(M, K)
    f = extend_cocycle(M, K, srcK.gens, np.asarray(values, dtype=np.int64).reshape(len(srcK.gens), M.rank))
    reps = []
    seen = 0
    for h in H.indices:
        if not (seen >> h) & 1:
            reps.append(h)
            for k in K.indices:
                seen |= 1 << G.table[h][k]
    inv = G.inverse
    out = []
    for g in tgt.gens:
        total = np.zeros(M.rank, dtype=np.int64)
        for r in reps:
            gr = G.table[g][r]
            ri = next(x for x in reps if (K.mask >> G.table[inv[x]][gr]) & 1)
            k = G.table[inv[ri]][gr]
            total += M.matrix(ri) @ f[k]
        out.append(total)
    return tgt.coordinates(np.concatenate(out) if out else [])
