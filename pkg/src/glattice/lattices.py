"""G-lattices, equivariant maps and the standard constructions.

Action matrices act on coordinate column vectors and compose as
rho(gh) = rho(g) rho(h).  Only the matrices of the group generators are
stored; matrices of all other elements are filled in on demand by walking
the Cayley graph, which doubles as a check that the generator matrices
really define a representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .errors import InputError, NotEquivariantError
from .groups import FiniteGroup, GroupHom, GSet, Subgroup, trivial_gset


def _as_matrix(A, rows: int, cols: int) -> np.ndarray:
    M = np.array(A, dtype=np.int64).reshape(rows, cols) if rows * cols else np.zeros((rows, cols), dtype=np.int64)
    return M


class GLattice:
    def __init__(self, group: FiniteGroup, gen_matrices, labels=None, name: str | None = None,
                 check: bool = True, rank: int | None = None):
        self.group = group
        gens = list(gen_matrices)
        if len(gens) != len(group.generators):
            raise InputError(f"expected {len(group.generators)} generator matrices, got {len(gens)}")
        if rank is None:
            rank = np.asarray(gens[0]).shape[0] if gens else 0
        r = rank
        self.rank = r
        self.gen_matrices = [_as_matrix(A, r, r) for A in gens]
        self.labels = list(labels) if labels is not None else None
        self.name = name
        if check:
            for A in self.gen_matrices:
                if abs(linalg.det(A)) != 1:
                    raise InputError("action matrix is not unimodular")
            self.matrices  # builds and checks the representation

    def __repr__(self):
        return f"GLattice({self.name or '?'}, rank={self.rank}, group={self.group.id})"

    @cached_property
    def matrices(self) -> np.ndarray:
        """Array of shape (|G|, r, r): rho of every group element."""
        G = self.group
        r = self.rank
        out = np.zeros((G.order, r, r), dtype=np.int64)
        out[0] = np.eye(r, dtype=np.int64)
        for i in G.bfs_order[1:]:
            s, j = G.words[i]
            out[i] = self.gen_matrices[s] @ out[j]
        for s, gi in enumerate(G.gen_indices):
            A = self.gen_matrices[s]
            if not np.array_equal(out[gi], A):
                raise InputError("generator matrices do not define a representation")
            for j in range(G.order):
                if not np.array_equal(A @ out[j], out[G.table[gi][j]]):
                    raise InputError("generator matrices do not define a representation")
        if np.abs(out).max(initial=0) > 2**40:
            raise InputError("action matrices too large for fixed-width storage")
        return out

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def restrict(self, H: Subgroup) -> "GLattice":
        return restrict(self, H)

    def to_json(self) -> dict:
        return {
            "group": self.group.id,
            "rank": self.rank,
            "action": {str(i): A.tolist() for i, A in enumerate(self.gen_matrices)},
        }

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> "GLattice":
        try:
            rank = int(data["rank"])
            action = data["action"]
        except KeyError as exc:
            raise InputError(f"lattice spec missing field {exc}") from exc
        mats = []
        for i in range(len(group.generators)):
            A = action.get(str(i))
            if A is None:
                raise InputError(f"no matrix for generator {i}")
            if len(A) != rank or any(len(row) != rank for row in A):
                raise InputError(f"matrix for generator {i} is not {rank}x{rank}")
            mats.append(A)
        if data.get("convention", "column") == "row":
            # row-vector convention: rho_row(gh) = rho_row(h) rho_row(g)
            mats = [np.array(A).T for A in mats]
        return cls(group, mats, name=data.get("name"))


@dataclass(eq=False)
class LatticeMap:
    source: GLattice
    target: GLattice
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.matrix = _as_matrix(self.matrix, self.target.rank, self.source.rank)
        if self.source.group is not self.target.group:
            raise InputError("map between lattices over different groups")
        if self.check and not self.is_equivariant():
            raise NotEquivariantError("matrix does not intertwine the actions")

    def is_equivariant(self) -> bool:
        F = self.matrix
        return all(
            np.array_equal(B @ F, F @ A) for A, B in zip(self.source.gen_matrices, self.target.gen_matrices)
        )

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        return LatticeMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def is_isomorphism(self) -> bool:
        return self.source.rank == self.target.rank and abs(linalg.det(self.matrix)) == 1


@dataclass(eq=False)
class ExactSequenceOfLattices:
    terms: list
    maps: list

    def __post_init__(self):
        if len(self.maps) != len(self.terms) - 1:
            raise InputError("need one map between each pair of consecutive terms")
        for k, f in enumerate(self.maps):
            if f.source is not self.terms[k] or f.target is not self.terms[k + 1]:
                if f.source.rank != self.terms[k].rank or f.target.rank != self.terms[k + 1].rank:
                    raise InputError(f"map {k} does not connect terms {k} and {k + 1}")

    def verify(self) -> "ExactnessReport":
        return verify_exactness(self)

    def dual(self) -> "ExactSequenceOfLattices":
        terms = [dual(T) for T in reversed(self.terms)]
        maps = []
        n = len(self.terms)
        for k in range(n - 1):
            f = self.maps[n - 2 - k]
            maps.append(LatticeMap(terms[k], terms[k + 1], f.matrix.T))
        return ExactSequenceOfLattices(terms, maps)


@dataclass
class ExactnessReport:
    ok: bool
    failing_node: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"exact": self.ok, "failing_node": self.failing_node, "reason": self.reason}


def _rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return linalg.rank(A)


def _columns_saturated(A: np.ndarray) -> bool:
    if A.size == 0:
        return True
    return linalg.is_saturated(A.T)


def verify_exactness(seq: ExactSequenceOfLattices) -> ExactnessReport:
    """Check exactness of 0 -> T0 -> T1 -> ... -> Tn -> 0 at every term.

    Node k refers to term k.  Kernel = image is tested as: image saturated
    and of the same rank as the kernel (compositions are checked to vanish
    separately).
    """
    terms, maps = seq.terms, seq.maps
    for k, f in enumerate(maps):
        if not f.is_equivariant():
            return ExactnessReport(False, k, f"map {k} is not equivariant")
    for k in range(len(maps) - 1):
        comp = maps[k + 1].matrix @ maps[k].matrix
        if comp.size and np.any(comp):
            return ExactnessReport(False, k + 1, "consecutive composition is nonzero")
    for k, T in enumerate(terms):
        incoming = maps[k - 1].matrix if k > 0 else np.zeros((T.rank, 0), dtype=np.int64)
        outgoing = maps[k].matrix if k < len(maps) else np.zeros((0, T.rank), dtype=np.int64)
        ker_rank = T.rank - _rank(outgoing)
        im_rank = _rank(incoming)
        if im_rank != ker_rank:
            return ExactnessReport(False, k, f"rank of image {im_rank} differs from rank of kernel {ker_rank}")
        if not _columns_saturated(incoming):
            return ExactnessReport(False, k, "image is not saturated, so it is smaller than the kernel")
    return ExactnessReport(True)


# Constructions

def trivial_lattice(G: FiniteGroup, n: int = 1) -> GLattice:
    I = np.eye(n, dtype=np.int64)
    return GLattice(G, [I] * len(G.generators), name="Z" if n == 1 else f"Z^{n}", check=False)


def zero_lattice(G: FiniteGroup) -> GLattice:
    return trivial_lattice(G, 0)


def sign_lattice(G: FiniteGroup, hom_to_c2: list[int] | None = None) -> GLattice:
    """Rank one lattice where generator s acts by (-1)^eps_s (default: all -1)."""
    eps = hom_to_c2 if hom_to_c2 is not None else [1] * len(G.generators)
    return GLattice(G, [[[(-1) ** e]] for e in eps], name="sign")


def permutation_lattice(X: GSet, name: str | None = None) -> GLattice:
    G = X.group
    n = len(X)
    mats = []
    for gi in G.gen_indices:
        P = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            P[X.table[gi][x], x] = 1
        mats.append(P)
    M = GLattice(G, mats, labels=[str(p) for p in X.points], name=name or "Z[X]", check=False)
    M.gset = X
    return M


def _induced_sublattice_action(M: GLattice, B: np.ndarray, W: list[list[int]]) -> list[np.ndarray]:
    c = B.shape[1]
    Wtop = np.array(W[:c], dtype=np.int64).reshape(c, M.rank)
    Wbot = np.array(W[c:], dtype=np.int64).reshape(M.rank - c, M.rank)
    mats = []
    for A in M.gen_matrices:
        AB = A @ B
        if Wbot.size and np.any(Wbot @ AB):
            raise InputError("sublattice is not stable under the action")
        mats.append(Wtop @ AB)
    return mats


def sublattice(M: GLattice, basis: np.ndarray, name: str | None = None) -> tuple[GLattice, LatticeMap]:
    """The G-stable saturated sublattice spanned by the columns of ``basis``."""
    B = _as_matrix(basis, M.rank, np.asarray(basis).shape[1] if np.asarray(basis).ndim == 2 else 0)
    W, _ = linalg.unimodular_completion(B.tolist()) if B.shape[1] else (linalg.identity(M.rank), None)
    S = GLattice(M.group, _induced_sublattice_action(M, B, W), name=name)
    return S, LatticeMap(S, M, B)


def quotient_lattice(M: GLattice, basis: np.ndarray, name: str | None = None) -> tuple[GLattice, LatticeMap]:
    """M / span(columns of basis) for a saturated G-stable span."""
    B = np.asarray(basis, dtype=np.int64).reshape(M.rank, -1)
    c = B.shape[1]
    if c:
        W, Winv = linalg.unimodular_completion(B.tolist())
    else:
        W = Winv = linalg.identity(M.rank)
    Wbot = np.array(W[c:], dtype=np.int64).reshape(M.rank - c, M.rank)
    Winv_r = np.array([row[c:] for row in Winv], dtype=np.int64).reshape(M.rank, M.rank - c)
    mats = [Wbot @ A @ Winv_r for A in M.gen_matrices]
    Q = GLattice(M.group, mats, name=name)
    return Q, LatticeMap(M, Q, Wbot)


def augmentation_sequence(X: GSet) -> ExactSequenceOfLattices:
    """0 -> I_X -> Z[X] -> Z -> 0 with I_X on the basis [x] - [x0]."""
    n = len(X)
    if n == 0:
        raise InputError("empty G-set")
    G = X.group
    P = permutation_lattice(X)
    incl = np.zeros((n, n - 1), dtype=np.int64)
    for k in range(1, n):
        incl[k, k - 1] = 1
        incl[0, k - 1] = -1
    mats = []
    for gi in G.gen_indices:
        A = np.zeros((n - 1, n - 1), dtype=np.int64)
        for k in range(1, n):
            a, b = X.table[gi][k], X.table[gi][0]
            if a:
                A[a - 1, k - 1] += 1
            if b:
                A[b - 1, k - 1] -= 1
        mats.append(A)
    I = GLattice(G, mats, labels=[f"[{X.points[k]}]-[{X.points[0]}]" for k in range(1, n)], name="I_X", check=False)
    Z = trivial_lattice(G)
    eps = np.ones((1, n), dtype=np.int64)
    return ExactSequenceOfLattices([I, P, Z], [LatticeMap(I, P, incl), LatticeMap(P, Z, eps)])


def augmentation_ideal(X: GSet) -> GLattice:
    return augmentation_sequence(X).terms[0]


def chevalley_module(X: GSet) -> tuple[GLattice, ExactSequenceOfLattices]:
    """J_X together with 0 -> Z -> Z[X] -> J_X -> 0.

    J_X has basis the images of [x] for x != x0; this is the dual basis to
    the basis [x] - [x0] of I_X, so the matrices are exactly those of
    dual(I_X).
    """
    n = len(X)
    if n == 0:
        raise InputError("empty G-set")
    G = X.group
    P = permutation_lattice(X)
    I = augmentation_ideal(X)
    J = GLattice(G, [_inv_transpose(A) for A in I.gen_matrices], labels=[f"[{X.points[k]}]" for k in range(1, n)], name="J_X", check=False)
    Z = trivial_lattice(G)
    norm = np.ones((n, 1), dtype=np.int64)
    proj = np.zeros((n - 1, n), dtype=np.int64)
    for k in range(1, n):
        proj[k - 1, k] = 1
        proj[k - 1, 0] = -1
    seq = ExactSequenceOfLattices([Z, P, J], [LatticeMap(Z, P, norm), LatticeMap(P, J, proj)])
    return J, seq


def _inv_transpose(A: np.ndarray) -> np.ndarray:
    if A.size == 0:
        return A.copy()
    return np.array(linalg.inverse_unimodular(A), dtype=np.int64).T.copy()


def dual(M: GLattice) -> GLattice:
    D = GLattice(M.group, [_inv_transpose(A) for A in M.gen_matrices], labels=M.labels, name=f"({M.name})°" if M.name else None, check=False)
    if hasattr(M, "gset"):
        D.gset = M.gset
    return D


def direct_sum(*Ms: GLattice) -> GLattice:
    if len(Ms) == 1 and isinstance(Ms[0], (list, tuple)):
        Ms = tuple(Ms[0])
    if not Ms:
        raise InputError("empty direct sum")
    G = Ms[0].group
    if any(M.group is not G for M in Ms):
        raise InputError("direct sum of lattices over different groups")
    n = sum(M.rank for M in Ms)
    mats = []
    for s in range(len(G.generators)):
        A = np.zeros((n, n), dtype=np.int64)
        o = 0
        for M in Ms:
            r = M.rank
            A[o:o + r, o:o + r] = M.gen_matrices[s]
            o += r
        mats.append(A)
    return GLattice(G, mats, name=" ⊕ ".join(M.name or "?" for M in Ms), check=False)


def tensor(M1: GLattice, M2: GLattice, via: tuple[GroupHom, GroupHom] | None = None) -> GLattice:
    """M1 ⊗ M2 with basis e_i ⊗ f_j at position i*rank2 + j."""
    if via is None:
        if M1.group is not M2.group:
            raise InputError("lattices over different groups need projections from a common group")
        G = M1.group
        mats = [np.kron(A, B) for A, B in zip(M1.gen_matrices, M2.gen_matrices)]
    else:
        p1, p2 = via
        if p1.target is not M1.group or p2.target is not M2.group or p1.source is not p2.source:
            raise InputError("projections do not match the factors")
        G = p1.source
        mats = [np.kron(M1.matrix(p1(g)), M2.matrix(p2(g))) for g in G.gen_indices]
    if M1.rank * M2.rank == 0:
        mats = [np.zeros((0, 0), dtype=np.int64) for _ in mats]
    return GLattice(G, mats, name=f"{M1.name}⊗{M2.name}", check=False)


def hom_lattice(M: GLattice, N: GLattice) -> GLattice:
    """Hom_Z(M, N) with (g u) = rho_N(g) u rho_M(g)^{-1}.

    A map u (an rN x rM matrix) has coordinate vector ``vec_hom(u)``, i.e.
    u read column by column; as a lattice this is exactly dual(M) ⊗ N.
    """
    H = tensor(dual(M), N)
    H.name = f"Hom({M.name},{N.name})"
    return H


def vec_hom(u: np.ndarray) -> np.ndarray:
    return np.asarray(u, dtype=np.int64).T.reshape(-1)


def unvec_hom(v, rM: int, rN: int) -> np.ndarray:
    return np.asarray(v, dtype=np.int64).reshape(rM, rN).T.copy()


def inflate(M: GLattice, hom: GroupHom) -> GLattice:
    """Pull back M along a homomorphism into its group."""
    if hom.target is not M.group:
        raise InputError("homomorphism does not land in the lattice's group")
    mats = [M.matrix(hom(g)) for g in hom.source.gen_indices]
    return GLattice(hom.source, mats, labels=M.labels, name=M.name, check=False)


def restrict(M: GLattice, H: Subgroup) -> GLattice:
    if H.parent is not M.group:
        raise InputError("not a subgroup of the lattice's group")
    HG = H.as_group()
    idx = M.group.index
    mats = [M.matrix(idx[g]) for g in HG.generators]
    R = GLattice(HG, mats, labels=M.labels, name=M.name, check=False)
    R.ambient = (M.group, H)
    return R


def fixed_points(M: GLattice, H: Subgroup | None = None) -> tuple[int, np.ndarray]:
    """(rank, basis) of M^H; the basis columns span a saturated sublattice."""
    G = M.group
    gens = H.gens if H is not None else G.gen_indices
    r = M.rank
    if r == 0:
        return 0, np.zeros((0, 0), dtype=np.int64)
    if not gens:
        return r, np.eye(r, dtype=np.int64)
    I = np.eye(r, dtype=np.int64)
    A = np.vstack([M.matrix(g) - I for g in gens])
    K = linalg.kernel(A.tolist(), ncols=r)
    B = np.array(K, dtype=np.int64).reshape(len(K), r).T.copy()
    return len(K), B


def norm_element(M: GLattice, H: Subgroup) -> np.ndarray:
    N = np.zeros((M.rank, M.rank), dtype=np.int64)
    for h in H.indices:
        N += M.matrix(h)
    return N


def is_isomorphic_by(f: LatticeMap) -> bool:
    return f.is_equivariant() and f.is_isomorphism()


# Permutation structure and equivariant maps

def permutation_structure(M: GLattice) -> GSet | None:
    """If every generator acts by a permutation matrix, the G-set on the basis."""
    if hasattr(M, "gset") and len(M.gset) == M.rank:
        return M.gset
    r = M.rank
    for A in M.gen_matrices:
        if A.size and not (np.all((A == 0) | (A == 1)) and np.all(A.sum(axis=0) == 1)):
            return None
    G = M.group
    table = []
    for g in range(G.order):
        A = M.matrix(g)
        table.append([int(np.argmax(A[:, x])) for x in range(r)] if r else [])
    return GSet(G, list(range(r)), table)


def _frobenius_from_permutation(X: GSet, N: GLattice) -> list[np.ndarray]:
    """Basis of Hom_G(Z[X], N): one map per orbit and basis vector of N^{Stab}."""
    G = X.group
    out = []
    n = len(X)
    for orb in X.orbits:
        x = orb[0]
        K = X.stabilizer(x)
        # one coset representative per point of the orbit
        rep = {}
        for g in G.bfs_order:
            y = X.table[g][x]
            if y not in rep:
                rep[y] = g
        _, B = fixed_points(N, K)
        for j in range(B.shape[1]):
            v = B[:, j]
            phi = np.zeros((N.rank, n), dtype=np.int64)
            for y, g in rep.items():
                phi[:, y] = N.matrix(g) @ v
            out.append(phi)
    return out


def equivariant_maps(M: GLattice, N: GLattice) -> list[np.ndarray]:
    """A Z-basis of Hom_G(M, N), as rN x rM matrices."""
    if M.group is not N.group:
        raise InputError("lattices over different groups")
    if M.rank == 0 or N.rank == 0:
        return []
    X = permutation_structure(M)
    if X is not None:
        return _frobenius_from_permutation(X, N)
    Y = permutation_structure(N)
    if Y is not None:
        # Hom_G(M, Z[Y]) = Hom_G(Z[Y], M°)^T since Z[Y] is self-dual on the nose
        return [phi.T.copy() for phi in _frobenius_from_permutation(Y, dual(M))]
    Hm = hom_lattice(M, N)
    _, B = fixed_points(Hm)
    return [unvec_hom(B[:, j], M.rank, N.rank) for j in range(B.shape[1])]


def equivariant_maps_direct(M: GLattice, N: GLattice) -> list[np.ndarray]:
    """Same as equivariant_maps but always by solving rho_N(s) u = u rho_M(s)."""
    Hm = hom_lattice(M, N)
    _, B = fixed_points(Hm)
    return [unvec_hom(B[:, j], M.rank, N.rank) for j in range(B.shape[1])]


def coset_lattice(G: FiniteGroup, H: Subgroup) -> GLattice:
    from .groups import coset_gset

    return permutation_lattice(coset_gset(G, H), name=f"Z[G/H{H.order}]")


def trivial_permutation(G: FiniteGroup, n: int = 1) -> GLattice:
    return permutation_lattice(trivial_gset(G, n), name="Z")
