"""Independent oracles and random generators shared by the tests.

The oracles deliberately avoid the package's own algorithms: invariant
factors come from gcds of minors, subgroups from brute-force closure,
and the permutation order from the trace ideal of End(M).
"""

import random
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from glattice import linalg
from glattice.groups import coset_gset, named_group, subgroups_up_to_conjugacy
from glattice.lattices import (
    GLattice,
    augmentation_sequence,
    chevalley_module,
    direct_sum,
    permutation_lattice,
    sign_lattice,
    tensor,
    trivial_lattice,
)


def sub(G, order, k=0):
    return [H for H in subgroups_up_to_conjugacy(G) if H.order == order][k]


def coset_set(name, order, k=0):
    G = named_group(name)
    return coset_gset(G, sub(G, order, k))


# exact determinant and invariant factors by minors

def det_fraction(A):
    A = [[Fraction(x) for x in row] for row in A]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return int(d)


def invariant_factors_by_minors(A):
    """Nonzero invariant factors d_k = D_k / D_{k-1}, D_k the gcd of k x k minors."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det_fraction([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


# brute-force subgroups

def brute_subgroups(G):
    """All subgroups as bitmasks, by closing every subset of size <= 3."""
    t = G.table
    n = G.order

    def close(seed):
        els = {0} | set(seed)
        frontier = list(els)
        while frontier:
            new = []
            for a in frontier:
                for b in list(els):
                    for c in (t[a][b], t[b][a]):
                        if c not in els:
                            els.add(c)
                            new.append(c)
            frontier = new
        return sum(1 << e for e in els)

    found = set()
    for k in range(0, 4):
        for seed in combinations(range(n), k):
            found.add(close(seed))
    return found


def brute_classes(G):
    subs = brute_subgroups(G)
    t, inv = G.table, G.inverse
    classes = []
    seen = set()
    for m in sorted(subs):
        if m in seen:
            continue
        els = [i for i in range(G.order) if m >> i & 1]
        conj = set()
        for g in range(G.order):
            conj.add(sum(1 << t[t[g][h]][inv[g]] for h in els))
        seen |= conj
        classes.append(m)
    return classes


# permutation order from its definition

def fixed_basis(mats, r):
    """Columns spanning {v : A v = v for all A}."""
    if r == 0:
        return []
    rows = np.vstack([A - np.eye(r, dtype=np.int64) for A in mats]) if mats else np.zeros((0, r), dtype=np.int64)
    return linalg.kernel(rows.tolist(), r)


def pord_by_definition(M):
    """Least a with a·Id in the span of N_{G/H}(v u^T), v in M^H, u in (M°)^H.

    Those are exactly the composites M -> Z[G/H] -> M, so this is the
    definition of the permutation order with no resolution involved.
    """
    G = M.group
    r = M.rank
    if r == 0:
        return 1
    gens = []
    for H in subgroups_up_to_conjugacy(G):
        hs = [M.matrix(h) for h in H.indices]
        V = fixed_basis(hs, r)
        U = fixed_basis([A.T for A in hs], r)
        # coset representatives of G/H
        X = coset_gset(G, H)
        reps = [M.matrix(g) for g in X.reps]
        for v in V:
            for u in U:
                E = np.outer(np.array(v, dtype=np.int64), np.array(u, dtype=np.int64))
                N = sum(g @ E @ np.array(linalg.inverse_unimodular(g), dtype=np.int64) for g in reps)
                gens.append(N.reshape(-1).tolist())
    res = linalg.least_multiple_solution(linalg.transpose(gens, len(gens)), np.eye(r, dtype=np.int64).reshape(-1).tolist())
    assert res is not None
    return res[0]


# random lattices

SMALL_GROUPS = ["C2", "C3", "C4", "S3", "C2xC2", "C6"]


def random_unimodular(rng, n, steps=None):
    U = np.eye(n, dtype=np.int64)
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        U[i] += rng.choice((-1, 1)) * U[j]
    if n and rng.random() < 0.5:
        U[rng.randrange(n)] *= -1
    return U


def conjugate(M, U):
    Ui = np.array(linalg.inverse_unimodular(U), dtype=np.int64) if U.size else U
    return GLattice(M.group, [U @ A @ Ui for A in M.gen_matrices], name=M.name, rank=M.rank)


def random_block(rng, G, max_rank):
    """A small G-lattice of rank <= max_rank (possibly None)."""
    subs = subgroups_up_to_conjugacy(G)
    kinds = ["trivial", "perm", "aug", "cheval"]
    if G.order % 2 == 0:
        kinds.append("sign")
    for _ in range(20):
        k = rng.choice(kinds)
        H = rng.choice(subs)
        n = G.order // H.order
        if k == "trivial":
            M = trivial_lattice(G)
        elif k == "sign":
            idx = [H for H in subs if H.order * 2 == G.order and H.is_normal()]
            if not idx:
                continue
            K = rng.choice(idx)
            M = sign_lattice(G, [0 if g in K.indices else 1 for g in G.gen_indices])
        elif k == "perm":
            M = permutation_lattice(coset_gset(G, H))
        elif k == "aug":
            if n < 2:
                continue
            M = augmentation_sequence(coset_gset(G, H)).terms[0]
        else:
            if n < 2:
                continue
            M, _ = chevalley_module(coset_gset(G, H))
        if M.rank <= max_rank:
            return M
    return trivial_lattice(G)


def random_lattice(rng, G, max_rank=4, scramble=True):
    M = random_block(rng, G, max_rank)
    if M.rank < max_rank and rng.random() < 0.4:
        M = direct_sum(M, random_block(rng, G, max_rank - M.rank))
    if scramble and M.rank:
        M = conjugate(M, random_unimodular(rng, M.rank))
    return M


def random_tensor_pair(rng, G, max_rank=6):
    A = random_block(rng, G, 3)
    B = random_block(rng, G, max(1, max_rank // max(A.rank, 1)))
    return A, B, tensor(A, B)


def rng_for(seed):
    return random.Random(seed)


# random extensions

EXTENSION_GROUPS = ["C2", "C3", "C4", "S3", "C2xC2", "C6", "D4", "Q8", "C4xC2", "A4", "D6", "C3xC4"]


def random_extension(rng, max_rank=6):
    """A scrambled short exact sequence 0 -> A -> B -> C -> 0 over a group of order <= 12."""
    from glattice.cohomology import H1Group
    from glattice.extensions import ExtensionClass
    from glattice.lattices import ExactSequenceOfLattices, LatticeMap, hom_lattice, unvec_hom

    G = named_group(rng.choice(EXTENSION_GROUPS))
    subs = [H for H in subgroups_up_to_conjugacy(G) if 2 <= G.order // H.order <= max_rank - 1]
    if subs and rng.random() < 0.6:
        # the interesting classes live in Ext(J_X, Z) = H^1(G, I_X)
        C, _ = chevalley_module(coset_gset(G, rng.choice(subs)))
        A = trivial_lattice(G) if rng.random() < 0.7 else random_block(rng, G, max_rank - C.rank)
    else:
        C = random_block(rng, G, max_rank - 1)
        A = random_block(rng, G, max(1, min(3, max_rank - C.rank)))
    Hm = hom_lattice(C, A)
    H = H1Group(Hm, gens=G.gen_indices)
    k = len(G.gen_indices)
    r = Hm.rank
    vec = np.zeros(k * r, dtype=np.int64)
    for g in H.generators():
        vec += rng.randint(-2, 2) * np.array(g, dtype=np.int64)
    m = np.array([rng.randint(-2, 2) for _ in range(r)], dtype=np.int64)
    I = np.eye(r, dtype=np.int64)
    vec += np.concatenate([(Hm.matrix(s) - I) @ m for s in G.gen_indices])
    cocycle = [unvec_hom(vec[i * r:(i + 1) * r], C.rank, A.rank) for i in range(k)]
    ext = ExtensionClass(A, C, cocycle)
    E = ext.sequence()
    B = E.terms[1]
    U = random_unimodular(rng, B.rank)
    Ui = np.array(linalg.inverse_unimodular(U), dtype=np.int64)
    B2 = conjugate(B, U)
    iota = U @ E.maps[0].matrix
    pi = E.maps[1].matrix @ Ui
    E2 = ExactSequenceOfLattices([A, B2, C], [LatticeMap(A, B2, iota), LatticeMap(B2, C, pi)])
    return ext, E2
