"""Acceptance gate: ten criteria, each timed and reported as one PASS/FAIL line."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from glattice.cohomology import h1, is_coflabby, is_flabby, sha2_omega_direct
from glattice.extensions import extension_order_all, klyachko_sequence
from glattice.groups import coset_gset, cyclic_group, is_sylow_cyclic, named_group, subgroups_up_to_conjugacy
from glattice.lattices import LatticeMap, chevalley_module, direct_sum, dual, permutation_lattice, tensor, trivial_lattice
from glattice.rationality import gcd_splitting, verify_tensor_splitting
from glattice.resolutions import (
    coflabby_resolution,
    flabby_resolution,
    is_invertible,
    permutation_order,
    stably_permutation_witness,
    sylow_product,
)
from support import random_extension, random_lattice, random_tensor_pair, rng_for, sub

SEED = 20240611


def gate(n, title, limit):
    def wrap(fn):
        def test():
            t = time.perf_counter()
            ok = False
            try:
                fn()
                ok = True
            finally:
                secs = time.perf_counter() - t
                ok = ok and secs < limit
                ACCEPTANCE[n] = (ok, secs, limit, title)
                print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({secs:.1f}s)")
            assert secs < limit, f"took {secs:.1f}s, limit {limit}s"
        test.__name__ = fn.__name__
        return test
    return wrap


def chevalley(G, H):
    return chevalley_module(coset_gset(G, H))[0]


def index_sets(G, order, count):
    return [coset_gset(G, sub(G, order, k)) for k in range(count)]


def union(sets):
    X = sets[0]
    for Y in sets[1:]:
        X = X.disjoint_union(Y)
    return X


@gate(1, "permutation order of Chevalley modules equals the index", 35)
def test_criterion_01_pord_of_chevalley_modules():
    for name, h in [("C2", 1), ("C3", 1), ("C4", 1), ("S3", 2), ("S3", 1), ("A4", 3), ("C2xC2", 1)]:
        G = named_group(name)
        H = sub(G, h)
        t = time.perf_counter()
        res = permutation_order(chevalley(G, H), certificate=True)
        assert time.perf_counter() - t < 5
        assert res.order == G.order // h, (name, h, res.order)
        assert res.verify()


@gate(2, "gcd law for several orbits", 5)
def test_criterion_02_gcd_law():
    G = named_group("C6")
    X = coset_gset(G, sub(G, 3)).disjoint_union(coset_gset(G, sub(G, 2)))
    assert X.orbit_sizes == [2, 3]
    J = chevalley_module(X)[0]
    assert permutation_order(J) == 1
    iso = gcd_splitting(X)
    f = LatticeMap(direct_sum(trivial_lattice(G), J), permutation_lattice(X), iso)
    assert f.is_equivariant() and f.is_isomorphism()

    G = named_group("C4xC2")
    four = [H for H in subgroups_up_to_conjugacy(G) if H.order == 2]
    two = [H for H in subgroups_up_to_conjugacy(G) if H.order == 4]
    X = coset_gset(G, two[0]).disjoint_union(coset_gset(G, four[0]))
    assert sorted(X.orbit_sizes) == [2, 4]
    assert permutation_order(chevalley_module(X)[0]) == 2


@gate(3, "Hasse obstruction groups by two routes", 60)
def test_criterion_03_sha():
    cases = [("C2xC2", 2, 3, (2,)), ("C3xC3", 3, 2, ()), ("C3xC3", 3, 3, (3,)), ("C3xC3", 3, 4, (3, 3))]
    for name, order, count, expect in cases:
        G = named_group(name)
        J = chevalley_module(union(index_sets(G, order, count)))[0]
        via_flabby = h1(flabby_resolution(J).end)
        direct = sha2_omega_direct(J)
        assert tuple(via_flabby.torsion) == expect and via_flabby.free_rank == 0
        assert direct == via_flabby


@gate(4, "retract rationality of Galois tori matches Sylow cyclicity", 120)
def test_criterion_04_sylow_cyclic():
    for name in ["C2", "C3", "C4", "C6", "C2xC2", "C3xC3", "S3", "Q8"]:
        G = named_group(name)
        F = flabby_resolution(chevalley(G, G.trivial)).end
        assert is_invertible(F).invertible == is_sylow_cyclic(G), name


@gate(5, "tensor counterexample and the biquadratic Galois case are not retract rational", 120)
def test_criterion_05_tensor_counterexample():
    G = named_group("C3xC3")
    X, Y = index_sets(G, 3, 2)
    JJ = tensor(chevalley_module(X)[0], chevalley_module(Y)[0])
    assert not is_invertible(flabby_resolution(JJ).end).invertible
    G = named_group("C2xC2")
    J = chevalley(G, G.trivial)
    assert not is_invertible(flabby_resolution(J).end).invertible


@gate(6, "tensor splitting isomorphism and the nonsplit case", 30)
def test_criterion_06_tensor_splitting():
    G = named_group("C6")
    r = verify_tensor_splitting(coset_gset(G, sub(G, 3)), coset_gset(G, sub(G, 2)))
    assert r.verified and r.image_is_augmentation_ideal
    assert abs(round(np.linalg.det(r.isomorphism))) == 1
    G = named_group("C2xC2")
    r = verify_tensor_splitting(*index_sets(G, 2, 2))
    assert r.refused and r.nonsplit_order > 1


@gate(7, "Klyachko sequences for sizes (2,3) and (2,3,5)", 60)
def test_criterion_07_klyachko():
    G = cyclic_group(30)
    by_index = {G.order // H.order: H for H in subgroups_up_to_conjugacy(G)}
    for sizes in [(2, 3), (2, 3, 5)]:
        k = klyachko_sequence([coset_gset(G, by_index[n]) for n in sizes])
        assert k.exactness and k.rank_identity
        prod = 1
        for n in sizes:
            prod *= n
        assert prod % k.order() == 0


@gate(8, "three extension-order routes agree on 50 random extensions", 120)
def test_criterion_08_extension_routes():
    rng = rng_for(SEED)
    for _ in range(50):
        _, E = random_extension(rng)
        orders = {m: r.order for m, r in extension_order_all(E).items()}
        assert len(set(orders.values())) == 1, orders
        assert E.terms[0].group.order % orders["section"] == 0


@gate(9, "invariant suite on random lattices", 180)
def test_criterion_09_invariants():
    rng = rng_for(SEED + 9)
    groups = ["C2", "C3", "C4", "S3", "C2xC2", "C6"]
    for _ in range(20):
        G = named_group(rng.choice(groups))
        M = random_lattice(rng, G, 4)
        p = permutation_order(M)
        assert p == permutation_order(dual(M))
        assert p == sylow_product(M)
        A, B, T = random_tensor_pair(rng, G)
        assert (permutation_order(A) * permutation_order(B)) % permutation_order(T) == 0
        H = rng.choice(subgroups_up_to_conjugacy(G))
        assert h1(permutation_lattice(coset_gset(G, H))).order == 1
        P = permutation_lattice(coset_gset(G, rng.choice(subgroups_up_to_conjugacy(G))))
        assert is_flabby(tensor(flabby_resolution(M).end, P))
        assert is_coflabby(tensor(coflabby_resolution(M).end, P))


@gate(10, "stably permutation witnesses at tiny rank", 120)
def test_criterion_10_witnesses():
    for name, h in [("C2", 1), ("C3", 1), ("S3", 2)]:
        G = named_group(name)
        F = flabby_resolution(chevalley(G, sub(G, h))).end
        w = stably_permutation_witness(F, seed=SEED)
        assert w.verdict == "witness", name
        assert abs(round(np.linalg.det(w.isomorphism))) == 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
