import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glattice import linalg
from glattice.errors import InputError, NotEquivariantError
from glattice.groups import coset_gset, direct_product, named_group
from glattice.lattices import (
    ExactSequenceOfLattices,
    GLattice,
    LatticeMap,
    augmentation_sequence,
    chevalley_module,
    direct_sum,
    dual,
    equivariant_maps,
    equivariant_maps_direct,
    fixed_points,
    hom_lattice,
    inflate,
    permutation_lattice,
    permutation_structure,
    quotient_lattice,
    restrict,
    sign_lattice,
    sublattice,
    tensor,
    trivial_lattice,
    unvec_hom,
    vec_hom,
    verify_exactness,
)
from support import SMALL_GROUPS, random_lattice, rng_for, sub


def test_representation_check():
    G = named_group("C3")
    with pytest.raises(InputError):
        GLattice(G, [[[2]]])
    with pytest.raises(InputError):
        GLattice(G, [[[-1]]])  # order 2 matrix for an order 3 generator
    with pytest.raises(InputError):
        GLattice(G, [[[1, 0], [0, 1]], [[1]]])


def test_matrices_are_a_homomorphism():
    G = named_group("S3")
    M = permutation_lattice(coset_gset(G, G.trivial))
    for a in range(G.order):
        for b in range(G.order):
            assert np.array_equal(M.matrix(G.table[a][b]), M.matrix(a) @ M.matrix(b))


def test_chevalley_is_dual_of_augmentation():
    A4 = named_group("A4")
    X = coset_gset(A4, sub(A4, 3))
    I = augmentation_sequence(X).terms[0]
    J, F = chevalley_module(X)
    assert all(np.array_equal(a, b) for a, b in zip(dual(I).gen_matrices, J.gen_matrices))
    assert verify_exactness(F)
    assert verify_exactness(augmentation_sequence(X))
    assert verify_exactness(F.dual())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_is_involutive_and_tensor_is_kron(seed):
    rng = rng_for(seed)
    G = named_group(rng.choice(SMALL_GROUPS))
    M = random_lattice(rng, G, 3)
    N = random_lattice(rng, G, 3)
    assert all(np.array_equal(a, b) for a, b in zip(dual(dual(M)).gen_matrices, M.gen_matrices))
    T = tensor(M, N)
    for g in range(G.order):
        assert np.array_equal(T.matrix(g), np.kron(M.matrix(g), N.matrix(g)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_equivariant_maps_two_routes(seed):
    rng = rng_for(seed)
    G = named_group(rng.choice(SMALL_GROUPS))
    M = random_lattice(rng, G, 3)
    N = random_lattice(rng, G, 3)
    a = equivariant_maps(M, N)
    b = equivariant_maps_direct(M, N)
    assert len(a) == len(b)
    for f in a:
        LatticeMap(M, N, f)
    # same lattice of maps
    assert linalg.same_lattice([f.reshape(-1).tolist() for f in a], [f.reshape(-1).tolist() for f in b])


def test_hom_lattice_fixed_points_are_equivariant_maps():
    G = named_group("S3")
    M = permutation_lattice(coset_gset(G, sub(G, 2)))
    N, _ = chevalley_module(coset_gset(G, sub(G, 2)))
    H = hom_lattice(M, N)
    r, basis = fixed_points(H)
    assert r == len(equivariant_maps(M, N))
    for col in basis.T:
        LatticeMap(M, N, unvec_hom(col, M.rank, N.rank))
    u = np.arange(6).reshape(2, 3)
    assert np.array_equal(unvec_hom(vec_hom(u), 3, 2), u)


def test_not_equivariant():
    G = named_group("C2")
    with pytest.raises(NotEquivariantError):
        LatticeMap(trivial_lattice(G), sign_lattice(G), [[1]])


def test_sub_and_quotient():
    G = named_group("C3")
    P = permutation_lattice(coset_gset(G, G.trivial))
    S, incl = sublattice(P, np.array([[1], [1], [1]]))
    assert S.rank == 1 and fixed_points(S)[0] == 1
    Q, proj = quotient_lattice(P, np.array([[1], [1], [1]]))
    assert Q.rank == 2
    E = ExactSequenceOfLattices([S, P, Q], [incl, proj])
    assert verify_exactness(E)


def test_exactness_failures():
    G = named_group("C2")
    Z = trivial_lattice(G)
    P = permutation_lattice(coset_gset(G, G.trivial))
    # 0 -> Z -2-> Z -> 0 : image not saturated
    E = ExactSequenceOfLattices([Z, Z], [LatticeMap(Z, Z, [[2]])])
    rep = verify_exactness(E)
    assert not rep and rep.failing_node == 1
    # Z -> P -> Z with the norm and the augmentation: composition 2
    E = ExactSequenceOfLattices([Z, P, Z], [LatticeMap(Z, P, [[1], [1]]), LatticeMap(P, Z, [[1, 1]])])
    assert not verify_exactness(E)


def test_restriction_and_inflation():
    P = direct_product(named_group("S3"), named_group("C2"))
    p1, _ = P.projections
    S3 = p1.target
    J, _ = chevalley_module(coset_gset(S3, sub(S3, 2)))
    Jinf = inflate(J, p1)
    assert Jinf.group is P and Jinf.rank == 2
    R = restrict(Jinf, p1.kernel)
    assert all(np.array_equal(A, np.eye(2, dtype=np.int64)) for A in R.gen_matrices)


def test_permutation_structure():
    G = named_group("S3")
    P = permutation_lattice(coset_gset(G, sub(G, 2)))
    assert permutation_structure(P) is not None
    J, _ = chevalley_module(coset_gset(G, sub(G, 2)))
    eps = [sum(1 for i in range(3) for j in range(i) if g[j] > g[i]) % 2 for g in G.generators]
    assert permutation_structure(sign_lattice(G, eps)) is None
    assert direct_sum(P, trivial_lattice(G)).rank == 4
    assert J.rank == 2


def test_json_roundtrip_and_row_convention():
    G = named_group("S3")
    J, _ = chevalley_module(coset_gset(G, sub(G, 2)))
    K = GLattice.from_json(J.to_json(), G)
    assert all(np.array_equal(a, b) for a, b in zip(J.gen_matrices, K.gen_matrices))
    data = J.to_json()
    data["action"] = {k: np.array(v).T.tolist() for k, v in data["action"].items()}
    data["convention"] = "row"
    K = GLattice.from_json(data, G)
    assert all(np.array_equal(a, b) for a, b in zip(J.gen_matrices, K.gen_matrices))
