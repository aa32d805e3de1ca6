"""Exact integer linear algebra.

Matrices are lists of rows of Python ints (numpy arrays are accepted on
input).  Nothing here ever rounds: every routine works over Z or Q with
arbitrary precision.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def as_rows(A) -> list[list[int]]:
    if hasattr(A, "tolist"):
        A = A.tolist()
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A, ncols: int | None = None) -> list[list[int]]:
    A = as_rows(A)
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B) -> list[list[int]]:
    A = as_rows(A)
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def matvec(A, v) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a) for row in as_rows(A)]


def _axpy(dst: list[int], q: int, src: list[int], start: int = 0) -> None:
    # dst += q * src, from column `start` on
    for k in range(start, len(dst)):
        s = src[k]
        if s:
            dst[k] += q * s


def echelon(rows: list[list[int]], ncols: int, reduce_above: bool = True) -> list[tuple[int, int]]:
    """Row-reduce ``rows`` in place to Hermite form on the first ``ncols`` columns.

    Extra columns beyond ``ncols`` ride along (handy for recording a transform).
    Returns the pivot positions as (row, column) pairs.  Pivots are positive
    and, with ``reduce_above``, entries above a pivot are reduced into
    [0, pivot).
    """
    m = len(rows)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        while True:
            best = -1
            bv = 0
            for i in range(r, m):
                v = rows[i][c]
                if v and (best < 0 or abs(v) < bv):
                    best, bv = i, abs(v)
                    if bv == 1:
                        break
            if best < 0:
                break
            if best != r:
                rows[r], rows[best] = rows[best], rows[r]
            piv = rows[r]
            p = piv[c]
            clean = True
            for i in range(r + 1, m):
                v = rows[i][c]
                if v:
                    _axpy(rows[i], -(v // p), piv, c)
                    if rows[i][c]:
                        clean = False
            if clean:
                break
        if best < 0:
            continue
        piv = rows[r]
        if piv[c] < 0:
            rows[r] = piv = [-x for x in piv]
        if reduce_above:
            p = piv[c]
            for i in range(r):
                v = rows[i][c]
                if v:
                    q = v // p
                    if q:
                        _axpy(rows[i], -q, piv, c)
        pivots.append((r, c))
        r += 1
    return pivots


def hnf(A) -> list[list[int]]:
    """Row Hermite normal form with zero rows dropped."""
    rows = as_rows(A)
    ncols = len(rows[0]) if rows else 0
    piv = echelon(rows, ncols)
    return rows[: len(piv)]


def hnf_with_transform(A):
    """Return (H, T) with T unimodular and T·A = H (zero rows kept at the bottom)."""
    rows = as_rows(A)
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [row + [1 if i == j else 0 for j in range(m)] for i, row in enumerate(rows)]
    piv = echelon(aug, ncols)
    H = [row[:ncols] for row in aug]
    T = [row[ncols:] for row in aug]
    return H, T, len(piv)


def rank(A) -> int:
    rows = as_rows(A)
    if not rows:
        return 0
    return len(echelon(rows, len(rows[0]), reduce_above=False))


def kernel(A, ncols: int | None = None) -> list[list[int]]:
    """Basis (as a list of vectors, in Hermite form) of {x in Z^n : A x = 0}."""
    A = as_rows(A)
    n = len(A[0]) if A else (ncols or 0)
    m = len(A)
    aug = [[A[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    piv = echelon(aug, m, reduce_above=False)
    basis = [row[m:] for row in aug[len(piv):]]
    if not basis:
        return []
    return hnf(basis)


def left_kernel(A) -> list[list[int]]:
    return kernel(transpose(A), ncols=len(as_rows(A)))


def det(A) -> int:
    """Bareiss fraction-free determinant."""
    M = as_rows(A)
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            rowi = M[i]
            rowk = M[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * M[n - 1][n - 1]


def inverse_unimodular(A) -> list[list[int]]:
    A = as_rows(A)
    n = len(A)
    aug = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    piv = echelon(aug, n)
    if len(piv) != n or any(aug[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return [row[n:] for row in aug]


class SmithForm:
    """Smith normal form D = U·A·V with U kept implicitly.

    U is never materialized unless asked for: the row operations are
    recorded so that ``apply_u`` can replay them on a vector.  V is kept
    explicitly (it is small for the matrices we feed in, which are tall).
    """

    def __init__(self, A, ncols: int | None = None, keep_u: bool = False):
        W = as_rows(A)
        m = len(W)
        n = len(W[0]) if W else (ncols or 0)
        self.shape = (m, n)
        self._ops: list[tuple] = []
        Vt = identity(n)  # rows of Vt are columns of V
        U = identity(m) if keep_u else None
        ops = self._ops

        def rswap(i, j):
            W[i], W[j] = W[j], W[i]
            ops.append((0, i, j))
            if U is not None:
                U[i], U[j] = U[j], U[i]

        def radd(i, j, q, start):
            _axpy(W[i], q, W[j], start)
            ops.append((1, i, j, q))
            if U is not None:
                _axpy(U[i], q, U[j])

        def rneg(i):
            W[i] = [-x for x in W[i]]
            ops.append((2, i))
            if U is not None:
                U[i] = [-x for x in U[i]]

        def cswap(i, j, t):
            for row in W[t:]:
                row[i], row[j] = row[j], row[i]
            Vt[i], Vt[j] = Vt[j], Vt[i]

        def cadd(i, j, q, t):
            # col_i += q col_j
            for row in W[t:]:
                v = row[j]
                if v:
                    row[i] += q * v
            _axpy(Vt[i], q, Vt[j])

        diag = []
        t = 0
        while t < min(m, n):
            # pick smallest nonzero entry of the remaining block
            best = None
            bv = 0
            for i in range(t, m):
                row = W[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < bv):
                        best, bv = (i, j), abs(v)
                if bv == 1:
                    break
            if best is None:
                break
            i, j = best
            if i != t:
                rswap(t, i)
            if j != t:
                cswap(t, j, t)
            while True:
                p = W[t][t]
                dirty = False
                for i in range(t + 1, m):
                    v = W[i][t]
                    if v:
                        q = v // p
                        if q:
                            radd(i, t, -q, t)
                        if W[i][t]:
                            dirty = True
                rowt = W[t]
                for j in range(t + 1, n):
                    v = rowt[j]
                    if v:
                        q = v // p
                        if q:
                            cadd(j, t, -q, t)
                        if rowt[j]:
                            dirty = True
                if dirty:
                    best = (t, t)
                    bv = abs(W[t][t])
                    for i in range(t + 1, m):
                        v = W[i][t]
                        if v and abs(v) < bv:
                            best, bv = (i, t), abs(v)
                    for j in range(t + 1, n):
                        v = W[t][j]
                        if v and abs(v) < bv:
                            best, bv = (t, j), abs(v)
                    i, j = best
                    if i != t:
                        rswap(t, i)
                    if j != t:
                        cswap(t, j, t)
                    continue
                if abs(p) > 1:
                    bad = None
                    for i in range(t + 1, m):
                        row = W[i]
                        for j in range(t + 1, n):
                            if row[j] % p:
                                bad = i
                                break
                        if bad is not None:
                            break
                    if bad is not None:
                        radd(t, bad, 1, t)
                        continue
                break
            if W[t][t] < 0:
                rneg(t)
            diag.append(W[t][t])
            t += 1
        self.diagonal = diag
        self.rank = len(diag)
        self._Vt = Vt
        self._U = U

    @property
    def V(self) -> list[list[int]]:
        return transpose(self._Vt) if self._Vt else []

    @property
    def U(self) -> list[list[int]]:
        if self._U is None:
            m = self.shape[0]
            U = identity(m)
            for op in self._ops:
                if op[0] == 0:
                    U[op[1]], U[op[2]] = U[op[2]], U[op[1]]
                elif op[0] == 1:
                    _axpy(U[op[1]], op[3], U[op[2]])
                else:
                    U[op[1]] = [-x for x in U[op[1]]]
            self._U = U
        return self._U

    def S(self) -> list[list[int]]:
        m, n = self.shape
        S = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            S[i][i] = d
        return S

    def apply_u(self, z) -> list[int]:
        """Return U·z by replaying the recorded row operations."""
        z = [int(x) for x in z]
        for op in self._ops:
            if op[0] == 0:
                z[op[1]], z[op[2]] = z[op[2]], z[op[1]]
            elif op[0] == 1:
                z[op[1]] += op[3] * z[op[2]]
            else:
                z[op[1]] = -z[op[1]]
        return z

    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]

    def free_rank(self) -> int:
        return self.shape[0] - self.rank

    def torsion_positions(self) -> list[int]:
        return [i for i, d in enumerate(self.diagonal) if d > 1]

    def class_of(self, z) -> list[int] | None:
        """Coordinates of z in tors(coker A) = Z^m / image(A).

        Returns None when z does not lie in the saturation of image(A),
        i.e. its image in coker is not torsion.
        """
        u = self.apply_u(z)
        if any(u[self.rank:]):
            return None
        return [u[i] % self.diagonal[i] for i in self.torsion_positions()]


def smith_normal_form(A):
    """Return (S, U, V) with U·A·V = S in Smith form."""
    sf = SmithForm(A, keep_u=True)
    return sf.S(), sf.U, sf.V


def smith_invariants(A) -> list[int]:
    return SmithForm(A).diagonal


def torsion_generators(A, sf: SmithForm | None = None) -> list[list[int]]:
    """Vectors w_i = A V e_i / d_i representing generators of tors coker A."""
    A = as_rows(A)
    sf = sf or SmithForm(A)
    V = sf._Vt
    out = []
    for i in sf.torsion_positions():
        d = sf.diagonal[i]
        col = matvec(A, V[i])
        out.append([x // d for x in col])
    return out


def order_mod(coords: list[int], moduli: list[int]) -> int:
    e = 1
    for c, d in zip(coords, moduli):
        e = lcm(e, d // gcd(c, d))
    return e


def solve_integer(A, b) -> list[int] | None:
    """An integer x with A x = b, or None."""
    res = least_multiple_solution(A, b)
    if res is None or res[0] != 1:
        return None
    return res[1]


def least_multiple_solution(A, b, cols: int | None = None):
    """Least e >= 1 and integer x with A x = e·b.

    A is N×n (given as rows).  Returns (e, x) or None if b is not in the
    rational span of the columns.
    """
    A = as_rows(A)
    b = [int(v) for v in b]
    N = len(A)
    n = len(A[0]) if A else (cols or 0)
    if n == 0:
        return (1, []) if not any(b) else None
    At = transpose(A) if A else [[] for _ in range(n)]
    H, T, r = hnf_with_transform(At)
    # y^T H = e b^T, forward substitution along the pivots
    y = []
    residual = [Fraction(v) for v in b]
    for k in range(r):
        row = H[k]
        c = next(j for j, v in enumerate(row) if v)
        yk = residual[c] / row[c]
        y.append(yk)
        if yk:
            for j in range(c, N):
                if row[j]:
                    residual[j] -= yk * row[j]
    if any(residual):
        return None
    e = 1
    for v in y:
        e = lcm(e, v.denominator)
    yi = [int(v * e) for v in y]
    x = [0] * n
    for k in range(r):
        if yi[k]:
            _axpy(x, yi[k], T[k])
    return e, x


def saturation(vectors, n: int) -> list[list[int]]:
    """Basis of (span ⊗ Q) ∩ Z^n, in Hermite form."""
    vecs = [v for v in as_rows(vectors) if any(v)]
    if not vecs:
        return []
    perp = kernel(vecs, ncols=n)
    if not perp:
        return identity(n)
    return kernel(perp, ncols=n)


def is_saturated(vectors) -> bool:
    vecs = [v for v in as_rows(vectors) if any(v)]
    if not vecs:
        return True
    return all(d == 1 for d in SmithForm(vecs).diagonal)


def same_lattice(A, B) -> bool:
    """Whether two lists of vectors span the same sublattice."""
    return hnf(A) == hnf(B) if (A and B) else (rank(A) if A else 0) == (rank(B) if B else 0)


def unimodular_completion(B) -> tuple[list[list[int]], list[list[int]]]:
    """For columns B (n×c) spanning a saturated sublattice, return (W, W^{-1})
    with W unimodular and W·B = [I_c; 0].

    The rows c.. of W cut out span(B): they form a basis of the dual of
    Z^n / span(B).
    """
    B = as_rows(B)
    n = len(B)
    c = len(B[0]) if B else 0
    aug = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(B)]
    piv = echelon(aug, c)
    if len(piv) != c or any(aug[i][i] != 1 for i in range(c)):
        raise ValueError("columns do not span a saturated sublattice of full column rank")
    W = [row[c:] for row in aug]
    return W, inverse_unimodular(W)


def coordinates_in_hnf(basis: list[list[int]], v) -> list[int] | None:
    """Integer coordinates of v in a row-Hermite basis, or None if v is not in its span."""
    v = [int(x) for x in v]
    x = []
    for row in basis:
        c = next(j for j, a in enumerate(row) if a)
        q, rem = divmod(v[c], row[c])
        if rem:
            return None
        x.append(q)
        if q:
            _axpy(v, -q, row, c)
    if any(v):
        return None
    return x


def quotient_structure(sub, ambient) -> tuple[list[int], int]:
    """Structure of span(ambient)/span(sub), given sub ⊆ ambient (row vectors).

    Returns (torsion invariants, free rank).
    """
    amb = hnf(ambient) if len(ambient) else []
    if not amb:
        return [], 0
    sub = [v for v in as_rows(sub) if any(v)]
    if not sub:
        return [], len(amb)
    coords = []
    for v in sub:
        x = coordinates_in_hnf(amb, v)
        if x is None:
            raise ValueError("sublattice not contained in ambient lattice")
        coords.append(x)
    sf = SmithForm(coords)
    return sf.torsion(), len(amb) - sf.rank
