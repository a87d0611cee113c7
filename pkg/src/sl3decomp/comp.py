"""Composition algebras by Cayley-Dickson doubling, and the Jordan algebras H3(C).

Doubling convention: (a, b)(c, d) = (ac + g*conj(d) b, d a + b conj(c)) with
conj(a, b) = (conj(a), -b). g = -1 gives the division forms over Q; g = +1 on
the ground field gives the split K = Q x Q.
"""
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .algebra import AlgebraError, StructureAlgebra, is_commutative
from .exact import QArray, einsum

LEVEL_NAMES = {0: "F", 1: "K", 2: "Q", 3: "O", 4: "S"}


class CompositionAlgebra:
    def __init__(self, alg, level, split=False):
        self.alg = alg
        self.level = level
        self.split = split

    @property
    def dim(self):
        return self.alg.dim

    @property
    def name(self):
        return LEVEL_NAMES[self.level]

    def norm(self, x):
        """n(x) = coefficient of 1 in x conj(x)."""
        return self.alg.product(x, self.alg.conj(x)).item(0)

    def trace(self, x):
        """t(x) = coefficient of 1 in x + conj(x)."""
        return (_coerce_vec(x) + self.alg.conj(x)).item(0)

    def __repr__(self):
        return f"CompositionAlgebra({self.name}, dim={self.dim}{', split' if self.split else ''})"


def _coerce_vec(x):
    from .exact.tensor import _coerce
    return _coerce(x)


def ground_field():
    T = np.ones((1, 1, 1), dtype=np.int64)
    return CompositionAlgebra(StructureAlgebra(QArray(T), ["e0"], 0, QArray.eye(1)), 0)


def _double(base, gamma):
    A = base.alg
    n = A.dim
    t = A.table.to_fractions()
    s = A.involution.to_fractions()
    g = Fraction(gamma)
    m = 2 * n
    T = np.zeros((m, m, m), dtype=object)
    T[...] = 0

    def conj_vec(k):
        return s[:, k]

    for i in range(m):
        for j in range(m):
            # basis (a, b): index < n is (e_i, 0), index >= n is (0, e_{i-n})
            ai, bi = (i, None) if i < n else (None, i - n)
            cj, dj = (j, None) if j < n else (None, j - n)
            first = np.zeros(n, dtype=object)
            first[...] = 0
            second = np.zeros(n, dtype=object)
            second[...] = 0
            if ai is not None and cj is not None:
                first = first + t[ai, cj, :]
            if dj is not None and bi is not None:
                # g * conj(d) b
                first = first + g * np.einsum("p,pk->k", conj_vec(dj), t[:, bi, :])
            if dj is not None and ai is not None:
                second = second + t[dj, ai, :]
            if bi is not None and cj is not None:
                second = second + np.einsum("q,qk->k", conj_vec(cj), t[bi, :, :])
            T[i, j, :n] = first
            T[i, j, n:] = second
    S = np.zeros((m, m), dtype=object)
    S[...] = 0
    S[:n, :n] = s
    for k in range(n):
        S[n + k, n + k] = -1
    labels = [f"e{k}" for k in range(m)]
    return StructureAlgebra(QArray.from_fractions(T), labels, 0, QArray.from_fractions(S))


def cayley_dickson(base, gamma=-1):
    """Double a composition algebra of level <= 2."""
    if base.level > 2:
        raise AlgebraError("doubling past the octonions is not a composition algebra; "
                           "use cayley_dickson_unsafe for negative tests")
    return CompositionAlgebra(_double(base, gamma), base.level + 1,
                              split=base.split or (base.level == 0 and gamma == 1))


def cayley_dickson_unsafe(base, gamma=-1):
    return CompositionAlgebra(_double(base, gamma), base.level + 1, split=base.split)


def composition(name):
    """F, K (split, Q x Q), Q (Hamilton), O (Cayley) over the rationals."""
    F = ground_field()
    if name == "F":
        return F
    if name == "K":
        return cayley_dickson(F, gamma=1)
    Q = cayley_dickson(cayley_dickson(F))
    if name == "Q":
        return Q
    if name == "O":
        return cayley_dickson(Q)
    raise ValueError(f"unknown composition algebra {name!r}")


def sedenions():
    return cayley_dickson_unsafe(composition("O"))


def norm_multiplicative_witness(C):
    """First (x, y) with n(xy) != n(x)n(y), or None.

    n(xy) - n(x)n(y) has bidegree (2, 2), so it vanishes identically iff it
    vanishes for x, y ranging over {e_i} and {e_i + e_j}.
    """
    A = C.alg
    n = A.dim
    probes = [(i,) for i in range(n)] + [(i, j) for i in range(n) for j in range(i + 1, n)]

    def vec(ix):
        v = np.zeros(n, dtype=np.int64)
        v[list(ix)] = 1
        return QArray(v)

    vs = [vec(ix) for ix in probes]
    norms = [C.norm(v) for v in vs]
    for (px, x, nx), (py, y, ny) in iproduct(zip(probes, vs, norms), repeat=2):
        if C.norm(A.product(x, y)) != nx * ny:
            return (px, py)
    return None


class HermitianJordan:
    """H3(C) with product X o Y = (XY + YX)/2.

    Basis: d1, d2, d3 (diagonal units) then, for positions (1,2), (1,3), (2,3),
    the matrices with e_k at (p, q) and conj(e_k) at (q, p).
    """

    POSITIONS = ((0, 1), (0, 2), (1, 2))

    def __init__(self, comp):
        self.comp = comp
        c = comp.dim
        self.labels = ["d1", "d2", "d3"] + [
            f"x{p + 1}{q + 1}_e{k}" for (p, q) in self.POSITIONS for k in range(c)]
        self.dim = 3 + 3 * c
        self.alg = StructureAlgebra(self._product_table(), self.labels, check=False)
        self.unit = QArray(np.array([1, 1, 1] + [0] * (3 * c), dtype=np.int64))
        self.trace_vector = QArray(np.array([1, 1, 1] + [0] * (3 * c), dtype=np.int64))
        self.trace_form = einsum("ijk,k->ij", self.alg.table, self.trace_vector)
        self.cross_tensor = self._cross_table()
        if not is_commutative(self.alg):
            raise AlgebraError("H3 product is not commutative")

    # matrices over C are arrays (3, 3, c) of Fractions
    def _matrix(self, idx):
        c = self.comp.dim
        M = np.zeros((3, 3, c), dtype=object)
        M[...] = 0
        if idx < 3:
            M[idx, idx, 0] = 1
            return M
        pos, k = divmod(idx - 3, c)
        p, q = self.POSITIONS[pos]
        M[p, q, k] = 1
        M[q, p, :] = self.comp.alg.involution.to_fractions()[:, k]
        return M

    def _matmul(self, X, Y, t):
        c = self.comp.dim
        Z = np.zeros((3, 3, c), dtype=object)
        Z[...] = 0
        for p in range(3):
            for q in range(3):
                for r in range(3):
                    if any(X[p, r]) and any(Y[r, q]):
                        Z[p, q] = Z[p, q] + np.einsum("i,j,ijk->k", X[p, r], Y[r, q], t)
        return Z

    def _coords(self, M):
        c = self.comp.dim
        out = np.zeros(self.dim, dtype=object)
        out[...] = 0
        s = self.comp.alg.involution.to_fractions()
        for p in range(3):
            diag = M[p, p]
            if any(diag[1:]):
                raise AlgebraError("diagonal entry outside the scalars")
            out[p] = diag[0]
        for pos, (p, q) in enumerate(self.POSITIONS):
            out[3 + pos * c:3 + (pos + 1) * c] = M[p, q]
            if any(M[q, p] != s @ M[p, q]):
                raise AlgebraError("product is not hermitian")
        return out

    def _product_table(self):
        t = self.comp.alg.table.to_fractions()
        mats = [self._matrix(i) for i in range(self.dim)]
        n = self.dim
        T = np.zeros((n, n, n), dtype=object)
        T[...] = 0
        half = Fraction(1, 2)
        for i in range(n):
            for j in range(i, n):
                Z = self._matmul(mats[i], mats[j], t) + self._matmul(mats[j], mats[i], t)
                v = self._coords(Z * half)
                T[i, j] = v
                T[j, i] = v
        return QArray.from_fractions(T)

    def _cross_table(self):
        """x*y = x o y - (tr(x) y + tr(y) x)/2 + (tr(x)tr(y) - T(x, y))/2 * 1."""
        n = self.dim
        tr = self.trace_vector
        I = QArray.eye(n)
        prod = self.alg.table
        term1 = einsum("i,jk->ijk", tr, I) + einsum("j,ik->ijk", tr, I)
        scal = einsum("i,j->ij", tr, tr) - self.trace_form
        term2 = einsum("ij,k->ijk", scal, self.unit)
        return prod - term1 * Fraction(1, 2) + term2 * Fraction(1, 2)

    # -- element-level helpers ----------------------------------------------
    def circ(self, x, y):
        return self.alg.product(x, y)

    def trace(self, x):
        return (self.trace_vector @ _coerce_vec(x)).item()

    def __repr__(self):
        return f"HermitianJordan(H3({self.comp.name}), dim={self.dim})"


def hermitian_jordan(comp):
    return HermitianJordan(comp)


def trace_form(j, x, y):
    return (einsum("i,ij,j->", _coerce_vec(x), j.trace_form, _coerce_vec(y))).item()


def freudenthal_cross(j, x, y):
    return einsum("i,j,ijk->k", _coerce_vec(x), _coerce_vec(y), j.cross_tensor)


def jordan_identity_holds(j):
    """Linearized Jordan identity [L_{a o b}, L_c] + cyclic = 0 on basis triples."""
    t = j.alg.table
    n = j.dim
    L = t.transpose(0, 2, 1)                         # L[a][k, y] = (e_a o e_y)_k
    Lab = einsum("abm,mky->abky", t, L)              # L_{e_a o e_b}
    for c in range(n):
        Lc = L[c]
        X = einsum("abkm,my->abky", Lab, Lc) - einsum("km,abmy->abky", Lc, Lab)
        # cyclic sum over (a, b, c): the other two terms are X with roles rotated
        Y = einsum("bkm,amy->abky", einsum("bm,mky->bky", t[:, c, :], L), L) \
            - einsum("akm,bmy->abky", L, einsum("bm,mky->bky", t[:, c, :], L))
        Z = einsum("akm,bmy->abky", einsum("am,mky->aky", t[c], L), L) \
            - einsum("bkm,amy->abky", L, einsum("am,mky->aky", t[c], L))
        if not (X + Y + Z).is_zero():
            return False
    return True


def trace_form_associative(j):
    t = j.alg.table
    lhs = einsum("ijm,mkl,l->ijk", t, t, j.trace_vector)
    rhs = einsum("jkm,iml,l->ijk", t, t, j.trace_vector)
    return lhs == rhs
