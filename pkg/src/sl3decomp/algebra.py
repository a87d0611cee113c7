"""Finite-dimensional algebras given by structure constants, and the invariants
the coordinate checks need: associators, nucleus, center, the associator
ideal and derivation algebras.

Conventions: ``table[i, j, k]`` is the coefficient of e_k in e_i e_j, and a
linear operator M acts on column vectors, M[k, j] being the e_k-coefficient of
M(e_j). Vectors are 1-D :class:`QArray` (or anything ``QArray`` accepts).
"""
import numpy as np

from .exact import QArray, certified_nullspace, certified_rref, einsum, integer_rows, rat, rat_str
from .exact.tensor import _coerce, concatenate


class AlgebraError(ValueError):
    pass


class Subspace:
    """A subspace of Q^n held as its reduced row echelon basis."""

    def __init__(self, ambient_dim, echelon, pivots):
        self.ambient_dim = ambient_dim
        self.echelon = echelon
        self.pivots = list(pivots)

    @classmethod
    def zero(cls, n):
        return cls(n, QArray.zeros((0, n)), [])

    @classmethod
    def full(cls, n):
        return cls(n, QArray.eye(n), list(range(n)))

    @classmethod
    def span(cls, vectors, n=None):
        vectors = _rows(vectors, n)
        n = vectors.shape[1]
        if vectors.shape[0] == 0:
            return cls.zero(n)
        ints = integer_rows(vectors)
        E, piv = certified_rref(lambda: [ints], n)
        return cls(n, E, piv)

    @classmethod
    def from_chunks(cls, chunks, n):
        """Span of the integer row blocks produced by ``chunks()``."""
        E, piv = certified_rref(chunks, n)
        return cls(n, E, piv)

    @classmethod
    def kernel(cls, chunks, n):
        """Null space of the integer matrix whose row blocks ``chunks()`` yields."""
        N = certified_nullspace(chunks, n)
        piv = [int(np.flatnonzero(r)[0]) for r in N.num] if N.shape[0] else []
        return cls(n, N, piv)

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def basis(self):
        return [tuple(r) for r in self.echelon.to_fractions().tolist()]

    def matrix(self):
        return self.echelon

    def residual(self, vectors):
        V = _rows(vectors, self.ambient_dim)
        if not self.pivots:
            return V
        return V - V[:, self.pivots] @ self.echelon

    def contains(self, v):
        return self.residual(v).is_zero()

    def coordinates(self, vectors):
        """Coordinates w.r.t. ``basis``; raises if a vector is outside."""
        V = _rows(vectors, self.ambient_dim)
        if not self.residual(V).is_zero():
            raise AlgebraError("vector not in subspace")
        return V[:, self.pivots]

    def __add__(self, other):
        return Subspace.span(concatenate([self.echelon, other.echelon]), self.ambient_dim)

    def __le__(self, other):
        return other.contains(self.echelon) if self.dim else True

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots and self.echelon == other.echelon)

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _rows(vectors, n=None):
    if isinstance(vectors, Subspace):
        return vectors.echelon
    V = _coerce(vectors) if not isinstance(vectors, QArray) else vectors
    if V.ndim == 1:
        V = V.reshape(1, -1)
    if n is not None and V.shape[1] != n:
        raise AlgebraError(f"expected vectors of length {n}, got {V.shape[1]}")
    return V


class StructureAlgebra:
    def __init__(self, table, labels=None, unit_index=None, involution=None, check=True):
        table = _coerce(table)
        if table.ndim != 3 or len(set(table.shape)) != 1:
            raise AlgebraError(f"structure tensor must be n x n x n, got {table.shape}")
        self.table = table
        self.dim = table.shape[0]
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.dim)]
        if len(self.labels) != self.dim:
            raise AlgebraError("label count does not match dimension")
        self.unit_index = unit_index
        self.involution = None if involution is None else _coerce(involution)
        if check:
            self._validate()

    def _validate(self):
        n = self.dim
        if self.unit_index is not None:
            u = self.unit_index
            if not 0 <= u < n:
                raise AlgebraError("unit index out of range")
            I = QArray.eye(n)
            if not (self.table[u] == I and self.table[:, u, :] == I):
                raise AlgebraError(f"basis element {self.labels[u]} is not a two-sided unit")
        if self.involution is not None:
            s = self.involution
            if s.shape != (n, n):
                raise AlgebraError("involution must be n x n")
            if not (s @ s == QArray.eye(n)):
                raise AlgebraError("involution does not square to the identity")
            lhs = einsum("ijk,lk->ijl", self.table, s)
            rhs = einsum("aj,bi,abl->ijl", s, s, self.table)
            if not lhs == rhs:
                raise AlgebraError("involution is not an anti-automorphism")

    # -- products -------------------------------------------------------------
    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return QArray(v)

    def product(self, x, y):
        return einsum("i,j,ijk->k", _coerce(x), _coerce(y), self.table)

    def left_mult(self, x):
        """Matrix of L_x."""
        return einsum("i,ijk->kj", _coerce(x), self.table)

    def right_mult(self, y):
        return einsum("j,ijk->ki", _coerce(y), self.table)

    def conj(self, x):
        if self.involution is None:
            raise AlgebraError("algebra has no involution")
        return self.involution @ _coerce(x)

    @property
    def mult(self):
        """Sparse view {(i, j): [(k, coefficient), ...]}."""
        out = {}
        for (i, j, k), c in self.table.nonzero_entries():
            out.setdefault((i, j), []).append((k, c))
        return out

    def associator_tensor(self):
        """assoc[i, j, k, l]: e_l-coefficient of (e_i e_j) e_k - e_i (e_j e_k)."""
        t = self.table
        return einsum("ijm,mkl->ijkl", t, t) - einsum("jkm,iml->ijkl", t, t)

    # -- io -------------------------------------------------------------------
    def to_json(self):
        d = {"dim": self.dim, "labels": self.labels,
             "mult": [[i, j, k, rat_str(c)] for (i, j, k), c in self.table.nonzero_entries()]}
        if self.unit_index is not None:
            d["unit"] = self.unit_index
        if self.involution is not None:
            d["involution"] = [[rat_str(x) for x in r] for r in self.involution.tolist()]
        return d

    @classmethod
    def from_json(cls, d, where="algebra"):
        try:
            n = int(d["dim"])
            labels = d.get("labels")
            T = np.zeros((n, n, n), dtype=object)
            T[...] = 0
            for pos, entry in enumerate(d["mult"]):
                i, j, k, c = entry
                T[i, j, k] = rat(c)
            inv = d.get("involution")
            if inv is not None:
                inv = [[rat(x) for x in r] for r in inv]
        except KeyError as exc:
            raise AlgebraError(f"{where}: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError, IndexError) as exc:
            raise AlgebraError(f"{where}.mult: {exc}") from None
        return cls(QArray.from_fractions(T), labels, d.get("unit"), inv)

    def __repr__(self):
        return f"StructureAlgebra(dim={self.dim})"


def direct_sum(a, b):
    n, m = a.dim, b.dim
    T = np.zeros((n + m,) * 3, dtype=object)
    T[...] = 0
    T[:n, :n, :n] = a.table.to_fractions()
    T[n:, n:, n:] = b.table.to_fractions()
    labels = [f"a.{x}" for x in a.labels] + [f"b.{x}" for x in b.labels]
    return StructureAlgebra(QArray.from_fractions(T), labels)


def matrix_algebra(k):
    """M_k(Q) with basis E_ij in row-major order; unit not a basis element."""
    n = k * k
    T = np.zeros((n, n, n), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            for l in range(k):
                T[i * k + j, j * k + l, i * k + l] = 1
    return StructureAlgebra(QArray(T), [f"E{i + 1}{j + 1}" for i in range(k) for j in range(k)])


def associator(alg, x, y, z):
    return alg.product(alg.product(x, y), z) - alg.product(x, alg.product(y, z))


def alternative_witness(alg):
    """First basis tuple violating alternativity, or None.

    Checks (x, x, y) = 0 = (y, x, x) on basis pairs and the linearized forms
    (x, y, z) + (y, x, z) = 0 = (x, y, z) + (x, z, y) on basis triples.
    """
    A = alg.associator_tensor()
    n = alg.dim
    for i in range(n):
        for j in range(n):
            if not A[i, i, j].is_zero():
                return ("left", (i, i, j))
            if not A[j, i, i].is_zero():
                return ("right", (j, i, i))
    left = A + A.transpose(1, 0, 2, 3)
    right = A + A.transpose(0, 2, 1, 3)
    for name, t in (("left-linearized", left), ("right-linearized", right)):
        bad = np.argwhere(np.any(t.num != 0, axis=3))
        if len(bad):
            return (name, tuple(int(x) for x in bad[0]))
    return None


def is_alternative(alg):
    return alternative_witness(alg) is None


def is_associative(alg):
    return alg.associator_tensor().is_zero()


def is_commutative(alg):
    return alg.table == alg.table.transpose(1, 0, 2)


def _mult_images(alg, sub):
    """All products e_i v and v e_i for v in a basis of sub, as rows."""
    B = sub.echelon
    L = einsum("vj,ijk->ivk", B, alg.table).reshape(-1, alg.dim)
    R = einsum("vi,ijk->jvk", B, alg.table).reshape(-1, alg.dim)
    return concatenate([L, R])


def ideal_closure(alg, sub):
    """Smallest two-sided ideal containing sub (iterate until the dimension settles)."""
    cur = sub
    while True:
        if cur.dim == 0:
            return cur
        nxt = Subspace.span(concatenate([cur.echelon, _mult_images(alg, cur)]), alg.dim)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def is_ideal(alg, sub):
    if sub.dim == 0:
        return True
    return sub.contains(_mult_images(alg, sub))


def associator_ideal(alg):
    """E(A) = (A,A,A) + (A,A,A)A, closed up to an ideal and checked to be one."""
    n = alg.dim
    S = Subspace.span(alg.associator_tensor().reshape(-1, n), n)
    if S.dim:
        right = einsum("vi,ijk->vjk", S.echelon, alg.table).reshape(-1, n)
        S = Subspace.span(concatenate([S.echelon, right]), n)
    E = ideal_closure(alg, S)
    if not is_ideal(alg, E):
        raise AlgebraError("associator ideal closure is not an ideal")
    return E


def nucleus(alg):
    """{a : (a, A, A) = 0}."""
    n = alg.dim
    M = alg.associator_tensor().transpose(1, 2, 3, 0).reshape(-1, n)
    return Subspace.kernel(lambda: [M.num], n)


def center(alg):
    """Elements of the nucleus commuting with everything."""
    n = alg.dim
    M = alg.associator_tensor().transpose(1, 2, 3, 0).reshape(-1, n)
    C = (alg.table.transpose(1, 2, 0) - alg.table.transpose(0, 2, 1)).reshape(-1, n)
    rows = concatenate([M, C])
    return Subspace.kernel(lambda: [rows.num], n)


def derivation_equations(alg, commuting_with_involution=False):
    """Zero-argument chunk source for the linear system defining Der(alg).

    Unknown D is flattened row-major: coordinate l*n + k is the e_l-coefficient
    of D(e_k).
    """
    n = alg.dim
    c = alg.table.num
    ar = np.arange(n)

    def chunks():
        for i in range(n):
            M = np.zeros((n, n, n, n), dtype=c.dtype)
            # D(e_i e_j) - D(e_i) e_j - e_i D(e_j), rows (j, l), columns (row, col) of D
            M[:, ar, ar, :] += c[i][:, None, :]
            M[:, :, :, i] -= c.transpose(1, 2, 0)
            M[ar, :, :, ar] -= c[i].T[None, :, :]
            yield M.reshape(n * n, n * n)
        if commuting_with_involution:
            s = integer_rows(alg.involution.reshape(1, -1)).reshape(n, n)
            Z = np.zeros((n, n, n * n), dtype=s.dtype)
            for l in range(n):
                for i in range(n):
                    # (D s - s D)[l, i]
                    Z[l, i, l * n:(l + 1) * n] += s[:, i]
                    Z[l, i, ar * n + i] -= s[l, :]
            yield Z.reshape(n * n, n * n)

    return chunks


def derivations(alg, commuting_with_involution=False):
    """Der(alg) as a subspace of the n*n operator space (row-major D)."""
    if commuting_with_involution and alg.involution is None:
        raise AlgebraError("algebra has no involution")
    return Subspace.kernel(derivation_equations(alg, commuting_with_involution), alg.dim ** 2)


def operator(vec, n):
    """Reshape a flattened operator back to an n x n QArray."""
    return _rows(vec).reshape(n, n)
