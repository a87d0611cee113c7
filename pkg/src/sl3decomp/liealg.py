"""Lie algebras given by sparse structure constants, and the assembly of
L = (sl3 x A) + (V x B) + (V* x C) + s from a coordinate datum.

A LieTable stores c_ij^k as integer numerators over one common denominator in
a CSR matrix of shape (n, n*n): row i, column j*n + k.
"""
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, lcm

import numpy as np
import scipy.sparse as sp

from . import sl3rep
from .algebra import Subspace
from .exact import QArray, RatMatrix, einsum, integer_rows, rank_mod_p, rat_str
from .exact.modular import PRIMES
from .exact.tensor import concatenate

_LIMIT = 1 << 62


class LieTable:
    def __init__(self, n, labels, num, den=1, blocks=None, degree=None, name="L", meta=None):
        self.n = n
        self.labels = list(labels)
        self.num = sp.csr_matrix(num, shape=(n, n * n), dtype=np.int64)
        self.num.eliminate_zeros()
        self.num.sort_indices()
        self.den = den
        self.blocks = dict(blocks or {"all": (0, n)})
        self.degree = np.zeros(n, dtype=np.int64) if degree is None else np.asarray(degree)
        self.name = name
        self.meta = dict(meta or {})

    @property
    def dim(self):
        return self.n

    # -- construction helpers ------------------------------------------------------
    @classmethod
    def from_entries(cls, n, labels, entries, **kw):
        """Build from an iterable of (i, j, k, Fraction) with i, j, k ints.

        Both orders must be present (or are completed by antisymmetry when one
        of (i,j,k), (j,i,k) is missing). Conflicting duplicates raise.
        """
        vals = {}
        for i, j, k, c in entries:
            c = Fraction(c)
            for key, v in (((i, j, k), c), ((j, i, k), -c)):
                if key in vals and vals[key] != v:
                    raise ValueError(f"inconsistent structure constant at {key}")
                vals[key] = v
        den = lcm(1, *(v.denominator for v in vals.values())) if vals else 1
        rows, cols, data = [], [], []
        for (i, j, k), v in vals.items():
            if v:
                rows.append(i)
                cols.append(j * n + k)
                data.append(int(v * den))
        num = sp.csr_matrix((np.array(data, dtype=np.int64), (rows, cols)), shape=(n, n * n))
        return cls(n, labels, num, den, **kw)

    @classmethod
    def from_dense(cls, C, labels=None, **kw):
        C = C if isinstance(C, QArray) else QArray.from_fractions(C)
        n = C.shape[0]
        if C.num.dtype == object:
            raise OverflowError("structure constants too large for int64 storage")
        num = sp.csr_matrix(C.num.reshape(n, n * n))
        return cls(n, labels or [f"e{i}" for i in range(n)], num, C.den, **kw)

    def dense(self):
        return QArray(self.num.toarray().reshape(self.n, self.n, self.n), self.den)

    def entries(self):
        """Sorted nonzero (i, j, k, Fraction)."""
        coo = self.num.tocoo()
        out = []
        for i, col, v in zip(coo.row, coo.col, coo.data):
            j, k = divmod(int(col), self.n)
            out.append((int(i), j, k, Fraction(int(v), self.den)))
        out.sort()
        return out

    def constant(self, i, j, k):
        return Fraction(int(self.num[i, j * self.n + k]), self.den)

    def perturbed(self, i, j, k, delta=1):
        """Copy with c_ij^k += delta (and c_ji^k -= delta)."""
        n = self.n
        d = Fraction(delta)
        den = lcm(self.den, d.denominator)
        num = self.num.astype(np.int64) * (den // self.den)
        num = num.tolil()
        num[i, j * n + k] += int(d * den)
        num[j, i * n + k] -= int(d * den)
        return LieTable(n, self.labels, num.tocsr(), den, self.blocks, self.degree,
                        self.name + "-perturbed", self.meta)

    def ad(self, i):
        """ad(e_i) as a sparse (n x n) integer matrix, [k, j] = c_ij^k * den."""
        row = self.num.getrow(i).tocoo()
        j, k = np.divmod(row.col, self.n)
        return sp.csr_matrix((row.data, (k, j)), shape=(self.n, self.n))

    def bracket(self, x, y):
        """[x, y] for coordinate vectors (anything QArray accepts)."""
        x = x if isinstance(x, QArray) else QArray.from_fractions(list(x))
        y = y if isinstance(y, QArray) else QArray.from_fractions(list(y))
        return self.bracket_many(x.reshape(1, -1), y.reshape(1, -1))[0, 0]

    def bracket_many(self, X, Y):
        """Z[p, q] = [X[p], Y[q]] for row blocks X, Y (QArrays)."""
        n = self.n
        xi, xd = _sparse_rows(X)
        yi, yd = _sparse_rows(Y)
        _guard(xi, self.num, n)
        T = (xi @ self.num).tocsr()                 # (p, j*n + k)
        out = []
        for p in range(X.shape[0]):
            Mp = T.getrow(p).toarray().reshape(n, n)  # (j, k)
            _guard(yi, sp.csr_matrix(Mp), n)
            out.append((yi @ Mp))
        Z = np.stack(out) if out else np.zeros((0, Y.shape[0], n), dtype=np.int64)
        return QArray(np.asarray(Z), xd * yd * self.den)

    # -- io ---------------------------------------------------------------------------
    def to_json(self):
        return {
            "name": self.name,
            "dim": self.n,
            "labels": self.labels,
            "blocks": {k: list(v) for k, v in self.blocks.items()},
            "brackets": [[i, j, k, rat_str(c)] for i, j, k, c in self.entries()],
        }

    @classmethod
    def from_json(cls, d):
        n = int(d["dim"])
        from .exact import rat
        ents = [(int(i), int(j), int(k), rat(c)) for i, j, k, c in d["brackets"]]
        blocks = {k: tuple(v) for k, v in d.get("blocks", {"all": [0, n]}).items()}
        return cls.from_entries(n, d.get("labels", [f"e{i}" for i in range(n)]), ents,
                                blocks=blocks, name=d.get("name", "L"))

    def __repr__(self):
        return f"LieTable({self.name}, dim={self.n}, nnz={self.num.nnz})"


def _sparse_rows(X):
    """Integer CSR numerators and the common denominator of a QArray block."""
    if X.num.dtype == object:
        raise OverflowError("coordinates too large for int64 sparse products")
    return sp.csr_matrix(X.num.astype(np.int64)), X.den


def _guard(A, B, inner):
    a = abs(A.data).max() if A.nnz else 0
    b = abs(B.data).max() if B.nnz else 0
    if int(a) * int(b) * inner >= _LIMIT:
        raise OverflowError("int64 sparse product could overflow")


# -- assembly --------------------------------------------------------------------
def layout(d):
    """Basis labels, block ranges and Z3-degrees for the datum's Lie algebra."""
    dims = d.dims
    nA, nB, nC, nS = dims["A"], dims["B"], dims["C"], dims["s"]
    labels = [f"{x}(x){a}" for x in sl3rep.LABELS for a in d.labels["A"]]
    labels += [f"e{i + 1}(x){b}" for i in range(3) for b in d.labels["B"]]
    labels += [f"e{i + 1}*(x){c}" for i in range(3) for c in d.labels["C"]]
    labels += list(d.labels["s"])
    o1 = 8 * nA
    o2 = o1 + 3 * nB
    o3 = o2 + 3 * nC
    n = o3 + nS
    blocks = {"sl3A": (0, o1), "VB": (o1, o2), "VC": (o2, o3), "s": (o3, n)}
    degree = np.zeros(n, dtype=np.int64)
    degree[o1:o2] = 1
    degree[o2:o3] = 2
    return labels, blocks, degree


def assemble(d):
    """The bracket table given by the nine rules; no condition is assumed."""
    labels, blocks, degree = layout(d)
    n = len(labels)
    dims = d.dims
    nA, nB, nC, nS = dims["A"], dims["B"], dims["C"], dims["s"]
    t = sl3rep.tensors()
    m = d.maps
    half = Fraction(1, 2)
    pieces = []   # (row block, col block, out block, dense QArray with 3 axes)

    def add(rb, cb, ob, arr):
        pieces.append((rb, cb, ob, arr))

    def flat(arr, nrow, ncol, nout):
        return arr.reshape(nrow, ncol, nout)

    # [x (x) a, y (x) a']
    sl = (einsum("xyz,abm->xaybzm", t["comm"], m["circ_A"]) * half
          + einsum("xyz,abm->xaybzm", t["circ"], m["bracket_A"]) * half)
    add("sl3A", "sl3A", "sl3A", flat(sl, 8 * nA, 8 * nA, 8 * nA))
    add("sl3A", "sl3A", "s", flat(einsum("xy,abd->xaybd", t["pair"], m["D_AA"]), 8 * nA, 8 * nA, nS))
    # [x (x) a, u (x) b] = xu (x) ab
    add("sl3A", "VB", "VB", flat(einsum("xuw,abm->xaubwm", t["act_v"], m["act_AB"]), 8 * nA, 3 * nB, 3 * nB))
    # [x (x) a, v* (x) c] = -(v* x) (x) ca
    add("sl3A", "VC", "VC", flat(einsum("xvw,cam->xavcwm", t["act_dual"], m["act_CA"]), 8 * nA, 3 * nC, 3 * nC))
    # [u (x) b, v* (x) c]
    add("VB", "VC", "sl3A", flat(einsum("uvz,bcm->ubvczm", t["proj"], m["T"]), 3 * nB, 3 * nC, 8 * nA))
    delta = QArray.eye(3) * Fraction(1, 3)
    add("VB", "VC", "s", flat(einsum("uv,bcd->ubvcd", delta, m["D_BC"]), 3 * nB, 3 * nC, nS))
    # wedges
    add("VB", "VB", "VC", flat(einsum("uvw,bcm->ubvcwm", t["eps"], m["cross_B"]), 3 * nB, 3 * nB, 3 * nC))
    add("VC", "VC", "VB", flat(einsum("uvw,bcm->ubvcwm", t["eps"], m["cross_C"]), 3 * nC, 3 * nC, 3 * nB))
    # s actions
    I8, I3 = QArray.eye(8), QArray.eye(3)
    add("s", "sl3A", "sl3A", flat(einsum("xy,dam->dxaym", I8, m["s_on_A"]), nS, 8 * nA, 8 * nA))
    add("s", "VB", "VB", flat(einsum("uv,dbm->dubvm", I3, m["s_on_B"]), nS, 3 * nB, 3 * nB))
    add("s", "VC", "VC", flat(einsum("uv,dcm->ducvm", I3, m["s_on_C"]), nS, 3 * nC, 3 * nC))
    add("s", "s", "s", m["s_bracket"])

    absolute = [(blocks[rb][0], blocks[cb][0], blocks[ob][0], arr, rb != cb)
                for rb, cb, ob, arr in pieces]
    L = table_from_blocks(n, labels, absolute, blocks=blocks, degree=degree, name=d.name,
                          meta={"unit": d.unit, "dims": dims})
    if not is_antisymmetric(L):
        raise ValueError("assembled bracket is not antisymmetric")
    return L


def table_from_blocks(n, labels, pieces, **kw):
    """LieTable from dense 3-axis blocks placed at (row, col, out) offsets.

    Each piece is (r0, c0, o0, QArray, mirror); with mirror set the
    antisymmetric partner block is added as well.
    """
    den = lcm(1, *(p[3].den for p in pieces))
    R, J, K, V = [], [], [], []
    for r0, c0, o0, arr, mirror in pieces:
        num = arr.num
        if num.size == 0:
            continue
        scale = den // arr.den
        if num.dtype == object or int(abs(num).max()) * scale >= _LIMIT:
            raise OverflowError("structure constants too large for int64 storage")
        nz = np.nonzero(num)
        v = num[nz].astype(np.int64) * scale
        i, j, k = nz[0] + r0, nz[1] + c0, nz[2] + o0
        R.append(i); J.append(j); K.append(k); V.append(v)
        if mirror:
            R.append(j); J.append(i); K.append(k); V.append(-v)
    R, J, K, V = (np.concatenate(x) if x else np.zeros(0, dtype=np.int64) for x in (R, J, K, V))
    num = sp.coo_matrix((V, (R, J * n + K)), shape=(n, n * n)).tocsr()
    return LieTable(n, labels, num, den, **kw)


def is_antisymmetric(L):
    n = L.n
    coo = L.num.tocoo()
    j, k = np.divmod(coo.col, n)
    swapped = sp.csr_matrix((coo.data, (j, coo.row * n + k)), shape=(n, n * n))
    return (L.num + swapped).count_nonzero() == 0


def grading_witness(L):
    """First entry violating deg(i) + deg(j) = deg(k) mod 3, or None."""
    n = L.n
    coo = L.num.tocoo()
    j, k = np.divmod(coo.col, n)
    bad = (L.degree[coo.row] + L.degree[j] - L.degree[k]) % 3 != 0
    if not bad.any():
        return None
    idx = np.flatnonzero(bad)
    order = np.lexsort((k[idx], j[idx], coo.row[idx]))
    t = idx[order[0]]
    return int(coo.row[t]), int(j[t]), int(k[t])


# -- Jacobi -------------------------------------------------------------------------
class JacobiResult:
    def __init__(self, passed, witness=None, triples=0, method="ad"):
        self.passed = passed
        self.witness = witness
        self.triples = triples
        self.method = method

    def to_json(self, labels=None):
        d = {"check": "jacobi", "verdict": "pass" if self.passed else "fail",
             "triples": self.triples, "method": self.method}
        if self.witness is not None:
            d["witness"] = list(self.witness)
            if labels:
                d["witness_labels"] = [labels[i] for i in self.witness]
        return d

    def __bool__(self):
        return self.passed

    def __repr__(self):
        return f"JacobiResult(passed={self.passed}, witness={self.witness})"


def _jacobi_rows(num, n, lo, hi):
    """First failing (i, j, k) with lo <= i < hi, i < j < k, or None.

    For fixed i, with c = structure constants,
      J[j,k,l] = sum_m c_ij^m c_mk^l - c_ik^m c_mj^l + c_jk^m c_mi^l
    which is [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j].
    """
    num = sp.csr_matrix(num)
    # Cflat2[(j,k), m] = c_jk^m
    coo = num.tocoo()
    jj, kk = np.divmod(coo.col, n)
    C2 = sp.csr_matrix((coo.data, (coo.row * n + jj, kk)), shape=(n * n, n))
    for i in range(lo, hi):
        if i >= n - 2:
            break
        Ci = num.getrow(i).tocoo()
        j_, m_ = np.divmod(Ci.col, n)
        keep = j_ > i
        Mi = sp.csr_matrix((Ci.data[keep], (j_[keep], m_[keep])), shape=(n, n))   # [j, m]
        t1 = (Mi @ num).tocoo()                                                  # [j, (k,l)]
        k1, l1 = np.divmod(t1.col, n)
        # -c_ik^m c_mj^l : same as t1 with j and k swapped
        ad_i = _column_slice(num, n, i)                                          # [m, l] = c_mi^l
        t3 = (C2 @ ad_i).tocoo()                                                 # [(j,k), l]
        j3, k3 = np.divmod(t3.row, n)
        rows = np.concatenate([t1.row, k1, j3])
        cols_k = np.concatenate([k1, t1.row, k3])
        ls = np.concatenate([l1, l1, t3.col])
        vals = np.concatenate([t1.data, -t1.data, t3.data])
        sel = (rows > i) & (cols_k > rows)
        if not sel.any():
            continue
        key = (rows[sel] * n + cols_k[sel]) * n + ls[sel]
        acc = sp.coo_matrix((vals[sel], (np.zeros_like(key), key)), shape=(1, n ** 3)).tocsr()
        acc.eliminate_zeros()
        if acc.nnz:
            first = int(acc.indices.min())
            jk, _ = divmod(first, n)
            j, k = divmod(jk, n)
            return (i, j, k)
    return None


def _column_slice(num, n, i):
    """Matrix [m, l] = c_mi^l."""
    coo = num.tocoo()
    j, l = np.divmod(coo.col, n)
    keep = j == i
    return sp.csr_matrix((coo.data[keep], (coo.row[keep], l[keep])), shape=(n, n))


def _jacobi_worker(args):
    data, indices, indptr, n, lo, hi = args
    num = sp.csr_matrix((data, indices, indptr), shape=(n, n * n))
    return _jacobi_rows(num, n, lo, hi)


def jacobi_check(L, jobs=1, method="ad"):
    """Exact Jacobi identity on all unordered basis triples.

    ``method="ad"`` computes, for each i, all (j, k) at once through sparse
    integer products (int64, guarded against overflow); ``method="triples"``
    is the plain loop over i < j < k in Fractions. Both report the
    lexicographically first failing triple.
    """
    n = L.n
    total = comb(n, 3)
    if method == "triples":
        return JacobiResult(*_jacobi_triples(L), triples=total, method="triples")
    if not is_antisymmetric(L):
        return JacobiResult(False, None, total, "antisymmetry")
    amax = int(abs(L.num.data).max()) if L.num.nnz else 0
    if 3 * n * amax * amax >= _LIMIT:
        return JacobiResult(*_jacobi_triples(L), triples=total, method="triples")
    if jobs <= 1 or n < 64:
        w = _jacobi_rows(L.num, n, 0, n)
    else:
        cuts = _balanced_ranges(n, jobs * 4)
        args = [(L.num.data, L.num.indices, L.num.indptr, n, lo, hi) for lo, hi in cuts]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_jacobi_worker, args))
        found = [r for r in results if r is not None]
        w = min(found) if found else None
    return JacobiResult(w is None, w, total, "ad")


def _balanced_ranges(n, parts):
    """Split range(n) so each part holds about the same number of (i<j<k) triples."""
    weights = np.array([comb(n - 1 - i, 2) for i in range(n)], dtype=float)
    cum = np.cumsum(weights)
    total = cum[-1] if len(cum) else 0
    cuts, lo = [], 0
    for p in range(1, parts + 1):
        hi = int(np.searchsorted(cum, total * p / parts, side="right")) + 1 if p < parts else n
        hi = min(max(hi, lo + 1), n)
        if lo < n:
            cuts.append((lo, hi))
        lo = hi
    return cuts


def _jacobi_triples(L):
    """Reference implementation: loop over i < j < k with Fraction arithmetic."""
    n = L.n
    rows = []
    for i in range(n):
        r = L.num.getrow(i)
        rows.append({int(c): Fraction(int(v), L.den) for c, v in zip(r.indices, r.data)})

    def br(x, y):
        # x, y dicts index -> coeff ; returns dict
        out = {}
        for a, ca in x.items():
            row = rows[a]
            for b, cb in y.items():
                base = b * n
                for k in range(n):
                    c = row.get(base + k)
                    if c:
                        out[k] = out.get(k, 0) + ca * cb * c
        return {k: v for k, v in out.items() if v}

    basis = [{i: Fraction(1)} for i in range(n)]
    prods = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prods[i][j] = br(basis[i], basis[j])
    for i, j, k in itertools.combinations(range(n), 3):
        tot = {}
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            for key, v in br(prods[x][y], basis[z]).items():
                tot[key] = tot.get(key, 0) + v
        if any(tot.values()):
            return False, (i, j, k)
    return True, None


# -- Killing form ------------------------------------------------------------------------
def _killing_numerators(L):
    n = L.n
    coo = L.num.tocoo()
    j, k = np.divmod(coo.col, n)
    perm = sp.csr_matrix((coo.data, (coo.row, k * n + j)), shape=(n, n * n))
    amax = int(abs(L.num.data).max()) if L.num.nnz else 0
    if amax * amax * n * n >= _LIMIT:
        raise OverflowError("Killing form numerators could overflow int64")
    return (L.num @ perm.T).toarray()


def killing_form(L):
    """K(x, y) = tr(ad x ad y) as a RatMatrix."""
    K = _killing_numerators(L)
    d2 = L.den * L.den
    return RatMatrix(L.n, L.n, [Fraction(int(v), d2) for v in K.flat])


def killing_rank(L):
    """Exact rank of the Killing form.

    Full rank modulo a prime proves full rank over Q; otherwise the rank is
    computed by certified elimination.
    """
    K = _killing_numerators(L)
    n = L.n
    if n == 0:
        return 0
    for p in PRIMES[:2]:
        if rank_mod_p(K, p) == n:
            return n
    return Subspace.span(QArray(K), n).dim


# -- subspaces -----------------------------------------------------------------------------
def centralizer(L, indices):
    """{v : [e_i, v] = 0 for every i in indices}."""
    n = L.n
    mats = [L.ad(i).toarray() for i in indices]

    def chunks():
        for M in mats:
            yield M

    return Subspace.kernel(chunks, n)


def sl3_indices(L, unit_index=0, nA=None):
    """Basis indices of sl3 (x) 1 in an assembled table."""
    lo, hi = L.blocks["sl3A"]
    nA = (hi - lo) // 8 if nA is None else nA
    return [x * nA + unit_index for x in range(8)]


def block_subspace(L, name):
    lo, hi = L.blocks[name]
    rows = np.zeros((hi - lo, L.n), dtype=np.int64)
    rows[np.arange(hi - lo), np.arange(lo, hi)] = 1
    return Subspace.span(QArray(rows), L.n) if hi > lo else Subspace.zero(L.n)


def _images(L, S):
    """Rows [e_i, v] for v in the echelon basis of S and every i."""
    n = L.n
    E = integer_rows(S.echelon)
    if E.dtype == object:
        raise OverflowError("subspace coordinates too large")
    Ei = sp.csr_matrix(E.astype(np.int64))
    coo = L.num.tocoo()
    i, k = coo.row, coo.col % n
    j = coo.col // n
    # Cj[j, (i,k)] = c_ij^k
    Cj = sp.csr_matrix((coo.data, (j, i * n + k)), shape=(n, n * n))
    _guard(Ei, Cj, n)
    out = (Ei @ Cj).toarray().reshape(-1, n)
    return out[np.any(out != 0, axis=1)]


def generated_ideal(L, seed):
    """Smallest ideal containing the subspace ``seed`` (iterated brackets)."""
    n = L.n
    S = seed if isinstance(seed, Subspace) else Subspace.span(seed, n)
    frontier = S
    while frontier.dim:
        imgs = _images(L, frontier)
        if len(imgs) == 0:
            break
        new = S.residual(QArray(imgs))
        new_rows = new.num[np.any(new.num != 0, axis=1)]
        if len(new_rows) == 0:
            break
        frontier = Subspace.span(QArray(new_rows, new.den), n)
        S = S + frontier
    return S


def unit_vector(n, i):
    v = np.zeros((1, n), dtype=np.int64)
    v[0, i] = 1
    return QArray(v)


def is_simple_evidence(L, seeds=None):
    """Killing form nondegenerate and every seed generates all of L.

    This is evidence of simplicity (semisimple plus saturation from several
    seeds), not a full ideal-lattice computation.
    """
    n = L.n
    if n == 0 or killing_rank(L) < n:
        return False
    if seeds is None:
        seeds = [0]
        for name in ("VB", "VC", "s"):
            lo, hi = L.blocks.get(name, (0, 0))
            if hi > lo:
                seeds.append(lo)
    return all(generated_ideal(L, unit_vector(n, i)).dim == n for i in seeds)


def isomorphism_witness(L1, L2, Phi):
    """First (i, j) with [Phi e_i, Phi e_j] != Phi [e_i, e_j] in L2, or None.

    Phi is a QArray of shape (L2.n, L1.n) whose columns are the images.
    Bijectivity is checked separately (rank).
    """
    n1 = L1.n
    rows = Phi.T                                   # image of e_i as row i
    PhiT_num = Phi.num.T
    for i in range(n1):
        lhs = L2.bracket_many(rows[i].reshape(1, -1), rows)[0]          # (n1, n2)
        Ci = L1.num.getrow(i).toarray().reshape(n1, n1)                  # (j, k)
        rhs = QArray(Ci @ PhiT_num if PhiT_num.dtype != object else
                     np.asarray(Ci, dtype=object) @ PhiT_num, L1.den * Phi.den)
        if not lhs == rhs:
            diff = (lhs - rhs).num
            return i, int(np.flatnonzero(np.any(diff != 0, axis=1))[0])
    return None
