"""The S4 action on an assembled Lie algebra, the algebra L0 it cuts out, and
structurable algebras of block shape (A C / B A).
"""
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
import scipy.sparse as sp

from . import sl3rep
from .algebra import AlgebraError, StructureAlgebra, Subspace
from .coord import random_vector
from .exact import QArray, einsum, rat_str
from .exact.tensor import concatenate


class ActionError(AlgebraError):
    pass


# -- S4 ---------------------------------------------------------------------------
def _layout_dims(L):
    lo, hi = L.blocks["sl3A"]
    b0, b1 = L.blocks["VB"]
    c0, c1 = L.blocks["VC"]
    return (hi - lo) // 8, (b1 - b0) // 3, (c1 - c0) // 3


def _mat3(g):
    return np.array([[int(g[i, j]) for j in range(3)] for i in range(3)], dtype=np.int64)


def _generator_on_L(L, g):
    """Sparse n x n matrix (columns are images) of the automorphism induced by g."""
    nA, nB, nC = _layout_dims(L)
    n = L.n
    conj = sl3rep.conjugation_matrix(g)
    if conj.den != 1:
        raise ActionError("conjugation matrix is not integral")
    g3 = _mat3(g)
    M = sp.lil_matrix((n, n), dtype=np.int64)
    if nA:
        M[:8 * nA, :8 * nA] = sp.kron(sp.csr_matrix(conj.num.astype(np.int64)), sp.identity(nA, dtype=np.int64))
    o1, o2 = L.blocks["VB"][0], L.blocks["VC"][0]
    if nB:
        M[o1:o1 + 3 * nB, o1:o1 + 3 * nB] = sp.kron(sp.csr_matrix(g3), sp.identity(nB, dtype=np.int64))
    if nC:
        M[o2:o2 + 3 * nC, o2:o2 + 3 * nC] = sp.kron(sp.csr_matrix(g3), sp.identity(nC, dtype=np.int64))
    s0, s1 = L.blocks["s"]
    for i in range(s0, s1):
        M[i, i] = 1
    return M.tocsr()


def automorphism_witness(L, P):
    """First (i, j) with [P e_i, P e_j] != P [e_i, e_j], or None. P integral, sparse."""
    n = L.n
    P = sp.csr_matrix(P)
    PT = P.T.tocsr()
    for i in range(n):
        xi = PT.getrow(i)                                   # image of e_i as a row
        Mi = (xi @ L.num).toarray().reshape(n, n)           # [b, k] = [P e_i, e_b]_k
        lhs = PT @ Mi                                       # [j, k] = [P e_i, P e_j]_k
        Ci = L.num.getrow(i).toarray().reshape(n, n)        # [j, k] = [e_i, e_j]_k
        rhs = (P @ Ci.T).T                                  # [j, k'] = (P [e_i, e_j])_k'
        bad = np.flatnonzero(np.any(np.asarray(lhs) != np.asarray(rhs), axis=1))
        if len(bad):
            return i, int(bad[0])
    return None


def _group_order(gens):
    seen = {tuple(np.eye(3, dtype=np.int64).flat)}
    frontier = [np.eye(3, dtype=np.int64)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                key = tuple(y.flat)
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


@dataclass
class S4Action:
    generators: dict      # name -> sparse n x n integer matrix (columns are images)

    def __getitem__(self, name):
        return self.generators[name]

    def dense(self, name):
        return QArray(self.generators[name].toarray())


def build_s4_action(L, verify=True):
    """tau1, tau2, phi, tau acting on V and V* by signed permutations, on sl3 x A by
    conjugation and trivially on s; each is checked to be an automorphism."""
    g3 = {k: _mat3(v) for k, v in sl3rep.S4_GENERATORS.items()}
    I3 = np.eye(3, dtype=np.int64)
    t1, t2, ph, ta = g3["tau1"], g3["tau2"], g3["phi"], g3["tau"]
    rels = {
        "tau1^2": t1 @ t1, "tau2^2": t2 @ t2, "tau^2": ta @ ta, "phi^3": ph @ ph @ ph,
        "phi tau1 phi^-1 tau2": ph @ t1 @ ph.T @ t2,
    }
    for name, m in rels.items():
        if not (m == I3).all():
            raise ActionError(f"relation {name} fails")
    if _group_order(list(g3.values())) != 24:
        raise ActionError("generators do not generate a group of order 24")
    gens = {k: _generator_on_L(L, v) for k, v in sl3rep.S4_GENERATORS.items()}
    if verify:
        for name, P in gens.items():
            w = automorphism_witness(L, P)
            if w is not None:
                raise ActionError(f"{name} is not an automorphism: pair {w}")
    return S4Action(gens)


def joint_eigenspaces(L, act):
    """Dimensions of the four joint (tau1, tau2) eigenspaces, keyed by signs."""
    n = L.n
    I = sp.identity(n, dtype=np.int64, format="csr")
    out = {}
    for s1, s2 in product((1, -1), repeat=2):
        A = (act["tau1"] - s1 * I).toarray()
        B = (act["tau2"] - s2 * I).toarray()
        out[(s1, s2)] = Subspace.kernel(lambda A=A, B=B: [A, B], n).dim
    return out


# -- structurable algebras ---------------------------------------------------------------
class StructurableAlgebra:
    """A unital algebra with involution; optional block data for the (A C / B A) shape."""

    def __init__(self, alg, unit, blocks=None, name="A"):
        if alg.involution is None:
            raise AlgebraError("structurable algebra needs an involution")
        self.alg = alg
        self.unit = unit if isinstance(unit, QArray) else QArray.from_fractions(list(unit))
        self.blocks = dict(blocks or {})
        self.name = name

    @property
    def dim(self):
        return self.alg.dim

    @property
    def table(self):
        return self.alg.table

    @property
    def involution(self):
        return self.alg.involution

    def is_unital(self):
        n = self.dim
        I = QArray.eye(n)
        return (einsum("i,ijk->jk", self.unit, self.table) == I
                and einsum("j,ijk->ik", self.unit, self.table) == I)

    def skew_elements(self):
        n = self.dim
        M = self.involution + QArray.eye(n)
        return Subspace.kernel(lambda: [_int_rows(M)], n)

    def to_json(self):
        d = self.alg.to_json()
        d["name"] = self.name
        d["unit_vector"] = [rat_str(x) for x in self.unit.to_fractions().tolist()]
        d["blocks"] = {k: list(v) for k, v in self.blocks.items()}
        return d

    def __repr__(self):
        return f"StructurableAlgebra({self.name}, dim={self.dim})"


def _int_rows(M):
    return (M * M.den).num


def _block_offsets(nA, nB, nC):
    return {"a1": (0, nA), "c": (nA, nA + nC), "b": (nA + nC, nA + nC + nB),
            "a2": (nA + nC + nB, 2 * nA + nC + nB)}


def closed_form(d, T_scale=1):
    """The algebra (A C / B A) with the closed-form product and involution swapping a1, a2.

    (a1 c; b a2)(a1' c'; b' a2') =
        (a1a1' - T(b',c),  c'a1 + ca2' + b x b';  a1'b + a2b' + c x c',  a2'a2 - T(b,c'))
    """
    m = d.maps
    nA, nB, nC = d.dims["A"], d.dims["B"], d.dims["C"]
    off = _block_offsets(nA, nB, nC)
    N = 2 * nA + nB + nC
    P = d.product_A
    T = m["T"] * T_scale
    den = np.lcm.reduce([x.den for x in (P, T, m["act_AB"], m["act_CA"], m["cross_B"], m["cross_C"])])
    big = np.zeros((N, N, N), dtype=object)
    big[...] = 0

    def put(xs, ys, zs, arr):
        (x0, x1), (y0, y1), (z0, z1) = off[xs], off[ys], off[zs]
        if arr.size:
            big[x0:x1, y0:y1, z0:z1] += np.asarray(arr.num, dtype=object) * int(den // arr.den)

    put("a1", "a1", "a1", P)
    put("c", "b", "a1", -T.transpose(1, 0, 2))               # x = c, y = b'
    put("a2", "a2", "a2", P.transpose(1, 0, 2))              # a2'a2
    put("b", "c", "a2", -T)                                  # x = b, y = c'
    put("a1", "c", "c", m["act_CA"].transpose(1, 0, 2))      # c'a1
    put("c", "a2", "c", m["act_CA"])                         # c a2'
    put("b", "b", "c", m["cross_B"])
    put("b", "a1", "b", m["act_AB"].transpose(1, 0, 2))      # a1' b
    put("a2", "b", "b", m["act_AB"])                         # a2 b'
    put("c", "c", "b", m["cross_C"])
    table = QArray(big, int(den)) if N else QArray.zeros((0, 0, 0))
    labels = ([f"a1:{a}" for a in d.labels["A"]] + [f"c:{c}" for c in d.labels["C"]]
              + [f"b:{b}" for b in d.labels["B"]] + [f"a2:{a}" for a in d.labels["A"]])
    return StructurableAlgebra(StructureAlgebra(table, labels, None, _swap_involution(nA, nB, nC)),
                               _unit_vector(nA, nB, nC, d.unit), off, name=f"{d.name}-closed")


def _swap_involution(nA, nB, nC):
    N = 2 * nA + nB + nC
    s = np.zeros((N, N), dtype=np.int64)
    off = _block_offsets(nA, nB, nC)
    for i in range(nA):
        s[off["a2"][0] + i, off["a1"][0] + i] = 1
        s[off["a1"][0] + i, off["a2"][0] + i] = 1
    for name in ("b", "c"):
        for i in range(*off[name]):
            s[i, i] = 1
    return QArray(s)


def _unit_vector(nA, nB, nC, unit):
    off = _block_offsets(nA, nB, nC)
    u = np.zeros(2 * nA + nB + nC, dtype=np.int64)
    if nA:
        u[off["a1"][0] + unit] = 1
        u[off["a2"][0] + unit] = 1
    return QArray(u)


def embedding(L):
    """Rows: the images in L of the block basis of (A C / B A).

    (a1 c; b a2) <-> -E23 (x) a1 + E32 (x) a2 + e1 (x) b + e1* (x) c
    Returned as (index array, sign array) since every row is a signed unit vector.
    """
    nA, nB, nC = _layout_dims(L)
    e23, e32 = sl3rep.LABELS.index("E23"), sl3rep.LABELS.index("E32")
    o1, o2 = L.blocks["VB"][0], L.blocks["VC"][0]
    idx = ([e23 * nA + a for a in range(nA)] + [o2 + c for c in range(nC)]
           + [o1 + b for b in range(nB)] + [e32 * nA + a for a in range(nA)])
    sign = [-1] * nA + [1] * nC + [1] * nB + [1] * nA
    return np.array(idx, dtype=np.int64), np.array(sign, dtype=np.int64)


def _rows_from(idx, sign, n):
    E = np.zeros((len(idx), n), dtype=np.int64)
    E[np.arange(len(idx)), idx] = sign
    return E


def extract_L0(L, act=None, check_eigenspace=True):
    """L0 = {tau1 X = X, tau2 X = -X} with X.Y = -tau[phi X, phi^2 Y] and X^- = -tau X."""
    act = act or build_s4_action(L)
    n = L.n
    nA, nB, nC = _layout_dims(L)
    idx, sign = embedding(L)
    E = _rows_from(idx, sign, n)
    N = len(idx)
    if check_eigenspace:
        I = sp.identity(n, dtype=np.int64, format="csr")
        A = (act["tau1"] - I).toarray()
        B = (act["tau2"] + I).toarray()
        L0 = Subspace.kernel(lambda: [A, B], n)
        if L0.dim != 2 * nA + nB + nC:
            raise ActionError(f"dim L0 = {L0.dim}, expected {2 * nA + nB + nC}")
        if not L0 == Subspace.span(QArray(E), n):
            raise ActionError("identification does not span L0")
    phi = act["phi"]
    X1 = QArray((phi @ E.T).T)
    X2 = QArray((phi @ (phi @ E.T)).T)
    Z = L.bracket_many(X1, X2)                               # (N, N, n)
    tau = act["tau"]
    Zt = -(Z.num.reshape(N * N, n) @ tau.T.toarray())        # rows: tau applied
    Zt = Zt.reshape(N, N, n)
    coef = Zt[:, :, idx] * sign
    if not np.array_equal(np.einsum("pqr,rk->pqk", coef, E), Zt):
        raise ActionError("product leaves L0")
    table = QArray(coef, Z.den)
    inv_rows = -(tau @ E.T).T                                 # images of basis, as rows
    s = (inv_rows[:, idx] * sign).T                           # columns are images
    labels = ([f"a1:{i}" for i in range(nA)] + [f"c:{i}" for i in range(nC)]
              + [f"b:{i}" for i in range(nB)] + [f"a2:{i}" for i in range(nA)])
    alg = StructureAlgebra(table, labels, None, QArray(np.asarray(s)), check=False)
    unit = _unit_vector(nA, nB, nC, L.meta.get("unit", 0))
    return StructurableAlgebra(alg, unit, _block_offsets(nA, nB, nC), name=f"{L.name}-L0")


def compare_tables(S1, S2):
    """First basis pair (x, y) where the products differ, ('involution', i) for the
    involution, or None if the algebras agree entrywise."""
    d = S1.table - S2.table
    bad = np.argwhere(d.num != 0)
    if len(bad):
        return tuple(int(v) for v in bad[0][:2])
    di = S1.involution - S2.involution
    bad = np.argwhere(di.num != 0)
    if len(bad):
        return ("involution", int(bad[0][1]))
    return None


# -- the structurable identity -------------------------------------------------------
def _V_operator(P, sig, x, y):
    """V_{x,y} = L_{x ybar} + R_x R_ybar - R_y R_xbar as a matrix [k, z]."""
    ybar, xbar = sig @ y, sig @ x
    xy = einsum("i,j,ijk->k", x, ybar, P)
    Lxy = einsum("i,izk->kz", xy, P)
    R = lambda u: einsum("j,ijk->ki", u, P)
    return Lxy + R(x) @ R(ybar) - R(y) @ R(xbar)


def _V_tensor(P, sig):
    """Vt[x, y, k, z] for all basis x, y."""
    Q = einsum("xjm,jy->xym", P, sig)                    # x ybar
    t1 = einsum("xym,mzk->xykz", Q, P)                  # (x ybar) z
    zy = einsum("zjm,jy->zym", P, sig)                  # z ybar
    t2 = einsum("zym,mxk->xykz", zy, P)                 # (z ybar) x
    zx = einsum("zjm,jx->zxm", P, sig)                  # z xbar
    t3 = einsum("zxm,myk->xykz", zx, P)                 # (z xbar) y
    return t1 + t2 - t3


@dataclass
class AxiomResult:
    passed: bool
    witness: tuple = None
    mode: str = "full"
    checked: int = 0

    def __bool__(self):
        return self.passed

    def to_json(self):
        d = {"check": "structurable", "verdict": "pass" if self.passed else "fail",
             "mode": self.mode, "checked": self.checked}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        return d


def check_structurable_axiom(S, samples=500, seed=0, full_limit=16):
    """[V_{x,y}, V_{z,w}] = V_{V_{x,y}z, w} - V_{z, V_{y,x}w}.

    All basis 4-tuples when dim <= full_limit, else ``samples`` seeded dense
    random rational 4-tuples.
    """
    n = S.dim
    P, sig = S.table, S.involution
    if n <= full_limit:
        Vt = _V_tensor(P, sig)
        lhs = einsum("xyka,zwal->xyzwkl", Vt, Vt) - einsum("zwka,xyal->xyzwkl", Vt, Vt)
        r1 = einsum("xyuz,uwkl->xyzwkl", Vt, Vt)                # V_{V_{x,y} z, w}
        r2 = einsum("yxuw,zukl->xyzwkl", Vt, Vt)                # V_{z, V_{y,x} w}
        res = lhs - r1 + r2
        bad = np.argwhere(res.num != 0)
        if len(bad):
            return AxiomResult(False, tuple(int(v) for v in bad[0][:4]), "full", n ** 4)
        return AxiomResult(True, None, "full", n ** 4)
    rng = random.Random(seed)
    for k in range(samples):
        x, y, z, w = (random_vector(rng, n) for _ in range(4))
        Vxy, Vzw = _V_operator(P, sig, x, y), _V_operator(P, sig, z, w)
        lhs = Vxy @ Vzw - Vzw @ Vxy
        rhs = _V_operator(P, sig, Vxy @ z, w) - _V_operator(P, sig, z, _V_operator(P, sig, y, x) @ w)
        if not lhs == rhs:
            return AxiomResult(False, ("sample", k), "sampled", k + 1)
    return AxiomResult(True, None, "sampled", samples)
