"""The converse construction: L = T_I + A[12] + A[23] + A[31] from a structurable algebra.

Triples (T1, T2, T3) of operators on the algebra are flattened to vectors of
length 3*m*m (operator M stored with M[k, j] = coefficient of e_k in M e_j).
Only the copies [12], [23], [31] are stored; x[ji] = -xbar[ij].

Sign conventions (each fixed by T_I = Der + skew part and by Jacobi):
``triples`` returns (T_i, T_j, T_k) with

    T_i = L_xbar L_y - L_ybar L_x
    T_j = R_xbar R_y - R_ybar R_x
    T_k = -(R_{xbar y - ybar x} + L_y L_xbar - L_x L_ybar)

and the bracket of two elements of the same copy is [x[ij], y[ij]] = -(T_i, T_j, T_k).
"""
from dataclasses import dataclass, field

import numpy as np

from . import sl3rep
from .algebra import AlgebraError, Subspace, derivations
from .exact import QArray, einsum
from .exact.tensor import concatenate
from .liealg import LieTable, isomorphism_witness, jacobi_check, table_from_blocks
from .structurable import StructurableAlgebra

# stored copies as 0-based (i, j); k = 3 - i - j completes the cyclic triple
COPIES = ((0, 1), (1, 2), (2, 0))
COPY_NAMES = ("[12]", "[23]", "[31]")


class KantorError(AlgebraError):
    pass


def _imatmul(a, b):
    """Exact integer a @ b, through BLAS when the float64 result cannot round."""
    bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * a.shape[-1]
    if bound < 2 ** 52:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return a @ b


class _Ops:
    """Integer numerators of the multiplication operators of a structurable algebra."""

    def __init__(self, S):
        P, sig = S.table, S.involution
        if sig.den != 1 or P.num.dtype == object or sig.num.dtype == object:
            raise KantorError("expected an integral involution and int64 structure constants")
        self.m = S.dim
        self.P = np.asarray(P.num)
        self.s = np.asarray(sig.num)
        self.den = P.den
        self.L = self.P.transpose(0, 2, 1)             # L[u][k, j] = P[u, j, k]
        self.R = self.P.transpose(1, 2, 0)             # R[u][k, i] = P[i, u, k]
        self.Lbar = np.einsum("ax,akj->xkj", self.s, self.L)
        self.Rbar = np.einsum("ax,akj->xkj", self.s, self.R)

    def triples(self, pair_index, x):
        """Rows T^{(ij)}_{x,y} for every basis y, as integers over den**2."""
        i, j = COPIES[pair_index]
        k = 3 - i - j
        m, P, s = self.m, self.P, self.s
        L, Lbar, R, Rbar = self.L, self.Lbar, self.R, self.Rbar
        mm = _imatmul
        Ti = mm(Lbar[x], L) - mm(Lbar, L[x])
        Tj = mm(Rbar[x], R) - mm(Rbar, R[x])
        u = np.einsum("a,ayk->yk", s[:, x], P) - np.einsum("ay,ak->yk", s, P[:, x, :])
        Ru = mm(u, P.transpose(1, 0, 2).reshape(m, m * m)).reshape(m, m, m).transpose(0, 2, 1)
        Tk = -(Ru + mm(L, Lbar[x]) - mm(L[x], Lbar))
        out = np.zeros((m, 3, m, m), dtype=Ti.dtype)
        out[:, i], out[:, j], out[:, k] = Ti, Tj, Tk
        return out.reshape(m, 3 * m * m)


def _apply_triple_component(vecs, m, comp):
    """Component ``comp`` of flattened triples, as (t, m, m) operators."""
    return vecs.reshape(vecs.shape[0], 3, m, m)[:, comp]


@dataclass
class TriInner:
    space: Subspace                 # in the 3*m*m triple space
    m: int
    derivation_dim: int = None
    skew_dim: int = None
    inner_derivation_dim: int = None   # dim of T_I meet {(D, D, D)}
    decomposes: bool = None         # T_I == {(D, D, D) : D in Der} + skew part
    bracket: QArray = None          # structure constants of T_I in its echelon basis

    @property
    def dim(self):
        return self.space.dim

    def operators(self):
        """QArray (t, 3, m, m) of the basis triples."""
        return self.space.echelon.reshape(self.dim, 3, self.m, self.m)


def _commutators(E, m):
    """Componentwise commutators of the rows of E (QArray t x 3mm): (t, t, 3mm)."""
    t = E.shape[0]
    M = np.asarray(E.num).reshape(t, 3, m, m)
    if M.dtype == object:
        raise KantorError("triple coordinates too large")
    out = _imatmul(M[:, None], M[None]) - _imatmul(M[None], M[:, None])
    return QArray(out.reshape(t, t, 3 * m * m), E.den * E.den)


def tri_inner(S, decompose=True):
    """T_I as the span of all T^{(ij)}_{x,y}, with closure under the bracket checked.

    With ``decompose`` the derivations commuting with the involution (as
    (D, D, D)) and the skew triples are computed too; ``decomposes`` records
    whether they add up to T_I. They do for the algebras coming from the
    exceptional series, but not for algebras with outer derivations.
    """
    ops = _Ops(S)
    m = S.dim
    N = 3 * m * m

    def chunks():
        for p in range(3):
            for x in range(m):
                rows = ops.triples(p, x)[x + 1:]
                rows = rows[np.any(rows != 0, axis=1)]
                if len(rows):
                    yield rows

    space = Subspace.from_chunks(chunks, N) if m > 1 else Subspace.zero(N)
    T = TriInner(space, m)
    t = space.dim
    if t:
        comm = _commutators(space.echelon, m).reshape(t * t, N)
        if not space.residual(comm).is_zero():
            raise KantorError("T_I is not closed under the componentwise bracket")
        T.bracket = space.coordinates(comm).reshape(t, t, t)
    else:
        T.bracket = QArray.zeros((0, 0, 0))
    if decompose:
        D = derivations(S.alg, commuting_with_involution=True)
        Dt = _diagonal_triples(D.echelon, m)
        K = _skew_triples(S)
        T.derivation_dim, T.skew_dim = D.dim, K.dim
        both = Subspace.span(concatenate([Dt, K.echelon]), N) if D.dim + K.dim else Subspace.zero(N)
        if both.dim != D.dim + K.dim:
            raise KantorError("derivation and skew parts intersect")
        T.decomposes = both == space
        if D.dim:
            T.inner_derivation_dim = t + D.dim - (space + Subspace.span(Dt, N)).dim
        else:
            T.inner_derivation_dim = 0
    return T


def _diagonal_triples(Dflat, m):
    """(D, D, D) for the rows D of a (k, m*m) QArray."""
    k = Dflat.shape[0]
    if k == 0:
        return QArray.zeros((0, 3 * m * m))
    num = np.asarray(Dflat.num)
    return QArray(np.concatenate([num, num, num], axis=1), Dflat.den)


def _lr_triple(ops, s1, s2, s3):
    """(L_{s2} - R_{s3}, L_{s3} - R_{s1}, L_{s1} - R_{s2}) for integer vectors s_i."""
    Lo = lambda v: np.einsum("u,ukj->kj", v, ops.L)
    Ro = lambda v: np.einsum("u,ukj->kj", v, ops.R)
    return np.stack([Lo(s2) - Ro(s3), Lo(s3) - Ro(s1), Lo(s1) - Ro(s2)]).reshape(-1)


def _skew_triples(S):
    ops = _Ops(S)
    m = S.dim
    skew = S.skew_elements()
    rows = []
    for v in np.asarray((skew.echelon * skew.echelon.den).num if skew.dim else np.zeros((0, m))):
        v = np.asarray(v, dtype=np.int64)
        z = np.zeros(m, dtype=np.int64)
        rows.append(_lr_triple(ops, v, z, -v))       # s1 = v, s3 = -v
        rows.append(_lr_triple(ops, z, v, -v))       # s2 = v, s3 = -v
    if not rows:
        return Subspace.zero(3 * m * m)
    return Subspace.span(QArray(np.array(rows)), 3 * m * m)


@dataclass
class KantorLie:
    table: LieTable
    tri: TriInner
    algebra: StructurableAlgebra
    offsets: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.table.n

    def copy_index(self, pair_index, x):
        return self.offsets["copies"][pair_index] + x


def kantor_build(S, tri=None):
    """Bracket table of T_I + A[12] + A[23] + A[31]."""
    tri = tri or tri_inner(S, decompose=False)
    ops = _Ops(S)
    m, t = S.dim, tri.dim
    n = t + 3 * m
    offs = [t, t + m, t + 2 * m]
    E = tri.space.echelon
    pieces = []
    if t:
        pieces.append((0, 0, 0, tri.bracket, False))
        opsT = np.asarray(E.num).reshape(t, 3, m, m)
        for p, (i, j) in enumerate(COPIES):
            k = 3 - i - j
            # [T, x[ij]] = T_k(x)[ij]; entry [a, x, z] = (T_a)_k[z, x]
            arr = QArray(opsT[:, k].transpose(0, 2, 1), E.den)
            pieces.append((0, offs[p], offs[p], arr, True))
            # [x[ij], y[ij]] = -triples(x, y), see the module docstring
            rows = -np.concatenate([ops.triples(p, x) for x in range(m)])
            coords = QArray(rows, ops.den ** 2)[:, tri.space.pivots] if rows.size else None
            arr = coords.reshape(m, m, t)
            pieces.append((offs[p], offs[p], 0, arr, False))
    # [x[ij], y[jk]] = (xy)[ik] = -conj(xy)[ki]
    sbar_prod = -np.einsum("lk,xyk->xyl", ops.s, ops.P)
    for p in range(3):
        q, r = (p + 1) % 3, (p + 2) % 3
        pieces.append((offs[p], offs[q], offs[r], QArray(sbar_prod, ops.den), True))
    labels = [f"T{a}" for a in range(t)] + [f"{S.alg.labels[x]}{COPY_NAMES[p]}"
                                           for p in range(3) for x in range(m)]
    blocks = {"T": (0, t), "[12]": (offs[0], offs[0] + m), "[23]": (offs[1], offs[1] + m),
              "[31]": (offs[2], offs[2] + m)}
    table = table_from_blocks(n, labels, pieces, blocks=blocks, name=f"K({S.name})")
    return KantorLie(table, tri, S, {"copies": offs})


# -- identification with the direct construction ----------------------------------------
@dataclass
class Identification:
    matrix: QArray              # (n_K, n_direct), columns are images
    witness: tuple = None
    rank: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.witness is None and self.rank == self.matrix.shape[1] and all(self.checks.values())


def _slot(S, name, i):
    return S.blocks[name][0] + i


def _copy_vec(K, pair, vec_m):
    """Vector in K with the algebra vector ``vec_m`` placed in the stored copy ``pair``."""
    out = np.zeros(K.dim, dtype=object)
    out[...] = 0
    o = K.offsets["copies"][pair]
    out[o:o + K.algebra.dim] = vec_m
    return out


def identify_sl3(K, d, L_direct):
    """Change of basis from the direct build of datum d onto K, checked to be an isomorphism.

    e_i e_j* (x) a -> (a 0; 0 0)[ij]  (= -(0 0; 0 a)[ji] when [ij] is not stored)
    diag(alpha) (x) a -> (L_{a2 s} - R_{a3 s}, L_{a3 s} - R_{a1 s}, L_{a1 s} - R_{a2 s}),
        s = (a 0; 0 -a)
    e_i (x) b -> -(0 0; b 0)[jk],  e_i* (x) c -> -(0 c; 0 0)[jk]
    d -> (D, D, D), D = d acting blockwise on (A C / B A)
    """
    S = K.algebra
    m = S.dim
    ops = _Ops(S)
    nA, nB, nC, nS = (d.dims[x] for x in ("A", "B", "C", "s"))
    n = L_direct.n
    tri = K.tri
    cols = []

    def tri_coords(flat_num, den):
        v = QArray(np.asarray(flat_num).reshape(1, -1), den)
        if not tri.space.contains(v):
            raise KantorError("image triple is not in T_I")
        c = tri.space.coordinates(v)[0].to_fractions()
        out = np.zeros(K.dim, dtype=object)
        out[...] = 0
        out[:tri.dim] = c
        return out

    stored = {pair: p for p, pair in enumerate(COPIES)}
    for x, X in enumerate(sl3rep.BASIS):
        for a in range(nA):
            e = np.zeros(m, dtype=object)
            e[...] = 0
            if x < 6:
                i, j = sl3rep.OFF_DIAGONAL[x]
                if (i, j) in stored:
                    e[_slot(S, "a1", a)] = 1
                    cols.append(_copy_vec(K, stored[(i, j)], e))
                else:
                    e[_slot(S, "a2", a)] = -1
                    cols.append(_copy_vec(K, stored[(j, i)], e))
            else:
                alpha = [int(X[r, r]) for r in range(3)]
                sv = np.zeros(m, dtype=np.int64)
                sv[_slot(S, "a1", a)] = 1
                sv[_slot(S, "a2", a)] = -1
                trip = _lr_triple(ops, alpha[0] * sv, alpha[1] * sv, alpha[2] * sv)
                cols.append(tri_coords(trip, ops.den))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        p = stored[(j, k)]
        for b in range(nB):
            e = np.zeros(m, dtype=object); e[...] = 0
            e[_slot(S, "b", b)] = -1
            cols.append(_copy_vec(K, p, e))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        p = stored[(j, k)]
        for c in range(nC):
            e = np.zeros(m, dtype=object); e[...] = 0
            e[_slot(S, "c", c)] = -1
            cols.append(_copy_vec(K, p, e))
    sA, sB, sC = d.maps["s_on_A"], d.maps["s_on_B"], d.maps["s_on_C"]
    for q in range(nS):
        D = np.zeros((m, m), dtype=object)
        D[...] = 0
        for name, act, size in (("a1", sA, nA), ("c", sC, nC), ("b", sB, nB), ("a2", sA, nA)):
            o = S.blocks[name][0]
            # act[q, x, y] = coefficient of e_y in d e_x
            blk = act[q].to_fractions()
            D[o:o + size, o:o + size] = np.asarray(blk, dtype=object).T
        flat = np.concatenate([D.reshape(-1)] * 3)
        v = QArray.from_fractions(flat.reshape(1, -1))
        if not tri.space.contains(v):
            raise KantorError(f"structure algebra element {q} does not act as a derivation in T_I")
        c = tri.space.coordinates(v)[0].to_fractions()
        col = np.zeros(K.dim, dtype=object); col[...] = 0
        col[:tri.dim] = c
        cols.append(col)
    Phi = QArray.from_fractions(np.array(cols, dtype=object).T)
    if Phi.shape != (K.dim, n):
        raise KantorError(f"identification has shape {Phi.shape}, expected {(K.dim, n)}")
    rank = Subspace.span(Phi.T, K.dim).dim
    result = Identification(Phi, None, rank)
    result.witness = isomorphism_witness(L_direct, K.table, Phi)
    result.checks = _identification_checks(K.table, Phi, d)
    return result


def _identification_checks(KL, Phi, d):
    """Checks made inside K itself, independent of the direct table."""
    nA, nB, nC, nS = (d.dims[x] for x in ("A", "B", "C", "s"))
    img = Phi.T                                   # row i = image of direct basis vector i
    sl3 = img[[x * nA + d.unit for x in range(8)]]
    out = {}
    # sl3[1] closes with the structure constants of sl3
    Z = KL.bracket_many(sl3, sl3)
    want = []
    for X in sl3rep.BASIS:
        want.append([sl3rep.coords(sl3rep.commutator(X, Y)) for Y in sl3rep.BASIS])
    C = QArray.from_fractions(np.array(want, dtype=object))          # (8, 8, 8)
    out["sl3[1] is a copy of sl3"] = Z == einsum("xyz,zk->xyk", C, sl3)
    lo = 8 * nA + 3 * nB + 3 * nC
    if nS:
        out["[sl3[1], s] = 0"] = KL.bracket_many(sl3, img[lo:lo + nS]) == QArray.zeros((8, nS, KL.n))
    # diagonal weights: H acts on e_i (x) b by alpha_i and on e_i* (x) c by -alpha_i
    ok = True
    for h in (6, 7):
        alpha = [sl3rep.BASIS[h][r, r] for r in range(3)]
        for off, size, sgn in ((8 * nA, nB, 1), (8 * nA + 3 * nB, nC, -1)):
            if not size:
                continue
            V = img[off:off + 3 * size]
            got = KL.bracket_many(sl3[h:h + 1], V)[0]
            scale = QArray.from_fractions([sgn * alpha[i] for i in range(3) for _ in range(size)])
            ok = ok and got == einsum("r,rk->rk", scale, V)
    out["V[b], V*[c] carry the natural and dual weights"] = ok
    return {k: bool(v) for k, v in out.items()}
