"""V = Q^3, its dual, sl(V) and the helper maps of the bracket table.

The sl3 basis is fixed as E12, E13, E21, E23, E31, E32, H1 = diag(1,-1,0),
H2 = diag(0,1,-1). det(e1^e2^e3) = 1, so e1^e2 <-> e3*, e2^e3 <-> e1*,
e3^e1 <-> e2*, and dually for V*.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import QArray, RatMatrix, rat

LABELS = ("E12", "E13", "E21", "E23", "E31", "E32", "H1", "H2")
OFF_DIAGONAL = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def elementary(i, j):
    return RatMatrix(3, 3, [1 if (r, c) == (i, j) else 0 for r in range(3) for c in range(3)])


def _diag(*d):
    return RatMatrix(3, 3, [d[r] if r == c else 0 for r in range(3) for c in range(3)])


BASIS = tuple([elementary(i, j) for i, j in OFF_DIAGONAL] + [_diag(1, -1, 0), _diag(0, 1, -1)])
IDENTITY = RatMatrix.identity(3)


@dataclass(frozen=True)
class ThreeSpace:
    """Standard basis of V with its dual basis and the det normalization."""
    dim: int = 3
    det_value: Fraction = Fraction(1)

    def pairing(self, f, v):
        return sum((rat(a) * rat(b) for a, b in zip(f, v)), Fraction(0))

    def det(self, v1, v2, v3):
        return _det3([v1, v2, v3]) * self.det_value

    def dual_det(self, f1, f2, f3):
        return _det3([f1, f2, f3]) / self.det_value

    def compatible(self, fs, vs):
        """det(f1^f2^f3) det(v1^v2^v3) == det(f_i(v_j))."""
        gram = [[self.pairing(f, v) for v in vs] for f in fs]
        return self.dual_det(*fs) * self.det(*vs) == _det3(gram)


def _det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = [[rat(x) for x in r] for r in rows]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def is_sl3(x):
    return x.rows == 3 and x.cols == 3 and x.trace() == 0


def sl3_element(rows):
    m = RatMatrix.from_rows(rows)
    if not is_sl3(m):
        raise ValueError("sl3 elements are 3x3 and trace zero")
    return m


def coords(x):
    """Coordinates of a trace-zero 3x3 matrix in the fixed basis."""
    if not is_sl3(x):
        raise ValueError("not trace zero")
    return tuple([x[i, j] for i, j in OFF_DIAGONAL] + [x[0, 0], -x[2, 2]])


def from_coords(c):
    out = RatMatrix.zeros(3, 3)
    for a, b in zip(c, BASIS):
        if a:
            out = out + b.scale(a)
    return out


def commutator(x, y):
    return x @ y - y @ x


def circ(x, y):
    """x o y = xy + yx - (2/3) tr(xy) I."""
    return x @ y + y @ x - IDENTITY.scale(Fraction(2, 3) * (x @ y).trace())


def pair(x, y):
    """(x|y) = tr(xy)/3."""
    return (x @ y).trace() / 3


def _vec(v):
    v = [rat(a) for a in v]
    if len(v) != 3:
        raise ValueError("vectors in V have three coordinates")
    return v


def wedge_to_dual(u1, u2):
    """u1 ^ u2 as the functional det(u1 ^ u2 ^ _), in dual coordinates."""
    a, b = _vec(u1), _vec(u2)
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def wedge_to_primal(f1, f2):
    return wedge_to_dual(f1, f2)


def rank_one_projection(u, f):
    """u f - (1/3) f(u) I, a trace-zero matrix."""
    u, f = _vec(u), _vec(f)
    outer = RatMatrix(3, 3, [a * b for a in u for b in f])
    return outer - IDENTITY.scale(sum(a * b for a, b in zip(u, f)) / 3)


# -- structure tensors in the fixed basis ----------------------------------
@lru_cache(maxsize=None)
def tensors():
    """Dictionary of QArrays used by the Lie assembly.

    comm[x, y, z], circ[x, y, z], pair[x, y]; act_v[x, u, w] = (x e_u)_w;
    act_dual[x, v, w] = coefficient of e_w* in -(e_v* x); eps[u1, u2, w];
    proj[u, v, z] = coords of e_u e_v* - (1/3) delta_uv I.
    """
    comm = [[coords(commutator(x, y)) for y in BASIS] for x in BASIS]
    circ_t = [[coords(circ(x, y)) for y in BASIS] for x in BASIS]
    pair_t = [[pair(x, y) for y in BASIS] for x in BASIS]
    act_v = [[[x[w, u] for w in range(3)] for u in range(3)] for x in BASIS]
    act_dual = [[[-x[v, w] for w in range(3)] for v in range(3)] for x in BASIS]
    eps = np.zeros((3, 3, 3), dtype=np.int64)
    for u1 in range(3):
        for u2 in range(3):
            e1 = [1 if k == u1 else 0 for k in range(3)]
            e2 = [1 if k == u2 else 0 for k in range(3)]
            eps[u1, u2] = [int(c) for c in wedge_to_dual(e1, e2)]
    proj = [[coords(rank_one_projection([1 if k == u else 0 for k in range(3)],
                                        [1 if k == v else 0 for k in range(3)]))
             for v in range(3)] for u in range(3)]
    return {
        "comm": QArray.from_fractions(comm),
        "circ": QArray.from_fractions(circ_t),
        "pair": QArray.from_fractions(pair_t),
        "act_v": QArray.from_fractions(act_v),
        "act_dual": QArray.from_fractions(act_dual),
        "eps": QArray(eps),
        "proj": QArray.from_fractions(proj),
    }


def signed_permutation(images):
    """3x3 matrix g with g e_i = sign * e_j for images[i] = (sign, j)."""
    g = [[0] * 3 for _ in range(3)]
    for i, (sign, j) in enumerate(images):
        g[j][i] = sign
    return RatMatrix.from_rows(g)


# The S4 generators acting on V (and by the same formulas on V*).
TAU1 = signed_permutation([(1, 0), (-1, 1), (-1, 2)])
TAU2 = signed_permutation([(-1, 0), (1, 1), (-1, 2)])
PHI = signed_permutation([(1, 1), (1, 2), (1, 0)])
TAU = signed_permutation([(-1, 0), (-1, 2), (-1, 1)])
S4_GENERATORS = {"tau1": TAU1, "tau2": TAU2, "phi": PHI, "tau": TAU}


def conjugation_matrix(g):
    """8x8 matrix of x -> g x g^-1 on sl3 coordinates (columns are images)."""
    ginv = g.transpose()
    if g @ ginv != IDENTITY:
        raise ValueError("expected an orthogonal matrix")
    cols = [coords(g @ b @ ginv) for b in BASIS]
    return QArray.from_fractions([[cols[j][i] for j in range(8)] for i in range(8)])
