"""Dense immutable matrices over Q and the small exact kernel (rank, kernel, solve).

Rank uses fraction-free Bareiss elimination on integer-scaled rows; kernel and
solve use Gauss-Jordan over Fractions. These are meant for matrices up to a
few hundred rows. Big sparse systems go through :mod:`.modular`.
"""
from fractions import Fraction
from math import lcm

from .rational import rat


class NoSolution(ValueError):
    """Raised by :func:`solve` when the system is inconsistent."""


class RatMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(rat(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return RatMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            out = []
            ocols = [other.transpose().row(j) for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                out.extend(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0))
                           for c in ocols)
            return RatMatrix(self.rows, other.cols, out)
        vec = [rat(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
                     for i in range(self.rows))

    def _check_same(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __add__(self, other):
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return RatMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, q):
        q = rat(q)
        return RatMatrix(self.rows, self.cols, [q * a for a in self.entries])

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"RatMatrix({self.to_rows()!r})"

    def rank(self):
        return rank(self)

    def kernel_basis(self):
        return kernel_basis(self)

    def solve(self, b):
        return solve(self, b)


def _integer_rows(m):
    out = []
    for i in range(m.rows):
        r = m.row(i)
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def bareiss_rank(int_rows, ncols):
    """Rank of an integer matrix by fraction-free elimination.

    After step k every live entry is a (k+1)-minor of the input, so the
    division by the previous pivot is always exact.
    """
    M = [list(r) for r in int_rows if any(r)]
    nrows = len(M)
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        prow = M[r]
        for i in range(r + 1, nrows):
            row = M[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def rank(m):
    return bareiss_rank(_integer_rows(m), m.cols)


def rref(rows, ncols):
    """Reduced row echelon form over Fractions. Returns (rows, pivots)."""
    M = [[rat(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def kernel_from_rref(R, pivots, ncols):
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def kernel_basis(m):
    R, piv = rref(m.to_rows(), m.cols)
    return kernel_from_rref(R, piv, m.cols)


def solve(m, b):
    b = [rat(x) for x in b]
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    R, piv = rref(aug, m.cols + 1)
    if piv and piv[-1] == m.cols:
        raise NoSolution("inconsistent linear system")
    x = [Fraction(0)] * m.cols
    for row, p in zip(R, piv):
        x[p] = row[m.cols]
    return tuple(x)
