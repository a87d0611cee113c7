"""Exact rational arrays stored as an integer numerator array over one denominator.

Numerators live in int64 whenever a product or sum provably fits; otherwise
the operation is redone on Python ints (dtype=object). Either way nothing is
rounded.
"""
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

from .rational import rat

_LIMIT = 1 << 62


def _maxabs(a):
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _as_int_array(a):
    """int64 if every entry fits comfortably, else object."""
    a = np.asarray(a)
    if a.dtype == object:
        if a.size == 0 or _maxabs(a) < _LIMIT:
            return a.astype(np.int64)
        return a
    if a.dtype.kind in "iu":
        return a.astype(np.int64, copy=False)
    raise TypeError(f"numerator array must be integral, got {a.dtype}")


def _obj(a):
    return a if a.dtype == object else a.astype(object)


def _array_gcd(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return reduce(gcd, (int(x) for x in a.flat if x), 0)
    return int(np.gcd.reduce(np.abs(a), axis=None))


class QArray:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1, normalize=True):
        num = _as_int_array(num)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        if normalize and den != 1:
            g = gcd(_array_gcd(num), den)
            if g > 1:
                num = num // g
                den //= g
        self.num = num
        self.den = den

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_fractions(cls, values):
        arr = np.asarray(values, dtype=object)
        if arr.size == 0:
            return cls(np.zeros(arr.shape, dtype=np.int64))
        fr = [rat(x) for x in arr.flat]
        d = lcm(*(x.denominator for x in fr))
        num = np.array([x.numerator * (d // x.denominator) for x in fr], dtype=object)
        return cls(num.reshape(arr.shape), d)

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape, dtype=np.int64))

    @classmethod
    def eye(cls, n):
        return cls(np.eye(n, dtype=np.int64))

    # -- views ----------------------------------------------------------------
    @property
    def shape(self):
        return self.num.shape

    @property
    def ndim(self):
        return self.num.ndim

    @property
    def size(self):
        return self.num.size

    def __len__(self):
        return self.num.shape[0]

    def __getitem__(self, idx):
        return QArray(self.num[idx], self.den)

    def reshape(self, *shape):
        return QArray(self.num.reshape(*shape), self.den, normalize=False)

    def transpose(self, *axes):
        return QArray(self.num.transpose(*axes), self.den, normalize=False)

    @property
    def T(self):
        return self.transpose()

    def copy(self):
        return QArray(self.num.copy(), self.den, normalize=False)

    def to_fractions(self):
        out = np.empty(self.shape, dtype=object)
        flat = out.reshape(-1)
        for i, n in enumerate(self.num.flat):
            flat[i] = Fraction(int(n), self.den)
        return out

    def item(self, *idx):
        return Fraction(int(self.num[idx]), self.den)

    def tolist(self):
        return self.to_fractions().tolist()

    def nonzero_entries(self):
        """(index tuple, Fraction) for every nonzero entry in C order."""
        idx = np.argwhere(self.num != 0)
        return [(tuple(int(i) for i in ix), Fraction(int(self.num[tuple(ix)]), self.den))
                for ix in idx]

    def maxabs(self):
        return _maxabs(self.num)

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, factor):
        if factor == 1:
            return self.num
        if _maxabs(self.num) * factor < _LIMIT and self.num.dtype != object:
            return self.num * factor
        return _obj(self.num) * factor

    def _aligned(self, other):
        d = lcm(self.den, other.den)
        return self._lift(d // self.den), other._lift(d // other.den), d

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = _coerce(other)
        a, b, d = self._aligned(other)
        if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _LIMIT:
            return QArray(a + b, d)
        return QArray(_obj(a) + _obj(b), d)

    __radd__ = __add__

    def __neg__(self):
        return QArray(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QArray):
            d = self.den * other.den
            if (self.num.dtype != object and other.num.dtype != object
                    and _maxabs(self.num) * _maxabs(other.num) < _LIMIT):
                return QArray(self.num * other.num, d)
            return QArray(_obj(self.num) * _obj(other.num), d)
        q = rat(other)
        return QArray(self._lift(abs(q.numerator)) * (1 if q.numerator >= 0 else -1),
                      self.den * q.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = rat(other)
        return self * Fraction(q.denominator, q.numerator)

    def __matmul__(self, other):
        other = _coerce(other)
        if self.ndim == 1 and other.ndim == 1:
            return einsum("i,i->", self, other)
        if self.ndim == 1:
            return einsum("i,ij->j", self, other)
        if other.ndim == 1:
            return einsum("ij,j->i", self, other)
        return einsum("ij,jk->ik", self, other)

    def is_zero(self):
        return not np.any(self.num != 0)

    def __eq__(self, other):
        if not isinstance(other, QArray):
            try:
                other = _coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"QArray(shape={self.shape}, den={self.den})"


def _coerce(x):
    if isinstance(x, QArray):
        return x
    arr = np.asarray(x, dtype=object)
    return QArray.from_fractions(arr)


def einsum(spec, *ops):
    """Exact ``np.einsum`` over QArrays (explicit ``->`` required)."""
    ops = [_coerce(o) for o in ops]
    inputs, out = spec.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(ops):
        raise ValueError("operand count does not match subscripts")
    sizes = {}
    for t, o in zip(terms, ops):
        if len(t) != o.ndim:
            raise ValueError(f"subscript {t!r} does not match operand of ndim {o.ndim}")
        for ch, n in zip(t, o.shape):
            if sizes.setdefault(ch, n) != n:
                raise ValueError(f"size mismatch on index {ch!r}")
    summed = 1
    for ch, n in sizes.items():
        if ch not in out:
            summed *= n
    bound = summed
    for o in ops:
        bound *= _maxabs(o.num)
    den = 1
    for o in ops:
        den *= o.den
    if bound < _LIMIT and all(o.num.dtype != object for o in ops):
        res = np.einsum(spec, *(o.num for o in ops), optimize=len(ops) > 2)
    else:
        res = np.einsum(spec, *(_obj(o.num) for o in ops), optimize=False)
        res = np.asarray(res, dtype=object)
    return QArray(np.asarray(res), den)


def stack(arrays, axis=0):
    arrays = [_coerce(a) for a in arrays]
    d = lcm(*(a.den for a in arrays))
    nums = [a._lift(d // a.den) for a in arrays]
    if any(n.dtype == object for n in nums):
        nums = [_obj(n) for n in nums]
    return QArray(np.stack(nums, axis=axis), d)


def concatenate(arrays, axis=0):
    arrays = [_coerce(a) for a in arrays]
    d = lcm(*(a.den for a in arrays))
    nums = [a._lift(d // a.den) for a in arrays]
    if any(n.dtype == object for n in nums):
        nums = [_obj(n) for n in nums]
    return QArray(np.concatenate(nums, axis=axis), d)


def integer_rows(q):
    """Scale each row of a 2-D QArray to a primitive integer row (same row space)."""
    num = q.num
    out = num.copy()
    if num.dtype == object:
        for i in range(num.shape[0]):
            g = reduce(gcd, (int(x) for x in num[i] if x), 0)
            if g > 1:
                out[i] = num[i] // g
        return _as_int_array(out)
    g = np.gcd.reduce(np.abs(num), axis=1)
    g[g == 0] = 1
    return out // g[:, None]
