"""Certified exact linear algebra for large systems.

Row spaces and null spaces are computed modulo word-size primes, lifted to Q
by CRT + rational reconstruction, and then *verified* over Q:

* rank_Q(M) >= rank_p(M) for an integer matrix M, always;
* a reconstructed RREF E with every row of M equal to M[:, pivots] @ E shows
  rowspace(M) is inside span(E), so rank_Q(M) <= rank(E) = rank_p(M).

Hence a verified E *is* the RREF of M over Q; the null space read from it is
exact too. Failing primes are discarded; if reconstruction keeps failing we
fall back to plain Fraction elimination.
"""
from fractions import Fraction
from math import gcd, isqrt, lcm

import numpy as np

from .tensor import QArray, einsum


def _is_prime(n):
    if n < 2:
        return False
    for q in range(2, isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


def _primes_below(n, k):
    out = []
    c = n - 1
    while len(out) < k:
        if _is_prime(c):
            out.append(c)
        c -= 1
    return out


# p < 2**19 keeps p**2 * 2**15 below 2**53, so float64 dot products of
# reduced residues are exact when the inner dimension is chunked at 2**15.
PRIMES = tuple(_primes_below(1 << 19, 12))
_INNER = 1 << 15


def reduce_mod(a, p):
    a = np.asarray(a)
    if a.dtype == object:
        return np.array([int(x) % p for x in a.flat], dtype=np.int64).reshape(a.shape)
    return np.mod(a, p).astype(np.int64, copy=False)


def matmul_mod(A, B, p):
    """(A @ B) mod p for residue arrays, exact via chunked float64 BLAS."""
    k = A.shape[1]
    if k == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    acc = None
    for s in range(0, k, _INNER):
        part = A[:, s:s + _INNER].astype(np.float64) @ B[s:s + _INNER].astype(np.float64)
        part = np.fmod(part, p).astype(np.int64)
        acc = part if acc is None else (acc + part) % p
    return acc % p


def rref_mod(M, p):
    """Reduced row echelon form of a residue matrix. Returns (R, pivots)."""
    M = np.array(M, dtype=np.int64, copy=True)
    m, n = M.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r, c:] = (M[r, c:] * inv) % p
        f = M[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows, c:] = (M[rows, c:] - f[rows, None] * M[r, c:]) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _split(X, size=512):
    for s in range(0, X.shape[0], size):
        yield X[s:s + size]


def _stream_rref_mod(chunks, n, p):
    E = np.zeros((0, n), dtype=np.int64)
    piv = []
    for block in chunks():
        for X in _split(np.asarray(block)):
            X = reduce_mod(X, p)
            if piv:
                X = (X - matmul_mod(X[:, piv], E, p)) % p
            X = X[np.any(X != 0, axis=1)]
            if not X.shape[0]:
                continue
            R, new = rref_mod(X, p)
            if not new:
                continue
            if piv:
                E = (E - matmul_mod(E[:, new], R, p)) % p
            E = np.vstack([E, R])
            piv.extend(new)
    order = np.argsort(piv, kind="stable")
    return E[order], [piv[i] for i in order]


def _kernel_mod_from_rref(R, piv, n, p):
    free = [c for c in range(n) if c not in set(piv)]
    Z = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        Z[f, j] = 1
        if piv:
            Z[piv, j] = (-R[:, f]) % p
    return Z


def _stream_kernel_mod(chunks, n, p):
    K = np.eye(n, dtype=np.int64)
    for block in chunks():
        for X in _split(np.asarray(block)):
            if K.shape[1] == 0:
                return np.zeros((0, n), dtype=np.int64), []
            Y = matmul_mod(reduce_mod(X, p), K, p)
            if not np.any(Y):
                continue
            R, pv = rref_mod(Y, p)
            K = matmul_mod(K, _kernel_mod_from_rref(R, pv, K.shape[1], p), p)
    if K.shape[1] == 0:
        return np.zeros((0, n), dtype=np.int64), []
    return rref_mod(K.T.copy(), p)


def _crt_pair(r1, m1, r2, m2):
    t = ((r2 - r1) * pow(m1, -1, m2)) % m2
    return r1 + m1 * t, m1 * m2


def _ratrecon(a, m):
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return r1, s1


def _reconstruct(images, primes):
    """Lift residue matrices (same pivots) to a QArray, or None on failure."""
    shape = images[0].shape
    nz = np.flatnonzero(np.any(np.stack([im.reshape(-1) for im in images]) != 0, axis=0))
    values = {}
    for idx in nz.tolist():
        r, m = int(images[0].flat[idx]), primes[0]
        for im, p in zip(images[1:], primes[1:]):
            r, m = _crt_pair(r, m, int(im.flat[idx]), p)
        got = _ratrecon(r, m)
        if got is None:
            return None
        values[idx] = got
    den = lcm(*(d for _, d in values.values())) if values else 1
    num = np.zeros(int(np.prod(shape)), dtype=object)
    for idx, (a, d) in values.items():
        num[idx] = a * (den // d)
    return QArray(num.reshape(shape), den)


def _rows_in_span(chunks, E, piv):
    for block in chunks():
        for X in _split(np.asarray(block), 2048):
            X = QArray(X)
            if not piv:
                if not X.is_zero():
                    return False
                continue
            if not (X - X[:, piv] @ E).is_zero():
                return False
    return True


def _annihilates(chunks, N):
    if N.shape[0] == 0:
        return True
    for block in chunks():
        for X in _split(np.asarray(block), 2048):
            if not einsum("ij,kj->ik", QArray(X), N).is_zero():
                return False
    return True


def _better(a, b):
    """Is pivot list a a more trustworthy row-space image than b?"""
    if len(a) != len(b):
        return len(a) > len(b)
    return a < b


def certified_rref(chunks, ncols, max_primes=len(PRIMES)):
    """Exact RREF (E, pivots) of the integer matrix whose rows ``chunks()`` yields.

    ``chunks`` is a zero-argument callable returning an iterable of 2-D integer
    arrays; it is called once per prime and once per verification pass.
    """
    images, used, best = [], [], None
    for p in PRIMES[:max_primes]:
        E_p, piv = _stream_rref_mod(chunks, ncols, p)
        if best is None or _better(piv, best):
            images, used, best = [E_p], [p], piv
        elif piv == best:
            images.append(E_p)
            used.append(p)
        else:
            continue
        if not best:
            if _rows_in_span(chunks, QArray.zeros((0, ncols)), []):
                return QArray.zeros((0, ncols)), []
            continue
        E = _reconstruct(images, used)
        if E is not None and _rows_in_span(chunks, E, best):
            return E, list(best)
    return _exact_rref(chunks, ncols)


def certified_nullspace(chunks, ncols, max_primes=len(PRIMES)):
    """Exact right null space, as the RREF basis (QArray k x ncols) of ker M."""
    images, used, best = [], [], None
    for p in PRIMES[:max_primes]:
        N_p, piv = _stream_kernel_mod(chunks, ncols, p)
        # a smaller mod-p kernel is always closer to the true one
        key = (len(piv), [-c for c in piv])
        if best is None or key < (len(best), [-c for c in best]):
            images, used, best = [N_p], [p], piv
        elif piv == best:
            images.append(N_p)
            used.append(p)
        else:
            continue
        if not best:
            return QArray.zeros((0, ncols))
        N = _reconstruct(images, used)
        if N is not None and _annihilates(chunks, N):
            return N
    E, piv = _exact_rref(chunks, ncols)
    from .matrix import kernel_from_rref
    basis = kernel_from_rref(E.to_fractions().tolist(), piv, ncols)
    if not basis:
        return QArray.zeros((0, ncols))
    return QArray.from_fractions(basis)


def _exact_rref(chunks, ncols):
    from .matrix import rref
    rows = []
    for block in chunks():
        rows.extend([Fraction(int(x)) for x in r] for r in np.asarray(block))
    R, piv = rref(rows, ncols)
    if not R:
        return QArray.zeros((0, ncols)), []
    return QArray.from_fractions(R), piv


def rank_mod_p(M, p=PRIMES[0]):
    """A lower bound for the rank over Q of an integer matrix."""
    _, piv = rref_mod(reduce_mod(np.asarray(M), p), p)
    return len(piv)


def single(M):
    """Wrap one in-memory integer matrix as a chunk source."""
    M = np.asarray(M)
    return lambda: [M]
