"""Exact linear algebra over the rationals.

Matrices are plain nested sequences of ``int`` or :class:`fractions.Fraction`
(row-major).  Everything here is exact: ranks and determinants use
fraction-free (Bareiss) elimination over the integers after clearing
denominators.  Wide matrices fall back to a multi-modular rank unless
``exact=True`` is requested.

The batched determinant :func:`batch_det` works on numpy arrays of shape
``(B, k, k)`` and is what the Plücker and orbit computations lean on.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

Scalar = int | Fraction
Matrix = Sequence[Sequence[Scalar]]

#: Above this many columns :func:`rank` switches to the multi-modular route.
MODULAR_COLUMN_THRESHOLD = 1000
MODULAR_PRIME_COUNT = 3
MODULAR_PRIME_BITS = 62
_MODULAR_SEED = 20260101

_INT64_SAFE = 2**62


class DimensionError(ValueError):
    pass


def shape(M: Matrix) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for r in M:
        if len(r) != cols:
            raise DimensionError("ragged matrix")
    return rows, cols


def transpose(M: Matrix) -> list[list[Scalar]]:
    rows, cols = shape(M)
    return [[M[i][j] for i in range(rows)] for j in range(cols)]


def matmul(A: Matrix, B: Matrix) -> list[list[Scalar]]:
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise DimensionError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def clear_denominators(v: Sequence[Scalar]) -> list[int]:
    """Scale a rational vector to an integer vector (same direction)."""
    den = reduce(_lcm, (Fraction(x).denominator for x in v), 1)
    return [int(Fraction(x) * den) for x in v]


def primitive(v: Sequence[Scalar]) -> list[int]:
    """Primitive integer vector on the ray of ``v`` with first nonzero entry positive."""
    w = clear_denominators(v)
    g = reduce(math.gcd, w, 0)
    if g == 0:
        return w
    lead = next(x for x in w if x != 0)
    if lead < 0:
        g = -g
    return [x // g for x in w]


def _integer_rows(M: Matrix) -> list[list[int]]:
    return [clear_denominators(row) for row in M]


def _bareiss_echelon(M: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place.

    Returns ``(rank, sign)`` where ``sign`` tracks row swaps.  For a square
    full-rank input the last pivot is the determinant (times ``sign``).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        p = M[r][c]
        pr = M[r]
        for i in range(r + 1, rows):
            row = M[i]
            f = row[c]
            M[i] = [(x * p - f * y) // prev for x, y in zip(row, pr)]
        # rows above r were already reduced; entries left of c are zero
        prev = p
        r += 1
    return r, sign


def rank_exact(M: Matrix) -> int:
    rows, cols = shape(M)
    if rows == 0 or cols == 0:
        return 0
    if rows > cols:
        M = transpose(M)
    work = _integer_rows(M)
    r, _ = _bareiss_echelon(work)
    return r


def rank_mod_p(M: Matrix, p: int) -> int:
    """Rank of an integer (or p-integral rational) matrix over GF(p)."""
    rows, cols = shape(M)
    if rows == 0 or cols == 0:
        return 0
    work = [[x % p for x in row] for row in _integer_rows(M)]
    r = 0
    for c in range(cols):
        if r == len(work):
            break
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, p)
        pr = [(x * inv) % p for x in work[r]]
        work[r] = pr
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f:
                work[i] = [(x - f * y) % p for x, y in zip(work[i], pr)]
        r += 1
    return r


def random_primes(count: int = MODULAR_PRIME_COUNT, bits: int = MODULAR_PRIME_BITS,
                  seed: int = _MODULAR_SEED) -> list[int]:
    from sympy import nextprime

    rng = random.Random(seed)
    primes: list[int] = []
    while len(primes) < count:
        p = nextprime(rng.getrandbits(bits) | (1 << (bits - 1)))
        if p.bit_length() == bits and p not in primes:
            primes.append(int(p))
    return primes


def rank_modular(M: Matrix, primes: Sequence[int] | None = None) -> int:
    """Maximum of the ranks modulo several large primes.

    A rank mod p never exceeds the rational rank, so the maximum is a lower
    bound that equals the true rank unless every prime divides the same
    nonzero maximal minor.
    """
    rows, cols = shape(M)
    if rows > cols:
        M = transpose(M)
    primes = list(primes) if primes is not None else random_primes()
    return max(rank_mod_p(M, p) for p in primes)


def rank(M: Matrix, exact: bool = False) -> int:
    rows, cols = shape(M)
    if not exact and max(rows, cols) > MODULAR_COLUMN_THRESHOLD:
        return rank_modular(M)
    return rank_exact(M)


def det(M: Matrix) -> Fraction | int:
    rows, cols = shape(M)
    if rows != cols:
        raise DimensionError(f"determinant of non-square {rows}x{cols} matrix")
    if rows == 0:
        return 1
    dens = [reduce(_lcm, (Fraction(x).denominator for x in row), 1) for row in M]
    work = [[int(Fraction(x) * d) for x in row] for row, d in zip(M, dens)]
    r, sign = _bareiss_echelon(work)
    if r < rows:
        return 0
    value = sign * work[-1][-1]
    scale = reduce(lambda a, b: a * b, dens, 1)
    if scale == 1:
        return value
    out = Fraction(value, scale)
    return out.numerator if out.denominator == 1 else out


def rref(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    work = [[Fraction(x) for x in row] for row in M]
    rows, cols = shape(work)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def kernel_basis(M: Matrix) -> list[list[int]]:
    """Basis of the right null space, one primitive integer vector per free column.

    Free columns are taken in ascending order; each vector has first nonzero
    entry positive.
    """
    rows, cols = shape(M)
    if rows == 0:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v: list[Fraction] = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(primitive(v))
    return basis


def member(basis: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> bool:
    """True iff ``v`` lies in the span of ``basis``."""
    dims = {len(b) for b in basis}
    if dims and dims != {len(v)}:
        raise DimensionError("vectors of different ambient dimension")
    if not any(x != 0 for x in v):
        return True
    if not basis:
        return False
    return rank_exact(list(basis)) == rank_exact(list(basis) + [list(v)])


def span_contains(basis: Sequence[Sequence[Scalar]], vectors: Sequence[Sequence[Scalar]]) -> bool:
    """True iff every vector in ``vectors`` lies in the span of ``basis``."""
    if not vectors:
        return True
    r = rank_exact(list(basis)) if basis else 0
    return rank_exact(list(basis) + [list(v) for v in vectors]) == r


# --- batched integer determinants -------------------------------------------

def hadamard_bound(rows: np.ndarray) -> int:
    """Upper bound on |minor| for any square submatrix of ``rows``."""
    bound = 1
    for row in np.asarray(rows, dtype=object):
        norm2 = sum(int(x) * int(x) for x in row)
        bound *= max(1, math.isqrt(norm2) + 1)
    return bound


def batch_det(A: np.ndarray, safe_int64: bool | None = None) -> np.ndarray:
    """Determinants of a stack of integer matrices, shape ``(B, k, k)``.

    Bareiss elimination vectorised over the batch.  Runs in int64 when every
    intermediate (a product of two minors) fits, otherwise over Python ints.
    ``safe_int64`` overrides the bound check when the caller has one already.
    """
    A = np.asarray(A)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise DimensionError(f"expected (B, k, k), got {A.shape}")
    B, k, _ = A.shape
    if k == 0:
        return np.ones(B, dtype=object)
    if safe_int64 is None:
        if A.dtype == object:
            biggest = max((abs(int(x)) for x in A.flat), default=0)
        else:
            biggest = int(np.abs(A).max()) if A.size else 0
        bound = (math.isqrt(k) + 1) ** k * max(1, biggest) ** k
        safe_int64 = bound * bound < _INT64_SAFE
    a = A.astype(np.int64 if safe_int64 else object, copy=True)
    idx = np.arange(B)
    sign = np.ones(B, dtype=np.int64)
    singular = np.zeros(B, dtype=bool)
    prev = np.ones(B, dtype=a.dtype)
    for c in range(k):
        col = a[:, c:, c]
        nz = col != 0
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1) + c
        singular |= ~has
        swap = has & (first != c)
        if swap.any():
            s = idx[swap]
            rows_c = a[s, c, :].copy()
            a[s, c, :] = a[s, first[swap], :]
            a[s, first[swap], :] = rows_c
            sign[swap] = -sign[swap]
        piv = a[:, c, c].copy()
        piv[~has] = 1
        if c + 1 < k:
            sub = a[:, c + 1:, c + 1:]
            left = a[:, c + 1:, c][:, :, None]
            top = a[:, c, c + 1:][:, None, :]
            a[:, c + 1:, c + 1:] = (sub * piv[:, None, None] - left * top) // prev[:, None, None]
            a[:, c + 1:, c] = 0
        prev = piv
    out = (a[:, k - 1, k - 1] * sign).astype(object)
    out[singular] = 0
    return out
