"""Bivectors in the exterior square of a vector space.

The basis of the exterior square of a ``d``-dimensional space is
``v_{i,j} = v_i ^ v_j`` with ``i < j`` in lexicographic order.  All sign
conventions (and the column order of subspace files) follow that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import exactlin
from .exactlin import Scalar

#: Refuse Plücker vectors longer than this (memory/time guard).
MAX_PLUCKER_LENGTH = 2_000_000


@lru_cache(maxsize=None)
def pairs(d: int) -> tuple[tuple[int, int], ...]:
    """Lex-ordered index pairs ``(i, j)``, ``i < j < d``."""
    return tuple(combinations(range(d), 2))


@lru_cache(maxsize=None)
def pair_index(d: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(d))}


def wedge_dim(d: int) -> int:
    return d * (d - 1) // 2


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` (0 on a repeated index)."""
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


@dataclass(frozen=True)
class Bivector:
    """Sparse element of the exterior square; ``coeffs`` maps ``(i, j)``, ``i < j``."""

    ambient: int
    coeffs: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.coeffs.items():
            if not 0 <= i < j < self.ambient:
                raise ValueError(f"bad index pair {(i, j)} for ambient {self.ambient}")
            if c != 0:
                clean[(i, j)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def basis(cls, ambient: int, i: int, j: int) -> Bivector:
        if i == j:
            return cls(ambient)
        if i > j:
            return cls(ambient, {(j, i): -1})
        return cls(ambient, {(i, j): 1})

    @classmethod
    def from_vector(cls, ambient: int, vec: Sequence[Scalar]) -> Bivector:
        ps = pairs(ambient)
        if len(vec) != len(ps):
            raise exactlin.DimensionError(f"expected {len(ps)} coordinates, got {len(vec)}")
        return cls(ambient, {p: c for p, c in zip(ps, vec) if c != 0})

    @classmethod
    def wedge(cls, u: Sequence[Scalar], w: Sequence[Scalar]) -> Bivector:
        """``u ^ w`` for two coordinate vectors."""
        d = len(u)
        return cls(d, {(i, j): u[i] * w[j] - u[j] * w[i] for i, j in pairs(d)})

    def to_vector(self) -> list[Scalar]:
        return [self.coeffs.get(p, 0) for p in pairs(self.ambient)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: Bivector) -> Bivector:
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return Bivector(self.ambient, out)

    def __rmul__(self, c: Scalar) -> Bivector:
        return Bivector(self.ambient, {k: c * v for k, v in self.coeffs.items()})

    def __str__(self) -> str:
        out = ""
        for (i, j), c in self.coeffs.items():
            mag = abs(c)
            term = f"v_{i},{j}" if mag == 1 else f"{mag}*v_{i},{j}"
            if not out:
                out = "-" + term if c < 0 else term
            else:
                out += (" - " if c < 0 else " + ") + term
        return out or "0"


@dataclass(frozen=True)
class FourVector:
    ambient: int
    coeffs: Mapping[tuple[int, int, int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", dict(sorted((k, c) for k, c in self.coeffs.items() if c != 0)))

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class SubspaceGenerators:
    """Integer generators (rows) of a subspace ``W`` of the exterior square of ``C^(n+1)``."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        width = wedge_dim(self.n + 1)
        for k, r in enumerate(rows):
            if len(r) != width:
                raise exactlin.DimensionError(f"row {k} has {len(r)} entries, expected {width}")

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def ambient(self) -> int:
        return self.n + 1

    @property
    def width(self) -> int:
        return wedge_dim(self.n + 1)

    def rank(self) -> int:
        return exactlin.rank_exact(self.rows) if self.rows else 0

    def check_independent(self) -> None:
        if self.rank() != self.m:
            raise ValueError(f"generators are linearly dependent (rank {self.rank()} < {self.m})")

    def bivectors(self) -> list[Bivector]:
        return [Bivector.from_vector(self.ambient, r) for r in self.rows]

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=object).reshape(self.m, self.width)


def wedge_self(omega: Bivector) -> FourVector:
    """Expand ``omega ^ omega`` by brute force over all pairs of terms."""
    out: dict[tuple[int, int, int, int], Scalar] = {}
    items = list(omega.coeffs.items())
    for (i, j), a in items:
        for (k, l), b in items:
            sign, key = _sort_sign((i, j, k, l))
            if sign:
                out[key] = out.get(key, 0) + sign * a * b
    return FourVector(omega.ambient, out)


def pfaffian_quadrics(omega: Sequence[Scalar], ambient: int) -> dict[tuple[int, int, int, int], Scalar]:
    """Coefficients of ``omega ^ omega`` via the 4x4 Pfaffians (coordinate input)."""
    idx = pair_index(ambient)
    w = {p: omega[k] for p, k in idx.items()}
    out = {}
    for a, b, c, d in combinations(range(ambient), 4):
        out[(a, b, c, d)] = 2 * (w[a, b] * w[c, d] - w[a, c] * w[b, d] + w[a, d] * w[b, c])
    return out


def is_decomposable(omega: Bivector) -> bool:
    """Zero or a single wedge ``u ^ w``."""
    return wedge_self(omega).is_zero()


def skew_matrix(omega: Bivector) -> list[list[Scalar]]:
    d = omega.ambient
    M: list[list[Scalar]] = [[0] * d for _ in range(d)]
    for (i, j), c in omega.coeffs.items():
        M[i][j] = c
        M[j][i] = -c
    return M


def leading_level(omega: Bivector) -> tuple[int, list[tuple[int, int]]]:
    """Minimal ``i + j`` over the nonzero coefficients, and the pairs at that level."""
    if omega.is_zero():
        raise ValueError("leading level of the zero bivector is undefined")
    k0 = min(i + j for i, j in omega.coeffs)
    return k0, [p for p in omega.coeffs if sum(p) == k0]


def satisfies_leading_lemma(omega: Bivector) -> bool:
    _, terms = leading_level(omega)
    return len(terms) == 1


def induced_derivation(g: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Matrix of ``u^w -> gu^w + u^gw`` on the lex basis of the exterior square.

    ``g`` acts on column vectors, ``g[a][i]`` being the ``v_a`` coefficient of ``g v_i``.
    """
    d = len(g)
    idx = pair_index(d)
    N = len(idx)
    M: list[list[Scalar]] = [[0] * N for _ in range(N)]
    for (i, j), col in idx.items():
        for a in range(d):
            c = g[a][i]
            if c and a != j:
                sign, key = (1, (a, j)) if a < j else (-1, (j, a))
                M[idx[key]][col] += sign * c
            c = g[a][j]
            if c and a != i:
                sign, key = (1, (i, a)) if i < a else (-1, (a, i))
                M[idx[key]][col] += sign * c
    return M


def wedge2_matrix(g: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Matrix of ``u^w -> gu^gw`` (the group action) on the lex basis."""
    d = len(g)
    ps = pairs(d)
    # entry ((a,b),(i,j)) is the 2x2 minor of g on rows a,b and columns i,j
    return [[g[a][i] * g[b][j] - g[a][j] * g[b][i] for (i, j) in ps] for (a, b) in ps]


@lru_cache(maxsize=16)
def column_subsets(D: int, m: int) -> np.ndarray:
    count = comb(D, m)
    if count > MAX_PLUCKER_LENGTH:
        raise ValueError(f"C({D},{m}) = {count} Plücker coordinates exceeds the limit {MAX_PLUCKER_LENGTH}")
    out = np.fromiter((c for s in combinations(range(D), m) for c in s), dtype=np.intp, count=count * m)
    out = out.reshape(count, m)
    out.setflags(write=False)
    return out


def maximal_minors(M: np.ndarray) -> np.ndarray:
    """All ``m x m`` minors of an ``m x D`` integer array, column subsets in lex order."""
    M = np.asarray(M)
    m, D = M.shape
    subsets = column_subsets(D, m)
    if m == 0:
        return np.ones(1, dtype=object)
    blocks = M[:, subsets].transpose(1, 0, 2)
    if blocks.dtype == object:
        biggest = max((abs(int(x)) for x in M.flat), default=0)
        if biggest < 2**31:
            blocks = blocks.astype(np.int64)
    return exactlin.batch_det(blocks)


def plucker_coordinates(S: SubspaceGenerators) -> list[int]:
    S.check_independent()
    return [int(x) for x in maximal_minors(S.as_array())]


def subspace_from_bivectors(n: int, gens: Iterable[Bivector]) -> SubspaceGenerators:
    rows = []
    for b in gens:
        vec = b.to_vector()
        if any(isinstance(x, Fraction) and x.denominator != 1 for x in vec):
            vec = exactlin.primitive(vec)
        rows.append(tuple(int(x) for x in vec))
    return SubspaceGenerators(n, tuple(rows))
