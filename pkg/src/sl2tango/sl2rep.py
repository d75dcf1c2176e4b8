"""sl(2) acting on binary forms of degree n and on their exterior square.

The basis of ``S^n U`` is ``v_k = x^(n-k) y^k``.  Lowering ``Y`` sends
``x -> y``, so ``Y v_k = (n-k) v_{k+1}``; raising is ``X v_k = k v_{k-1}``
and ``H v_k = (n-2k) v_k``.  With those three matrices ``[X, Y] = H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import exactlin
from .exactlin import Matrix
from .wedge import SubspaceGenerators, induced_derivation


@dataclass(frozen=True)
class Sl2Action:
    dim: int
    X: tuple[tuple[int, ...], ...]
    Y: tuple[tuple[int, ...], ...]
    H: tuple[tuple[int, ...], ...]

    def weights(self) -> list[int]:
        return [self.H[i][i] for i in range(self.dim)]

    def bracket_ok(self) -> bool:
        X, Y, H = self.X, self.Y, self.H
        return (_bracket(H, X) == _scale(X, 2)
                and _bracket(H, Y) == _scale(Y, -2)
                and _bracket(X, Y) == _freeze(H)
                and all(H[i][j] == 0 for i in range(self.dim) for j in range(self.dim) if i != j))


def _freeze(M: Matrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in M)


def _bracket(A: Matrix, B: Matrix):
    AB = exactlin.matmul(A, B)
    BA = exactlin.matmul(B, A)
    return _freeze([[a - b for a, b in zip(r, s)] for r, s in zip(AB, BA)])


def _scale(A: Matrix, c: int):
    return _freeze([[c * x for x in row] for row in A])


def action_on_symn(n: int) -> Sl2Action:
    if n < 1:
        raise ValueError("n must be at least 1 (the trivial representation is not supported)")
    d = n + 1
    X = [[0] * d for _ in range(d)]
    Y = [[0] * d for _ in range(d)]
    H = [[0] * d for _ in range(d)]
    for k in range(d):
        H[k][k] = n - 2 * k
        if k + 1 < d:
            Y[k + 1][k] = n - k
        if k > 0:
            X[k - 1][k] = k
    return Sl2Action(d, _freeze(X), _freeze(Y), _freeze(H))


def induced_wedge2_action(A: Sl2Action) -> Sl2Action:
    """The derivation action on the exterior square, lex basis ``v_{i,j}``, ``i < j``."""
    return Sl2Action(
        comb(A.dim, 2),
        _freeze(induced_derivation(A.X)),
        _freeze(induced_derivation(A.Y)),
        _freeze(induced_derivation(A.H)),
    )


def wedge2_symn(n: int) -> Sl2Action:
    return induced_wedge2_action(action_on_symn(n))


def weight_spaces(A: Sl2Action) -> dict[int, list[int]]:
    """Basis indices grouped by ``H``-eigenvalue, weights in descending order."""
    if any(A.H[i][j] for i in range(A.dim) for j in range(A.dim) if i != j):
        raise ValueError("H is not diagonal")
    out: dict[int, list[int]] = {}
    for i, w in enumerate(A.weights()):
        out.setdefault(w, []).append(i)
    return dict(sorted(out.items(), reverse=True))


@dataclass(frozen=True)
class IrredComponent:
    highest_weight: int
    highest_weight_vector: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.highest_weight + 1


def decompose_irreducibles(A: Sl2Action) -> list[IrredComponent]:
    """Irreducible components, highest weight descending.

    Highest-weight vectors are the kernel of ``X`` on each nonnegative weight
    space (primitive integer vectors); each component's basis is the
    ``Y``-string of its highest-weight vector.
    """
    if not A.bracket_ok():
        raise ValueError("matrices do not satisfy the sl(2) bracket relations")
    comps: list[IrredComponent] = []
    for w, idx in weight_spaces(A).items():
        if w < 0:
            continue
        sub = [[A.X[r][c] for c in idx] for r in range(A.dim)]
        for kv in exactlin.kernel_basis(sub):
            v = [0] * A.dim
            for c, x in zip(idx, kv):
                v[c] = x
            basis = [tuple(v)]
            for _ in range(w):
                v = exactlin.matvec(A.Y, v)
                basis.append(tuple(int(x) for x in v))
            comps.append(IrredComponent(w, basis[0], tuple(basis)))
    total = sum(c.dim for c in comps)
    if total != A.dim:
        raise ValueError(f"components account for {total} of {A.dim} dimensions")
    return comps


def tango_dimension(n: int) -> int:
    return (n - 1) * (n - 2) // 2


def construct_tango_subspace(n: int) -> SubspaceGenerators:
    """Every component of the exterior square of ``S^n U`` except the top one."""
    if n < 3:
        raise ValueError("n must be at least 3 (for n < 3 the subspace is zero)")
    comps = decompose_irreducibles(wedge2_symn(n))
    rows = [tuple(exactlin.primitive(v)) for c in comps[1:] for v in c.basis]
    W = SubspaceGenerators(n, tuple(rows))
    assert W.m == tango_dimension(n)
    return W
