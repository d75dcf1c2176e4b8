"""Orbit dimension of a subspace of the exterior square under PGL(n+1).

The orbit map sends ``g`` to the Plücker point of ``g.W``.  Its derivative at
the identity in the direction of an elementary matrix ``E_ij`` is, by the
product rule on each maximal minor, the sum over generator rows ``k`` of the
minors of the generator matrix with row ``k`` replaced by its image under the
induced derivation.  Stacking those ``(n+1)^2`` vectors and taking the rank
gives the tangent space of the affine cone over the orbit; scalar matrices
contribute exactly the radial direction, so the projective orbit dimension
is one less.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from math import comb
from typing import Sequence

import numpy as np

from . import exactlin
from .wedge import SubspaceGenerators, induced_derivation, maximal_minors


@dataclass(frozen=True)
class OrbitReport:
    n: int
    m: int
    affine_rank: int
    orbit_dim: int
    stabilizer_dim: int
    rank_method: str

    @property
    def group_dim(self) -> int:
        return (self.n + 1) ** 2 - 1

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return "\n".join([
            f"n = {self.n}",
            f"m = {self.m}",
            f"affine_rank = {self.affine_rank}",
            f"orbit_dim = {self.orbit_dim}",
            f"stabilizer_dim = {self.stabilizer_dim}",
            f"group_dim = {self.group_dim}",
            f"rank_method = {self.rank_method}",
        ])


def elementary(i: int, j: int, d: int) -> list[list[int]]:
    E = [[0] * d for _ in range(d)]
    E[i][j] = 1
    return E


def derivation_on_wedge2(i: int, j: int, n: int) -> list[list[int]]:
    """Matrix of the derivation induced by ``E_ij`` on the exterior square of ``C^(n+1)``."""
    if not (0 <= i <= n and 0 <= j <= n):
        raise IndexError(f"({i}, {j}) out of range for n = {n}")
    return induced_derivation(elementary(i, j, n + 1))


def plucker_derivative_row(S: SubspaceGenerators, D: Sequence[Sequence[int]]) -> list[int]:
    """Directional derivative of the Plücker vector of ``S`` along the derivation ``D``."""
    D = np.asarray(D, dtype=object)
    if D.shape != (S.width, S.width):
        raise exactlin.DimensionError(f"derivation must be {S.width}x{S.width}, got {D.shape}")
    return [int(x) for x in _derivative(S.as_array(), D)]


def _derivative(rows: np.ndarray, D: np.ndarray) -> np.ndarray:
    images = rows.dot(D.T)
    total = None
    for k in range(rows.shape[0]):
        if not any(images[k]):
            continue
        M = rows.copy()
        M[k] = images[k]
        minors = maximal_minors(M)
        total = minors if total is None else total + minors
    if total is None:
        return np.zeros(comb(rows.shape[1], rows.shape[0]), dtype=object)
    return total


def derivative_matrix(S: SubspaceGenerators, threads: int = 1) -> list[list[int]]:
    """Rows ``p_ij`` for all ``(i, j)`` in lex order over ``0..n``."""
    rows = S.as_array()
    d = S.n + 1
    dirs = [(i, j) for i in range(d) for j in range(d)]

    def one(ij):
        D = np.array(derivation_on_wedge2(ij[0], ij[1], S.n), dtype=object)
        return [int(x) for x in _derivative(rows, D)]

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, dirs))
    return [one(ij) for ij in dirs]


def orbit_dimension(S: SubspaceGenerators, exact: bool = False, threads: int = 1) -> OrbitReport:
    S.check_independent()
    P = derivative_matrix(S, threads=threads)
    cols = len(P[0])
    modular = not exact and cols > exactlin.MODULAR_COLUMN_THRESHOLD
    affine = exactlin.rank_modular(P) if modular else exactlin.rank_exact(P)
    orbit = affine - 1
    group = (S.n + 1) ** 2 - 1
    return OrbitReport(
        n=S.n,
        m=S.m,
        affine_rank=affine,
        orbit_dim=orbit,
        stabilizer_dim=group - orbit,
        rank_method="modular" if modular else "exact",
    )


def radial_row(S: SubspaceGenerators) -> list[int]:
    """Derivative along the identity, which is ``2m`` times the Plücker vector."""
    D = np.array(induced_derivation(exactlin.identity(S.n + 1)), dtype=object)
    return [int(x) for x in _derivative(S.as_array(), D)]

