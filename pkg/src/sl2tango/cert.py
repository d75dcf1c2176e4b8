"""Checks that a subspace of the exterior square of ``S^n U`` avoids the Grassmannian.

:func:`certify_no_decomposables` is a proof procedure.  If ``W`` is stable
under the lowering operator, does not contain ``v_{n-1,n}``, and every basis
bivector ``v_{i,j}`` is carried by ``Y^(2n-1-i-j)`` to a nonzero multiple of
``v_{n-1,n}``, then ``W`` has no nonzero decomposable element.  A
decomposable element has a single term at its lowest level ``i + j``, so the
same power of ``Y`` would land it on a nonzero multiple of ``v_{n-1,n}``
inside ``W``.

:func:`scan_decomposables_modp` is the independent falsification side: an
exhaustive search of the projectivised subspace over small prime fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import exactlin
from .sl2rep import wedge2_symn
from .wedge import Bivector, SubspaceGenerators, induced_derivation, pair_index, wedge_self

MAX_SCAN_POINTS = 10**8
_CHUNK = 1 << 16


@dataclass
class Certificate:
    n: int
    # None means the check was not reached
    lowering_invariance: bool | None = None
    top_vector_excluded: bool | None = None
    chase_coefficients: dict[tuple[int, int], int] = field(default_factory=dict)
    failure: str | None = None

    @property
    def valid(self) -> bool:
        return (self.failure is None and self.lowering_invariance is True and self.top_vector_excluded is True
                and len(self.chase_coefficients) == (self.n + 1) * self.n // 2
                and all(c != 0 for c in self.chase_coefficients.values()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "valid": self.valid,
            "kind": "proof",
            "checks": {
                "lowering_invariance": self.lowering_invariance,
                "top_vector_excluded": self.top_vector_excluded,
                "chase_coefficients": {f"{i},{j}": c for (i, j), c in sorted(self.chase_coefficients.items())},
            },
            "failure": self.failure,
        }

    def to_text(self) -> str:
        word = {True: "ok", False: "FAILED", None: "not checked"}
        lines = [f"n = {self.n}",
                 f"lowering_invariance: {word[self.lowering_invariance]}",
                 f"top_vector_excluded: {word[self.top_vector_excluded]}"]
        if self.chase_coefficients:
            lines.append("chase coefficients Y^(2n-1-i-j) v_{i,j} = c * v_{n-1,n}:")
            for (i, j), c in sorted(self.chase_coefficients.items()):
                lines.append(f"  ({i},{j}): {c}")
        if self.valid:
            lines.append("VALID: W contains no nonzero decomposable bivector")
        else:
            lines.append(f"FAILURE: {self.failure}")
        return "\n".join(lines)


def chase_coefficient(n: int, i: int, j: int, Y=None) -> tuple[int, list[int]]:
    """Apply the lowering operator ``2n-1-i-j`` times to ``v_{i,j}``.

    Returns the coefficient on ``v_{n-1,n}`` and the full image vector.
    """
    Y = Y if Y is not None else wedge2_symn(n).Y
    idx = pair_index(n + 1)
    v = [0] * len(idx)
    v[idx[(i, j)]] = 1
    for _ in range(2 * n - 1 - i - j):
        v = exactlin.matvec(Y, v)
    return v[idx[(n - 1, n)]], v


def certify_no_decomposables(W: SubspaceGenerators) -> Certificate:
    n = W.n
    cert = Certificate(n)
    W.check_independent()
    Y = wedge2_symn(n).Y
    images = [exactlin.matvec(Y, r) for r in W.rows]
    cert.lowering_invariance = exactlin.span_contains(W.rows, images)
    if not cert.lowering_invariance:
        bad = next(k for k, v in enumerate(images) if not exactlin.member(W.rows, v))
        cert.failure = f"not lowering-invariant; certificate inapplicable (Y applied to generator {bad} leaves W)"
        return cert
    idx = pair_index(n + 1)
    top = [0] * len(idx)
    top[idx[(n - 1, n)]] = 1
    cert.top_vector_excluded = not exactlin.member(W.rows, top)
    if not cert.top_vector_excluded:
        cert.failure = f"v_{{{n - 1},{n}}} lies in W"
        return cert
    for i, j in combinations(range(n + 1), 2):
        c, v = chase_coefficient(n, i, j, Y)
        if c == 0 or any(x for k, x in enumerate(v) if k != idx[(n - 1, n)]):
            cert.failure = f"chase from v_{{{i},{j}}} does not end on a nonzero multiple of v_{{{n - 1},{n}}}"
            return cert
        cert.chase_coefficients[(i, j)] = c
    return cert


# --- finite-field scan -------------------------------------------------------

@dataclass
class ScanResult:
    primes: list[int]
    points_checked: dict[int, int] = field(default_factory=dict)
    found: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    rational_witnesses: list[tuple[int, tuple[Fraction, ...]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": "evidence",
            "primes": self.primes,
            "points_checked": {str(p): c for p, c in self.points_checked.items()},
            "found": [{"prime": p, "point": list(pt)} for p, pt in self.found],
            "rational_witnesses": [{"prime": p, "coefficients": [str(x) for x in c]}
                                   for p, c in self.rational_witnesses],
        }

    def to_text(self) -> str:
        lines = []
        for p in self.primes:
            hits = [pt for q, pt in self.found if q == p]
            lines.append(f"F_{p}: {self.points_checked[p]} points, {len(hits)} decomposable")
            for pt in hits:
                lines.append("  " + " ".join(str(x) for x in pt))
        if self.rational_witnesses:
            lines.append("decomposables over Q (lifted from the witnesses above):")
            for p, c in self.rational_witnesses:
                lines.append(f"  from F_{p}: coefficients (" + ", ".join(str(x) for x in c) + ")")
        if not self.found:
            lines.append("no decomposables found (evidence, not proof)")
        return "\n".join(lines)


def projective_size(p: int, m: int) -> int:
    return (p**m - 1) // (p - 1)


def _points(p: int, m: int):
    """Chunks of normalised points of P^(m-1)(F_p): first nonzero coordinate is 1."""
    for lead in range(m):
        free = m - 1 - lead
        total = p**free
        powers = p ** np.arange(free - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, _CHUNK):
            ids = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            pts = np.zeros((len(ids), m), dtype=np.int64)
            pts[:, lead] = 1
            if free:
                pts[:, lead + 1:] = (ids[:, None] // powers[None, :]) % p
            yield pts


def _quadric_indices(ambient: int):
    idx = pair_index(ambient)
    quads = list(combinations(range(ambient), 4))
    get = lambda a, b: np.array([idx[(q[a], q[b])] for q in quads], dtype=np.intp)  # noqa: E731
    return get(0, 1), get(2, 3), get(0, 2), get(1, 3), get(0, 3), get(1, 2)


def rational_candidates(x: int, p: int, count: int = 4) -> list[Fraction]:
    """The ``count`` lowest-height fractions ``a/b`` congruent to ``x`` mod ``p``.

    Height is ``max(|a|, b)``; ties go to the smaller denominator.
    """
    x %= p
    if x == 0:
        return [Fraction(0)]
    seen = {}
    for b in range(1, p):
        a = (x * b) % p
        if a > p // 2:
            a -= p
        f = Fraction(a, b)
        if f not in seen:
            seen[f] = (max(abs(f.numerator), f.denominator), f.denominator)
    return sorted(seen, key=seen.get)[:count]


def lift_witness(W: SubspaceGenerators, point: tuple[int, ...], p: int) -> tuple[Fraction, ...] | None:
    """Try small rational lifts of a mod-p witness; return one that is decomposable over Q."""
    for coeffs in product(*(rational_candidates(x, p) for x in point)):
        vec = [sum(c * r[k] for c, r in zip(coeffs, W.rows)) for k in range(W.width)]
        omega = Bivector.from_vector(W.ambient, vec)
        if not omega.is_zero() and wedge_self(omega).is_zero():
            return tuple(coeffs)
    return None


def scan_decomposables_modp(W: SubspaceGenerators, primes) -> ScanResult:
    primes = [int(p) for p in primes]
    for p in primes:
        if p <= 3:
            raise ValueError(f"prime {p} too small; use primes > 3")
        size = projective_size(p, W.m)
        if size > MAX_SCAN_POINTS:
            raise ValueError(f"P^{W.m - 1}(F_{p}) has {size} points (> {MAX_SCAN_POINTS}); use a smaller prime")
        if exactlin.rank_mod_p(W.rows, p) != W.m:
            raise ValueError(f"bad reduction: generators are dependent mod {p}")
    res = ScanResult(primes)
    G = np.array(W.rows, dtype=np.int64)
    q = _quadric_indices(W.ambient)
    for p in primes:
        Gp = G % p
        count = 0
        for pts in _points(p, W.m):
            count += len(pts)
            omega = (pts @ Gp) % p
            o = [omega[:, k] for k in q]
            vals = (o[0] * o[1] - o[2] * o[3] + o[4] * o[5]) % p
            hit = ~vals.any(axis=1)
            for pt in pts[hit]:
                point = tuple(int(x) for x in pt)
                res.found.append((p, point))
                lifted = lift_witness(W, point, p)
                if lifted is not None:
                    res.rational_witnesses.append((p, lifted))
        res.points_checked[p] = count
    return res


def check_torus_invariance(W: SubspaceGenerators, weights) -> bool:
    """Infinitesimal invariance under the one-parameter subgroup ``diag(t^w_0, ..., t^w_n)``."""
    weights = list(weights)
    if len(weights) != W.ambient:
        raise exactlin.DimensionError(f"need {W.ambient} weights, got {len(weights)}")
    g = [[weights[i] if i == j else 0 for j in range(W.ambient)] for i in range(W.ambient)]
    D = induced_derivation(g)
    return exactlin.span_contains(W.rows, [exactlin.matvec(D, r) for r in W.rows])


def tango_torus_weights(n: int) -> list[int]:
    return [n - 2 * k for k in range(n + 1)]
