"""Bundles on P^n built from line bundles by direct sums and cokernels.

A :class:`SplitBundle` is a multiset of twists.  A :class:`Coker` is the
cokernel of an (unspecified) injective map of bundles; only ranks, Chern
classes and cohomology are tracked, none of which depend on the map beyond
what exactness forces.  Cohomology of a cokernel is obtained by chasing the
long exact sequence; when a connecting map is undetermined the answer is an
interval, never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import factorial, inf
from typing import Iterable, Sequence, Union


# --- split bundles -----------------------------------------------------------

@dataclass(frozen=True)
class SplitBundle:
    n: int
    twists: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(sorted((int(t) for t in self.twists), reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def twist(self, t: int) -> SplitBundle:
        return SplitBundle(self.n, tuple(a + t for a in self.twists))

    def __add__(self, other: SplitBundle) -> SplitBundle:
        _same_n(self, other)
        return SplitBundle(self.n, self.twists + other.twists)

    def dual(self) -> SplitBundle:
        return SplitBundle(self.n, tuple(-a for a in self.twists))

    def tensor(self, other: SplitBundle) -> SplitBundle:
        _same_n(self, other)
        return SplitBundle(self.n, tuple(a + b for a in self.twists for b in other.twists))

    def __str__(self) -> str:
        if not self.twists:
            return "0"
        parts = []
        for t in sorted(set(self.twists), reverse=True):
            k = self.twists.count(t)
            parts.append(f"O({t})" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)


def _same_n(a, b) -> None:
    if a.n != b.n:
        raise ValueError(f"bundles live on different spaces (P^{a.n} vs P^{b.n})")


def line(n: int, t: int) -> SplitBundle:
    return SplitBundle(n, (t,))


def trivial(n: int, r: int) -> SplitBundle:
    return SplitBundle(n, (0,) * r)


def sym_power(B: SplitBundle, k: int) -> SplitBundle:
    if k < 0:
        raise ValueError("negative symmetric power")
    return SplitBundle(B.n, tuple(sum(c) for c in combinations_with_replacement(B.twists, k)))


def wedge_power(B: SplitBundle, q: int) -> SplitBundle:
    if q < 0 or q > B.rank:
        raise ValueError(f"exterior power {q} of a rank {B.rank} bundle")
    return SplitBundle(B.n, tuple(sum(c) for c in combinations(B.twists, q)))


def max_embedding_twist(B: SplitBundle) -> int:
    """Largest ``t`` with ``O(t)`` a summand of ``B``."""
    if not B.twists:
        raise ValueError("zero bundle has no summands")
    return max(B.twists)


# --- Chern classes -----------------------------------------------------------

@dataclass(frozen=True)
class ChernPoly:
    """Total Chern class ``1 + c_1 h + ... + c_n h^n`` in ``Z[h]/(h^(n+1))``."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)[: self.n + 1]
        c = c + (0,) * (self.n + 1 - len(c))
        if c[0] != 1:
            raise ValueError("total Chern class must start with 1")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i <= self.n else 0

    def __mul__(self, other: ChernPoly) -> ChernPoly:
        _same_n(self, other)
        return ChernPoly(self.n, _mul(self.coeffs, other.coeffs, self.n))

    def __truediv__(self, other: ChernPoly) -> ChernPoly:
        return chern_div(self, other)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


def _mul(a: Sequence, b: Sequence, n: int) -> list:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _inverse(b: Sequence, n: int) -> list:
    """Inverse of a power series with constant term 1, truncated at degree n."""
    inv = [1] + [0] * n
    for k in range(1, n + 1):
        inv[k] = -sum(b[j] * inv[k - j] for j in range(1, k + 1) if j < len(b))
    return inv


def _power(base: Sequence, e: int, n: int) -> list:
    """``base**e`` in the truncated ring; negative ``e`` goes through the inverse."""
    if e < 0:
        base, e = _inverse(base, n), -e
    out = [1] + [0] * n
    for _ in range(e):
        out = _mul(out, base, n)
    return out


def chern_total(B: SplitBundle) -> ChernPoly:
    c = [1] + [0] * B.n
    for t in B.twists:
        c = _mul(c, [1, t], B.n)
    return ChernPoly(B.n, tuple(c))


def chern_div(a: ChernPoly, b: ChernPoly) -> ChernPoly:
    _same_n(a, b)
    return ChernPoly(a.n, tuple(_mul(a.coeffs, _inverse(b.coeffs, a.n), a.n)))


def chern_inverse(c: ChernPoly) -> ChernPoly:
    return ChernPoly(c.n, tuple(_inverse(c.coeffs, c.n)))


def chern_twist(c: ChernPoly, r: int, t: int) -> ChernPoly:
    """``c(E(t))`` for a (possibly virtual) class of rank ``r``: sum of ``c_i h^i (1+th)^(r-i)``."""
    n = c.n
    out = [0] * (n + 1)
    for i in range(n + 1):
        if c[i]:
            term = _mul([0] * i + [c[i]], _power([1, t], r - i, n), n)
            out = [x + y for x, y in zip(out, term)]
    return ChernPoly(n, tuple(out))


# --- cohomology --------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: int) -> Interval:
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError(f"{self} is not exact")
        return self.lo

    def __str__(self) -> str:
        return str(self.lo) if self.is_exact else f"[{self.lo},{self.hi}]"

    def to_json(self):
        return self.lo if self.is_exact else [self.lo, self.hi]


@dataclass(frozen=True)
class CohProfile:
    n: int
    h: tuple[Interval, ...]
    chi: int

    def __post_init__(self):
        if len(self.h) != self.n + 1:
            raise ValueError(f"need {self.n + 1} cohomology entries, got {len(self.h)}")
        if self.is_exact and sum((-1) ** i * x.lo for i, x in enumerate(self.h)) != self.chi:
            raise ValueError("Euler characteristic does not match the exact entries")

    @classmethod
    def from_dims(cls, dims: Sequence[int]) -> CohProfile:
        return cls(len(dims) - 1, tuple(Interval.exact(d) for d in dims),
                   sum((-1) ** i * d for i, d in enumerate(dims)))

    @classmethod
    def zero(cls, n: int) -> CohProfile:
        return cls.from_dims([0] * (n + 1))

    @property
    def is_exact(self) -> bool:
        return all(x.is_exact for x in self.h)

    def dims(self) -> list[int]:
        return [x.value for x in self.h]

    def __add__(self, other: CohProfile) -> CohProfile:
        _same_n(self, other)
        return CohProfile(self.n, tuple(Interval(a.lo + b.lo, a.hi + b.hi) for a, b in zip(self.h, other.h)),
                          self.chi + other.chi)

    def to_dict(self) -> dict:
        return {"n": self.n, "h": [x.to_json() for x in self.h], "chi": self.chi}

    def __str__(self) -> str:
        return "h = (" + ", ".join(str(x) for x in self.h) + f"), chi = {self.chi}"


def binom(a: int, k: int) -> int:
    """``a(a-1)...(a-k+1)/k!`` for any integer ``a`` (polynomial extension)."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= a - i
    return num // factorial(k)


def line_cohomology(n: int, t: int) -> CohProfile:
    dims = [0] * (n + 1)
    if t >= 0:
        dims[0] = binom(n + t, n)
    if t <= -n - 1:
        dims[n] = binom(-t - 1, n)
    return CohProfile.from_dims(dims)


def split_cohomology(B: SplitBundle) -> CohProfile:
    out = CohProfile.zero(B.n)
    for t in B.twists:
        out = out + line_cohomology(B.n, t)
    return out


class InconsistentSequence(ValueError):
    pass


def chase_sequence(A: CohProfile | None = None, B: CohProfile | None = None,
                   C: CohProfile | None = None) -> CohProfile:
    """Cohomology of the missing term of ``0 -> A -> B -> C -> 0``.

    Exactly one of the three profiles is ``None``.  The long exact sequence is
    encoded as ``dim X_k = rank(in_k) + rank(out_k)`` and the dimensions and
    ranks are narrowed by interval propagation together with additivity of
    the Euler characteristic.  Entries that come out as points are forced by
    exactness; everything else is returned as an interval.
    """
    given = [A, B, C]
    if sum(x is None for x in given) != 1:
        raise ValueError("exactly one of A, B, C must be unknown")
    known = [x for x in given if x is not None]
    _same_n(known[0], known[1])
    n = known[0].n
    missing = given.index(None)
    if missing == 0:
        chi = B.chi - C.chi
    elif missing == 1:
        chi = A.chi + C.chi
    else:
        chi = B.chi - A.chi
    profiles = given

    # spaces X_{3i + s} = H^i(term s); ranks r[k] of X_k -> X_{k+1}, padded by zero maps
    size = 3 * (n + 1)
    lo = [0] * size
    hi: list[float] = [inf] * size
    for s, P in enumerate(profiles):
        if P is not None:
            for i in range(n + 1):
                lo[3 * i + s] = P.h[i].lo
                hi[3 * i + s] = P.h[i].hi
    rlo = [0] * (size + 1)
    rhi: list[float] = [inf] * (size + 1)
    rhi[0] = rhi[size] = 0  # r[k] is the map into X_k; r[size] leaves the last space
    chis = [p.chi if p is not None else chi for p in profiles]

    def bad():
        raise InconsistentSequence("no nonnegative solution of the long exact sequence")

    changed = True
    while changed:
        changed = False
        for k in range(size + 1):
            # r[k] : X_{k-1} -> X_k
            new_lo = rlo[k]
            new_hi = rhi[k]
            if k > 0:
                new_lo = max(new_lo, lo[k - 1] - rhi[k - 1])
                new_hi = min(new_hi, hi[k - 1] - rlo[k - 1])
            if k < size:
                new_lo = max(new_lo, lo[k] - rhi[k + 1])
                new_hi = min(new_hi, hi[k] - rlo[k + 1])
            if (new_lo, new_hi) != (rlo[k], rhi[k]):
                rlo[k], rhi[k] = new_lo, new_hi
                changed = True
            if rlo[k] > rhi[k]:
                bad()
        for k in range(size):
            new_lo = max(lo[k], rlo[k] + rlo[k + 1])
            new_hi = min(hi[k], rhi[k] + rhi[k + 1])
            if (new_lo, new_hi) != (lo[k], hi[k]):
                lo[k], hi[k] = new_lo, new_hi
                changed = True
            if lo[k] > hi[k]:
                bad()
        for s in range(3):
            ks = [3 * i + s for i in range(n + 1)]
            for i, k in enumerate(ks):
                # (-1)^i d_i = chi - sum_{j != i} (-1)^j d_j
                rest_lo = sum(lo[kj] if j % 2 == 0 else -hi[kj] for j, kj in enumerate(ks) if j != i)
                rest_hi = sum(hi[kj] if j % 2 == 0 else -lo[kj] for j, kj in enumerate(ks) if j != i)
                if i % 2 == 0:
                    new_lo, new_hi = max(lo[k], chis[s] - rest_hi), min(hi[k], chis[s] - rest_lo)
                else:
                    new_lo, new_hi = max(lo[k], rest_lo - chis[s]), min(hi[k], rest_hi - chis[s])
                if (new_lo, new_hi) != (lo[k], hi[k]):
                    lo[k], hi[k] = new_lo, new_hi
                    changed = True
                if lo[k] > hi[k]:
                    bad()
    h = []
    for i in range(n + 1):
        k = 3 * i + missing
        if hi[k] == inf:
            raise InconsistentSequence("unbounded cohomology; inputs underdetermined")
        h.append(Interval(int(lo[k]), int(hi[k])))
    return CohProfile(n, tuple(h), chi)


# --- bundle expressions ------------------------------------------------------

@dataclass(frozen=True)
class Coker:
    """Cokernel of an injective bundle map ``sub -> target``."""

    sub: "Bundle"
    target: "Bundle"

    def __post_init__(self):
        _same_n(self.sub, self.target)
        if rank(self.target) < rank(self.sub):
            raise ValueError(f"cokernel of rank {rank(self.sub)} -> rank {rank(self.target)} is not a bundle")

    @property
    def n(self) -> int:
        return self.sub.n


Bundle = Union[SplitBundle, Coker]


def rank(E: Bundle) -> int:
    if isinstance(E, SplitBundle):
        return E.rank
    return rank(E.target) - rank(E.sub)


def twist(E: Bundle, t: int) -> Bundle:
    if isinstance(E, SplitBundle):
        return E.twist(t)
    return Coker(twist(E.sub, t), twist(E.target, t))


def direct_sum(E: Bundle, F: Bundle) -> Bundle:
    if isinstance(E, SplitBundle) and isinstance(F, SplitBundle):
        return E + F
    e = E if isinstance(E, Coker) else Coker(SplitBundle(E.n), E)
    f = F if isinstance(F, Coker) else Coker(SplitBundle(F.n), F)
    return Coker(direct_sum(e.sub, f.sub), direct_sum(e.target, f.target))


def tensor_split(E: Bundle, S: SplitBundle) -> Bundle:
    """``E (x) S`` for ``S`` split; tensoring with a locally free sheaf is exact."""
    if isinstance(E, SplitBundle):
        return E.tensor(S)
    return Coker(tensor_split(E.sub, S), tensor_split(E.target, S))


def chern(E: Bundle) -> ChernPoly:
    if isinstance(E, SplitBundle):
        return chern_total(E)
    return chern_div(chern(E.target), chern(E.sub))


def cohomology(E: Bundle) -> CohProfile:
    if isinstance(E, SplitBundle):
        return split_cohomology(E)
    return chase_sequence(A=cohomology(E.sub), B=cohomology(E.target))


def chi(E: Bundle) -> int:
    if isinstance(E, SplitBundle):
        return split_cohomology(E).chi
    return chi(E.target) - chi(E.sub)


def resolution(E: Bundle) -> list[SplitBundle]:
    """Split terms ``[L_0, L_1, ...]`` of ``... -> L_1 -> L_0 -> E -> 0`` for a chain of cokernels."""
    terms = []
    while isinstance(E, Coker):
        if not isinstance(E.target, SplitBundle):
            raise ValueError("target of a cokernel is not split; no linear resolution")
        terms.append(E.target)
        E = E.sub
    terms.append(E)
    return terms


# --- weighted Tango bundles --------------------------------------------------

def validate_weights(n: int, alpha: int, gamma: int) -> None:
    if n < 2:
        raise ValueError(f"n = {n}: need n >= 2")
    if alpha < 0:
        raise ValueError(f"alpha = {alpha}: need alpha >= 0")
    if not gamma > n * alpha:
        raise ValueError(f"gamma = {gamma} <= n*alpha = {n * alpha}: need gamma > n*alpha")


def sym_n_u(n: int, alpha: int) -> SplitBundle:
    """``S^n(O(-alpha) + O(alpha))``: twists ``(n-2k) alpha``."""
    return SplitBundle(n, tuple((n - 2 * k) * alpha for k in range(n + 1)))


def v_bundle(n: int, alpha: int) -> SplitBundle:
    """``S^(2(n-1))(O(-alpha) + O(alpha))``: twists ``(2n-2-2k) alpha``, rank ``2n-1``."""
    return sym_power(SplitBundle(n, (alpha, -alpha)), 2 * (n - 1))


def phi_degrees(n: int, alpha: int, gamma: int) -> list[int]:
    """Degrees of the polynomials defining the pulled-back map."""
    return [gamma + (n - 2 * k) * alpha for k in range(n + 1)]


@dataclass(frozen=True)
class ResolvedBundle:
    n: int
    alpha: int
    gamma: int
    kind: str  # "quotient" or "tango"

    def __post_init__(self):
        validate_weights(self.n, self.alpha, self.gamma)
        if self.kind not in ("quotient", "tango"):
            raise ValueError(f"unknown kind {self.kind!r}")

    def bundle(self, t: int = 0) -> Bundle:
        """The bundle twisted by ``t`` (``Q_{a,g}(t)`` or ``F_{a,g}(t)``)."""
        n, a, g = self.n, self.alpha, self.gamma
        Q = Coker(line(n, -g), sym_n_u(n, a))
        if self.kind == "quotient":
            return twist(Q, t)
        return twist(Coker(twist(Q, -g), v_bundle(n, a)), t - g)

    @property
    def rank(self) -> int:
        return rank(self.bundle())

    def resolution(self) -> list[SplitBundle]:
        """Minimal resolution of ``Q`` or of ``F(gamma)``, target first."""
        if self.kind == "quotient":
            return resolution(self.bundle())
        return resolution(self.bundle(self.gamma))


def weighted_quotient(n: int, alpha: int, gamma: int) -> ResolvedBundle:
    return ResolvedBundle(n, alpha, gamma, "quotient")


def weighted_tango(n: int, alpha: int, gamma: int) -> ResolvedBundle:
    return ResolvedBundle(n, alpha, gamma, "tango")


class ChernConsistencyError(RuntimeError):
    pass


def chern_weighted_tango_twisted(n: int, alpha: int, gamma: int) -> ChernPoly:
    """Total Chern class of ``F(gamma)`` from the two defining sequences."""
    validate_weights(n, alpha, gamma)
    cQ = chern_div(chern_total(sym_n_u(n, alpha)), chern_total(line(n, -gamma)))
    cQg = chern_twist(cQ, n, -gamma)
    return chern_div(chern_total(v_bundle(n, alpha)), cQg)


def chern_weighted_tango(n: int, alpha: int, gamma: int) -> tuple[int, ...]:
    """``(c_1, ..., c_{n-1})`` of the weighted Tango bundle ``F_{alpha,gamma}``."""
    cF = chern_weighted_tango_twisted(n, alpha, gamma)
    if cF[n]:
        raise ChernConsistencyError(f"c_{n}(F(gamma)) = {cF[n]} for a rank {n - 1} bundle")
    c = chern_twist(cF, n - 1, -gamma)
    if c[1] != 0 or c[n] != 0:
        raise ChernConsistencyError(f"unexpected Chern class {c} for F")
    return c.coeffs[1:n]


@dataclass
class StabilityReport:
    n: int
    alpha: int
    gamma: int
    stable: bool
    # q, closed-form value q((2n-q-1)alpha - gamma), max twist of wedge^q V(-q gamma), its h^0
    witnesses: list[tuple[int, int, int, int]] = field(default_factory=list)
    h0_F: Interval | None = None

    @property
    def bound(self) -> int:
        return 2 * (self.n - 1) * self.alpha

    @property
    def reason(self) -> str:
        if self.stable:
            return "gamma > 2(n-1)alpha"
        return "gamma = 2(n-1)alpha" if self.gamma == self.bound else "gamma < 2(n-1)alpha"

    def to_dict(self) -> dict:
        return {
            "n": self.n, "alpha": self.alpha, "gamma": self.gamma,
            "stable": self.stable, "reason": self.reason,
            "witnesses": [{"q": q, "formula": f, "max_twist": t, "h0": h} for q, f, t, h in self.witnesses],
            "h0_F": self.h0_F.to_json() if self.h0_F is not None else None,
        }

    def to_text(self) -> str:
        head = "STABLE (gamma > 2(n-1)alpha)" if self.stable else "UNSTABLE (gamma <= 2(n-1)alpha)"
        lines = [f"n = {self.n}, alpha = {self.alpha}, gamma = {self.gamma}: {head}",
                 f"{'q':>3} {'q((2n-q-1)a-g)':>15} {'max twist':>10} {'h0(L^qV(-qg))':>14}"]
        for q, f, t, h in self.witnesses:
            lines.append(f"{q:>3} {f:>15} {t:>10} {h:>14}")
        lines.append(f"h0(F) = {self.h0_F}")
        return "\n".join(lines)


def is_stable(n: int, alpha: int, gamma: int) -> StabilityReport:
    validate_weights(n, alpha, gamma)
    V = v_bundle(n, alpha)
    rep = StabilityReport(n, alpha, gamma, gamma > 2 * (n - 1) * alpha)
    for q in range(1, n - 1):
        Wq = wedge_power(V, q).twist(-q * gamma)
        rep.witnesses.append((q, q * ((2 * n - q - 1) * alpha - gamma), max_embedding_twist(Wq),
                              split_cohomology(Wq).h[0].value))
    rep.h0_F = cohomology(weighted_tango(n, alpha, gamma).bundle()).h[0]
    return rep


def lemma_vanishing_profile(n: int, alpha: int, gamma: int) -> CohProfile:
    """Cohomology of ``Q_{alpha,gamma}(-gamma) (x) V`` via ``0 -> O(-2g) V -> S^nU(-g) V -> Q(-g) V -> 0``."""
    validate_weights(n, alpha, gamma)
    V = v_bundle(n, alpha)
    A = split_cohomology(line(n, -2 * gamma).tensor(V))
    B = split_cohomology(sym_n_u(n, alpha).twist(-gamma).tensor(V))
    return chase_sequence(A=A, B=B)


def cohomology_table(E: Bundle, twists: Iterable[int]) -> list[tuple[int, CohProfile]]:
    return [(t, cohomology(twist(E, t))) for t in twists]
