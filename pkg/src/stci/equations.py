"""Explicit hypersurface equations for recursive-extension monomial curves.

For a curve ``C(m1, ..., mn)`` the system is the binomial

    F1 = x1^m2 - x2^m1 * x0^(m2 - m1)

followed by one polynomial ``F_{i-1}`` per level ``i = 3..n``, assembled from a
decomposition pair of ``m_i``: the leading power ``x_{i-1}^{m_i}``, a block of
terms ``k = 1..N`` read off the signed form and a block ``k = N+1..m_{i-1}``
read off the positive form, where ``N = m_{i-1} - m1``.  The general splice
builder does the same assembly from two binomial powers for arbitrary
signed/positive representations and a chosen splice index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from .polyring import (
    LaurentDiagnostic,
    Poly,
    binomial_terms,
    divide_by_monomial,
    graded_pieces,
    monomial,
)
from .semigroup import (
    CurveSpec,
    DecompositionPair,
    NoAdmissibleDecompositionError,
    SelectionPolicy,
    SignedDecomposition,
    make_pair,
    select_decomposition,
    to_positive,
)

__all__ = [
    "NotPolynomialError",
    "SpliceNotPolynomialError",
    "SpliceSpecError",
    "BuildDiagnostics",
    "EquationSystem",
    "SpliceSpec",
    "build_f1",
    "build_fi",
    "fi_exponents_ok",
    "inequality_bounds",
    "build_system",
    "find_valid_n",
    "splice_conditions_hold",
    "splice_expressions",
    "build_general_splice",
    "splice_from_pair",
    "rational_normal_splice",
]


class NotPolynomialError(ValueError):
    def __init__(self, message: str, diagnostics: "BuildDiagnostics"):
        self.diagnostics = diagnostics
        super().__init__(message)


class SpliceNotPolynomialError(ValueError):
    pass


class SpliceSpecError(ValueError):
    pass


@dataclass(frozen=True)
class BuildDiagnostics:
    level: int
    N: int
    sufficient: bool
    direct_polynomial: bool
    min_exponent: int
    h0_values: tuple[int, ...]
    g_exponents: tuple[int, ...]
    admitted_by: str | None = None
    bounds: Mapping[str, int] = field(default_factory=dict)


def build_f1(curve: CurveSpec) -> Poly:
    nv = curve.n + 1
    m1, m2 = curve.m(1), curve.m(2)
    return Poly(nv, {
        monomial(nv, {1: m2}): 1,
        monomial(nv, {2: m1, 0: m2 - m1}): -1,
    })


def _fi_raw_terms(curve: CurveSpec, pair: DecompositionPair):
    """Leading, G and H terms with raw (possibly negative) exponents."""
    level = pair.level
    m1, m2 = curve.m(1), curve.m(2)
    M, mi = curve.m(level - 1), curve.m(level)
    N = M - m1
    s, p = pair.signed, pair.positive
    slack = s.gamma - s.beta - s.alpha - 1
    prev = level - 1
    nv = curve.n + 1

    def vec(parts):
        e = [0] * nv
        for j, k in parts:
            e[j] += k
        return tuple(e)

    leading = (1, vec([(prev, mi)]))
    g_terms, h_terms = [], []
    for k in range(1, N + 1):
        e = vec([(1, k * s.alpha), (2, k * s.beta), (prev, mi - k * s.gamma), (level, k), (0, k * slack)])
        g_terms.append(((-1) ** k * comb(M, k), e, mi - k * s.gamma, k * slack))
    for k in range(N + 1, M + 1):
        h0 = k * (p.a + p.b + p.c - 1) - p.b * (M - m2) - p.a * (M - m1)
        r = M - k
        e = vec([(1, p.a * r), (2, p.b * r), (prev, p.c * r), (level, k), (0, h0)])
        h_terms.append(((-1) ** k * comb(M, k), e, h0))
    return N, leading, g_terms, h_terms


def fi_exponents_ok(curve: CurveSpec, pair: DecompositionPair) -> bool:
    """True when the level polynomial for ``pair`` has no negative exponent."""
    _, _, g_terms, h_terms = _fi_raw_terms(curve, pair)
    return all(min(t[1]) >= 0 for t in g_terms + h_terms)


def inequality_bounds(curve: CurveSpec, pair: DecompositionPair) -> dict[str, int]:
    """Lower bounds on the G-block ``x_{i-1}`` exponents and on ``h0``.

    ``g_exponent``: ``m_i - k*gamma >= m1 - beta*(m2 - m1)`` for ``k <= N``
    (valid under the gamma condition).  ``h0_general``: bound for every
    ``k >= N+1``.  When ``c = 0`` the gamma condition gives a lower bound on
    ``a``/``b`` (``ab_slack``, which must be nonnegative), and when moreover
    ``a = 0 < b`` the sharper ``h0_a0`` bound applies.
    """
    m1, m2 = curve.m(1), curve.m(2)
    M = curve.m(pair.level - 1)
    a, b, c = pair.positive.a, pair.positive.b, pair.positive.c
    bounds = {
        "g_exponent": m1 - pair.signed.beta * (m2 - m1),
        "h0_general": (M - m1 + 1) * (c - 1) + b * (m2 - m1 + 1) + a,
    }
    if c == 0:
        if a == 0 and b > 0:
            bounds["ab_slack"] = (b - 1) - (M - m2)
            bounds["h0_a0"] = (M - m2) * (m2 - m1)
        elif a > 0 and b == 0:
            bounds["ab_slack"] = (a - 1) - (M - m1)
        elif a > 0 and b > 0:
            bounds["ab_slack"] = (a + b - 1) - (M - m2) - (M - m1)
    return bounds


def build_fi(
    curve: CurveSpec, level: int, pair: DecompositionPair, admitted_by: str | None = None
) -> tuple[Poly, BuildDiagnostics]:
    """Level polynomial ``F_{level-1} = x_{i-1}^{m_i} + G + H`` with diagnostics.

    Raises NotPolynomialError (diagnostics attached) when some exponent is
    negative.
    """
    curve.check_level(level)
    if pair.level != level:
        raise ValueError(f"pair is for level {pair.level}, not {level}")
    N, leading, g_terms, h_terms = _fi_raw_terms(curve, pair)
    all_exps = [leading[1]] + [t[1] for t in g_terms] + [t[1] for t in h_terms]
    min_exp = min(min(e) for e in all_exps)
    diag = BuildDiagnostics(
        level=level,
        N=N,
        sufficient=pair.sufficient,
        direct_polynomial=min_exp >= 0,
        min_exponent=min_exp,
        h0_values=tuple(t[2] for t in h_terms),
        g_exponents=tuple(t[2] for t in g_terms),
        admitted_by=admitted_by,
        bounds=inequality_bounds(curve, pair),
    )
    if min_exp < 0:
        raise NotPolynomialError(
            f"level {level} of {curve}: decomposition {pair.signed} gives exponent {min_exp}", diag
        )
    # x_level carries exactly k in every term, so the blocks never collide
    assert len(set(all_exps)) == len(all_exps)
    terms = {leading[1]: leading[0]}
    terms.update({t[1]: t[0] for t in g_terms})
    terms.update({t[1]: t[0] for t in h_terms})
    return Poly(curve.n + 1, terms), diag


@dataclass(frozen=True)
class EquationSystem:
    curve: CurveSpec
    pairs: Mapping[int, DecompositionPair]
    polys: tuple[Poly, ...]
    diagnostics: tuple[BuildDiagnostics, ...]

    @property
    def names(self) -> list[str]:
        return [f"F{j}" for j in range(1, len(self.polys) + 1)]

    def level_poly(self, level: int) -> Poly:
        """``F_{level-1}``, the polynomial introduced at ``level``."""
        return self.polys[level - 2]

    @property
    def empirical_levels(self) -> list[int]:
        """Levels admitted only by direct polynomiality."""
        return [d.level for d in self.diagnostics if d.admitted_by == "direct"]

    def replace(self, index: int, poly: Poly) -> "EquationSystem":
        """Copy with ``polys[index]`` swapped out (used for mutation testing)."""
        polys = list(self.polys)
        polys[index] = poly
        return EquationSystem(self.curve, self.pairs, tuple(polys), self.diagnostics)


def _coerce_signed(level: int, value) -> SignedDecomposition:
    if isinstance(value, SignedDecomposition):
        return value
    alpha, beta, gamma = value
    return SignedDecomposition(level, alpha, beta, gamma)


def build_system(
    curve: CurveSpec,
    policy: SelectionPolicy = SelectionPolicy.STRICT,
    overrides: Mapping[int, SignedDecomposition | Sequence[int]] | None = None,
) -> EquationSystem:
    """``F1`` plus one polynomial per level ``3..n``.

    ``overrides`` pins the signed decomposition ``(alpha, beta, gamma)`` used at
    a level instead of the automatic selection.  A pinned decomposition that
    only passes direct polynomiality requires ``ALLOW_DIRECT``.
    """
    overrides = dict(overrides or {})
    pairs: dict[int, DecompositionPair] = {}
    polys = [build_f1(curve)]
    diags = []
    for level in range(3, curve.n + 1):
        if level in overrides:
            pair = make_pair(to_positive(_coerce_signed(level, overrides[level]), curve), curve)
            if pair.sufficient:
                criterion = "sufficient"
            elif policy is SelectionPolicy.ALLOW_DIRECT and pair.gamma_condition:
                criterion = "direct"
            elif policy is SelectionPolicy.STRICT and fi_exponents_ok(curve, pair):
                raise NoAdmissibleDecompositionError(
                    level, f"{pair.signed} is not covered by the sufficient conditions (policy strict)"
                )
            else:
                criterion = None
        else:
            pair, criterion = select_decomposition(curve, level, policy)
        poly, diag = build_fi(curve, level, pair, criterion)
        pairs[level] = pair
        polys.append(poly)
        diags.append(diag)
    return EquationSystem(curve, pairs, tuple(polys), tuple(diags))


@dataclass(frozen=True)
class SpliceSpec:
    """Data for the two-binomial splice producing ``F_n`` in ``P^(n+1)``.

    ``exponents`` is ``(m1, ..., m_{n+1})``; ``alphas`` has ``n-1`` entries
    (coefficients of ``m1..m_{n-1}``), ``a`` has ``n`` entries.
    """

    exponents: tuple[int, ...]
    beta: int
    alphas: tuple[int, ...]
    a: tuple[int, ...]
    N: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "a", tuple(self.a))
        n = self.n
        if len(self.alphas) != n - 1 or len(self.a) != n:
            raise SpliceSpecError(f"need {n - 1} alphas and {n} a's for {len(self.exponents)} exponents")
        if min(self.alphas + self.a + (self.beta,)) < 0:
            raise SpliceSpecError("coefficients must be nonnegative")
        ms = self.exponents
        signed = self.beta * ms[n - 1] - sum(al * m for al, m in zip(self.alphas, ms))
        positive = sum(ai * m for ai, m in zip(self.a, ms))
        if not signed == positive == ms[n]:
            raise SpliceSpecError(f"representations give {signed} and {positive}, expected {ms[n]}")
        if self.delta_first < 0:
            raise SpliceSpecError(f"x0 exponent beta - sum(alpha) - 1 = {self.delta_first} is negative")
        if self.delta_second < 0:
            raise SpliceSpecError(f"x0 exponent sum(a) - 1 = {self.delta_second} is negative")
        if self.N is not None and not 0 <= self.N <= ms[n - 1]:
            raise SpliceSpecError(f"splice index {self.N} outside [0, {ms[n - 1]}]")

    @property
    def n(self) -> int:
        return len(self.exponents) - 1

    @property
    def delta_first(self) -> int:
        return self.beta - sum(self.alphas) - 1

    @property
    def delta_second(self) -> int:
        return sum(self.a) - 1

    def with_n(self, N: int) -> "SpliceSpec":
        return SpliceSpec(self.exponents, self.beta, self.alphas, self.a, N)


def splice_conditions_hold(spec: SpliceSpec, N: int) -> bool:
    """Polynomiality of the splice at index ``N``, from the exponent inequalities."""
    n = spec.n
    mn, m_next = spec.exponents[n - 1], spec.exponents[n]
    first = all(m_next >= spec.beta * k for k in range(1, N + 1))
    second = all(m_next >= k + sum(spec.a) * (mn - k) for k in range(N + 1, mn + 1))
    return first and second


def find_valid_n(spec: SpliceSpec) -> int | None:
    """Largest ``N`` with ``1 < N < m_n`` for which the splice is a polynomial."""
    mn = spec.exponents[spec.n - 1]
    for N in range(mn - 1, 1, -1):
        if splice_conditions_hold(spec, N):
            return N
    return None


def splice_expressions(spec: SpliceSpec, nvars: int | None = None) -> tuple[LaurentDiagnostic, LaurentDiagnostic]:
    """Both divided binomial powers, term ``k`` at position ``k``."""
    n = spec.n
    nv = nvars or n + 2
    ms = spec.exponents
    mn = ms[n - 1]

    def mono(powers):
        return Poly(nv, {monomial(nv, powers): 1})

    lead1 = mono({n: spec.beta})
    tail1 = {0: spec.delta_first, n + 1: 1}
    for j, al in enumerate(spec.alphas, start=1):
        tail1[j] = tail1.get(j, 0) + al
    first = binomial_terms(lead1, mono(tail1), mn)
    lead2 = mono({j: ai for j, ai in enumerate(spec.a, start=1)})
    second = binomial_terms(lead2, mono({0: spec.delta_second, n + 1: 1}), mn)
    d1 = monomial(nv, {n: sum(al * m for al, m in zip(spec.alphas, ms))})
    d2 = monomial(nv, {0: sum(ai * (mn - m) for ai, m in zip(spec.a, ms))})
    return divide_by_monomial(first, d1, "clip"), divide_by_monomial(second, d2, "clip")


def build_general_splice(spec: SpliceSpec, nvars: int | None = None) -> Poly:
    """Terms ``k = 0..N`` of the first divided power and ``k = N+1..m_n`` of the second."""
    if spec.N is None:
        raise SpliceSpecError("splice index N not set")
    first, second = splice_expressions(spec, nvars)
    N = spec.N
    bad = [k for k in first.negative if k <= N] + [k for k in second.negative if k > N]
    if bad:
        raise SpliceNotPolynomialError(f"splice at N={N} leaves negative exponents at k={sorted(bad)}")
    terms = list(first.terms[: N + 1]) + list(second.terms[N + 1:])
    acc: dict[tuple[int, ...], int] = {}
    for c, e in terms:
        acc[e] = acc.get(e, 0) + c
    return Poly(first.nvars, acc)


def splice_from_pair(curve: CurveSpec, level: int, pair: DecompositionPair, N: int | None = None) -> SpliceSpec:
    """Splice data equivalent to a level decomposition (default ``N = m_{i-1} - m1``)."""
    curve.check_level(level)
    n = level - 1
    alphas = [0] * (n - 1)
    a = [0] * n
    alphas[0] += pair.signed.alpha
    if pair.signed.beta:
        alphas[1] += pair.signed.beta
    a[0] += pair.positive.a
    a[1] += pair.positive.b
    a[n - 1] += pair.positive.c
    if N is None:
        N = curve.m(level - 1) - curve.m(1)
    return SpliceSpec(curve.exponents[:level], pair.signed.gamma, tuple(alphas), tuple(a), N)


def rational_normal_splice(n: int, N: int | None = None) -> SpliceSpec:
    """Splice data for ``C(1, ..., n+1)`` from ``n+1 = 2n - (n-1) = n + 1``."""
    if n < 2:
        raise SpliceSpecError("need n >= 2")
    alphas = [0] * (n - 1)
    alphas[n - 2] = 1
    a = [0] * n
    a[0] += 1
    a[n - 1] += 1
    return SpliceSpec(tuple(range(1, n + 2)), 2, tuple(alphas), tuple(a), N)


def is_graded_homogeneous(P: Poly, curve: CurveSpec) -> bool:
    return len(graded_pieces(P, curve)) <= 1
