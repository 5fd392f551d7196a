"""Recursive-extension curves and the integer decompositions of their exponents.

A curve ``C(m1, ..., mn)`` is a recursive extension when every ``m_i`` with
``i >= 3`` is a nonnegative combination of ``m1, ..., m_{i-1}``.  For such a
curve each ``m_i`` admits a *positive* decomposition

    m_i = c*m_{i-1} + b*m2 + a*m1,          0 <= a, b < m_{i-1}

and an equivalent *signed* one

    m_i = gamma*m_{i-1} - beta*m2 - alpha*m1,   0 <= alpha, beta < m_{i-1}

(with ``b = beta = 0`` at level 3).  This module validates curves, enumerates
and converts decompositions, and picks the one the equation builder uses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Sequence

__all__ = [
    "CurveError",
    "NotIncreasingError",
    "GcdNotOneError",
    "NotRecursiveExtensionError",
    "InputNotARepresentationError",
    "LevelOutOfRangeError",
    "NoAdmissibleDecompositionError",
    "HypothesesNotMetError",
    "CurveSpec",
    "PositiveDecomposition",
    "SignedDecomposition",
    "DecompositionPair",
    "SelectionPolicy",
    "validate_curve",
    "semigroup_witness",
    "normalize_decomposition",
    "to_signed",
    "to_positive",
    "make_pair",
    "enumerate_decompositions",
    "select_decomposition",
    "admission",
    "proposition_theta",
    "theta_hypotheses",
    "enumerate_curves",
    "bezout_coefficients",
]


class CurveError(ValueError):
    """Base class for rejected curve input."""


class NotIncreasingError(CurveError):
    pass


class GcdNotOneError(CurveError):
    pass


class NotRecursiveExtensionError(CurveError):
    def __init__(self, level: int, exponents: Sequence[int]):
        self.level = level
        self.exponents = tuple(exponents)
        gens = ",".join(map(str, self.exponents[: level - 1]))
        super().__init__(
            f"not a recursive extension: m{level}={self.exponents[level - 1]} "
            f"is not in the semigroup <{gens}> (level {level})"
        )


class InputNotARepresentationError(ValueError):
    pass


class LevelOutOfRangeError(ValueError):
    pass


class NoAdmissibleDecompositionError(ValueError):
    def __init__(self, level: int, message: str):
        self.level = level
        super().__init__(message)


class HypothesesNotMetError(ValueError):
    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("; ".join(failures))


@dataclass(frozen=True)
class CurveSpec:
    """Exponent sequence ``m1 < ... < mn`` of a monomial curve in P^n.

    Construction only checks shape (at least two positive integers).  Use
    :func:`validate_curve` for the full recursive-extension check.
    """

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(m) for m in self.exponents)
        if len(exps) < 2:
            raise CurveError("a curve needs at least two exponents")
        if any(m <= 0 for m in exps):
            raise CurveError("exponents must be positive integers")
        object.__setattr__(self, "exponents", exps)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def m(self, j: int) -> int:
        """Exponent ``m_j`` with the convention ``m_0 = 0``."""
        if j == 0:
            return 0
        return self.exponents[j - 1]

    @property
    def weights(self) -> tuple[int, ...]:
        """``(m_0, m_1, ..., m_n)`` with ``m_0 = 0``; one entry per variable."""
        return (0,) + self.exponents

    def check_level(self, level: int) -> None:
        if not 3 <= level <= self.n:
            raise LevelOutOfRangeError(
                f"level {level} outside [3, {self.n}] for curve {self}"
            )

    def __str__(self):
        return "C(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True, order=True)
class PositiveDecomposition:
    level: int
    a: int
    b: int
    c: int


@dataclass(frozen=True, order=True)
class SignedDecomposition:
    level: int
    alpha: int
    beta: int
    gamma: int


@dataclass(frozen=True)
class DecompositionPair:
    positive: PositiveDecomposition
    signed: SignedDecomposition
    sufficient: bool = field(compare=False)
    gamma_condition: bool = field(compare=False)

    @property
    def level(self) -> int:
        return self.signed.level

    @property
    def slack(self) -> int:
        """``gamma - beta - alpha - 1``, the exponent rate of x0 in the G block."""
        s = self.signed
        return s.gamma - s.beta - s.alpha - 1


class SelectionPolicy(enum.Enum):
    STRICT = "strict"
    ALLOW_DIRECT = "allow-direct"


def semigroup_witness(target: int, generators: Sequence[int]) -> tuple[int, ...] | None:
    """Nonnegative coefficients expressing ``target`` over ``generators``, or None.

    Dynamic programming over ``0..target``; each reachable value remembers the
    generator that reached it so a witness can be read back.
    """
    if target < 0:
        return None
    last = [-1] * (target + 1)
    last[0] = len(generators)  # sentinel: reachable with nothing
    for v in range(1, target + 1):
        for j, g in enumerate(generators):
            if g <= v and last[v - g] != -1:
                last[v] = j
                break
    if last[target] == -1:
        return None
    coeffs = [0] * len(generators)
    v = target
    while v:
        j = last[v]
        coeffs[j] += 1
        v -= generators[j]
    return tuple(coeffs)


def validate_curve(exponents: Sequence[int] | CurveSpec) -> CurveSpec:
    """Check every recursive-extension invariant and return the curve.

    Raises NotIncreasingError, GcdNotOneError or NotRecursiveExtensionError;
    the latter names the first failing level.
    """
    if isinstance(exponents, CurveSpec):
        exponents = exponents.exponents
    exps = list(exponents)
    if not exps:
        raise CurveError("empty exponent list")
    curve = CurveSpec(tuple(exps))
    exps = curve.exponents
    for i in range(1, len(exps)):
        if exps[i] <= exps[i - 1]:
            raise NotIncreasingError(
                f"exponents not strictly increasing: m{i}={exps[i - 1]} >= m{i + 1}={exps[i]}"
            )
    g = reduce(math.gcd, exps)
    if g != 1:
        raise GcdNotOneError(f"gcd is not 1 (gcd of {list(exps)} is {g})")
    for level in range(3, len(exps) + 1):
        if semigroup_witness(exps[level - 1], exps[: level - 1]) is None:
            raise NotRecursiveExtensionError(level, exps)
    return curve


def _check_pair_level(curve: CurveSpec, level: int) -> tuple[int, int, int, int]:
    curve.check_level(level)
    return curve.m(1), curve.m(2), curve.m(level - 1), curve.m(level)


def normalize_decomposition(A: int, B: int, C: int, curve: CurveSpec, level: int) -> PositiveDecomposition:
    """Reduce ``m_i = C*m_{i-1} + B*m2 + A*m1`` to one with ``a, b < m_{i-1}``."""
    m1, m2, prev, mi = _check_pair_level(curve, level)
    if min(A, B, C) < 0 or C * prev + B * m2 + A * m1 != mi:
        raise InputNotARepresentationError(
            f"{C}*{prev} + {B}*{m2} + {A}*{m1} != {mi}"
        )
    if level == 3 and B:
        # at level 3 the m2 slot coincides with m_{i-1}
        C, B = C + B, 0
    qa, a = divmod(A, prev)
    qb, b = divmod(B, prev)
    return PositiveDecomposition(level, a, b, C + qb * m2 + qa * m1)


def to_signed(p: PositiveDecomposition, curve: CurveSpec) -> SignedDecomposition:
    m1, m2, prev, _ = _check_pair_level(curve, p.level)
    alpha = prev - p.a if p.a else 0
    beta = prev - p.b if p.b else 0
    gamma = p.c + (m2 if p.b else 0) + (m1 if p.a else 0)
    return SignedDecomposition(p.level, alpha, beta, gamma)


def to_positive(s: SignedDecomposition, curve: CurveSpec) -> PositiveDecomposition:
    """Inverse of :func:`to_signed`; raises if the signed form has no positive partner."""
    m1, m2, prev, mi = _check_pair_level(curve, s.level)
    if s.gamma * prev - s.beta * m2 - s.alpha * m1 != mi:
        raise InputNotARepresentationError(
            f"{s.gamma}*{prev} - {s.beta}*{m2} - {s.alpha}*{m1} != {mi}"
        )
    if not (0 <= s.alpha < prev and 0 <= s.beta < prev) or (s.level == 3 and s.beta):
        raise InputNotARepresentationError(f"{s} violates the range constraints")
    a = prev - s.alpha if s.alpha else 0
    b = prev - s.beta if s.beta else 0
    c = s.gamma - (m2 if s.beta else 0) - (m1 if s.alpha else 0)
    if c < 0:
        raise InputNotARepresentationError(f"{s} has no nonnegative positive form")
    return PositiveDecomposition(s.level, a, b, c)


def make_pair(p: PositiveDecomposition, curve: CurveSpec) -> DecompositionPair:
    s = to_signed(p, curve)
    m1, m2 = curve.m(1), curve.m(2)
    gamma_ok = s.gamma - s.beta - s.alpha - 1 >= 0
    return DecompositionPair(p, s, gamma_ok and m1 >= s.beta * (m2 - m1), gamma_ok)


def enumerate_decompositions(curve: CurveSpec, level: int) -> list[DecompositionPair]:
    """All positive decompositions at ``level`` with their signed partners.

    Sorted by ``(beta, alpha, gamma)`` ascending, so ``beta = 0`` forms come first.
    """
    m1, m2, prev, mi = _check_pair_level(curve, level)
    pairs = []
    b_max = 1 if level == 3 else prev
    for b in range(b_max):
        for a in range(prev):
            rest = mi - b * m2 - a * m1
            if rest >= 0 and rest % prev == 0:
                pairs.append(make_pair(PositiveDecomposition(level, a, b, rest // prev), curve))
    pairs.sort(key=lambda q: (q.signed.beta, q.signed.alpha, q.signed.gamma))
    return pairs


def admission(curve: CurveSpec, pair: DecompositionPair, policy: SelectionPolicy) -> str | None:
    """Criterion under which ``pair`` may feed the builder, or None.

    ``"sufficient"`` when both sufficient conditions hold; ``"direct"`` when only
    the gamma condition holds but every exponent of the built polynomial is
    still nonnegative (checked by the equation builder) and the policy allows it.
    """
    if pair.sufficient:
        return "sufficient"
    if policy is SelectionPolicy.ALLOW_DIRECT and pair.gamma_condition:
        from .equations import fi_exponents_ok  # avoid import cycle

        if fi_exponents_ok(curve, pair):
            return "direct"
    return None


def select_decomposition(
    curve: CurveSpec, level: int, policy: SelectionPolicy = SelectionPolicy.STRICT
) -> tuple[DecompositionPair, str]:
    """First enumerated pair meeting the sufficient conditions, else (policy
    permitting) the first with a genuinely polynomial expression.

    Returns the pair and the criterion that admitted it.
    """
    pairs = enumerate_decompositions(curve, level)
    for pair in pairs:
        if pair.sufficient:
            return pair, "sufficient"
    if policy is SelectionPolicy.ALLOW_DIRECT:
        for pair in pairs:
            if admission(curve, pair, policy) == "direct":
                return pair, "direct"
    raise NoAdmissibleDecompositionError(
        level,
        f"no admissible decomposition of m{level}={curve.m(level)} for {curve} "
        f"({len(pairs)} candidates, policy {policy.value})",
    )


def theta_hypotheses(curve: CurveSpec, level: int) -> list[str]:
    """Failed hypotheses of the theta construction at ``level`` (empty if all hold)."""
    m1, _, prev, mi = _check_pair_level(curve, level)
    failures = []
    if math.gcd(prev, m1) != 1:
        failures.append(f"gcd(m{level - 1}, m1) = gcd({prev}, {m1}) != 1")
    bound = max(prev * m1, prev * (prev - m1))
    if mi < bound:
        failures.append(
            f"m{level} = {mi} < max(m{level - 1}*m1, m{level - 1}*(m{level - 1}-m1)) = {bound}"
        )
    return failures


def proposition_theta(curve: CurveSpec, level: int, B: int | None = None) -> SignedDecomposition:
    """Signed decomposition with ``beta = 0`` built from Bezout data.

    Writes ``m_i = A*m_{i-1} - B*m1`` with ``A, B > 0`` (by default the minimal
    such ``B``), then shifts by ``theta = ceil(-B/m_{i-1})`` so that
    ``0 <= alpha < m_{i-1}``.  A different admissible ``B`` may be passed.
    """
    failures = theta_hypotheses(curve, level)
    if failures:
        raise HypothesesNotMetError(failures)
    m1, _, prev, mi = _check_pair_level(curve, level)
    if B is None:
        # B = -m_i / m1 (mod m_{i-1}); pow(m1, -1, 1) is 0 so m_{i-1} = 1 is fine
        B = (-mi * pow(m1, -1, prev)) % prev or prev
    A, r = divmod(mi + B * m1, prev)
    if B <= 0 or r or A <= 0:
        raise InputNotARepresentationError(f"no positive A with {mi} = A*{prev} - {B}*{m1}")
    theta = -(B // prev)  # ceil(-B / prev)
    return SignedDecomposition(level, B + prev * theta, 0, A + m1 * theta)


def bezout_coefficients(values: Sequence[int]) -> tuple[int, ...]:
    """Integers ``l_j`` with ``sum(l_j * values[j]) == gcd(values)``."""
    coeffs = [1] + [0] * (len(values) - 1)
    g = values[0]
    for j in range(1, len(values)):
        # extended Euclid on (g, values[j])
        old_r, r = g, values[j]
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        coeffs = [c * old_s for c in coeffs[:j]] + [old_t] + coeffs[j + 1:]
        g = old_r
    return tuple(coeffs)


def enumerate_curves(max_last: int, max_n: int, min_n: int = 2) -> Iterator[CurveSpec]:
    """Every recursive extension with ``min_n <= n <= max_n`` and ``m_n <= max_last``.

    Yielded in lexicographic order of the exponent tuple.
    """

    def extend(prefix: tuple[int, ...], members: list[bool]) -> Iterator[tuple[int, ...]]:
        if len(prefix) >= min_n:
            yield prefix
        if len(prefix) == max_n:
            return
        for nxt in range(prefix[-1] + 1, max_last + 1):
            if len(prefix) >= 2 and not members[nxt]:
                continue
            if len(prefix) == 1 and math.gcd(prefix[0], nxt) != 1:
                # m3 in <m1, m2> forces gcd(m1, m2) = 1 for every n >= 2
                continue
            grown = members[:]
            for v in range(nxt, max_last + 1):
                if grown[v - nxt]:
                    grown[v] = True
            yield from extend(prefix + (nxt,), grown)

    for m1 in range(1, max_last + 1):
        members = [v % m1 == 0 for v in range(max_last + 1)]
        for exps in extend((m1,), members):
            yield CurveSpec(exps)
