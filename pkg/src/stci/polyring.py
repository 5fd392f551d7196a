"""Sparse multivariate polynomials with exact integer coefficients.

Polynomials are immutable.  A polynomial in variables ``x0..xn`` stores its
terms as a mapping from exponent tuples (length ``n + 1``) to nonzero Python
ints, so coefficients never overflow.  The canonical term order compares the
exponent tuples read from the last variable down to ``x0`` and lists them in
ascending order; for the equations built here that puts the pure power of the
eliminated variable first and then sorts by the power of the new variable,
which is how such equations are usually written by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .semigroup import CurveSpec

__all__ = [
    "VariableCountMismatchError",
    "NegativeExponentError",
    "UnexpectedVariableError",
    "Poly",
    "LaurentDiagnostic",
    "PrimeField",
    "monomial",
    "term",
    "add",
    "multiply",
    "binomial_terms",
    "binomial_power",
    "divide_by_monomial",
    "substitute_parametric",
    "bi_degree",
    "graded_pieces",
    "evaluate",
    "evaluate_many_mod",
    "is_prime",
    "to_text",
    "to_latex",
]

Exponents = tuple[int, ...]


class VariableCountMismatchError(ValueError):
    pass


class NegativeExponentError(ValueError):
    def __init__(self, exponents: Exponents, coeff: int):
        self.exponents = exponents
        self.coeff = coeff
        super().__init__(f"term {coeff}*{exponents} has a negative exponent")


class UnexpectedVariableError(ValueError):
    pass


def _order_key(exps: Exponents) -> Exponents:
    return exps[::-1]


class Poly:
    """Immutable sparse polynomial over the integers in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponents, int] | Iterable[tuple[int, Exponents]] = ()):
        self.nvars = nvars
        acc: dict[Exponents, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((e, c) for c, e in terms)
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise VariableCountMismatchError(f"exponent vector {exps} has length != {nvars}")
            if any(e < 0 for e in exps):
                raise NegativeExponentError(exps, coeff)
            acc[exps] = acc.get(exps, 0) + int(coeff)
        self._terms = {e: acc[e] for e in sorted(acc, key=_order_key) if acc[e]}

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponents, int]) -> "Poly":
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = {e: terms[e] for e in sorted(terms, key=_order_key) if terms[e]}
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "Poly":
        return cls._raw(nvars, {(0,) * nvars: c})

    @property
    def terms(self) -> list[tuple[int, Exponents]]:
        """``(coefficient, exponents)`` pairs in canonical order."""
        return [(c, e) for e, c in self._terms.items()]

    def coeff(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and list(self._terms.items()) == list(other._terms.items())

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.constant(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def variables_used(self) -> set[int]:
        return {j for e in self._terms for j, k in enumerate(e) if k}

    def max_degree_in(self, j: int) -> int:
        return max((e[j] for e in self._terms), default=0)

    def __repr__(self):
        return f"Poly({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def monomial(nvars: int, powers: Mapping[int, int]) -> Exponents:
    """Exponent tuple with ``powers[j]`` at position ``j`` and zeros elsewhere."""
    exps = [0] * nvars
    for j, k in powers.items():
        exps[j] += k
    return tuple(exps)


def term(nvars: int, coeff: int = 1, **powers: int) -> Poly:
    """Single-term polynomial, e.g. ``term(4, 2, x1=1, x3=2)`` is ``2*x1*x3^2``."""
    return Poly(nvars, {monomial(nvars, {int(k[1:]): v for k, v in powers.items()}): coeff})


def _same_ring(P: Poly, Q: Poly) -> None:
    if P.nvars != Q.nvars:
        raise VariableCountMismatchError(f"{P.nvars} vs {Q.nvars} variables")


def add(P: Poly, Q: Poly) -> Poly:
    _same_ring(P, Q)
    acc = dict(P._terms)
    for e, c in Q._terms.items():
        acc[e] = acc.get(e, 0) + c
    return Poly._raw(P.nvars, acc)


def multiply(P: Poly, Q: Poly) -> Poly:
    _same_ring(P, Q)
    acc: dict[Exponents, int] = {}
    for e1, c1 in P._terms.items():
        for e2, c2 in Q._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            acc[e] = acc.get(e, 0) + c1 * c2
    return Poly._raw(P.nvars, acc)


def _single_term(P: Poly) -> tuple[int, Exponents]:
    if len(P) != 1:
        raise ValueError(f"expected a single term, got {P}")
    return P.terms[0]


def binomial_terms(P: Poly, Q: Poly, m: int) -> list[tuple[int, Exponents]]:
    """Terms of ``(P - Q)**m`` indexed by ``k``, the power of ``Q``; not merged."""
    _same_ring(P, Q)
    if m < 0:
        raise ValueError("m must be nonnegative")
    cp, ep = _single_term(P)
    cq, eq = _single_term(Q)
    return [
        ((-1) ** k * comb(m, k) * cp ** (m - k) * cq ** k,
         tuple((m - k) * a + k * b for a, b in zip(ep, eq)))
        for k in range(m + 1)
    ]


def binomial_power(P: Poly, Q: Poly, m: int) -> Poly:
    """``(P - Q)**m`` for single-term ``P`` and ``Q`` by the binomial theorem."""
    acc: dict[Exponents, int] = {}
    for c, e in binomial_terms(P, Q, m):
        acc[e] = acc.get(e, 0) + c
    return Poly._raw(P.nvars, acc)


@dataclass(frozen=True)
class LaurentDiagnostic:
    """Result of a clipped division: every term kept, negative exponents allowed.

    ``terms`` is in the input polynomial's canonical order; ``negative`` lists
    the positions (into ``terms``) whose exponent vector has a negative entry.
    """

    nvars: int
    terms: tuple[tuple[int, Exponents], ...]
    negative: tuple[int, ...]

    @property
    def is_polynomial(self) -> bool:
        return not self.negative

    def min_exponent(self) -> int:
        return min((min(e) for _, e in self.terms), default=0)


def divide_by_monomial(
    P: Poly | Sequence[tuple[int, Exponents]], d: Sequence[int], mode: str = "strict"
) -> Poly | LaurentDiagnostic:
    """Divide every term by the monomial with exponent vector ``d``.

    ``P`` is a polynomial or an explicit term sequence (e.g. from
    :func:`binomial_terms`, so positions are the binomial index ``k``).
    ``strict`` raises NegativeExponentError on the first term that stops being
    a monomial; ``clip`` returns a LaurentDiagnostic instead.
    """
    d = tuple(d)
    terms = P.terms if isinstance(P, Poly) else list(P)
    nvars = P.nvars if isinstance(P, Poly) else len(d)
    if len(d) != nvars or any(len(e) != nvars for _, e in terms):
        raise VariableCountMismatchError(f"divisor has {len(d)} entries, ring has {nvars}")
    out = []
    negative = []
    for idx, (c, e) in enumerate(terms):
        q = tuple(a - b for a, b in zip(e, d))
        if any(x < 0 for x in q):
            if mode == "strict":
                raise NegativeExponentError(q, c)
            negative.append(idx)
        out.append((c, q))
    if mode == "strict":
        acc: dict[Exponents, int] = {}
        for c, e in out:
            acc[e] = acc.get(e, 0) + c
        return Poly._raw(nvars, acc)
    if mode != "clip":
        raise ValueError(f"unknown mode {mode!r}")
    return LaurentDiagnostic(nvars, tuple(out), tuple(negative))


def substitute_parametric(P: Poly, curve: CurveSpec, up_to_level: int) -> Poly:
    """Set ``x0 = 1`` and ``x_j = t**m_j`` for ``0 < j < up_to_level``.

    Returns a polynomial in two variables ``(t, x_{up_to_level})``.
    """
    for j in P.variables_used():
        if j > up_to_level:
            raise UnexpectedVariableError(f"x{j} appears but substitution stops at x{up_to_level}")
    w = curve.weights
    acc: dict[Exponents, int] = {}
    for c, e in P.terms:
        tdeg = sum(e[j] * w[j] for j in range(1, up_to_level))
        key = (tdeg, e[up_to_level] if up_to_level < len(e) else 0)
        acc[key] = acc.get(key, 0) + c
    return Poly._raw(2, acc)


def bi_degree(exps: Sequence[int], curve: CurveSpec) -> tuple[int, int]:
    """Sum of ``e_j * (m_n - m_j, m_j)`` over the variables."""
    w = curve.weights
    if len(exps) != len(w):
        raise VariableCountMismatchError(f"{len(exps)} exponents for a curve in P^{curve.n}")
    mn = w[-1]
    v = sum(e * m for e, m in zip(exps, w))
    return sum(exps) * mn - v, v


def graded_pieces(P: Poly, curve: CurveSpec) -> dict[tuple[int, int], Poly]:
    pieces: dict[tuple[int, int], dict[Exponents, int]] = {}
    for c, e in P.terms:
        pieces.setdefault(bi_degree(e, curve), {})[e] = c
    return {deg: Poly._raw(P.nvars, t) for deg, t in sorted(pieces.items())}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of residues modulo a prime ``p``; elements are ints in ``[0, p)``."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def pow(self, x: int, k: int) -> int:
        """``x**k`` for any integer ``k``; negative powers need ``x`` nonzero."""
        return pow(x, k, self.p)

    def elements(self) -> range:
        return range(self.p)


def evaluate(P: Poly, point: Sequence[int], modulus: int | None = None) -> int:
    """Exact value of ``P`` at ``point`` over the integers, or modulo a prime."""
    if len(point) != P.nvars:
        raise VariableCountMismatchError(f"point has {len(point)} coordinates, ring has {P.nvars}")
    total = 0
    if modulus is None:
        for c, e in P.terms:
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total
    point = [x % modulus for x in point]
    for c, e in P.terms:
        v = c % modulus
        for x, k in zip(point, e):
            if k:
                v = v * pow(x, k, modulus) % modulus
        total += v
    return total % modulus


def evaluate_many_mod(P: Poly, points: np.ndarray, p: int) -> np.ndarray:
    """Values of ``P`` modulo ``p`` at each row of ``points`` (entries in ``[0, p)``).

    Vectorized with per-variable power tables; requires ``p*p`` to fit in int64.
    """
    if points.shape[1] != P.nvars:
        raise VariableCountMismatchError(f"points have {points.shape[1]} columns, ring has {P.nvars}")
    if p >= 3_037_000_499:
        raise ValueError("prime too large for int64 vectorized evaluation")
    residues = np.arange(p, dtype=np.int64)
    cache: dict[int, np.ndarray] = {}

    def table(k: int) -> np.ndarray:
        if k not in cache:
            cache[k] = np.array([pow(int(r), k, p) for r in residues], dtype=np.int64)
        return cache[k]

    out = np.zeros(points.shape[0], dtype=np.int64)
    for c, e in P.terms:
        v = np.full(points.shape[0], c % p, dtype=np.int64)
        for j, k in enumerate(e):
            if k:
                v = v * table(k)[points[:, j]] % p
        out = (out + v) % p
    return out


def _var_order(nvars: int) -> list[int]:
    # x1..xn first, the homogenizing x0 last
    return list(range(1, nvars)) + [0]


def to_text(P: Poly, names: Sequence[str] | None = None) -> str:
    """Canonical plain-text form, e.g. ``x2^3-2*x1*x2*x3+x3^2*x0``."""
    names = names or [f"x{j}" for j in range(P.nvars)]
    if P.is_zero():
        return "0"
    out = []
    for i, (c, e) in enumerate(P.terms):
        factors = [names[j] + (f"^{e[j]}" if e[j] > 1 else "") for j in _var_order(P.nvars) if e[j]]
        sign = "-" if c < 0 else ("+" if i else "")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        out.append(sign + body)
    return "".join(out)


def to_latex(P: Poly) -> str:
    """LaTeX form, e.g. ``x_2^3-2x_1x_2x_3+x_3^2x_0``."""
    if P.is_zero():
        return "0"
    out = []
    for i, (c, e) in enumerate(P.terms):
        factors = []
        for j in _var_order(P.nvars):
            if not e[j]:
                continue
            base = f"x_{j}" if j < 10 else f"x_{{{j}}}"
            if e[j] == 1:
                factors.append(base)
            elif e[j] < 10:
                factors.append(f"{base}^{e[j]}")
            else:
                factors.append(f"{base}^{{{e[j]}}}")
        sign = "-" if c < 0 else ("+" if i else "")
        mag = abs(c)
        body = "".join(factors)
        if mag != 1 or not factors:
            body = str(mag) + body
        out.append(sign + body)
    return "".join(out)
