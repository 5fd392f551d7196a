"""
Splicing two binomial powers
============================

For the rational normal curve ``C(1, ..., n+1)`` two expansions of
``(t^(n+1) - x_{n+1})^n`` are divided down and glued at an index ``N``.
Both halves stay polynomial only while ``n`` is small.
"""

from stci.equations import SpliceNotPolynomialError, build_general_splice, find_valid_n, rational_normal_splice
from stci.polyring import to_text

for n in range(2, 9):
    spec = rational_normal_splice(n)
    try:
        F = build_general_splice(spec.with_n(max(n - 2, 0)))
        shown = to_text(F)
    except SpliceNotPolynomialError as exc:
        shown = f"not a polynomial ({exc})"
    print(f"n={n}  largest valid N={find_valid_n(spec)}  N=n-2: {shown}")
