"""
Decomposing an exponent
=======================

Each new exponent of a recursive extension can be written against the
previous ones in two ways: a positive form ``c*M + b*m2 + a*m1`` and a
signed form ``gamma*M - beta*m2 - alpha*m1``.  Usually there are several.
"""

from stci import CurveSpec, enumerate_decompositions, select_decomposition, validate_curve

curve = validate_curve([1, 2, 3, 5])
print(curve)

###############################################################################
# All candidates for the last level, in the order the selector tries them.

for pair in enumerate_decompositions(curve, 4):
    p, s = pair.positive, pair.signed
    print(f"(a,b,c)=({p.a},{p.b},{p.c})  (alpha,beta,gamma)=({s.alpha},{s.beta},{s.gamma})"
          f"  slack={pair.slack}  sufficient={pair.sufficient}")

###############################################################################
# The selector prefers beta = 0.

pair, why = select_decomposition(curve, 4)
print("chosen:", pair.signed, "admitted by", why)

###############################################################################
# Not every curve is a recursive extension.

try:
    validate_curve([4, 5, 6, 7])
except ValueError as exc:
    print("rejected:", exc)
