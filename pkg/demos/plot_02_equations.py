"""
Building the equations
======================

One binomial plus one polynomial per level.  The level polynomial has the
shape ``x_{i-1}^{m_i} + G + H`` where ``G`` comes from the signed form and
``H`` from the positive one.
"""

from stci import SelectionPolicy, build_system, validate_curve
from stci.polyring import to_latex, to_text

for exps in ([1, 2, 3], [1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 3, 7]):
    system = build_system(validate_curve(exps))
    print(system.curve)
    for name, F in zip(system.names, system.polys):
        print(f"  {name} = {to_text(F)}")

###############################################################################
# Diagnostics keep every exponent that went into the level polynomial.

system = build_system(validate_curve([2, 3, 7, 35]))
for d in system.diagnostics:
    print(d.level, "N =", d.N, "G exps", d.g_exponents, "h0", d.h0_values)

###############################################################################
# A decomposition outside the sufficient conditions can still give a
# polynomial.  Pinning it needs the permissive policy, and the level is then
# flagged as empirical.

system = build_system(validate_curve([1, 2, 3, 8]), SelectionPolicy.ALLOW_DIRECT, {4: (0, 2, 4)})
print(to_latex(system.polys[-1]), system.empirical_levels)
