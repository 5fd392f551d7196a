"""
Checking the zero set over small prime fields
=============================================

Over ``F_p`` the projective space is finite, so the common zeros of the
system can be listed and compared with the points of the curve.
"""

import time

from stci import build_system, validate_curve
from stci.polyring import term
from stci.verify import FiniteFieldConfig, brute_force_locus_equality, full_verify

system = build_system(validate_curve([1, 2, 3, 5]))
for p in (5, 7, 11):
    t0 = time.perf_counter()
    v = brute_force_locus_equality(system, p)
    d = v.details
    print(f"p={p:2d}  points={d['points']:6d}  zeros={d['zeros']:3d}  "
          f"curve={d['curve_points']:3d}  {v.status}  {time.perf_counter() - t0:.3f}s")

###############################################################################
# Adding a multiple of another equation changes nothing; the ideal is the
# same.  Changing a single coefficient does, and the comparison names a
# witness point.

same = system.replace(2, system.polys[2] + system.polys[0])
print(brute_force_locus_equality(same, 7).status)
broken = system.replace(2, system.polys[2] + term(5, x1=1, x3=3, x4=1))
v = brute_force_locus_equality(broken, 7)
print(v.status, "first bad point:", v.counterexample)

###############################################################################
# The full report bundles all oracles.

report = full_verify(system, FiniteFieldConfig(primes=(5, 7)))
print(report.render())
