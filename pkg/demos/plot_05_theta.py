"""
A decomposition that always works
=================================

When ``gcd(M, m1) = 1`` and the new exponent is large enough, a beta = 0
signed form with enough slack exists and can be written down directly.
"""

import math
import random

from stci import build_system, proposition_theta, validate_curve
from stci.verify import check_ideal_membership, check_substitution_identity

rng = random.Random(7)
for _ in range(6):
    m1 = rng.randint(1, 6)
    M = rng.choice([v for v in range(m1 + 1, 12) if math.gcd(v, m1) == 1])
    mi = max(M * m1, M * (M - m1)) + rng.randint(0, 30)
    curve = validate_curve([m1, M, mi])
    s = proposition_theta(curve, 3)
    system = build_system(curve, overrides={3: s})
    ok = check_substitution_identity(system.polys[1], curve, 3).passed
    ok &= all(check_ideal_membership(F, curve).passed for F in system.polys)
    print(f"{curve}: alpha={s.alpha} gamma={s.gamma} slack={s.gamma - s.alpha - 1}  checks {'ok' if ok else 'FAILED'}")
