"""The middle-thirds construction: exact membership and interval probing.

Run with:  python demos/02_cantor_membership.py
"""

from fractions import Fraction as Q

from limitlab import (
    Interval,
    cantor_affine,
    cantor_meets_interval,
    cardinality,
    contains,
    measure,
    window_trace,
)

C = cantor_affine(0, 1)

# Membership is decided from the eventually-periodic base-3 expansion:
# a rational belongs iff some valid expansion avoids the digit 1.
print("membership by ternary digits:")
for x in (Q(1, 4), Q(1, 2), Q(1, 3), Q(2, 3), Q(3, 4), Q(4, 9), Q(3, 10)):
    print(f"  {x}: {contains(C, x)}")

# Emptiness against an interval is a breadth-first search over construction
# bricks: a brick inside the interval proves (uncountable) intersection.
print("\ninterval probes:")
probes = [
    Interval(Q(1, 3), Q(2, 3), False, False),   # the removed middle third
    Interval(Q(3, 10), Q(2, 5), False, False),  # catches 1/3
    Interval(Q(0), Q(1, 10**12), False, False), # arbitrarily small right stub
]
for iv in probes:
    print(f"  ({iv.lo}, {iv.hi}): {cantor_meets_interval(C, iv)}")

# Every window around 0 meets the set uncountably, yet the measure is zero:
# the combination that separates the countable-type limit from the null-type
# one.
for delta in (Q(1, 2), Q(1, 1000)):
    tr = window_trace(C, 0, delta)
    print(f"\nwindow radius {delta}: cardinality {cardinality(tr)}")
print("total measure:", measure(C).value)

# Affine copies inherit everything through the coordinate map.
half = cantor_affine(1, Q(-1, 2))  # reflected copy inside [1/2, 1]
print("\nreflected copy contains 1 - 1/8:", contains(half, 1 - Q(1, 8)))
