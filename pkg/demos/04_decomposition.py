"""Splitting a function into a classical-limit part plus a thin remainder.

f has a countable-type (null-type) limit L at a exactly when f = g + h
with g having the classical limit L at a and h supported, inside some
window, on a countable (measure-zero) set.  The engine builds the split
constructively and re-verifies it from scratch.

Run with:  python demos/04_decomposition.py
"""

from fractions import Fraction as Q

from limitlab import (
    Decomposition,
    LimitType,
    decompose,
    fn_add,
    fn_eval,
    indicator_fn,
    interval,
    parse_fn,
    sample_points,
    set_to_text,
    verify_decomposition,
)
from limitlab.sets import FULL_LINE

dirichlet = parse_fn("piecewise { 1 on Q(R); else 0 }")

d = decompose(dirichlet, 0, 0, LimitType.T5)
print("certified window radius:", d.delta0)
print("exceptional union:", set_to_text(d.exceptional_union))

# g forces the limit value on the exceptional union and follows f elsewhere;
# h carries the difference.
for x in (Q(1, 7), Q(-2, 5)):
    print(f"  g({x}) = {fn_eval(d.g, x)},  h({x}) = {fn_eval(d.h, x)},  f({x}) = {fn_eval(dirichlet, x)}")

print("verifies:", verify_decomposition(d, dirichlet, 0, 0, LimitType.T5))

# The verifier is not a rubber stamp: breaking the pointwise identity or
# fattening the remainder's support both get caught.
tampered = Decomposition(d.g, fn_add(d.h, indicator_fn(interval(0, Q(1, 4)))), d.delta0, d.exceptional_union)
print("tampered version verifies:", verify_decomposition(tampered, dirichlet, 0, 0, LimitType.T5))

# The same machinery settles the null-type split of the Cantor indicator.
cantor_ind = parse_fn("piecewise { 1 on cantor(0,1); else 0 }")
d2 = decompose(cantor_ind, 0, 0, LimitType.T6)
print("\ncantor indicator split:")
print("  remainder support:", set_to_text(d2.exceptional_union))
print("  verifies:", verify_decomposition(d2, cantor_ind, 0, 0, LimitType.T6))
