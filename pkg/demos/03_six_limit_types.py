"""The six limit types and the three functions that separate them.

A value L is a type-t limit of f at a when every tolerance eps admits a
punctured window whose exceptional set {x : |f(x) - L| >= eps} is "small"
in the sense of t:

    t1  empty                    t5  countable
    t3  finite                   t6  measure zero
    t4  no accumulation points   t2  zero density at a

t1, t3, t4 turn out to be the same notion; t5, t6, t2 are each genuinely
weaker, witnessed by the three indicator functions below.

Run with:  python demos/03_six_limit_types.py
"""

from fractions import Fraction as Q

from limitlab import LimitType, check, classify, parse_fn, parse_set, uniqueness_precondition
from limitlab.sets import FULL_LINE, open_interval, rationals_in

dirichlet = parse_fn("piecewise { 1 on Q(R); else 0 }")
cantor_ind = parse_fn("piecewise { 1 on cantor(0,1); else 0 }")
omega_ind = parse_fn("piecewise { 1 on family(1/n - (1/2)^n, 1/n); else 0 }")


def show(name, f, a=0):
    rep = classify(f, a)
    cells = []
    for t in LimitType:
        o = rep.outcomes[t]
        cells.append(f"{t.value}={o.exists}" + (f"({o.value})" if o.value is not None else ""))
    print(f"{name:18s} {'  '.join(cells)}")


print("classification at 0:")
show("rational ind.", dirichlet)
show("cantor ind.", cantor_ind)
show("family ind.", omega_ind)

# Each function witnesses one strict step of the tolerance chain.
print("\nstrict separations:")
print("  countable beats empty:   ", check(dirichlet, 0, 0, LimitType.T5).passed(),
      "vs", check(dirichlet, 0, 0, LimitType.T1).status)
print("  null beats countable:    ", check(cantor_ind, 0, 0, LimitType.T6).passed(),
      "vs", check(cantor_ind, 0, 0, LimitType.T5).status)
print("  zero-density beats null: ", check(omega_ind, 0, 0, LimitType.T2).passed(),
      "vs", check(omega_ind, 0, 0, LimitType.T6).status)

# Pass verdicts carry a witness schedule: a window radius per tolerance band.
v = check(dirichlet, 0, 0, LimitType.T5)
print("\nwitness schedule for the countable-type limit of the rational indicator:")
for eps, delta in v.witness:
    print(f"  eps = {eps}: delta = {delta}")

# Over a countable domain every value is a countable-type limit, so
# uniqueness needs uncountable windows.
dom = rationals_in(open_interval(-1, 1))
print("\nuniqueness precondition on Q((-1,1)):",
      uniqueness_precondition(dom, 0, LimitType.T5))
print("uniqueness precondition on R:        ",
      uniqueness_precondition(FULL_LINE, 0, LimitType.T5))
