import random
from fractions import Fraction as Q

import pytest

from limitlab.decompose import Decomposition, decompose, verify_decomposition
from limitlab.errors import PrerequisiteNotMet
from limitlab.functions import PiecewiseFn, fn_add, fn_eval, indicator_fn
from limitlab.limits import LimitType, check
from limitlab.poly import Poly
from limitlab.sampling import sample_points
from limitlab.sets import FULL_LINE, contains, interval, rationals_in

from conftest import CORPUS_POINTS, certified_fn

T5, T6 = LimitType.T5, LimitType.T6


def test_dirichlet_decomposition(dirichlet):
    d = decompose(dirichlet, 0, 0, T5)
    assert d.delta0 > 0
    # the exceptional union covers the rationals near 0
    for x in (Q(1, 7), Q(-3, 8)):
        assert contains(d.exceptional_union, x * d.delta0)
    # inside the certified window g is identically 0: the value is forced to
    # the limit on the union and f already vanishes off the rationals
    for x in sample_points(FULL_LINE, count=60, seed=1):
        if 0 < abs(x) < d.delta0:
            assert fn_eval(d.g, x) == 0
        else:
            assert fn_eval(d.g, x) == fn_eval(dirichlet, x)
    assert verify_decomposition(d, dirichlet, 0, 0, T5)


def test_identity_decomposition(identity_fn):
    d = decompose(identity_fn, 0, 0, T5)
    from limitlab.sets import EmptySet

    assert isinstance(d.exceptional_union, EmptySet)
    for x in sample_points(FULL_LINE, count=40, seed=2):
        assert fn_eval(d.h, x) == 0
    assert verify_decomposition(d, identity_fn, 0, 0, T5)


def test_cantor_decomposition(cantor_indicator):
    d = decompose(cantor_indicator, 0, 0, T6)
    assert verify_decomposition(d, cantor_indicator, 0, 0, T6)


def test_decompose_requires_limit(cantor_indicator):
    with pytest.raises(PrerequisiteNotMet):
        decompose(cantor_indicator, 0, 0, T5)  # countable-type limit fails


def test_tampered_sum_detected(dirichlet):
    d = decompose(dirichlet, 0, 0, T5)
    bad_h = fn_add(d.h, indicator_fn(interval(0, Q(1, 4))))
    bad = Decomposition(d.g, bad_h, d.delta0, d.exceptional_union)
    assert not verify_decomposition(bad, dirichlet, 0, 0, T5)


def test_tampered_smallness_detected(dirichlet):
    # replace both parts so the pointwise identity holds but h is fat
    fat = indicator_fn(interval(-1, 1))
    g = PiecewiseFn(FULL_LINE, ((interval(-1, 1), Poly.const(0)),), Poly.const(1))
    d = Decomposition(g, fat, Q(1), interval(-1, 1))
    ok_pointwise = all(
        fn_eval(g, x) + fn_eval(fat, x) == 1 for x in sample_points(FULL_LINE, 30, seed=4)
    )
    constant_one = PiecewiseFn(FULL_LINE, (), Poly.const(1))
    assert ok_pointwise
    assert not verify_decomposition(d, constant_one, 0, 1, T5)


def test_roundtrip_over_certified_corpus():
    rng = random.Random(8080)
    done = 0
    for t6 in (False, True):
        t = T6 if t6 else T5
        for _ in range(10):
            a = rng.choice(CORPUS_POINTS)
            f, L = certified_fn(rng, a, t6)
            d = decompose(f, a, L, t)
            assert verify_decomposition(d, f, a, L, t), (f, a, L, t)
            done += 1
    assert done == 20


def test_support_of_h_inside_union(dirichlet):
    d = decompose(dirichlet, 0, 0, T5)
    for x in sample_points(rationals_in(interval(-Q(1, 2), Q(1, 2))), count=50, seed=5):
        if x == 0 or abs(x) >= d.delta0:
            continue
        if fn_eval(d.h, x) != 0:
            assert contains(d.exceptional_union, x)
