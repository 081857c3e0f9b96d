from fractions import Fraction as Q

import pytest

from limitlab.functions import PiecewiseFn, indicator_fn
from limitlab.limits import (
    LimitType,
    candidates,
    check,
    classify,
    uniqueness_precondition,
)
from limitlab.poly import Poly
from limitlab.sets import (
    FULL_LINE,
    cantor_affine,
    interval,
    open_interval,
    points,
    rationals_in,
    sequence,
)
from limitlab.terms import Term


T1, T2, T3, T4, T5, T6 = (
    LimitType.T1,
    LimitType.T2,
    LimitType.T3,
    LimitType.T4,
    LimitType.T5,
    LimitType.T6,
)


def test_check_fixture_verdicts(dirichlet, cantor_indicator, omega_indicator):
    assert check(dirichlet, 0, 0, T1).failed()
    assert check(dirichlet, 0, 0, T5).passed()
    assert check(cantor_indicator, 0, 0, T6).passed()
    assert check(cantor_indicator, 0, 0, T5).failed()
    assert check(omega_indicator, 0, 0, T2).passed()
    assert check(omega_indicator, 0, 0, T6).failed()


def test_pass_carries_witness_fail_carries_evidence(dirichlet):
    ok = check(dirichlet, 0, 0, T5)
    assert ok.passed() and len(ok.witness) >= 1
    for eps, delta in ok.witness:
        assert eps > 0 and delta > 0
    bad = check(dirichlet, 0, 0, T1)
    assert bad.failed() and bad.evidence


def test_candidates(dirichlet, identity_fn, omega_indicator):
    assert candidates(dirichlet, 0) == (0, 1)
    assert candidates(identity_fn, 2) == (2,)
    assert candidates(omega_indicator, 0) == (0, 1)


def test_classify_dirichlet(dirichlet):
    for a in (Q(0), Q(1, 3)):
        rep = classify(dirichlet, a)
        for t in (T1, T3, T4):
            assert rep.outcomes[t].exists == "no"
        for t in (T5, T6, T2):
            assert rep.outcomes[t].exists == "yes"
            assert rep.outcomes[t].value == 0
        assert rep.chain_consistent


def test_classify_cantor_indicator(cantor_indicator):
    rep = classify(cantor_indicator, 0)
    for t in (T1, T3, T4, T5):
        assert rep.outcomes[t].exists == "no"
    assert rep.outcomes[T6].exists == "yes" and rep.outcomes[T6].value == 0
    assert rep.outcomes[T2].exists == "yes" and rep.outcomes[T2].value == 0
    assert rep.chain_consistent


def test_classify_omega_indicator(omega_indicator):
    rep = classify(omega_indicator, 0)
    assert rep.outcomes[T6].exists == "no"
    assert rep.outcomes[T5].exists == "no"
    assert rep.outcomes[T2].exists == "yes" and rep.outcomes[T2].value == 0
    assert rep.chain_consistent


def test_classify_identity(identity_fn):
    rep = classify(identity_fn, 3)
    for t in LimitType:
        assert rep.outcomes[t].exists == "yes"
        assert rep.outcomes[t].value == 3
    assert rep.chain_consistent


def test_check_arbitrary_value_fails(cantor_indicator):
    # a value strictly between the two branch values fails every type
    for t in LimitType:
        assert check(cantor_indicator, 0, Q(1, 3), t).failed()


def test_restricted_domain_everything_passes():
    # over a countable domain, every value is a countable-type limit
    dom = rationals_in(open_interval(-1, 1))
    f = PiecewiseFn(dom, (), Poly.make([0, 1]))
    assert check(f, 0, 0, T5).passed()
    assert check(f, 0, 1, T5).passed()
    assert check(f, 0, Q(22, 7), T5).passed()


def test_uniqueness_preconditions():
    assert uniqueness_precondition(FULL_LINE, 0, T5)
    assert not uniqueness_precondition(rationals_in(open_interval(-1, 1)), 0, T5)
    assert not uniqueness_precondition(cantor_affine(0, 1), 0, T6)
    assert uniqueness_precondition(cantor_affine(0, 1), 0, T5)
    assert not uniqueness_precondition(points(1, 2), 0, T5)
    assert not uniqueness_precondition(sequence(Term.power(1, 1)), 0, T6)
    with pytest.raises(ValueError):
        uniqueness_precondition(FULL_LINE, 0, T1)


def test_sequence_domain_vacuous_pass_away_from_limit():
    # domain {1/n}: at a point that is not an accumulation point of the
    # domain the exceptional set is eventually empty for every value
    dom = sequence(Term.power(1, 1))
    f = PiecewiseFn(dom, (), Poly.const(7))
    assert check(f, Q(1, 2), Q(100), T1).passed()
    # at the accumulation point 0 only the true limit passes
    assert check(f, 0, 7, T1).passed()
    assert check(f, 0, 8, T1).failed()
