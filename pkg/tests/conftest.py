"""Shared fixtures: the three separating reference functions and seeded corpora."""

from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest

from limitlab.functions import PiecewiseFn, indicator_fn
from limitlab.poly import Poly
from limitlab.sets import (
    EMPTY,
    FULL_LINE,
    Difference,
    Intersection,
    SetExpr,
    Union,
    cantor_affine,
    family,
    interval,
    open_interval,
    points,
    rationals_in,
    sequence,
)
from limitlab.terms import Term


@pytest.fixture(scope="session")
def dirichlet() -> PiecewiseFn:
    return indicator_fn(rationals_in(FULL_LINE))


@pytest.fixture(scope="session")
def cantor_set():
    return cantor_affine(0, 1)


@pytest.fixture(scope="session")
def cantor_indicator(cantor_set) -> PiecewiseFn:
    return indicator_fn(cantor_set)


@pytest.fixture(scope="session")
def omega_set():
    return family(Term.power(1, 1) - Term.geometric(1, Q(1, 2)), Term.power(1, 1))


@pytest.fixture(scope="session")
def omega_indicator(omega_set) -> PiecewiseFn:
    return indicator_fn(omega_set)


@pytest.fixture(scope="session")
def identity_fn() -> PiecewiseFn:
    return PiecewiseFn(FULL_LINE, (), Poly.make([0, 1]))


# --- random corpora ------------------------------------------------------------


_DENOMS = (1, 2, 3, 4, 6, 8)


def rand_rat(rng: random.Random, lo: int = -3, hi: int = 3) -> Q:
    den = rng.choice(_DENOMS)
    return Q(rng.randint(lo * den, hi * den), den)


def rand_nonzero_rat(rng: random.Random) -> Q:
    while True:
        v = rand_rat(rng)
        if v != 0:
            return v


def rand_poly(rng: random.Random, max_deg: int = 2) -> Poly:
    deg = rng.choice((0, 0, 0, 1, 1, max_deg))
    return Poly.make([rand_rat(rng) for _ in range(deg + 1)] or [Q(0)])


def rand_interval_atom(rng: random.Random) -> SetExpr:
    a, b = sorted((rand_rat(rng), rand_rat(rng)))
    if a == b:
        b = a + Q(1, rng.choice(_DENOMS))
    return interval(a, b, rng.random() < 0.5, rng.random() < 0.5)


def rand_points_atom(rng: random.Random) -> SetExpr:
    return points(*[rand_rat(rng) for _ in range(rng.randint(1, 3))])


def rand_q_atom(rng: random.Random) -> SetExpr:
    iv = rand_interval_atom(rng)
    while not hasattr(iv, "lo"):
        iv = rand_interval_atom(rng)
    return rationals_in(iv)


def rand_seq_atom(rng: random.Random, limit: Q | None = None) -> SetExpr:
    if limit is None:
        limit = rand_rat(rng, -1, 1)
    if rng.random() < 0.5:
        term = Term.make(const=limit, pw=[(rng.randint(1, 2), 0, Q(rng.randint(1, 3)))])
    else:
        term = Term.make(const=limit, geo=[(Q(1, rng.choice((2, 3))), Q(rng.randint(1, 2)))])
    return sequence(term, rng.randint(1, 3))


def rand_family_atom(rng: random.Random, limit: Q | None = None) -> SetExpr:
    if limit is None:
        limit = rng.choice((Q(0), Q(1, 2)))
    r = Q(1, rng.choice((2, 3)))
    hi = Term.make(const=limit, pw=[(1, 0, Q(1))])
    lo = hi - Term.geometric(1, r)
    return family(lo, hi)


def rand_guard_list(rng: random.Random) -> list[SetExpr]:
    roll = rng.random()
    guards: list[SetExpr] = []
    if roll < 0.18:
        offset = rng.choice((Q(0), Q(-1, 2)))
        scale = rng.choice((Q(1), Q(1, 2)))
        guards.append(cantor_affine(offset, scale))
        pool = (rand_interval_atom, rand_points_atom, rand_q_atom)
    elif roll < 0.33:
        pool = (rand_interval_atom, rand_points_atom, rand_q_atom)
    else:
        pool = (rand_interval_atom, rand_points_atom, rand_q_atom, rand_seq_atom)
    for _ in range(rng.randint(1, 2)):
        guards.append(rng.choice(pool)(rng))
    if roll >= 0.18 and roll < 0.33:
        guards.append(rand_family_atom(rng))
    return guards


def rand_fn(rng: random.Random) -> PiecewiseFn:
    guards = rand_guard_list(rng)
    branches = tuple((g, rand_poly(rng)) for g in guards)
    return PiecewiseFn(FULL_LINE, branches, rand_poly(rng))


CORPUS_POINTS = (Q(0), Q(1, 2), Q(-1, 3))


def corpus(seed: int, size: int):
    """Deterministic list of (function, point) pairs."""
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        out.append((rand_fn(rng), rng.choice(CORPUS_POINTS)))
    return out


# --- functions with a certified countable/null-type limit ------------------------


def thin_support(rng: random.Random, a: Q, t6: bool) -> SetExpr:
    kinds = ["points", "rationals", "sequence"]
    if t6:
        kinds.append("cantor")
    kind = rng.choice(kinds)
    if kind == "points":
        return points(a + Q(1, 4), a - Q(1, 3), a + 1)
    if kind == "rationals":
        return rationals_in(open_interval(a - 1, a + 1))
    if kind == "sequence":
        term = Term.make(const=a, pw=[(1, 0, Q(1))])
        return sequence(term)
    return cantor_affine(a, rng.choice((Q(1), Q(1, 2))))


def certified_fn(rng: random.Random, a: Q, t6: bool, constant_only: bool = False):
    """(f, L) where L is a certified countable-type (or null-type) limit at a:
    f equals a polynomial off a thin set."""
    base = Poly.const(rand_rat(rng)) if constant_only else rand_poly(rng, 2)
    support = thin_support(rng, a, t6)
    bump = rand_nonzero_rat(rng)
    branch_poly = base + Poly.const(bump)
    f = PiecewiseFn(FULL_LINE, ((support, branch_poly),), base)
    return f, base(a)


# --- random set expressions for algebra properties ---------------------------------


def rand_atom(rng: random.Random) -> SetExpr:
    roll = rng.random()
    if roll < 0.3:
        return rand_interval_atom(rng)
    if roll < 0.5:
        return rand_points_atom(rng)
    if roll < 0.7:
        return rand_q_atom(rng)
    if roll < 0.85:
        return rand_seq_atom(rng)
    if roll < 0.95:
        return cantor_affine(rand_rat(rng, -1, 1), rng.choice((Q(1), Q(1, 2), Q(-1))))
    return rand_family_atom(rng)


def rand_set_expr(rng: random.Random, depth: int = 2) -> SetExpr:
    if depth == 0 or rng.random() < 0.4:
        return rand_atom(rng)
    op = rng.random()
    left = rand_set_expr(rng, depth - 1)
    right = rand_set_expr(rng, depth - 1)
    if op < 0.45:
        return Union((left, right))
    if op < 0.7:
        return Intersection((left, right))
    return Difference(left, right)


def sample_rats(rng: random.Random, count: int, lo=-3, hi=3) -> list[Q]:
    out = []
    for _ in range(count):
        den = rng.choice((4, 8, 16, 64, 256, 729, 1024))
        out.append(Q(rng.randint(int(lo * den), int(hi * den)), den))
    return out
