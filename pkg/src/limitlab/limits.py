"""Six-way limit checking for piecewise functions.

A value L is a limit of type t at a when, for every eps > 0, some punctured
window makes the exceptional set {x : |f(x) - L| >= eps} "small" in the
sense of t: empty (T1), zero-density (T2), finite (T3), without
accumulation points (T4), countable (T5), or of measure zero (T6).

The checker reduces the universal eps-quantifier to finitely many tests:
the structure of the exceptional set near a only changes at the thresholds
|p(a) - L| over the branch polynomials, so one representative inside each
band plus the thresholds themselves decide every eps.  For each test the
engine classifies the *germ* of the exceptional set at a - which pieces of
its normal form accumulate at a - and certifies Pass on the outer sandwich
side, Fail on the inner side.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .analyzers import density_at
from .errors import UndecidableDensity, UnsupportedIntersection
from .functions import (
    PiecewiseFn,
    SandwichSet,
    effective_regions,
    isolate_superlevel,
)
from .poly import Poly
from .sets import (
    EmptySet,
    CantorAffine,
    FinitePoints,
    Intersection,
    Interval,
    IntervalFamily,
    Piece,
    RationalsIn,
    Sequence,
    SetExpr,
    Union,
    _normal,
    family_tail_info,
    normalize,
    piece_reaches,
    vanish_radius,
)

Q = Fraction


class LimitType(enum.Enum):
    T1 = "t1"
    T2 = "t2"
    T3 = "t3"
    T4 = "t4"
    T5 = "t5"
    T6 = "t6"


# strictly increasing tolerance: passing an earlier group implies passing
# every later one (the first three are mutually equivalent)
CHAIN = ((LimitType.T1, LimitType.T3, LimitType.T4), (LimitType.T5,), (LimitType.T6,), (LimitType.T2,))


@dataclass(frozen=True)
class Verdict:
    status: str  # 'pass' | 'fail' | 'undecidable'
    witness: tuple[tuple[Q, Q], ...] = ()  # (eps, delta) per tested band
    evidence: str = ""

    def passed(self) -> bool:
        return self.status == "pass"

    def failed(self) -> bool:
        return self.status == "fail"


@dataclass(frozen=True)
class TypeOutcome:
    exists: str  # 'yes' | 'no' | 'undecidable'
    value: Q | None


@dataclass(frozen=True)
class LimitReport:
    point: Q
    outcomes: dict
    chain_consistent: bool
    candidates: tuple[Q, ...]
    matrix: dict  # (LimitType, candidate) -> status string


def candidates(f: PiecewiseFn, a) -> tuple[Q, ...]:
    """Values the branch polynomials take at a; the only possible limits."""
    a = Q(a)
    vals = {p(a) for _, p in f.branches}
    vals.add(f.default(a))
    return tuple(sorted(vals))


@lru_cache(maxsize=None)
def _carrier(f: PiecewiseFn, L: Q, eps: Q) -> SandwichSet:
    """Sandwich of {x in domain : |f(x) - L| >= eps} (no window applied)."""
    inner_parts = []
    outer_parts = []
    gap = Q(0)
    for region, p in effective_regions(f):
        sl = isolate_superlevel(p, L, eps)
        if isinstance(sl.outer, EmptySet):
            continue
        if not isinstance(sl.inner, EmptySet):
            inner_parts.append(Intersection((region, sl.inner)))
        outer_parts.append(Intersection((region, sl.outer)))
        gap += sl.gap
    from .sets import EMPTY

    inner = normalize(Union(tuple(inner_parts))) if inner_parts else EMPTY
    outer = normalize(Union(tuple(outer_parts))) if outer_parts else EMPTY
    return SandwichSet(inner, outer, gap)


_SMALL_KINDS = {
    LimitType.T1: frozenset(),
    LimitType.T3: frozenset(),
    LimitType.T4: frozenset(),
    LimitType.T5: frozenset({"rationals", "sequence"}),
    LimitType.T6: frozenset({"rationals", "sequence", "cantor"}),
}


def _piece_kind(piece: Piece, a: Q) -> str:
    core = piece.core
    if isinstance(core, Interval):
        return "solid"
    if isinstance(core, FinitePoints):
        return "points"
    if isinstance(core, RationalsIn):
        return "rationals"
    if isinstance(core, CantorAffine):
        return "cantor"
    if isinstance(core, Sequence):
        return "sequence"
    if isinstance(core, IntervalFamily):
        return "family" if family_tail_info(core).limit == a else "solid"
    raise AssertionError


def _reaching_kinds(expr: SetExpr, a: Q) -> set[str]:
    kinds = set()
    for piece in _normal(expr).pieces:
        if piece_reaches(piece, a):
            kinds.add(_piece_kind(piece, a))
    return kinds


def _germ_small(expr: SetExpr, a: Q, t: LimitType) -> bool | None:
    """Is the germ of expr at a small in the sense of t?  None: undecidable."""
    if t is LimitType.T2:
        try:
            return density_at(expr, a).is_zero()
        except UndecidableDensity:
            return None
    reaching = _reaching_kinds(expr, a)
    return reaching <= _SMALL_KINDS[t]


def _witness_delta(expr: SetExpr, a: Q, t: LimitType) -> Q | None:
    """A concrete radius at which the trace of expr is t-small."""
    if t is LimitType.T2:
        return Q(1)
    allowed = _SMALL_KINDS[t]
    blockers = tuple(
        p for p in _normal(expr).pieces if _piece_kind(p, a) not in allowed
    )
    return vanish_radius(blockers, a)


def _test_epsilons(f: PiecewiseFn, a: Q, L: Q) -> list[Q]:
    gaps = sorted({abs(p(a) - L) for _, p in effective_regions(f)} - {Q(0)})
    if not gaps:
        return [Q(1)]
    tests = [gaps[0] / 2]
    for i, g in enumerate(gaps):
        tests.append(g)
        if i + 1 < len(gaps):
            tests.append((g + gaps[i + 1]) / 2)
    return tests


def check(f: PiecewiseFn, a, L, t: LimitType) -> Verdict:
    """Decide whether L is a limit of type t for f at a."""
    a, L = Q(a), Q(L)
    witness = []
    try:
        eps_tests = _test_epsilons(f, a, L)
        for eps in eps_tests:
            carrier = _carrier(f, L, eps)
            inner_small = _germ_small(carrier.inner, a, t)
            if inner_small is False:
                return Verdict(
                    "fail",
                    evidence=f"eps={eps}: the exceptional set stays non-{_small_name(t)} "
                    "in every window",
                )
            outer_small = _germ_small(carrier.outer, a, t)
            if outer_small is True:
                delta = _witness_delta(carrier.outer, a, t)
                witness.append((eps, delta if delta is not None else Q(1)))
                continue
            reason = (
                "density asymptotics outside the rule table"
                if outer_small is None or inner_small is None
                else f"sandwich sides disagree (gap {carrier.gap})"
            )
            return Verdict("undecidable", evidence=f"eps={eps}: {reason}")
        return Verdict("pass", witness=tuple(witness))
    except UnsupportedIntersection as exc:
        return Verdict("undecidable", evidence=f"set algebra: {exc}")


def _small_name(t: LimitType) -> str:
    return {
        LimitType.T1: "empty",
        LimitType.T2: "zero-density",
        LimitType.T3: "finite",
        LimitType.T4: "isolated",
        LimitType.T5: "countable",
        LimitType.T6: "null",
    }[t]


def _persistent_values(f: PiecewiseFn, a: Q, t: LimitType) -> set[Q]:
    """Branch values whose carrying regions are non-small arbitrarily close
    to a; two distinct ones rule out every limit value of type t."""
    values = set()
    for region, p in effective_regions(f):
        small = _germ_small(region, a, t)
        if small is False:
            values.add(p(a))
    return values


def check_function_limit(f: PiecewiseFn, a, L) -> Verdict:
    """Classical limit check (T1)."""
    return check(f, a, L, LimitType.T1)


def classify(f: PiecewiseFn, a) -> LimitReport:
    """Run every type over every candidate value and assemble the report."""
    a = Q(a)
    cands = candidates(f, a)
    matrix = {}
    for t in LimitType:
        for L in cands:
            matrix[(t, L)] = check(f, a, L, t).status
    outcomes = {}
    for t in LimitType:
        passing = [L for L in cands if matrix[(t, L)] == "pass"]
        if passing:
            outcomes[t] = TypeOutcome("yes", passing[0])
        elif any(matrix[(t, L)] == "undecidable" for L in cands):
            outcomes[t] = TypeOutcome("undecidable", None)
        else:
            try:
                persistent = _persistent_values(f, a, t)
            except UnsupportedIntersection:
                persistent = set()
            if len(persistent) >= 2:
                outcomes[t] = TypeOutcome("no", None)
            else:
                outcomes[t] = TypeOutcome("undecidable", None)
    chain_ok = _chain_consistent(matrix, cands)
    return LimitReport(a, outcomes, chain_ok, cands, matrix)


def _chain_consistent(matrix, cands) -> bool:
    for L in cands:
        # equivalence of the first group
        group = [matrix[(t, L)] for t in CHAIN[0]]
        decided = [s for s in group if s != "undecidable"]
        if "pass" in decided and "fail" in decided:
            return False
        # passing a stronger group must propagate to weaker groups
        for i, stronger in enumerate(CHAIN):
            for weaker in CHAIN[i + 1 :]:
                for ts in stronger:
                    for tw in weaker:
                        if matrix[(ts, L)] == "pass" and matrix[(tw, L)] == "fail":
                            return False
    return True


def uniqueness_precondition(domain: SetExpr, a, t: LimitType) -> bool:
    """Whether type-t limits over this domain are necessarily unique at a.

    T5: every punctured window around a must be uncountable; T6: every
    punctured window must have positive measure.
    """
    a = Q(a)
    if t not in (LimitType.T5, LimitType.T6):
        raise ValueError("uniqueness characterization applies to T5 and T6 only")
    big_kinds = {"solid", "cantor", "family"} if t is LimitType.T5 else {"solid", "family"}
    return bool(_reaching_kinds(domain, a) & big_kinds)
