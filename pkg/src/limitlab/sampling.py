"""Deterministic rational point sampling from set expressions.

Only rational points can be produced, so pieces whose rational part is
removed (such as an interval minus its rationals) contribute nothing; the
sampler draws from every piece that has rational members.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import UnsupportedIntersection
from .sets import (
    CantorAffine,
    FinitePoints,
    Interval,
    IntervalFamily,
    Piece,
    RationalsIn,
    Sequence,
    _family_reflect,
    _normal,
    contains,
    family_tail_info,
    piece_contains,
)

Q = Fraction


def _box(iv: Interval, center: Q, spread: Q) -> tuple[Q, Q] | None:
    lo = iv.lo if iv.lo is not None else center - spread
    hi = iv.hi if iv.hi is not None else center + spread
    if lo >= hi:
        lo, hi = min(lo, hi), min(lo, hi) + spread
    return lo, hi


def _piece_candidates(piece: Piece, rng: random.Random, center: Q, spread: Q, want: int):
    core = piece.core
    out = []
    if isinstance(core, Interval):
        lo, hi = _box(core, center, spread)
        width = hi - lo
        for _ in range(want):
            den = rng.choice((64, 128, 256, 1024, 4096))
            x = lo + width * Q(rng.randrange(1, den), den)
            out.append(x)
    elif isinstance(core, FinitePoints):
        out.extend(core.points)
    elif isinstance(core, RationalsIn):
        lo, hi = _box(core.iv, center, spread)
        width = hi - lo
        for _ in range(want):
            den = rng.choice((64, 128, 256, 1024, 4096))
            x = lo + width * Q(rng.randrange(1, den), den)
            out.append(x)
    elif isinstance(core, CantorAffine):
        for _ in range(want):
            digits = [rng.choice((0, 2)) for _ in range(rng.randrange(2, 16))]
            v = sum(Q(d, 3 ** (i + 1)) for i, d in enumerate(digits))
            out.append(core.offset + core.scale * v)
    elif isinstance(core, Sequence):
        for _ in range(want):
            n = core.start + rng.randrange(0, 64)
            out.append(core.term.eval(n))
    elif isinstance(core, IntervalFamily):
        info = family_tail_info(core)
        work = core if info.side > 0 else _family_reflect(core)
        for _ in range(want):
            n = work.start + rng.randrange(0, 64)
            lo_v, hi_v = work.lo.eval(n), work.hi.eval(n)
            if hi_v <= lo_v:
                continue
            x = lo_v + (hi_v - lo_v) * Q(rng.randrange(1, 16), 16)
            out.append(x if info.side > 0 else -x)
    return out


def sample_points(expr, count: int = 200, seed: int = 0, center=0, spread=2) -> list[Q]:
    """Up to `count` distinct rational members of the expression,
    deterministic for a fixed seed."""
    center, spread = Q(center), Q(spread)
    rng = random.Random(seed)
    picked: list[Q] = []
    seen = set()
    try:
        pieces = _normal(expr).pieces
        per = max(4, count // max(1, len(pieces)) + 1)
        for piece in pieces:
            for x in _piece_candidates(piece, rng, center, spread, per):
                if x not in seen and piece_contains(piece, x):
                    seen.add(x)
                    picked.append(x)
                    if len(picked) >= count:
                        return picked
    except UnsupportedIntersection:
        # fall back to rejection sampling on the raw tree
        for _ in range(count * 20):
            den = rng.choice((64, 256, 1024, 4096))
            x = center - spread + 2 * spread * Q(rng.randrange(0, den + 1), den)
            if x not in seen and contains(expr, x):
                seen.add(x)
                picked.append(x)
                if len(picked) >= count:
                    break
    return picked
