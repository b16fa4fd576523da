"""Leading constants of the known bounds on r(B_{alpha n}, B_n) / n.

All curves are evaluated in double precision.  Domain checks accept
``float`` or ``Fraction`` input and allow a 1e-12 slack so that the float
nearest 1/6 is treated as 1/6.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from functools import lru_cache

SIXTH = Fraction(1, 6)
QUARTER = Fraction(1, 4)
_SLACK = 1e-12
_SQRT3 = math.sqrt(3.0)


class BoundsError(ValueError):
    pass


def crossing_closed_form() -> float:
    """(52 - 16 sqrt 3) / 121, where the three-block and random bounds meet."""
    return (52.0 - 16.0 * _SQRT3) / 121.0


def _in_range(alpha, lo, hi, name, lo_open=False) -> float:
    a = float(alpha)
    lo, hi = float(lo), float(hi)
    too_low = a <= lo if lo_open else a < lo - _SLACK
    if math.isnan(a) or too_low or a > hi + _SLACK:
        left = "(" if lo_open else "["
        raise BoundsError(f"{name}: alpha={alpha} outside {left}{lo:.6g}, {hi:.6g}]")
    return a


def random_bound(alpha, k: int = 2) -> float:
    """(alpha^(1/k) + 1)^k."""
    a = _in_range(alpha, 0, 1, "random_bound", lo_open=True)
    if k < 2:
        raise BoundsError("k must be at least 2")
    return (a ** (1.0 / k) + 1.0) ** k


def mid_upper(alpha) -> float:
    """3/2 + 3 alpha on [1/6, 1/4]."""
    a = _in_range(alpha, SIXTH, QUARTER, "mid_upper")
    return 1.5 + 3.0 * a


def _p_star_raw(a: float) -> float:
    return (1.0 - math.sqrt(a * (3.0 - 2.0 * a))) / (1.0 - 2.0 * a)


def p_star(alpha) -> float:
    """Cross-edge red probability p with alpha = (1 - p)^2 / (1 + 2 p^2)."""
    a = _in_range(alpha, SIXTH, crossing_closed_form(), "p_star")
    return _p_star_raw(a)


def _three_block_raw(a: float) -> float:
    p = _p_star_raw(a)
    return 3.0 / (1.0 + 2.0 * p * p)


def three_block_bound(alpha) -> float:
    """3 / (1 + 2 p^2) with p = p_star(alpha)."""
    p = p_star(alpha)
    return 3.0 / (1.0 + 2.0 * p * p)


def bisect(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root of ``f`` on a sign-changing bracket by plain bisection."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BoundsError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=8)
def crossing_alpha(tol: float = 1e-12) -> float:
    """Where the three-block bound drops below the random bound, by bisection
    on [0.17, 0.25]."""
    return bisect(lambda a: _three_block_raw(a) - (math.sqrt(a) + 1.0) ** 2, 0.17, 0.25, tol)


def claim_discriminants(alpha) -> tuple[float, float, float]:
    """Discriminants of the two density quadratics and cd - c - d, with
    c = sqrt(alpha) + 1 and d = 1 + 1/sqrt(alpha).  All three vanish."""
    a = float(alpha)
    if not a > 0.0:
        raise BoundsError("alpha must be positive")
    r = math.sqrt(a)
    c = r + 1.0
    d = 1.0 + 1.0 / r
    delta1 = (2.0 * d / 3.0) ** 2 - 4.0 * (c + d) * (d - 1.0) / 9.0
    delta2 = d * d - (d + c) * (d - 1.0)
    return delta1, delta2, c * d - c - d


def chernoff_exponent(c: float) -> float:
    """ln c - 1 + 1/c, the rate in Pr(X >= x) <= exp(-rate x) for x >= c E[X]."""
    c = float(c)
    if not c >= 1.0:
        raise BoundsError(f"chernoff_exponent needs c >= 1, got {c}")
    return math.log(c) - 1.0 + 1.0 / c


@dataclass(frozen=True)
class ExpectationReport:
    N: int
    p: float
    expected_red_intra: float
    expected_blue_cross: float
    expected_red_cross: float
    book_n: int | None = None
    eta: float | None = None
    page_factor: float | None = None


def construction_expectations(N: int, p: float, book_n: int | None = None) -> ExpectationReport:
    """Expected book sizes in the three-block colouring on N vertices.

    With ``book_n`` given, also reports eta from N = (3/(1+2p^2) - eta) n and
    the factor 1 - (1+2p^2) eta / 3 that multiplies both page targets.
    """
    N = int(N)
    if N <= 0 or N % 3:
        raise BoundsError(f"N must be a positive multiple of 3, got {N}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BoundsError(f"p must lie in [0, 1], got {p}")
    third = N / 3.0
    red_intra = third - 2.0 + 2.0 * third * p * p
    blue_cross = third * (1.0 - p) ** 2
    red_cross = third * p * p + (2.0 * third - 2.0) * p
    eta = factor = None
    if book_n is not None:
        eta = 3.0 / (1.0 + 2.0 * p * p) - N / book_n
        factor = 1.0 - (1.0 + 2.0 * p * p) * eta / 3.0
    return ExpectationReport(N, p, red_intra, blue_cross, red_cross, book_n, eta, factor)


@dataclass(frozen=True)
class BoundPoint:
    alpha: float
    random_lb: float
    mid_ub: float | None
    three_block_lb: float | None
    best_lower: float
    best_upper: float
    regime: str


def best_known(alpha) -> BoundPoint:
    """Best known lower and upper leading constants at ``alpha``."""
    a = _in_range(alpha, 0, 1, "best_known", lo_open=True)
    rnd = (math.sqrt(a) + 1.0) ** 2
    sixth, quarter = 1.0 / 6.0, 0.25
    cross = crossing_alpha()
    in_mid = sixth - _SLACK <= a <= quarter + _SLACK
    mid = 1.5 + 3.0 * a if in_mid else None
    tb = _three_block_raw(a) if sixth - _SLACK <= a <= crossing_closed_form() + _SLACK else None
    if a < sixth - _SLACK:
        lower = upper = 2.0
        regime = "goodness"
    elif a < cross:
        lower, upper, regime = tb, mid, "three_block"
    elif a <= quarter + _SLACK:
        lower, upper, regime = rnd, mid, "random_mid"
    else:
        lower = upper = rnd
        regime = "random_tight"
    return BoundPoint(a, rnd, mid, tb, lower, upper, regime)


def bounds_table(alpha_min, alpha_max, steps: int) -> list[BoundPoint]:
    """``steps`` equally spaced rows from alpha_min to alpha_max inclusive.

    The grid is computed in exact rational arithmetic, so fractional
    endpoints such as 1/6 land exactly on the regime boundaries.
    """
    lo, hi = Fraction(alpha_min), Fraction(alpha_max)
    if not 0 < lo < hi <= 1:
        raise BoundsError("need 0 < alpha_min < alpha_max <= 1")
    if steps < 2:
        raise BoundsError("steps must be at least 2")
    return [best_known(float(lo + (hi - lo) * i / (steps - 1))) for i in range(steps)]


CSV_COLUMNS = tuple(f.name for f in fields(BoundPoint))


def write_csv(points, stream=None) -> str:
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        writer.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v)
                         for v in astuple(pt)])
    return out.getvalue() if stream is None else ""
