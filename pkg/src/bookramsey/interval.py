"""Rigorous nonnegativity certificate for the three-root gap function

    g(lam, alpha) = sqrt((1-lam) lam) - sqrt((alpha/s - lam) lam)
                    - sqrt((1/s - (1-lam)/2)(1-lam)),      s = 3/2 + 3 alpha,

over alpha in [1/6, 1/4] and every lam where both radicands are nonnegative.
g >= 0 on that region means the strict inequality g < 0 has no solution.

The certifier bisects boxes in (lam, alpha - 1/6) coordinates and bounds g
with outward-rounded interval arithmetic (``gap_box`` kernel).  Shifting by
1/6 keeps the corner lam = 0, alpha = 1/6, where g touches zero, exactly
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._backend import kernels as _default_kernels

SIXTH = Fraction(1, 6)
QUARTER = Fraction(1, 4)
FUNCTION_ID = "gap(c=3/2,d=3)"
_SNAP = Fraction(1, 10**12)


class IntervalError(ValueError):
    pass


def _dn(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class Interval:
    """Closed interval with outward rounding on every operation."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise IntervalError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        if isinstance(x, Fraction):
            f = float(x)
            lo = f if Fraction(f) <= x else _dn(f)
            hi = f if Fraction(f) >= x else _up(f)
            return cls(lo, hi)
        x = float(x)
        return cls(x, x)

    @staticmethod
    def _coerce(other) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(_dn(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(_dn(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_dn(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        q = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_dn(min(q)), _up(max(q)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sqrt(self, clamp: bool = False) -> "Interval":
        """Square root; a negative lower end is an error unless ``clamp``."""
        if self.hi < 0.0:
            raise IntervalError("sqrt of a negative interval")
        if self.lo < 0.0 and not clamp:
            raise IntervalError("sqrt of an interval straddling 0")
        lo = 0.0 if self.lo <= 0.0 else max(0.0, _dn(math.sqrt(self.lo)))
        return Interval(lo, _up(math.sqrt(self.hi)) if self.hi > 0.0 else 0.0)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def gap_natural(lam: Interval, alpha: Interval) -> Interval:
    """Plain interval extension of the gap on a box (radicands clamped at 0).

    Much looser than the certifier's kernel; used as an independent check.
    Raises ``IntervalError`` when a radicand is negative on the whole box.
    """
    s = 1.5 + 3.0 * alpha
    r0 = (1.0 - lam) * lam
    r1 = (alpha / s - lam) * lam
    mu = 1.0 - lam
    r2 = (1.0 / s - 0.5 * mu) * mu
    return r0.sqrt(clamp=True) - r1.sqrt(clamp=True) - r2.sqrt(clamp=True)


def gap_value(lam, alpha) -> float:
    """Point value of the gap.

    Radicands are formed in exact rational arithmetic from the inputs, so a
    radicand that is exactly zero (e.g. lam = 1/9, alpha = 1/4) contributes
    exactly zero.  Raises ``IntervalError`` outside the feasible region.
    """
    lam, alpha = Fraction(lam), Fraction(alpha)
    s = Fraction(3, 2) + 3 * alpha
    r0 = (1 - lam) * lam
    r1 = (alpha / s - lam) * lam
    r2 = (1 / s - (1 - lam) / 2) * (1 - lam)
    if r0 < 0 or r1 < 0 or r2 < 0:
        raise IntervalError(f"({lam}, {alpha}) is outside the feasible region")
    return math.sqrt(r0) - math.sqrt(r1) - math.sqrt(r2)


def is_feasible(lam, alpha) -> bool:
    try:
        gap_value(lam, alpha)
    except IntervalError:
        return False
    return True


@dataclass(frozen=True)
class Box:
    lam_lo: float
    lam_hi: float
    eps_lo: float
    eps_hi: float
    g_lo: float
    g_hi: float
    boundary: bool

    @property
    def alpha_lo(self) -> float:
        return float(SIXTH + Fraction(self.eps_lo))

    @property
    def alpha_hi(self) -> float:
        return float(SIXTH + Fraction(self.eps_hi))

    @property
    def width(self) -> float:
        return max(self.lam_hi - self.lam_lo, self.eps_hi - self.eps_lo)

    def contains(self, lam, alpha) -> bool:
        eps = Fraction(alpha) - SIXTH
        return (self.lam_lo <= lam <= self.lam_hi
                and Fraction(self.eps_lo) <= eps <= Fraction(self.eps_hi))

    def describe(self) -> str:
        return (f"lam=[{self.lam_lo!r}, {self.lam_hi!r}] "
                f"alpha-1/6=[{self.eps_lo!r}, {self.eps_hi!r}] "
                f"g=[{self.g_lo!r}, {self.g_hi!r}] "
                f"{'boundary' if self.boundary else 'interior'}")


@dataclass
class IntervalCertificate:
    alpha_lo: Fraction
    alpha_hi: Fraction
    tolerance: float
    max_depth: int
    min_enclosure: tuple[float, float]
    touching: list[Box]
    inconclusive: list[Box]
    verdict: str
    boxes_evaluated: int
    certified_leaves: int
    infeasible_leaves: int
    deepest: int
    backend: str
    function: str = FUNCTION_ID
    lam_range: tuple[float, float] = (0.0, 1.0)
    leaves: list[Box] | None = field(default=None, repr=False)

    @property
    def certified(self) -> bool:
        return self.verdict == "nonnegative_certified"

    def leaf_containing(self, lam, alpha) -> Box | None:
        if self.leaves is None:
            raise IntervalError("certificate was built without keep_leaves=True")
        hits = [b for b in self.leaves if b.contains(lam, alpha)]
        return min(hits, key=lambda b: b.width) if hits else None

    def to_text(self) -> str:
        lo, hi = self.min_enclosure
        lines = [
            "format-version: 1",
            f"function: {self.function}",
            f"alpha-range: {self.alpha_lo} .. {self.alpha_hi}",
            f"lambda-range: {self.lam_range[0]!r} .. {self.lam_range[1]!r}",
            f"tolerance: {self.tolerance!r}",
            f"max-depth: {self.max_depth}",
            f"boxes-evaluated: {self.boxes_evaluated}",
            f"certified-leaves: {self.certified_leaves}",
            f"infeasible-leaves: {self.infeasible_leaves}",
            f"deepest-level: {self.deepest}",
            f"min-enclosure: [{lo!r}, {hi!r}]",
            f"verdict: {self.verdict}",
            f"touching-boxes: {len(self.touching)}",
        ]
        lines += [f"box: {b.describe()}" for b in self.touching]
        lines.append(f"inconclusive-boxes: {len(self.inconclusive)}")
        lines += [f"box: {b.describe()}" for b in self.inconclusive]
        return "\n".join(lines) + "\n"


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _snap(x: Fraction) -> Fraction:
    for anchor in (SIXTH, QUARTER):
        if abs(x - anchor) <= _SNAP:
            return anchor
    return x


def _float_down(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) <= x else _dn(f)


def _float_up(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) >= x else _up(f)


def certify_no_solution(
    alpha_lo=SIXTH,
    alpha_hi=QUARTER,
    tolerance: float = 1e-6,
    max_depth: int = 80,
    *,
    keep_leaves: bool = False,
    kernels=None,
) -> IntervalCertificate:
    """Prove g >= 0 on the feasible region over [alpha_lo, alpha_hi].

    A box is a certified leaf once its lower bound is positive.  Boxes whose
    lower bound stays <= 0 are bisected (longest side first) down to
    ``tolerance``; at that size a box straddling the feasible boundary is
    recorded as touching, anything else as inconclusive.
    """
    k = kernels if kernels is not None else _default_kernels
    if not tolerance > 0:
        raise IntervalError("tolerance must be positive")
    if max_depth < 1:
        raise IntervalError("max_depth must be positive")
    a_lo, a_hi = _snap(_as_fraction(alpha_lo)), _snap(_as_fraction(alpha_hi))
    if not SIXTH <= a_lo <= a_hi <= QUARTER:
        raise IntervalError(f"alpha range [{alpha_lo}, {alpha_hi}] is not inside [1/6, 1/4]")
    e_lo = max(0.0, _float_down(a_lo - SIXTH))
    e_hi = _float_up(a_hi - SIXTH)

    gap_box = k.gap_box
    touching: list[Box] = []
    inconclusive: list[Box] = []
    leaves: list[Box] | None = [] if keep_leaves else None
    min_lo, min_hi = math.inf, math.inf
    evaluated = certified = infeasible = deepest = 0
    stack = [(0.0, 1.0, e_lo, e_hi, 0)]
    while stack:
        l0, l1, e0, e1, depth = stack.pop()
        deepest = max(deepest, depth)
        status, g_lo, g_hi = gap_box(l0, l1, e0, e1)
        evaluated += 1
        if status == 0:
            infeasible += 1
            continue
        box = None
        if g_lo > 0.0:
            certified += 1
            min_lo = min(min_lo, g_lo)
            if status == 1:
                min_hi = min(min_hi, g_hi)
            if leaves is not None:
                leaves.append(Box(l0, l1, e0, e1, g_lo, g_hi, status == 2))
            continue
        wl, we = l1 - l0, e1 - e0
        if max(wl, we) <= tolerance or depth >= max_depth:
            box = Box(l0, l1, e0, e1, g_lo, g_hi, status == 2)
            if status == 2 and g_hi >= 0.0 and max(wl, we) <= tolerance:
                touching.append(box)
                min_lo = min(min_lo, g_lo)
            else:
                inconclusive.append(box)
            if leaves is not None:
                leaves.append(box)
            continue
        if wl >= we:
            mid = 0.5 * (l0 + l1)
            stack.append((mid, l1, e0, e1, depth + 1))
            stack.append((l0, mid, e0, e1, depth + 1))
        else:
            mid = 0.5 * (e0 + e1)
            stack.append((l0, l1, mid, e1, depth + 1))
            stack.append((l0, l1, e0, mid, depth + 1))

    verdict = "inconclusive" if inconclusive else "nonnegative_certified"
    return IntervalCertificate(
        alpha_lo=a_lo,
        alpha_hi=a_hi,
        tolerance=float(tolerance),
        max_depth=int(max_depth),
        min_enclosure=(min_lo, min_hi),
        touching=touching,
        inconclusive=inconclusive,
        verdict=verdict,
        boxes_evaluated=evaluated,
        certified_leaves=certified,
        infeasible_leaves=infeasible,
        deepest=deepest,
        backend=k.BACKEND,
        leaves=leaves,
    )
