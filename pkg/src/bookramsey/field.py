"""Small finite fields GF(p^e), e <= 3, as vectorised lookup arithmetic.

Element ``x`` in ``0..q-1`` encodes the polynomial sum(a_i t^i) whose
coefficients are the base-``p`` digits of ``x`` (least significant first).
For e > 1 the field is GF(p)[t] modulo the lexicographically smallest monic
irreducible polynomial of degree e.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

MAX_ORDER = 10**4


class FieldError(ValueError):
    pass


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, e)`` with ``q == p**e`` and p prime, or None."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


def _has_root(coeffs: tuple[int, ...], p: int) -> bool:
    # coeffs: c_0..c_{e-1}, monic leading term t^e
    for x in range(p):
        val = 1
        for c in reversed(coeffs):
            val = (val * x + c) % p
        if val == 0:
            return True
    return False


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{e-1}) of the lexicographically smallest monic
    irreducible t^e + c_{e-1} t^{e-1} + ... + c_0 over GF(p), ordered by
    (c_{e-1}, ..., c_0).  For e <= 3, irreducible means root-free."""
    if e == 1:
        return (0,)
    if e > 3:
        raise FieldError("only extension degrees up to 3 are supported")
    for high_first in product(range(p), repeat=e):
        coeffs = tuple(reversed(high_first))
        if coeffs[0] != 0 and not _has_root(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible of degree {e} over GF({p})")  # pragma: no cover


@dataclass
class FieldTable:
    """GF(q) with vectorised add / sub / mul and the set of nonzero squares."""

    q: int
    p: int
    e: int
    modulus: tuple[int, ...]
    digits: np.ndarray = field(repr=False)

    def add(self, x, y):
        return self._from_digits((self._dig(x) + self._dig(y)) % self.p)

    def sub(self, x, y):
        return self._from_digits((self._dig(x) - self._dig(y)) % self.p)

    def neg(self, x):
        return self._from_digits((-self._dig(x)) % self.p)

    def mul(self, x, y):
        if self.e == 1:
            return (np.asarray(x, dtype=np.int64) * np.asarray(y, dtype=np.int64)) % self.p
        a, b = self._dig(x), self._dig(y)
        a, b = np.broadcast_arrays(a, b)
        e, p = self.e, self.p
        prod = np.zeros(a.shape[:-1] + (2 * e - 1,), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= p
        mod = np.array(self.modulus, dtype=np.int64)
        for k in range(2 * e - 2, e - 1, -1):
            lead = prod[..., k].copy()
            prod[..., k] = 0
            # t^k = t^(k-e) * t^e = -t^(k-e) * sum c_i t^i
            for i in range(e):
                prod[..., k - e + i] = (prod[..., k - e + i] - lead * mod[i]) % p
        return self._from_digits(prod[..., :e])

    def _dig(self, x):
        return self.digits[np.asarray(x, dtype=np.int64)]

    def _from_digits(self, d):
        if self.e == 1:
            return d[..., 0]
        weights = self.p ** np.arange(self.e, dtype=np.int64)
        return (d * weights).sum(axis=-1)

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def add_table(self) -> np.ndarray:
        x = self.elements
        return self.add(x[:, None], x[None, :])

    @cached_property
    def mul_table(self) -> np.ndarray:
        x = self.elements
        return self.mul(x[:, None], x[None, :])

    @cached_property
    def is_square(self) -> np.ndarray:
        """Boolean indicator of the nonzero squares."""
        sq = np.zeros(self.q, dtype=bool)
        sq[self.mul(self.elements, self.elements)] = True
        sq[0] = False
        return sq

    def inverse(self, x: int) -> int:
        if x % self.q == 0:
            raise ZeroDivisionError("0 has no inverse")
        row = self.mul(np.full(self.q, x), self.elements)
        return int(np.flatnonzero(row == 1)[0])


def build_field(q: int) -> FieldTable:
    """GF(q) for a prime power q = p^e with e in {1, 2, 3} and q <= 10^4."""
    q = int(q)
    if q > MAX_ORDER:
        raise FieldError(f"GF({q}) is larger than the supported {MAX_ORDER} elements")
    pe = prime_power(q)
    if pe is None:
        raise FieldError(f"{q} is not a prime power")
    p, e = pe
    if e > 3:
        raise FieldError(f"GF({q}) is outside the supported range (e <= 3, q <= {MAX_ORDER})")
    x = np.arange(q, dtype=np.int64)
    digits = np.stack([(x // p**i) % p for i in range(e)], axis=-1)
    return FieldTable(q=q, p=p, e=e, modulus=smallest_irreducible(p, e), digits=digits)
