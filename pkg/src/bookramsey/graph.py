"""Two-coloured complete graphs, codegrees and book sizes.

A colouring of K_N is stored as its red relation, packed into little-endian
``uint64`` bit rows so that the common neighbourhood of a pair is a
word-parallel AND followed by a popcount.  Blue is the complement of red on
distinct pairs and is packed once at construction.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._backend import kernels


class Color(str, enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class GraphError(ValueError):
    """Invalid vertex, pair or graph encoding."""


def _pack(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    words = max(1, (n + 63) // 64)
    packed = np.packbits(adj.astype(bool), axis=1, bitorder="little")
    out = np.zeros((n, words * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    rows = out.view("<u8").astype(np.uint64, copy=False)
    rows.setflags(write=False)
    return rows


class ColoredCompleteGraph:
    """A red/blue colouring of the complete graph on vertices ``0..n-1``.

    Instances are immutable; :meth:`with_flipped` returns a new graph.
    """

    __slots__ = ("n", "_red", "_rows")

    def __init__(self, red_matrix: np.ndarray, *, _trusted: bool = False):
        red = np.asarray(red_matrix)
        if not _trusted:
            if red.ndim != 2 or red.shape[0] != red.shape[1]:
                raise GraphError("red matrix must be square")
            if red.shape[0] < 1:
                raise GraphError("graph needs at least one vertex")
            red = red.astype(bool)
            if np.any(np.diagonal(red)):
                raise GraphError("red relation has a loop")
            if not np.array_equal(red, red.T):
                raise GraphError("red relation is not symmetric")
        red = np.array(red, dtype=bool, copy=True)
        red.setflags(write=False)
        self.n = int(red.shape[0])
        self._red = red
        blue = ~red
        np.fill_diagonal(blue, False)
        self._rows = {Color.RED: _pack(red), Color.BLUE: _pack(blue)}

    # construction -------------------------------------------------------------

    @classmethod
    def from_red_relation(
        cls, n_vertices: int, red_pairs: Iterable[Iterable[int]]
    ) -> "ColoredCompleteGraph":
        if n_vertices < 1:
            raise GraphError("n_vertices must be positive")
        red = np.zeros((n_vertices, n_vertices), dtype=bool)
        for pair in red_pairs:
            pair = tuple(pair)
            if len(pair) != 2:
                raise GraphError(f"not a pair: {pair!r}")
            u, v = pair
            if u == v:
                raise GraphError(f"loop pair ({u}, {v})")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphError(f"vertex out of range in ({u}, {v})")
            red[u, v] = red[v, u] = True
        return cls(red, _trusted=True)

    @classmethod
    def from_red_matrix(cls, red_matrix) -> "ColoredCompleteGraph":
        return cls(red_matrix)

    # access -------------------------------------------------------------------

    def red_matrix(self) -> np.ndarray:
        """Read-only dense boolean red adjacency."""
        return self._red

    def adjacency(self, color: Color) -> np.ndarray:
        if Color(color) is Color.RED:
            return self._red
        blue = ~self._red
        np.fill_diagonal(blue, False)
        return blue

    def rows(self, color: Color) -> np.ndarray:
        """Packed bit rows of the given colour class."""
        return self._rows[Color(color)]

    def is_red(self, u: int, v: int) -> bool:
        self._check_pair(u, v)
        return bool(self._red[u, v])

    def color_of(self, u: int, v: int) -> Color:
        return Color.RED if self.is_red(u, v) else Color.BLUE

    def n_edges(self, color: Color) -> int:
        red = int(self._red.sum()) // 2
        return red if Color(color) is Color.RED else self.n * (self.n - 1) // 2 - red

    def _check_pair(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"vertex out of range: ({u}, {v})")
        if u == v:
            raise GraphError(f"u and v must differ (got {u})")

    # derived graphs -------------------------------------------------------------

    def with_flipped(self, u: int, v: int) -> "ColoredCompleteGraph":
        self._check_pair(u, v)
        red = self._red.copy()
        red[u, v] = red[v, u] = not red[u, v]
        return ColoredCompleteGraph(red, _trusted=True)

    def swapped(self) -> "ColoredCompleteGraph":
        """The colouring with red and blue exchanged."""
        return ColoredCompleteGraph(self.adjacency(Color.BLUE), _trusted=True)

    def relabeled(self, perm) -> "ColoredCompleteGraph":
        """Graph whose vertex ``perm[i]`` plays the role of old vertex ``i``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        return ColoredCompleteGraph(self._red[np.ix_(inv, inv)], _trusted=True)

    # serialization --------------------------------------------------------------

    def to_hex(self) -> str:
        """``"<n>:<hex>"`` with the upper-triangular red bits in row-major
        pair order, most significant bit first, zero-padded to a hex digit."""
        iu = np.triu_indices(self.n, 1)
        bits = self._red[iu].astype(np.uint8)
        n_digits = (bits.size + 3) // 4
        hexstr = np.packbits(bits, bitorder="big").tobytes().hex()[:n_digits]
        return f"{self.n}:{hexstr}"

    @classmethod
    def from_hex(cls, text: str) -> "ColoredCompleteGraph":
        head, sep, body = text.strip().partition(":")
        if not sep or not head.isdigit():
            raise GraphError(f"bad witness encoding: {text[:32]!r}")
        n = int(head)
        if n < 1:
            raise GraphError("witness needs at least one vertex")
        n_pairs = n * (n - 1) // 2
        if len(body) != (n_pairs + 3) // 4:
            raise GraphError(
                f"witness for n={n} needs {(n_pairs + 3) // 4} hex digits, got {len(body)}"
            )
        try:
            raw = bytes.fromhex(body + ("0" if len(body) % 2 else ""))
        except ValueError as exc:
            raise GraphError(f"bad hex digits in witness: {exc}") from None
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
        if bits[n_pairs:].any():
            raise GraphError("nonzero padding bits in witness")
        red = np.zeros((n, n), dtype=bool)
        iu = np.triu_indices(n, 1)
        red[iu] = bits[:n_pairs].astype(bool)
        red |= red.T
        return cls(red, _trusted=True)

    # dunder ---------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredCompleteGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._red, other._red)

    def __hash__(self) -> int:
        return hash(self.to_hex())

    def __repr__(self) -> str:
        return f"ColoredCompleteGraph(n={self.n}, red_edges={self.n_edges(Color.RED)})"


@dataclass(frozen=True)
class BookMeasurement:
    """Largest monochromatic book found in a colouring.

    ``base`` is empty when the colour has no ``k``-clique at all; ``pages`` is
    then 0 (the no-base sentinel).
    """

    color: Color
    base: tuple[int, ...]
    pages: int
    k: int = 2

    @property
    def has_base(self) -> bool:
        return bool(self.base)


@dataclass(frozen=True)
class DensityReport:
    set_pair: tuple[tuple[int, ...], tuple[int, ...]]
    red_density: Fraction
    blue_density: Fraction


def codegree(g: ColoredCompleteGraph, u: int, v: int, color: Color) -> int:
    """Number of vertices joined to both ``u`` and ``v`` in ``color``."""
    if u == v:
        raise GraphError("codegree needs two distinct vertices")
    g._check_pair(u, v)
    rows = g.rows(color)
    return int(np.bitwise_count(rows[u] & rows[v]).sum())


def codegree_matrix(g: ColoredCompleteGraph, color: Color) -> np.ndarray:
    """Dense matrix of colour-``color`` codegrees for every pair (diagonal = degree)."""
    a = g.adjacency(color).astype(np.float64)
    return np.rint(a @ a).astype(np.int64)  # BLAS; exact for n < 2**53


def book_size(g: ColoredCompleteGraph, color: Color) -> BookMeasurement:
    color = Color(color)
    pages, u, v = kernels.book_scan(g.rows(color), g.n)
    if pages < 0:
        return BookMeasurement(color, (), 0, 2)
    return BookMeasurement(color, (u, v), pages, 2)


def book_size_k(g: ColoredCompleteGraph, color: Color, k: int) -> BookMeasurement:
    """Largest book with a ``k``-clique base, 2 <= k <= 4."""
    color = Color(color)
    if not 2 <= k <= 4:
        raise GraphError(f"k must lie in [2, 4], got {k}")
    if k == 2:
        return book_size(g, color)
    nbr = _int_rows(g, color)
    best_pages, best_base = -1, ()

    def extend(base, common, start):
        nonlocal best_pages, best_base
        if len(base) == k:
            pages = common.bit_count()
            if pages > best_pages:
                best_pages, best_base = pages, tuple(base)
            return
        cand = common >> start
        w = start
        while cand:
            if cand & 1:
                extend(base + [w], common & nbr[w], w + 1)
            cand >>= 1
            w += 1

    for u in range(g.n):
        extend([u], nbr[u], u + 1)
    if best_pages < 0:
        return BookMeasurement(color, (), 0, k)
    return BookMeasurement(color, best_base, best_pages, k)


def _int_rows(g: ColoredCompleteGraph, color: Color) -> list[int]:
    rows = g.rows(color)
    return [int.from_bytes(r.tobytes(), "little") for r in rows]


def turan_independence_floor(
    g: ColoredCompleteGraph, color: Color
) -> tuple[int, tuple[int, ...]]:
    """``ceil(n / (1 + d))`` for the average ``color``-degree ``d``, plus a
    greedy independent set (minimum-degree removal) at least that large."""
    adj = g.adjacency(color)
    n = g.n
    two_e = int(adj.sum())
    # n / (1 + 2e/n) = n^2 / (n + 2e)
    floor = -(-(n * n) // (n + two_e))
    alive = np.ones(n, dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    chosen = []
    while alive.any():
        masked = np.where(alive, deg, np.iinfo(np.int64).max)
        v = int(np.argmin(masked))
        chosen.append(v)
        gone = alive & (adj[v] | (np.arange(n) == v))
        alive &= ~gone
        deg -= adj[:, gone].sum(axis=1)
    return floor, tuple(sorted(chosen))


def pair_density(g: ColoredCompleteGraph, X, Y, color: Color = Color.RED) -> DensityReport:
    """Red and blue densities e(X, Y) / (|X||Y|) between disjoint vertex sets.

    Both densities are always reported; ``color`` is accepted for call-site
    symmetry with the other measurements.
    """
    X = tuple(sorted(set(X)))
    Y = tuple(sorted(set(Y)))
    if not X or not Y:
        raise GraphError("density needs two nonempty sets")
    if set(X) & set(Y):
        raise GraphError("density sets must be disjoint")
    for v in X + Y:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex out of range: {v}")
    red_edges = int(g.red_matrix()[np.ix_(X, Y)].sum())
    red = Fraction(red_edges, len(X) * len(Y))
    return DensityReport((X, Y), red, 1 - red)


def is_clique(g: ColoredCompleteGraph, vertices, color: Color) -> bool:
    adj = g.adjacency(color)
    return all(adj[a, b] for a, b in combinations(vertices, 2))


def common_neighbours(g: ColoredCompleteGraph, base, color: Color) -> int:
    adj = g.adjacency(color)
    mask = np.ones(g.n, dtype=bool)
    for v in base:
        mask &= adj[v]
    return int(mask.sum())

