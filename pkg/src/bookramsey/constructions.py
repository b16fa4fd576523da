"""Explicit and random colourings behind the book Ramsey lower bounds.

* ``random_coloring``  - every edge blue independently with probability p.
* ``three_block``      - three red cliques, cross edges red with probability p.
* ``paley``            - red iff the difference is a nonzero square in GF(q).
* ``block_coloring``   - k blue cliques of size n+k-1, red between them.

Random edge colours come from a Philox counter-based stream keyed by the seed
and indexed by the pair's row-major position, so the colour of a pair does
not depend on generation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import build_field
from .graph import Color, ColoredCompleteGraph, codegree_matrix

MAX_VERTICES = 10**4
_SEED_LIMIT = 2**64

_PARAMS = {
    "random": (("n_vertices", int), ("blue_probability", float), ("seed", int)),
    "three_block": (("n_vertices", int), ("p", float), ("seed", int)),
    "paley": (("q", int),),
    "blocks": (("k", int), ("n", int)),
}


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionSpec:
    """Tagged description of a colouring generator."""

    kind: str
    params: tuple[tuple[str, int | float], ...]

    def __post_init__(self):
        if self.kind not in _PARAMS:
            raise ConstructionError(f"unknown construction kind {self.kind!r}")
        names = tuple(name for name, _ in _PARAMS[self.kind])
        if tuple(k for k, _ in self.params) != names:
            raise ConstructionError(f"{self.kind} expects parameters {names}")

    @classmethod
    def random(cls, n_vertices: int, blue_probability: float, seed: int = 0):
        return cls("random", (("n_vertices", int(n_vertices)),
                              ("blue_probability", float(blue_probability)),
                              ("seed", int(seed))))

    @classmethod
    def three_block(cls, n_vertices: int, p: float, seed: int = 0):
        return cls("three_block", (("n_vertices", int(n_vertices)), ("p", float(p)),
                                   ("seed", int(seed))))

    @classmethod
    def paley(cls, q: int):
        return cls("paley", (("q", int(q)),))

    @classmethod
    def blocks(cls, k: int, n: int):
        return cls("blocks", (("k", int(k)), ("n", int(n))))

    def __getitem__(self, key: str):
        for name, value in self.params:
            if name == key:
                return value
        raise KeyError(key)

    @property
    def randomized(self) -> bool:
        return self.kind in ("random", "three_block")

    def with_seed(self, seed: int) -> "ConstructionSpec":
        if not self.randomized:
            raise ConstructionError(f"{self.kind} construction takes no seed")
        params = tuple((k, int(seed) if k == "seed" else v) for k, v in self.params)
        return ConstructionSpec(self.kind, params)

    @property
    def description(self) -> str:
        if self.kind == "random":
            return (f"random colouring of K_{self['n_vertices']}, each edge blue "
                    f"with probability {self['blue_probability']!r} (seed {self['seed']})")
        if self.kind == "three_block":
            return (f"three red cliques of size {self['n_vertices'] // 3}, cross edges red "
                    f"with probability {self['p']!r} (seed {self['seed']})")
        if self.kind == "paley":
            return f"Paley colouring over GF({self['q']})"
        k, n = self["k"], self["n"]
        return f"{k} blue cliques of size {n + k - 1}, red between them"

    def to_record(self) -> str:
        fields = [f"kind={self.kind}"]
        fields += [f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in self.params]
        return ";".join(fields)

    @classmethod
    def from_record(cls, text: str) -> "ConstructionSpec":
        items = {}
        for chunk in text.strip().split(";"):
            key, sep, value = chunk.partition("=")
            if not sep:
                raise ConstructionError(f"malformed spec field {chunk!r}")
            items[key.strip()] = value.strip()
        kind = items.pop("kind", None)
        if kind not in _PARAMS:
            raise ConstructionError(f"unknown construction kind {kind!r}")
        try:
            params = tuple((name, typ(items.pop(name))) for name, typ in _PARAMS[kind])
        except KeyError as exc:
            raise ConstructionError(f"spec record missing {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ConstructionError(f"bad spec value: {exc}") from None
        if items:
            raise ConstructionError(f"unexpected spec fields {sorted(items)}")
        return cls(kind, params)

    def build(self) -> ColoredCompleteGraph:
        return build(self)


def build(spec: ConstructionSpec) -> ColoredCompleteGraph:
    if spec.kind == "random":
        return random_coloring(spec["n_vertices"], spec["blue_probability"], spec["seed"])
    if spec.kind == "three_block":
        return three_block(spec["n_vertices"], spec["p"], spec["seed"])
    if spec.kind == "paley":
        return paley(spec["q"])
    return block_coloring(spec["k"], spec["n"])


def _check_probability(p: float, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ConstructionError(f"{name} must lie in [0, 1], got {p}")
    return p


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise ConstructionError("seed must be a 64-bit unsigned integer")
    return seed


def _check_size(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ConstructionError("need at least 2 vertices")
    if n > MAX_VERTICES:
        raise ConstructionError(f"at most {MAX_VERTICES} vertices supported")
    return n


def edge_uniforms(n_vertices: int, seed: int) -> np.ndarray:
    """One uniform [0, 1) draw per pair u < v, in row-major pair order."""
    rng = np.random.Generator(np.random.Philox(key=_check_seed(seed)))
    return rng.random(n_vertices * (n_vertices - 1) // 2)


def _from_upper(n: int, red_upper: np.ndarray) -> ColoredCompleteGraph:
    red = np.zeros((n, n), dtype=bool)
    red[np.triu_indices(n, 1)] = red_upper
    red |= red.T
    return ColoredCompleteGraph(red, _trusted=True)


def random_coloring(n_vertices: int, blue_probability: float, seed: int) -> ColoredCompleteGraph:
    n = _check_size(n_vertices)
    p = _check_probability(blue_probability, "blue_probability")
    u = edge_uniforms(n, seed)
    return _from_upper(n, u >= p)


def block_labels(n_vertices: int, n_blocks: int) -> np.ndarray:
    """Block index of each vertex for equal consecutive vertex ranges."""
    return np.arange(n_vertices) // (n_vertices // n_blocks)


def three_block(n_vertices: int, p: float, seed: int) -> ColoredCompleteGraph:
    """Blocks [0, N/3), [N/3, 2N/3), [2N/3, N) are red cliques; every cross
    edge is red with probability ``p``."""
    n = _check_size(n_vertices)
    if n % 3:
        raise ConstructionError(f"three_block needs N divisible by 3, got {n}")
    p = _check_probability(p, "p")
    u = edge_uniforms(n, seed)
    blk = block_labels(n, 3)
    iu, ju = np.triu_indices(n, 1)
    intra = blk[iu] == blk[ju]
    return _from_upper(n, intra | (u < p))


def paley(q: int) -> ColoredCompleteGraph:
    q = int(q)
    if q % 4 != 1:
        raise ConstructionError(f"Paley colouring needs q = 1 (mod 4), got {q}")
    try:
        F = build_field(q)
    except ValueError as exc:
        raise ConstructionError(str(exc)) from None
    square = F.is_square
    x = F.elements
    red = np.empty((q, q), dtype=bool)
    chunk = 256
    for start in range(0, q, chunk):
        rows = x[start:start + chunk]
        red[start:start + chunk] = square[F.sub(rows[:, None], x[None, :])]
    return ColoredCompleteGraph(red, _trusted=True)


def block_coloring(k: int, n: int) -> ColoredCompleteGraph:
    """``k`` blue cliques of size ``n + k - 1`` joined completely in red."""
    k, n = int(k), int(n)
    if k < 2 or n < 1:
        raise ConstructionError("block colouring needs k >= 2 and n >= 1")
    size = n + k - 1
    N = k * size
    if N > MAX_VERTICES:
        raise ConstructionError(f"block colouring on {N} vertices exceeds {MAX_VERTICES}")
    blk = np.arange(N) // size
    red = blk[:, None] != blk[None, :]
    return ColoredCompleteGraph(red, _trusted=True)


@dataclass(frozen=True)
class BlockProfile:
    """Mean book sizes of a three-block colouring, by edge type."""

    intra_red: float
    cross_blue: float
    cross_red: float


def three_block_profile(g: ColoredCompleteGraph) -> BlockProfile:
    """Average red codegree of intra-block pairs, blue codegree of blue cross
    edges, and red codegree of red cross edges."""
    if g.n % 3:
        raise ConstructionError("profile needs N divisible by 3")
    blk = block_labels(g.n, 3)
    iu, ju = np.triu_indices(g.n, 1)
    intra = blk[iu] == blk[ju]
    red_up = g.red_matrix()[iu, ju]
    co_r = codegree_matrix(g, Color.RED)[iu, ju]
    co_b = codegree_matrix(g, Color.BLUE)[iu, ju]

    def mean(values, mask):
        return float(values[mask].mean()) if mask.any() else float("nan")

    return BlockProfile(
        intra_red=mean(co_r, intra),
        cross_blue=mean(co_b, ~intra & ~red_up),
        cross_red=mean(co_r, ~intra & red_up),
    )
