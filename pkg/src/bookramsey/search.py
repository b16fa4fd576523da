"""Lower-bound certification: target checks, Monte Carlo runs, annealing
and exhaustive search over colourings of K_N.

A colouring of K_N with red book number < m and blue book number < n shows
r(B_m, B_n) >= N + 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .constructions import ConstructionError, ConstructionSpec, three_block_profile
from .graph import BookMeasurement, Color, ColoredCompleteGraph, GraphError, book_size

FORMAT_VERSION = 1
EXPLICIT = "explicit"
MAX_EXHAUSTIVE = 8


class SearchError(ValueError):
    pass


class CertificateError(ValueError):
    pass


def _positive(x, name) -> int:
    x = int(x)
    if x < 1:
        raise SearchError(f"{name} must be a positive integer, got {x}")
    return x


# --------------------------------------------------------------------------
# certificates


def _pages_field(b: BookMeasurement) -> str:
    return f"{b.pages}" if b.has_base else f"{b.pages} no-base"


def _base_field(b: BookMeasurement) -> str:
    return " ".join(map(str, b.base)) if b.has_base else "none"


@dataclass(frozen=True)
class LowerBoundCertificate:
    """A witness colouring together with its measured book sizes."""

    spec: ConstructionSpec | str
    n_vertices: int
    witness: str
    red: BookMeasurement
    blue: BookMeasurement
    target_m: int
    target_n: int

    def __post_init__(self):
        if not (self.red.pages < self.target_m and self.blue.pages < self.target_n):
            raise CertificateError("measured pages do not meet the targets")

    @property
    def measured_red_pages(self) -> int:
        return self.red.pages

    @property
    def measured_blue_pages(self) -> int:
        return self.blue.pages

    @property
    def statement(self) -> str:
        return f"r(B_{self.target_m},B_{self.target_n}) >= {self.n_vertices + 1}"

    def graph(self) -> ColoredCompleteGraph:
        return ColoredCompleteGraph.from_hex(self.witness)

    def to_text(self, timestamp: str | None = None) -> str:
        spec = self.spec if isinstance(self.spec, str) else self.spec.to_record()
        lines = [f"# generated: {timestamp}"] if timestamp else []
        lines += [
            f"format-version: {FORMAT_VERSION}",
            f"spec: {spec}",
            f"n-vertices: {self.n_vertices}",
            f"witness-hex: {self.witness}",
            f"red-pages: {_pages_field(self.red)}",
            f"blue-pages: {_pages_field(self.blue)}",
            f"statement: {self.statement}",
            f"red-base: {_base_field(self.red)}",
            f"blue-base: {_base_field(self.blue)}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LowerBoundCertificate":
        fields_ = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise CertificateError(f"malformed certificate line {raw!r}")
            fields_[key.strip()] = value.strip()
        try:
            if int(fields_["format-version"]) != FORMAT_VERSION:
                raise CertificateError(f"unsupported format-version {fields_['format-version']}")
            spec_text = fields_["spec"]
            spec = spec_text if spec_text == EXPLICIT else ConstructionSpec.from_record(spec_text)
            n = int(fields_["n-vertices"])
            witness = fields_["witness-hex"]
            statement = fields_["statement"]
            red = _parse_book(Color.RED, fields_["red-pages"], fields_.get("red-base"))
            blue = _parse_book(Color.BLUE, fields_["blue-pages"], fields_.get("blue-base"))
        except KeyError as exc:
            raise CertificateError(f"certificate missing field {exc.args[0]!r}") from None
        except (ValueError, ConstructionError) as exc:
            if isinstance(exc, CertificateError):
                raise
            raise CertificateError(f"bad certificate field: {exc}") from None
        m, nb, bound = _parse_statement(statement)
        if bound != n + 1:
            raise CertificateError("statement does not match n-vertices")
        if not witness.startswith(f"{n}:"):
            raise CertificateError("witness size does not match n-vertices")
        return cls(spec, n, witness, red, blue, m, nb)

    def recheck(self) -> "LowerBoundCertificate | Violation":
        """Re-measure the witness, rebuilding the recorded construction too.

        Raises ``CertificateError`` if anything differs from the record."""
        try:
            g = self.graph()
        except GraphError as exc:
            raise CertificateError(str(exc)) from None
        if g.n != self.n_vertices:
            raise CertificateError("witness size does not match n-vertices")
        if isinstance(self.spec, ConstructionSpec) and self.spec.build() != g:
            raise CertificateError("witness differs from the recorded construction")
        result = verify_target(g, self.target_m, self.target_n, spec=self.spec)
        if isinstance(result, LowerBoundCertificate):
            if (result.red.pages, result.blue.pages) != (self.red.pages, self.blue.pages):
                raise CertificateError("re-measured pages differ from the record")
        return result


def _parse_book(color: Color, pages_text: str, base_text: str | None) -> BookMeasurement:
    parts = pages_text.split()
    pages = int(parts[0])
    no_base = len(parts) > 1 and parts[1] == "no-base"
    if no_base or base_text in (None, "none"):
        base = ()
    else:
        base = tuple(int(x) for x in base_text.split())
    return BookMeasurement(color, base, pages, 2)


def _parse_statement(text: str) -> tuple[int, int, int]:
    try:
        lhs, rhs = text.split(">=")
        inner = lhs.strip().removeprefix("r(").removesuffix(")")
        a, b = inner.split(",")
        return int(a.strip().removeprefix("B_")), int(b.strip().removeprefix("B_")), int(rhs)
    except ValueError:
        raise CertificateError(f"malformed statement {text!r}") from None


@dataclass(frozen=True)
class Violation:
    """A book that breaks a target: ``book.pages >= target``."""

    book: BookMeasurement
    target: int

    def describe(self) -> str:
        base = "-".join(map(str, self.book.base))
        return (f"{self.book.color.value} book on base {base} has {self.book.pages} pages"
                f" >= {self.target}")


def verify_target(g: ColoredCompleteGraph, m: int, n: int, spec=None):
    """Certificate when bk_R < m and bk_B < n, otherwise the offending book
    (red checked first)."""
    m, n = _positive(m, "m"), _positive(n, "n")
    red = book_size(g, Color.RED)
    if red.pages >= m:
        return Violation(red, m)
    blue = book_size(g, Color.BLUE)
    if blue.pages >= n:
        return Violation(blue, n)
    return LowerBoundCertificate(spec if spec is not None else EXPLICIT, g.n, g.to_hex(),
                                 red, blue, m, n)


# --------------------------------------------------------------------------
# Monte Carlo


def trial_seed(base_seed: int, trial: int) -> int:
    """64-bit seed of trial ``trial``, independent of worker scheduling."""
    ss = np.random.SeedSequence([int(base_seed), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class MonteCarloReport:
    spec: ConstructionSpec
    m: int
    n: int
    trials: int
    base_seed: int
    pages: list[tuple[int, int]]
    seeds: list[int]
    best: LowerBoundCertificate | None = None
    intra_red_means: list[float] | None = None

    @property
    def successes(self) -> int:
        return sum(r < self.m and b < self.n for r, b in self.pages)

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def mean_intra_red(self) -> float | None:
        if not self.intra_red_means:
            return None
        return float(np.mean(self.intra_red_means))


def _run_trial(spec: ConstructionSpec, m: int, n: int, profile: bool):
    g = spec.build()
    red, blue = book_size(g, Color.RED), book_size(g, Color.BLUE)
    intra = three_block_profile(g).intra_red if profile else None
    cert = None
    if red.pages < m and blue.pages < n:
        cert = LowerBoundCertificate(spec, g.n, g.to_hex(), red, blue, m, n)
    return (red.pages, blue.pages), intra, cert


def mc_certify(spec: ConstructionSpec, m: int, n: int, trials: int, base_seed: int = 0,
               workers: int = 1, profile: bool | None = None) -> MonteCarloReport:
    """Build ``trials`` independent samples of a randomized construction and
    record which ones certify ``r(B_m, B_n) >= N + 1``.

    The report depends only on (spec, m, n, trials, base_seed).  The best
    certificate minimises red/m + blue/n over successful trials, earliest
    trial first on ties.
    """
    if not spec.randomized:
        raise SearchError(f"{spec.kind} is deterministic; use verify_target")
    m, n = _positive(m, "m"), _positive(n, "n")
    trials = _positive(trials, "trials")
    workers = _positive(workers, "workers")
    if profile is None:
        profile = spec.kind == "three_block"
    seeds = [trial_seed(base_seed, t) for t in range(trials)]
    specs = [spec.with_seed(s) for s in seeds]
    job = lambda s: _run_trial(s, m, n, profile)  # noqa: E731
    if workers == 1:
        results = list(map(job, specs))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, specs))
    best, best_score = None, math.inf
    for (r, b), _, cert in results:
        if cert is not None and r / m + b / n < best_score:
            best, best_score = cert, r / m + b / n
    return MonteCarloReport(
        spec=spec, m=m, n=n, trials=trials, base_seed=int(base_seed),
        pages=[p for p, _, _ in results], seeds=seeds, best=best,
        intra_red_means=[i for _, i, _ in results] if profile else None,
    )


# --------------------------------------------------------------------------
# simulated annealing


@dataclass(frozen=True)
class Schedule:
    initial_temperature: float = 1.0
    cooling_factor: float = 0.95
    steps_per_temperature: int = 2000
    floor_temperature: float = 1e-3

    def __post_init__(self):
        if not 0.0 < self.cooling_factor < 1.0:
            raise SearchError("cooling_factor must lie strictly between 0 and 1")
        if not self.initial_temperature > 0 or not self.floor_temperature > 0:
            raise SearchError("temperatures must be positive")
        if self.floor_temperature > self.initial_temperature:
            raise SearchError("floor_temperature exceeds initial_temperature")
        if self.steps_per_temperature < 1:
            raise SearchError("steps_per_temperature must be positive")

    def temperatures(self):
        t = self.initial_temperature
        while t >= self.floor_temperature:
            yield t
            t *= self.cooling_factor


@dataclass
class SearchOutcome:
    witness: ColoredCompleteGraph
    best_cost: float
    trace: list[float]
    schedule: Schedule
    seed: int
    m: int
    n: int
    weight_red: float
    weight_blue: float
    steps: int
    accepted: int
    backend: str
    red_pages: int = field(init=False)
    blue_pages: int = field(init=False)

    def __post_init__(self):
        self.red_pages = book_size(self.witness, Color.RED).pages
        self.blue_pages = book_size(self.witness, Color.BLUE).pages

    @property
    def found(self) -> bool:
        return self.best_cost == 0.0

    def certificate(self) -> LowerBoundCertificate | Violation:
        return verify_target(self.witness, self.m, self.n)


def anneal(n_vertices: int, m: int, n: int, weight_red: float | None = None,
           weight_blue: float | None = None, schedule: Schedule | None = None,
           seed: int = 0, excess_weight: float | None = None, kernels=None) -> SearchOutcome:
    """Metropolis search over single-edge flips for a colouring with red
    pages < m and blue pages < n.

    The cost is w_red * excess red pages + w_blue * excess blue pages.  The
    chain moves on cost plus ``excess_weight`` times the total excess summed
    over every edge, which separates colourings of equal cost.
    """
    n_vertices = int(n_vertices)
    if n_vertices < 4:
        raise SearchError("annealing needs at least 4 vertices")
    m, n = _positive(m, "m"), _positive(n, "n")
    w_red = 1.0 / m if weight_red is None else float(weight_red)
    w_blue = 1.0 / n if weight_blue is None else float(weight_blue)
    if not (w_red > 0 and w_blue > 0):
        raise SearchError("weights must be positive")
    schedule = schedule if schedule is not None else Schedule()
    k = kernels if kernels is not None else _backend.kernels
    pu, pv = np.triu_indices(n_vertices, 1)
    n_pairs = pu.size
    if excess_weight is None:
        excess_weight = 1.0 / n_pairs

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    red = np.zeros((n_vertices, n_vertices), dtype=np.uint8)
    red[pu, pv] = rng.random(n_pairs) < 0.5
    red |= red.T
    chain = k.Annealer(red, m, n, w_red, w_blue, float(excess_weight))
    pu, pv = pu.astype(np.int64), pv.astype(np.int64)
    trace = []
    for t in schedule.temperatures():
        steps = schedule.steps_per_temperature
        idx = rng.integers(0, n_pairs, size=steps)
        uniforms = rng.random(steps)
        chain.run(pu, pv, idx, uniforms, t)
        trace.append(float(chain.best_cost))
        if chain.best_cost == 0.0:
            break
    witness = ColoredCompleteGraph(np.asarray(chain.best_red).astype(bool))
    return SearchOutcome(witness, float(chain.best_cost), trace, schedule, int(seed), m, n,
                         w_red, w_blue, int(chain.steps), int(chain.accepted), k.BACKEND)


# --------------------------------------------------------------------------
# exhaustive search


@dataclass(frozen=True)
class ExhaustiveVerdict:
    n_vertices: int
    m: int
    n: int
    verdict: str
    witness: ColoredCompleteGraph | None
    colorings_examined: int

    @property
    def found(self) -> bool:
        return self.verdict == "witness_found"


def exhaustive(n_vertices: int, m: int, n: int, symmetry: bool = True,
               kernels=None) -> ExhaustiveVerdict:
    """Decide whether some colouring of K_N has red pages < m and blue pages < n.

    ``colorings_examined`` counts search-tree nodes, i.e. partial colourings.
    """
    n_vertices = int(n_vertices)
    if not 1 <= n_vertices <= MAX_EXHAUSTIVE:
        raise SearchError(f"exhaustive search supports 1..{MAX_EXHAUSTIVE} vertices")
    m, n = _positive(m, "m"), _positive(n, "n")
    k = kernels if kernels is not None else _backend.kernels
    found, red, nodes = k.exhaustive_search(n_vertices, m, n, bool(symmetry))
    if found:
        g = ColoredCompleteGraph(np.asarray(red).astype(bool))
        return ExhaustiveVerdict(n_vertices, m, n, "witness_found", g, int(nodes))
    return ExhaustiveVerdict(n_vertices, m, n, "all_colorings_contain_target", None, int(nodes))
