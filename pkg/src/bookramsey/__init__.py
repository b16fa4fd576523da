"""Book Ramsey numbers: constructions, bound curves and certificates."""

from ._backend import BACKEND
from .bounds import (
    BoundPoint,
    best_known,
    bounds_table,
    chernoff_exponent,
    claim_discriminants,
    construction_expectations,
    crossing_alpha,
    mid_upper,
    p_star,
    random_bound,
    three_block_bound,
)
from .constructions import (
    ConstructionError,
    ConstructionSpec,
    block_coloring,
    paley,
    random_coloring,
    three_block,
)
from .field import build_field
from .graph import (
    BookMeasurement,
    Color,
    ColoredCompleteGraph,
    DensityReport,
    GraphError,
    book_size,
    book_size_k,
    codegree,
    pair_density,
    turan_independence_floor,
)
from .interval import IntervalCertificate, certify_no_solution, gap_value
from .search import (
    ExhaustiveVerdict,
    LowerBoundCertificate,
    MonteCarloReport,
    Schedule,
    SearchOutcome,
    Violation,
    anneal,
    exhaustive,
    mc_certify,
    verify_target,
)

__version__ = "0.1.0"
