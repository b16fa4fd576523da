import numpy as np
import pytest

import bookramsey._pykernels as py
from bookramsey.constructions import ConstructionSpec, paley, three_block
from bookramsey.graph import Color, ColoredCompleteGraph, book_size
from bookramsey.search import (
    CertificateError,
    LowerBoundCertificate,
    Schedule,
    SearchError,
    Violation,
    anneal,
    exhaustive,
    mc_certify,
    trial_seed,
    verify_target,
)
from conftest import by_backend, random_graph
from oracles import brute_force_exists

C5 = ColoredCompleteGraph.from_red_relation(5, [(i, (i + 1) % 5) for i in range(5)])


def test_verify_pentagon():
    cert = verify_target(C5, 1, 1)
    assert isinstance(cert, LowerBoundCertificate)
    assert cert.statement == "r(B_1,B_1) >= 6"
    assert cert.measured_red_pages == cert.measured_blue_pages == 0
    assert cert.spec == "explicit"


def test_verify_paley29():
    cert = verify_target(paley(29), 7, 7, spec=ConstructionSpec.paley(29))
    assert cert.statement == "r(B_7,B_7) >= 30"
    assert (cert.red.pages, cert.blue.pages) == (6, 6)


def test_verify_all_red_violation():
    g = ColoredCompleteGraph(~np.eye(10, dtype=bool))
    v = verify_target(g, 3, 5)
    assert isinstance(v, Violation)
    assert v.book.color is Color.RED and v.book.pages == 8 and v.target == 3
    assert "8 pages >= 3" in v.describe()


def test_verify_rejects_nonpositive_targets():
    with pytest.raises(SearchError):
        verify_target(C5, 0, 1)


def test_certificate_text_round_trip():
    cert = verify_target(paley(13), 3, 3, spec=ConstructionSpec.paley(13))
    text = cert.to_text(timestamp="2026-01-01T00:00:00+00:00")
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    keys = [ln.split(":")[0] for ln in lines]
    assert keys[:7] == ["format-version", "spec", "n-vertices", "witness-hex",
                        "red-pages", "blue-pages", "statement"]
    again = LowerBoundCertificate.from_text(text)
    assert again == cert
    assert again.recheck() == cert


def test_certificate_records_no_base_marker():
    g = ColoredCompleteGraph(np.zeros((4, 4), dtype=bool))
    cert = verify_target(g, 1, 3)
    text = cert.to_text()
    assert "red-pages: 0 no-base" in text and "red-base: none" in text
    again = LowerBoundCertificate.from_text(text)
    assert not again.red.has_base and again.recheck() == cert


def test_certificate_tamper_detection():
    cert = verify_target(paley(13), 3, 3, spec=ConstructionSpec.paley(13))
    text = cert.to_text()
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text.replace("red-pages: 2", "red-pages: 1")).recheck()
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text.replace(">= 14", ">= 15"))
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text.replace("format-version: 1", "format-version: 9"))
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text.replace("statement", "stmt"))
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text + "garbage\n")
    # same witness bits claimed for a different construction
    forged = text.replace("kind=paley;q=13", "kind=blocks;k=2;n=6")
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(forged).recheck()
    # flip one witness bit: the explicit rebuild no longer matches
    head, _, tail = cert.witness.partition(":")
    bad = f"{head}:{'f' if tail[0] != 'f' else '0'}{tail[1:]}"
    with pytest.raises(CertificateError):
        LowerBoundCertificate.from_text(text.replace(cert.witness, bad)).recheck()


def test_certificate_refuses_unmet_targets():
    cert = verify_target(C5, 1, 1)
    with pytest.raises(CertificateError):
        LowerBoundCertificate(cert.spec, 5, cert.witness, cert.red, cert.blue, 0, 1)


def test_random_graph_certificates_round_trip(rng):
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(2, 40)))
        r, b = book_size(g, Color.RED).pages, book_size(g, Color.BLUE).pages
        cert = verify_target(g, r + 1, b + 1)
        again = LowerBoundCertificate.from_text(cert.to_text())
        assert again.recheck() == cert


# -------------------------------------------------------------------- monte carlo


def test_mc_deterministic_and_worker_independent():
    spec = ConstructionSpec.random(60, 0.5, 0)
    a = mc_certify(spec, 20, 20, 6, base_seed=42)
    b = mc_certify(spec, 20, 20, 6, base_seed=42, workers=3)
    assert a.pages == b.pages and a.seeds == b.seeds and a.best == b.best
    c = mc_certify(spec, 20, 20, 6, base_seed=43)
    assert c.seeds != a.seeds
    assert a.seeds[0] == trial_seed(42, 0)


def test_mc_report_invariants():
    spec = ConstructionSpec.random(40, 0.5, 0)
    rep = mc_certify(spec, 12, 12, 8, base_seed=1)
    assert 0 <= rep.successes <= rep.trials
    assert rep.rate == rep.successes / rep.trials
    if rep.best is not None:
        assert rep.best.recheck() == rep.best
        score = rep.best.red.pages / 12 + rep.best.blue.pages / 12
        ok = [r / 12 + b / 12 for r, b in rep.pages if r < 12 and b < 12]
        assert score == min(ok)


def test_mc_trivial_all_red_fails():
    rep = mc_certify(ConstructionSpec.three_block(30, 1.0, 0), 2, 2, 1, base_seed=0)
    assert rep.successes == 0 and rep.rate == 0.0 and rep.best is None


def test_mc_three_block_profile_tracks_expectation():
    rep = mc_certify(ConstructionSpec.three_block(150, 0.5, 0), 200, 200, 3, base_seed=5)
    assert rep.successes == 3
    assert rep.mean_intra_red == pytest.approx(150 / 3 - 2 + 100 * 0.25, rel=0.02)


def test_mc_argument_errors():
    with pytest.raises(SearchError):
        mc_certify(ConstructionSpec.paley(13), 3, 3, 5)
    with pytest.raises(SearchError):
        mc_certify(ConstructionSpec.random(20, 0.5, 0), 3, 3, 0)


# ---------------------------------------------------------------------- annealing


@by_backend
def test_anneal_pentagon(kernels):
    out = anneal(5, 1, 1, seed=1, kernels=kernels)
    assert out.found and out.best_cost == 0.0
    assert isinstance(out.certificate(), LowerBoundCertificate)
    assert out.witness.n_edges(Color.RED) == 5


@by_backend
def test_anneal_nine_vertices(kernels):
    out = anneal(9, 2, 2, seed=7, kernels=kernels)
    assert out.found
    cert = out.certificate()
    assert cert.statement == "r(B_2,B_2) >= 10"


@by_backend
def test_anneal_six_vertices_never_reaches_zero(kernels):
    sched = Schedule(steps_per_temperature=200)
    for seed in range(3):
        out = anneal(6, 1, 1, schedule=sched, seed=seed, kernels=kernels)
        assert out.best_cost > 0
        assert all(b <= a for a, b in zip(out.trace, out.trace[1:]))


def test_anneal_cost_matches_measured_witness():
    out = anneal(12, 2, 3, schedule=Schedule(steps_per_temperature=100), seed=3)
    er = max(0, out.red_pages - 1)
    eb = max(0, out.blue_pages - 2)
    assert out.best_cost == pytest.approx(er / 2 + eb / 3)
    assert (out.best_cost == 0) == isinstance(out.certificate(), LowerBoundCertificate)


def test_anneal_deterministic():
    a = anneal(10, 2, 2, schedule=Schedule(steps_per_temperature=300), seed=11)
    b = anneal(10, 2, 2, schedule=Schedule(steps_per_temperature=300), seed=11)
    assert a.witness == b.witness and a.trace == b.trace


@pytest.mark.parametrize("kwargs", [
    {"cooling_factor": 1.0}, {"cooling_factor": 0.0}, {"initial_temperature": 0.0},
    {"floor_temperature": 2.0}, {"steps_per_temperature": 0},
])
def test_schedule_errors(kwargs):
    with pytest.raises(SearchError):
        Schedule(**kwargs)


def test_anneal_argument_errors():
    with pytest.raises(SearchError):
        anneal(3, 1, 1)
    with pytest.raises(SearchError):
        anneal(6, 1, 1, weight_red=0.0)


@by_backend
def test_incremental_codegrees_after_many_flips(kernels):
    rng = np.random.default_rng(9)
    n = 16
    g = random_graph(rng, n)
    ann = kernels.Annealer(g.red_matrix().astype(np.uint8), 3, 3, 1.0, 1.0, 0.01)
    pairs = np.array(np.triu_indices(n, 1)).T
    for step, k in enumerate(rng.integers(0, len(pairs), 10_000)):
        ann.flip(int(pairs[k][0]), int(pairs[k][1]))
        if step % 2500 == 2499:
            red = ann.red_matrix().astype(np.int64)
            blue = 1 - red
            np.fill_diagonal(blue, 0)
            cr, cb = ann.codegree_tables()
            assert np.array_equal(cr, red @ red) and np.array_equal(cb, blue @ blue)
            h = ColoredCompleteGraph(red.astype(bool))
            assert ann.pages() == (book_size(h, Color.RED).pages, book_size(h, Color.BLUE).pages)


# --------------------------------------------------------------------- exhaustive


@pytest.mark.parametrize("n,m,nb,found", [
    (5, 1, 1, True), (6, 1, 1, False), (4, 1, 2, True), (8, 2, 2, True),
])
def test_exhaustive_examples(n, m, nb, found):
    v = exhaustive(n, m, nb)
    assert v.found == found
    assert v.colorings_examined > 0
    if found:
        assert isinstance(verify_target(v.witness, m, nb), LowerBoundCertificate)
    else:
        assert v.verdict == "all_colorings_contain_target" and v.witness is None


def test_exhaustive_pentagon_witness_is_c5():
    w = exhaustive(5, 1, 1).witness
    red = w.red_matrix()
    assert (red.sum(axis=1) == 2).all()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_exhaustive_agrees_with_brute_force(n):
    for m in (1, 2, 3):
        for nb in (1, 2, 3):
            want = brute_force_exists(n, m, nb)
            assert exhaustive(n, m, nb).found == want
            assert exhaustive(n, m, nb, symmetry=False).found == want
            assert py.exhaustive_search(n, m, nb)[0] == want


def test_exhaustive_limits():
    with pytest.raises(SearchError):
        exhaustive(9, 1, 1)
    with pytest.raises(SearchError):
        exhaustive(5, 0, 1)
    assert exhaustive(1, 1, 1).found


def test_three_block_search_targets_from_expectation():
    g = three_block(60, 0.0, 0)
    assert isinstance(verify_target(g, 19, 21), LowerBoundCertificate)
