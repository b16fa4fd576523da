import io
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bookramsey import bounds as B

CROSS = B.crossing_closed_form()


def mp_crossing():
    with mpmath.workdps(40):
        f = lambda a: 3 / (1 + 2 * ((1 - mpmath.sqrt(a * (3 - 2 * a))) / (1 - 2 * a)) ** 2) \
            - (mpmath.sqrt(a) + 1) ** 2
        return mpmath.findroot(f, (mpmath.mpf("0.17"), mpmath.mpf("0.25")), solver="anderson")


def test_closed_form_crossing_matches_high_precision_root():
    with mpmath.workdps(40):
        closed = (52 - 16 * mpmath.sqrt(3)) / 121
        assert abs(mp_crossing() - closed) < mpmath.mpf(10) ** -30
    assert abs(B.crossing_alpha() - CROSS) < 1e-9
    assert 0.2007 < CROSS < 0.2008


def test_named_values():
    assert B.mid_upper(Fraction(1, 6)) == pytest.approx(2.0, abs=1e-12)
    assert B.mid_upper(0.25) == pytest.approx(2.25, abs=1e-12)
    assert B.random_bound(0.25) == pytest.approx(2.25, abs=1e-12)
    assert B.random_bound(1.0) == pytest.approx(4.0)
    assert B.random_bound(1.0, k=3) == pytest.approx(8.0)
    assert B.p_star(Fraction(1, 6)) == pytest.approx(0.5, abs=1e-12)
    assert B.three_block_bound(1 / 6) == pytest.approx(2.0, abs=1e-12)


def test_p_star_identity_dense():
    for a in np.linspace(1 / 6, CROSS, 500):
        p = B.p_star(a)
        assert 0 < p <= 0.5 + 1e-12
        assert abs(a * (1 + 2 * p * p) - (1 - p) ** 2) < 1e-12


def test_domain_errors():
    with pytest.raises(B.BoundsError):
        B.mid_upper(0.3)
    with pytest.raises(B.BoundsError):
        B.p_star(0.21)
    with pytest.raises(B.BoundsError):
        B.random_bound(0.0)
    with pytest.raises(B.BoundsError):
        B.random_bound(0.5, k=1)
    with pytest.raises(B.BoundsError):
        B.chernoff_exponent(0.5)
    with pytest.raises(B.BoundsError):
        B.claim_discriminants(0.0)
    # float nearest to 1/6 is accepted
    assert B.mid_upper(1 / 6 - 1e-15) == pytest.approx(2.0)


@given(st.floats(1e-3, 1.0))
def test_claim_discriminants_vanish(a):
    for d in B.claim_discriminants(a):
        assert abs(d) < 1e-9 * max(1.0, 1.0 / a)


def test_claim_discriminants_tight_on_random_alpha():
    rng = np.random.default_rng(5)
    for a in rng.uniform(0.01, 1.0, 100):
        assert max(abs(d) for d in B.claim_discriminants(a)) < 1e-12 * (1 + 1 / a)


def test_chernoff():
    assert B.chernoff_exponent(1.0) == 0.0
    assert B.chernoff_exponent(math.e) == pytest.approx(1 / math.e)
    c = np.linspace(1.0, 5.0, 50)
    vals = [B.chernoff_exponent(x) for x in c]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_construction_expectations():
    e = B.construction_expectations(600, 0.5)
    assert e.expected_red_intra == pytest.approx(298.0)
    assert e.expected_blue_cross == pytest.approx(50.0)
    assert e.expected_red_cross == pytest.approx(200 * 0.25 + 398 * 0.5)
    e2 = B.construction_expectations(570, 0.5, book_n=300)
    assert e2.eta == pytest.approx(0.1)
    assert e2.page_factor == pytest.approx(1 - 1.5 * 0.1 / 3)
    with pytest.raises(B.BoundsError):
        B.construction_expectations(100, 0.5)
    with pytest.raises(B.BoundsError):
        B.construction_expectations(99, 1.5)


def test_expectations_match_simulation():
    from bookramsey.constructions import three_block, three_block_profile
    prof = three_block_profile(three_block(300, 0.3, 1))
    e = B.construction_expectations(300, 0.3)
    assert prof.intra_red == pytest.approx(e.expected_red_intra, rel=0.01)
    assert prof.cross_blue == pytest.approx(e.expected_blue_cross, rel=0.03)
    assert prof.cross_red == pytest.approx(e.expected_red_cross, rel=0.03)


@pytest.mark.parametrize("alpha,lower,upper,regime", [
    (0.10, 2.0, 2.0, "goodness"),
    (Fraction(1, 6), 2.0, 2.0, "three_block"),
    (0.25, 2.25, 2.25, "random_mid"),
    (1.0, 4.0, 4.0, "random_tight"),
])
def test_best_known(alpha, lower, upper, regime):
    pt = B.best_known(alpha)
    assert pt.best_lower == pytest.approx(lower, abs=1e-12)
    assert pt.best_upper == pytest.approx(upper, abs=1e-12)
    assert pt.regime == regime


def test_best_known_consistent():
    for a in np.linspace(0.01, 1.0, 400):
        pt = B.best_known(a)
        assert pt.best_lower <= pt.best_upper + 1e-12
        assert pt.best_lower >= pt.random_lb - 1e-12


def test_lower_curve_continuous_at_crossing():
    a = B.crossing_alpha()
    left, right = B.best_known(a - 1e-9), B.best_known(a + 1e-9)
    assert left.regime == "three_block" and right.regime == "random_mid"
    assert abs(left.best_lower - right.best_lower) < 1e-7


def test_bounds_table_and_csv():
    pts = B.bounds_table(0.05, 1.0, 100)
    assert len(pts) == 100
    alphas = [p.alpha for p in pts]
    assert alphas == sorted(alphas) and alphas[0] == 0.05 and alphas[-1] == 1.0
    text = B.write_csv(pts)
    lines = text.splitlines()
    assert lines[0] == ",".join(B.CSV_COLUMNS)
    assert len(lines) == 101
    buf = io.StringIO()
    B.write_csv(pts[:2], buf)
    assert buf.getvalue().count("\n") == 3
    with pytest.raises(B.BoundsError):
        B.bounds_table(0.5, 0.2, 10)
    with pytest.raises(B.BoundsError):
        B.bounds_table(0.1, 0.2, 1)


def test_table_lands_on_exact_fraction_endpoints():
    pts = B.bounds_table(Fraction(1, 6), Fraction(1, 4), 3)
    assert pts[0].regime == "three_block" and pts[0].best_lower == pytest.approx(2.0)


def test_bisect():
    assert B.bisect(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-11)
    assert B.bisect(lambda x: x, 0.0, 1.0) == 0.0
    with pytest.raises(B.BoundsError):
        B.bisect(lambda x: x * x + 1, -1, 1)


def test_three_block_beats_random_before_crossing():
    cross = B.crossing_alpha()
    for a in np.linspace(1 / 6, cross, 400, endpoint=False):
        assert B.three_block_bound(a) > B.random_bound(a)


def test_continuity_at_regime_boundaries():
    assert abs(B.three_block_bound(Fraction(1, 6)) - B.mid_upper(Fraction(1, 6))) < 1e-9
    assert abs(B.mid_upper(0.25) - B.random_bound(0.25)) < 1e-9
    a = B.crossing_alpha()
    assert abs(B.three_block_bound(a) - B.random_bound(a)) < 1e-9
