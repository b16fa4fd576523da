import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import bookramsey._pykernels as py
from bookramsey import _backend
from bookramsey.search import Schedule, anneal, exhaustive
from conftest import random_graph

cy = _backend.compiled
needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def test_default_backend_prefers_extension():
    assert _backend.BACKEND == ("cython" if cy is not None else "python")
    assert "python" in _backend.available()


@pytest.mark.parametrize("forced,expected", [("python", "python")])
def test_env_forces_fallback(forced, expected):
    env = dict(os.environ, BOOKRAMSEY_BACKEND=forced)
    out = subprocess.run([sys.executable, "-c", "import bookramsey; print(bookramsey.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


@needs_ext
def test_book_scan_identical(rng):
    for n in list(range(0, 12)) + [63, 64, 65, 130]:
        if n == 0:
            continue
        for p in (0.0, 0.3, 0.5, 1.0):
            g = random_graph(rng, n, p)
            for color in ("red", "blue"):
                rows = g.rows(color)
                assert py.book_scan(rows, n) == cy.book_scan(rows, n)


@needs_ext
def test_annealer_identical_step_by_step(rng):
    n = 14
    g = random_graph(rng, n)
    red = g.red_matrix().astype(np.uint8)
    a = py.Annealer(red, 3, 4, 1 / 3, 1 / 4, 0.01)
    b = cy.Annealer(red, 3, 4, 1 / 3, 1 / 4, 0.01)
    pu, pv = np.triu_indices(n, 1)
    for t in (1.0, 0.5, 0.1, 0.01):
        idx = rng.integers(0, pu.size, 500)
        uni = rng.random(500)
        assert a.run(pu, pv, idx, uni, t) == b.run(pu, pv, idx, uni, t)
        assert (a.cost, a.energy, a.best_cost, a.accepted) == (b.cost, b.energy, b.best_cost,
                                                               b.accepted)
        assert np.array_equal(a.red_matrix(), b.red_matrix())
        assert np.array_equal(a.best_red, b.best_red)
        for x, y in zip(a.codegree_tables(), b.codegree_tables()):
            assert np.array_equal(x, y)


@needs_ext
def test_anneal_outcomes_identical():
    sched = Schedule(steps_per_temperature=300)
    for seed in range(3):
        x = anneal(11, 2, 3, schedule=sched, seed=seed, kernels=py)
        y = anneal(11, 2, 3, schedule=sched, seed=seed, kernels=cy)
        assert x.witness == y.witness and x.trace == y.trace and x.steps == y.steps


@needs_ext
@pytest.mark.parametrize("n", range(1, 9))
def test_exhaustive_identical(n):
    for m, nb in ((1, 1), (1, 2), (2, 2), (2, 3)):
        if n == 8 and (m, nb) == (2, 3):
            continue
        a, b = py.exhaustive_search(n, m, nb), cy.exhaustive_search(n, m, nb)
        assert a[0] == b[0] and a[2] == b[2]
        assert (a[1] is None and b[1] is None) or np.array_equal(a[1], b[1])
        assert exhaustive(n, m, nb, kernels=py) == exhaustive(n, m, nb, kernels=cy)


@needs_ext
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1 / 12), st.floats(0, 1 / 12))
def test_gap_box_identical(a, b, c, d):
    l0, l1 = sorted((a, b))
    e0, e1 = sorted((c, d))
    assert py.gap_box(l0, l1, e0, e1) == cy.gap_box(l0, l1, e0, e1)
