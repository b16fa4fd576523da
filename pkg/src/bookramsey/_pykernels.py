"""Pure-Python (numpy-assisted) implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with identical
semantics, including tie-breaking and random-number consumption, so the two
backends produce bit-identical results for the same inputs.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_INF = math.inf


def unpack_rows(rows: np.ndarray, n: int) -> np.ndarray:
    """Packed little-endian uint64 bit rows -> dense (n, n) uint8 matrix."""
    as_bytes = np.ascontiguousarray(rows).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :n]


def book_scan(rows: np.ndarray, n: int) -> tuple[int, int, int]:
    """Largest codegree over the edges encoded in ``rows``.

    Returns ``(pages, u, v)`` for the first maximising edge ``u < v`` in
    row-major order, or ``(-1, -1, -1)`` when there are no edges.
    """
    if n < 2:
        return -1, -1, -1
    adj = unpack_rows(rows, n)
    a = adj.astype(np.float32)
    co = a @ a  # exact: entries <= n < 2**24
    score = np.where(np.triu(adj, 1).astype(bool), co, -1.0)
    flat = int(np.argmax(score))
    best = int(score.flat[flat])
    if best < 0:
        return -1, -1, -1
    return best, flat // n, flat % n


# --------------------------------------------------------------------------
# simulated annealing state


class Annealer:
    """Single-edge-flip Metropolis chain with incremental codegree tables.

    ``co_red[a][b]`` / ``co_blue[a][b]`` hold the number of common red / blue
    neighbours of every pair.  A histogram of codegrees over the edges of each
    colour gives the current book size in O(1) amortised time.
    """

    def __init__(self, red, m, nb, w_red, w_blue, excess_weight):
        red = np.asarray(red, dtype=np.uint8)
        n = red.shape[0]
        self.n = n
        self.m = int(m)
        self.nb = int(nb)
        self.w_red = float(w_red)
        self.w_blue = float(w_blue)
        self.excess_weight = float(excess_weight)

        blue = (1 - red).astype(np.uint8)
        np.fill_diagonal(blue, 0)
        self._R = red.astype(np.int64).tolist()
        self._CR = (red.astype(np.int64) @ red.astype(np.int64)).tolist()
        self._CB = (blue.astype(np.int64) @ blue.astype(np.int64)).tolist()
        self._hr = [0] * (n + 1)
        self._hb = [0] * (n + 1)
        self._max_r = -1
        self._max_b = -1
        self._exc_r = 0
        self._exc_b = 0
        for u in range(n):
            for v in range(u + 1, n):
                if self._R[u][v]:
                    self._add_r(self._CR[u][v])
                else:
                    self._add_b(self._CB[u][v])
        self.accepted = 0
        self.steps = 0
        self.cost = self._cost()
        self.energy = self._energy()
        self.best_cost = self.cost
        self.best_red = red.copy()

    # histogram maintenance ------------------------------------------------

    def _add_r(self, c):
        self._hr[c] += 1
        if c > self._max_r:
            self._max_r = c
        if c >= self.m:
            self._exc_r += c - self.m + 1

    def _del_r(self, c):
        self._hr[c] -= 1
        if c >= self.m:
            self._exc_r -= c - self.m + 1
        if c == self._max_r:
            while self._max_r >= 0 and self._hr[self._max_r] == 0:
                self._max_r -= 1

    def _add_b(self, c):
        self._hb[c] += 1
        if c > self._max_b:
            self._max_b = c
        if c >= self.nb:
            self._exc_b += c - self.nb + 1

    def _del_b(self, c):
        self._hb[c] -= 1
        if c >= self.nb:
            self._exc_b -= c - self.nb + 1
        if c == self._max_b:
            while self._max_b >= 0 and self._hb[self._max_b] == 0:
                self._max_b -= 1

    def _cost(self):
        pr = self._max_r if self._max_r > 0 else 0
        pb = self._max_b if self._max_b > 0 else 0
        er = pr - self.m + 1 if pr >= self.m else 0
        eb = pb - self.nb + 1 if pb >= self.nb else 0
        return self.w_red * er + self.w_blue * eb

    def _energy(self):
        return self._cost() + self.excess_weight * (
            self.w_red * self._exc_r + self.w_blue * self._exc_b
        )

    # moves -----------------------------------------------------------------

    def flip(self, u, v):
        R, CR, CB = self._R, self._CR, self._CB
        if R[u][v]:
            self._del_r(CR[u][v])
            self._add_b(CB[u][v])
            d = -1
        else:
            self._del_b(CB[u][v])
            self._add_r(CR[u][v])
            d = 1
        R[u][v] = R[v][u] = 1 if d > 0 else 0
        Ru, Rv = R[u], R[v]
        # diagonal holds degrees
        CR[u][u] += d
        CR[v][v] += d
        CB[u][u] -= d
        CB[v][v] -= d
        for w in range(self.n):
            if w == u or w == v:
                continue
            # pair (u, w), shared neighbour v
            if Rv[w]:
                old = CR[u][w]
                CR[u][w] = CR[w][u] = old + d
                if Ru[w]:
                    self._del_r(old)
                    self._add_r(old + d)
            else:
                old = CB[u][w]
                CB[u][w] = CB[w][u] = old - d
                if not Ru[w]:
                    self._del_b(old)
                    self._add_b(old - d)
            # pair (v, w), shared neighbour u
            if Ru[w]:
                old = CR[v][w]
                CR[v][w] = CR[w][v] = old + d
                if Rv[w]:
                    self._del_r(old)
                    self._add_r(old + d)
            else:
                old = CB[v][w]
                CB[v][w] = CB[w][v] = old - d
                if not Rv[w]:
                    self._del_b(old)
                    self._add_b(old - d)
        self.cost = self._cost()
        self.energy = self._energy()

    def run(self, pu, pv, idx, uniforms, temperature):
        """Run ``len(idx)`` proposals at a fixed temperature.

        Stops early once a zero-cost colouring is reached.  Returns the
        number of proposals consumed.
        """
        pu = np.asarray(pu).tolist()
        pv = np.asarray(pv).tolist()
        idx = np.asarray(idx).tolist()
        uniforms = np.asarray(uniforms, dtype=np.float64).tolist()
        t = float(temperature)
        done = 0
        for s in range(len(idx)):
            k = idx[s]
            u, v = pu[k], pv[k]
            e_old = self.energy
            self.flip(u, v)
            de = self.energy - e_old
            done += 1
            if de <= 0.0 or uniforms[s] < math.exp(-de / t):
                self.accepted += 1
                if self.cost < self.best_cost:
                    self.best_cost = self.cost
                    self.best_red = self.red_matrix()
            else:
                self.flip(u, v)
            if self.best_cost == 0.0:
                break
        self.steps += done
        return done

    # inspection ------------------------------------------------------------

    def red_matrix(self):
        return np.array(self._R, dtype=np.uint8)

    def codegree_tables(self):
        return np.array(self._CR, dtype=np.int64), np.array(self._CB, dtype=np.int64)

    def pages(self):
        return max(self._max_r, 0), max(self._max_b, 0)


# --------------------------------------------------------------------------
# exhaustive search


def exhaustive_search(n, m, nb, symmetry=True):
    """Depth-first search for a colouring of K_n with red pages < m and
    blue pages < nb.

    Edges are coloured column by column, (0,j), (1,j), ..., (j-1,j), so each
    assignment completes the triangles {w, i, j} with w < i.  Monochromatic
    triangles bump per-pair codegree counters; the branch is cut as soon as a
    counter reaches its target.  With ``symmetry`` the red neighbourhood of
    vertex 0 is fixed to a prefix {1..d}.

    Returns ``(found, red_matrix_or_None, nodes_visited)``.
    """
    edges = [(i, j) for j in range(1, n) for i in range(j)]
    n_edges = len(edges)
    col = [[-1] * n for _ in range(n)]
    co = [[[0] * n for _ in range(n)], [[0] * n for _ in range(n)]]
    limit = (m, nb)
    nodes = 0
    forced = [-1] * n_edges

    def place(e, c):
        """Colour edge e with c; return the bumped pairs and whether a
        target was hit."""
        i, j = edges[e]
        col[i][j] = col[j][i] = c
        bumped = []
        hit = False
        cc = co[c]
        lim = limit[c]
        ci, cj = col[i], col[j]
        for w in range(i):
            if ci[w] == c and cj[w] == c:
                for a, b in ((w, i), (w, j), (i, j)):
                    cc[a][b] += 1
                    bumped.append((a, b))
                    if cc[a][b] >= lim:
                        hit = True
        return bumped, hit

    def unplace(e, c, bumped):
        i, j = edges[e]
        col[i][j] = col[j][i] = -1
        cc = co[c]
        for a, b in bumped:
            cc[a][b] -= 1

    def dfs(e):
        nonlocal nodes
        nodes += 1
        if e == n_edges:
            return True
        colours = (forced[e],) if forced[e] >= 0 else (0, 1)
        for c in colours:
            bumped, hit = place(e, c)
            if not hit and dfs(e + 1):
                return True
            unplace(e, c, bumped)
        return False

    prefixes = range(n) if (symmetry and n >= 2) else [None]
    for d in prefixes:
        for e, (i, j) in enumerate(edges):
            forced[e] = (0 if j <= d else 1) if (d is not None and i == 0) else -1
        if dfs(0):
            red = np.zeros((n, n), dtype=np.uint8)
            for i, j in edges:
                if col[i][j] == 0:
                    red[i, j] = red[j, i] = 1
            return True, red, nodes
    return False, None, nodes


# --------------------------------------------------------------------------
# interval enclosure of the three-root gap function


def _dn(x):
    return math.nextafter(x, -_INF)


def _up(x):
    return math.nextafter(x, _INF)


_TWELFTH_LO = _dn(1.0 / 12.0)
_TWELFTH_HI = _up(1.0 / 12.0)


def _sqrt_dn(x):
    if x <= 0.0:
        return 0.0
    return max(0.0, _dn(math.sqrt(x)))


def _sqrt_up(x):
    if x <= 0.0:
        return 0.0
    return _up(math.sqrt(x))


def _concave_quad_range(x0, x1, a_lo, a_hi, half):
    """Range of x*(a - h*x) over x in [x0, x1] >= 0, a in [a_lo, a_hi].

    ``half`` selects h = 1/2 (True) or h = 1 (False).  The function is
    increasing in ``a`` for x >= 0 and concave in x, so the minimum sits at an
    endpoint with ``a_lo`` and the maximum at the vertex a/(2h) or the
    nearest endpoint with ``a_hi``.
    """
    if half:
        lo0 = _dn(x0 * _dn(a_lo - 0.5 * x0))
        lo1 = _dn(x1 * _dn(a_lo - 0.5 * x1))
        vertex = a_hi
        if x0 <= vertex <= x1:
            hi = _up(_up(a_hi * a_hi) * 0.5)
        else:
            xe = x0 if vertex < x0 else x1
            hi = _up(xe * _up(a_hi - 0.5 * xe))
    else:
        lo0 = _dn(x0 * _dn(a_lo - x0))
        lo1 = _dn(x1 * _dn(a_lo - x1))
        vertex = 0.5 * a_hi
        if x0 <= vertex <= x1:
            hi = _up(_up(a_hi * a_hi) * 0.25)
        else:
            xe = x0 if vertex < x0 else x1
            hi = _up(xe * _up(a_hi - xe))
    return min(lo0, lo1), hi


def gap_box(l0, l1, e0, e1):
    """Outward-rounded enclosure of the gap function on a box.

    The box is ``lam in [l0, l1]`` (a subset of [0, 1]) and
    ``alpha - 1/6 in [e0, e1]`` (a subset of [0, 1/12]), with c = 3/2 and
    d = 3.  Writing beta = 3e / (2(2 + 3e)) one has alpha/(c+d alpha) =
    1/12 + beta/2 and 1/(c+d alpha) = 1/2 - beta, so the gap is

        sqrt(lam (1-lam)) - sqrt(lam (A - lam)) - sqrt((1-lam)(B - (1-lam)/2)).

    Returns ``(status, g_lo, g_hi)`` where status is 0 if the box holds no
    feasible point (some radicand negative throughout), 1 if every point is
    feasible, 2 if the box straddles the feasible boundary.  ``g_lo`` and
    ``g_hi`` bound the gap over the feasible part of the box.
    """
    s_hi0 = _up(2.0 + _up(3.0 * e0))
    s_lo1 = _dn(2.0 + _dn(3.0 * e1))
    beta_lo = max(0.0, _dn(_dn(1.5 * e0) / s_hi0))
    beta_hi = _up(_up(1.5 * e1) / s_lo1)
    a_lo = _dn(_TWELFTH_LO + 0.5 * beta_lo)
    a_hi = _up(_TWELFTH_HI + 0.5 * beta_hi)
    b_lo = _dn(0.5 - beta_hi)
    b_hi = _up(0.5 - beta_lo)

    # feasibility over the whole box
    m0 = _dn(1.0 - l1)
    m1 = min(1.0, _up(1.0 - l0))
    r1_lo, r1_hi = _concave_quad_range(l0, l1, a_lo, a_hi, False)
    r2_lo, r2_hi = _concave_quad_range(m0, m1, b_lo, b_hi, True)
    if r1_hi < 0.0 or r2_hi < 0.0:
        return 0, _INF, -_INF
    status = 1 if (r1_lo >= 0.0 and r2_lo >= 0.0) else 2

    # feasible lam lies in [2*beta, A]; shrink the box to that band
    L0 = max(l0, 2.0 * beta_lo)
    L1 = min(l1, a_hi)
    if L0 > L1:
        return 0, _INF, -_INF
    if status == 2:
        m0 = _dn(1.0 - L1)
        m1 = min(1.0, _up(1.0 - L0))
        r1_lo, r1_hi = _concave_quad_range(L0, L1, a_lo, a_hi, False)
        r2_lo, r2_hi = _concave_quad_range(m0, m1, b_lo, b_hi, True)
        if r1_hi < 0.0 or r2_hi < 0.0:
            return 0, _INF, -_INF

    # lam (1 - lam) is increasing on [0, 1/2] and L1 <= A < 1/2
    r0_lo = _dn(L0 * _dn(1.0 - L0))
    r0_hi = _up(L1 * _up(1.0 - L1))
    t0_lo, t0_hi = _sqrt_dn(r0_lo), _sqrt_up(r0_hi)
    t1_lo, t1_hi = _sqrt_dn(r1_lo), _sqrt_up(r1_hi)
    t2_lo, t2_hi = _sqrt_dn(r2_lo), _sqrt_up(r2_hi)
    g_lo = _dn(_dn(t0_lo - t1_hi) - t2_hi)
    g_hi = _up(_up(t0_hi - t1_lo) - t2_lo)

    # factored form g = sqrt(lam) * h with
    # h = sqrt(1-lam) - sqrt(A - lam) - sqrt((1/2 - beta/lam)(1 - lam))
    if L1 > 0.0:
        ratio_lo = _dn(beta_lo / L1)
        q_hi = _up(_up(0.5 - ratio_lo) * _up(1.0 - L0))
        h_lo = _dn(
            _dn(_sqrt_dn(_dn(1.0 - L1)) - _sqrt_up(max(0.0, _up(a_hi - L0))))
            - _sqrt_up(q_hi)
        )
        if h_lo >= 0.0:
            f_lo = _dn(_sqrt_dn(L0) * h_lo)
        else:
            f_lo = _dn(_sqrt_up(L1) * h_lo)
        if f_lo > g_lo:
            g_lo = f_lo
    return status, g_lo, g_hi
