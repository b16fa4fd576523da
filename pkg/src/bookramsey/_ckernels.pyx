# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``.

Semantics, tie-breaking and random-number consumption match the Python
versions exactly; ``tests/test_backends.py`` checks this.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, nextafter, INFINITY
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

BACKEND = "cython"


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def book_scan(const uint64_t[:, ::1] rows, Py_ssize_t n):
    cdef Py_ssize_t W = rows.shape[1]
    cdef Py_ssize_t u, v, k
    cdef long best = -1, bu = -1, bv = -1, c
    with nogil:
        for u in range(n):
            for v in range(u + 1, n):
                if not (rows[u, v >> 6] >> (v & 63)) & 1:
                    continue
                c = 0
                for k in range(W):
                    c += __builtin_popcountll(rows[u, k] & rows[v, k])
                if c > best:
                    best = c
                    bu = u
                    bv = v
    return int(best), int(bu), int(bv)


cdef class Annealer:
    cdef public Py_ssize_t n
    cdef public long m, nb
    cdef public double w_red, w_blue, excess_weight
    cdef public double cost, energy, best_cost
    cdef public long accepted, steps
    cdef public object best_red
    cdef object _R_arr, _CR_arr, _CB_arr, _hr_arr, _hb_arr
    cdef unsigned char[:, ::1] R
    cdef int64_t[:, ::1] CR
    cdef int64_t[:, ::1] CB
    cdef int64_t[::1] hr
    cdef int64_t[::1] hb
    cdef long max_r, max_b
    cdef int64_t exc_r, exc_b

    def __init__(self, red, m, nb, w_red, w_blue, excess_weight):
        red = np.ascontiguousarray(red, dtype=np.uint8)
        cdef Py_ssize_t n = red.shape[0]
        cdef Py_ssize_t u, v
        self.n = n
        self.m = m
        self.nb = nb
        self.w_red = w_red
        self.w_blue = w_blue
        self.excess_weight = excess_weight
        blue = (1 - red).astype(np.uint8)
        np.fill_diagonal(blue, 0)
        self._R_arr = red.copy()
        self._CR_arr = np.ascontiguousarray(red.astype(np.int64) @ red.astype(np.int64))
        self._CB_arr = np.ascontiguousarray(blue.astype(np.int64) @ blue.astype(np.int64))
        self._hr_arr = np.zeros(n + 1, dtype=np.int64)
        self._hb_arr = np.zeros(n + 1, dtype=np.int64)
        self.R = self._R_arr
        self.CR = self._CR_arr
        self.CB = self._CB_arr
        self.hr = self._hr_arr
        self.hb = self._hb_arr
        self.max_r = -1
        self.max_b = -1
        self.exc_r = 0
        self.exc_b = 0
        for u in range(n):
            for v in range(u + 1, n):
                if self.R[u, v]:
                    self._add_r(self.CR[u, v])
                else:
                    self._add_b(self.CB[u, v])
        self.accepted = 0
        self.steps = 0
        self.cost = self._cost()
        self.energy = self._energy()
        self.best_cost = self.cost
        self.best_red = red.copy()

    cdef inline void _add_r(self, long c) noexcept nogil:
        self.hr[c] += 1
        if c > self.max_r:
            self.max_r = c
        if c >= self.m:
            self.exc_r += c - self.m + 1

    cdef inline void _del_r(self, long c) noexcept nogil:
        self.hr[c] -= 1
        if c >= self.m:
            self.exc_r -= c - self.m + 1
        if c == self.max_r:
            while self.max_r >= 0 and self.hr[self.max_r] == 0:
                self.max_r -= 1

    cdef inline void _add_b(self, long c) noexcept nogil:
        self.hb[c] += 1
        if c > self.max_b:
            self.max_b = c
        if c >= self.nb:
            self.exc_b += c - self.nb + 1

    cdef inline void _del_b(self, long c) noexcept nogil:
        self.hb[c] -= 1
        if c >= self.nb:
            self.exc_b -= c - self.nb + 1
        if c == self.max_b:
            while self.max_b >= 0 and self.hb[self.max_b] == 0:
                self.max_b -= 1

    cdef inline double _cost(self) noexcept nogil:
        cdef long pr = self.max_r if self.max_r > 0 else 0
        cdef long pb = self.max_b if self.max_b > 0 else 0
        cdef long er = pr - self.m + 1 if pr >= self.m else 0
        cdef long eb = pb - self.nb + 1 if pb >= self.nb else 0
        return self.w_red * er + self.w_blue * eb

    cdef inline double _energy(self) noexcept nogil:
        return self._cost() + self.excess_weight * (
            self.w_red * self.exc_r + self.w_blue * self.exc_b
        )

    cdef void _flip(self, Py_ssize_t u, Py_ssize_t v) noexcept nogil:
        cdef long d, old
        cdef Py_ssize_t w
        if self.R[u, v]:
            self._del_r(self.CR[u, v])
            self._add_b(self.CB[u, v])
            d = -1
        else:
            self._del_b(self.CB[u, v])
            self._add_r(self.CR[u, v])
            d = 1
        self.R[u, v] = 1 if d > 0 else 0
        self.R[v, u] = self.R[u, v]
        # diagonal holds degrees
        self.CR[u, u] += d
        self.CR[v, v] += d
        self.CB[u, u] -= d
        self.CB[v, v] -= d
        for w in range(self.n):
            if w == u or w == v:
                continue
            if self.R[v, w]:
                old = self.CR[u, w]
                self.CR[u, w] = old + d
                self.CR[w, u] = old + d
                if self.R[u, w]:
                    self._del_r(old)
                    self._add_r(old + d)
            else:
                old = self.CB[u, w]
                self.CB[u, w] = old - d
                self.CB[w, u] = old - d
                if not self.R[u, w]:
                    self._del_b(old)
                    self._add_b(old - d)
            if self.R[u, w]:
                old = self.CR[v, w]
                self.CR[v, w] = old + d
                self.CR[w, v] = old + d
                if self.R[v, w]:
                    self._del_r(old)
                    self._add_r(old + d)
            else:
                old = self.CB[v, w]
                self.CB[v, w] = old - d
                self.CB[w, v] = old - d
                if not self.R[v, w]:
                    self._del_b(old)
                    self._add_b(old - d)
        self.cost = self._cost()
        self.energy = self._energy()

    def flip(self, Py_ssize_t u, Py_ssize_t v):
        self._flip(u, v)

    def run(self, pu, pv, idx, uniforms, double temperature):
        cdef int64_t[::1] pu_v = np.ascontiguousarray(pu, dtype=np.int64)
        cdef int64_t[::1] pv_v = np.ascontiguousarray(pv, dtype=np.int64)
        cdef int64_t[::1] idx_v = np.ascontiguousarray(idx, dtype=np.int64)
        cdef double[::1] uni = np.ascontiguousarray(uniforms, dtype=np.float64)
        cdef Py_ssize_t s, steps = idx_v.shape[0], done = 0
        cdef Py_ssize_t u, v
        cdef int64_t k
        cdef double e_old, de
        cdef bint improved
        for s in range(steps):
            k = idx_v[s]
            u = pu_v[k]
            v = pv_v[k]
            e_old = self.energy
            self._flip(u, v)
            de = self.energy - e_old
            done += 1
            if de <= 0.0 or uni[s] < exp(-de / temperature):
                self.accepted += 1
                if self.cost < self.best_cost:
                    self.best_cost = self.cost
                    self.best_red = self.red_matrix()
            else:
                self._flip(u, v)
            if self.best_cost == 0.0:
                break
        self.steps += done
        return done

    def red_matrix(self):
        return np.array(self._R_arr, dtype=np.uint8, copy=True)

    def codegree_tables(self):
        return self._CR_arr.copy(), self._CB_arr.copy()

    def pages(self):
        return max(self.max_r, 0), max(self.max_b, 0)


# --------------------------------------------------------------------------
# exhaustive search


cdef struct ExState:
    int n
    int n_edges
    int lim[2]
    long nodes


cdef bint _dfs(int e, ExState* st, int* ei, int* ej, int* forced,
               int* col, int* co, int* stack, int* sp) noexcept nogil:
    # col[i*n+j]; co[c*n*n + a*n + b]; stack holds bumped pair offsets
    cdef int n = st.n
    cdef int i, j, w, c, ci, base, hit, a, b, off, k, start, t
    cdef int nn = n * n
    cdef int pairs[3]
    st.nodes += 1
    if e == st.n_edges:
        return True
    i = ei[e]
    j = ej[e]
    for ci in range(2):
        if forced[e] >= 0:
            if ci == 1:
                break
            c = forced[e]
        else:
            c = ci
        col[i * n + j] = c
        col[j * n + i] = c
        start = sp[0]
        hit = 0
        base = c * nn
        for w in range(i):
            if col[i * n + w] == c and col[j * n + w] == c:
                pairs[0] = w * n + i
                pairs[1] = w * n + j
                pairs[2] = i * n + j
                for t in range(3):
                    off = base + pairs[t]
                    co[off] += 1
                    stack[sp[0]] = off
                    sp[0] += 1
                    if co[off] >= st.lim[c]:
                        hit = 1
        if not hit and _dfs(e + 1, st, ei, ej, forced, col, co, stack, sp):
            return True
        for k in range(start, sp[0]):
            co[stack[k]] -= 1
        sp[0] = start
        col[i * n + j] = -1
        col[j * n + i] = -1
    return False


def exhaustive_search(int n, int m, int nb, bint symmetry=True):
    edges = [(i, j) for j in range(1, n) for i in range(j)]
    cdef int n_edges = len(edges)
    cdef int[::1] ei = np.array([pr[0] for pr in edges] or [0], dtype=np.intc)
    cdef int[::1] ej = np.array([pr[1] for pr in edges] or [0], dtype=np.intc)
    cdef int[::1] forced = np.full(max(n_edges, 1), -1, dtype=np.intc)
    cdef int[::1] col = np.full(max(n * n, 1), -1, dtype=np.intc)
    cdef int[::1] co = np.zeros(max(2 * n * n, 1), dtype=np.intc)
    cdef int[::1] stack = np.zeros(max(3 * n * n * n, 1), dtype=np.intc)
    cdef int sp = 0
    cdef ExState st
    cdef int e, d, i, j
    cdef bint found
    st.n = n
    st.n_edges = n_edges
    st.lim[0] = m
    st.lim[1] = nb
    st.nodes = 0
    prefixes = list(range(n)) if (symmetry and n >= 2) else [None]
    for dd in prefixes:
        for e in range(n_edges):
            i = ei[e]
            j = ej[e]
            if dd is not None and i == 0:
                d = dd
                forced[e] = 0 if j <= d else 1
            else:
                forced[e] = -1
        sp = 0
        with nogil:
            found = _dfs(0, &st, &ei[0], &ej[0], &forced[0], &col[0], &co[0],
                         &stack[0], &sp)
        if found:
            red = np.zeros((n, n), dtype=np.uint8)
            for e in range(n_edges):
                i = ei[e]
                j = ej[e]
                if col[i * n + j] == 0:
                    red[i, j] = 1
                    red[j, i] = 1
            return True, red, int(st.nodes)
    return False, None, int(st.nodes)


# --------------------------------------------------------------------------
# interval enclosure of the three-root gap function


cdef inline double _dn(double x) noexcept nogil:
    return nextafter(x, -INFINITY)


cdef inline double _up(double x) noexcept nogil:
    return nextafter(x, INFINITY)


cdef inline double _sqrt_dn(double x) noexcept nogil:
    if x <= 0.0:
        return 0.0
    cdef double r = _dn(sqrt(x))
    return r if r > 0.0 else 0.0


cdef inline double _sqrt_up(double x) noexcept nogil:
    if x <= 0.0:
        return 0.0
    return _up(sqrt(x))


cdef void _quad_range(double x0, double x1, double a_lo, double a_hi, bint half,
                      double* lo, double* hi) noexcept nogil:
    cdef double lo0, lo1, vertex, xe
    if half:
        lo0 = _dn(x0 * _dn(a_lo - 0.5 * x0))
        lo1 = _dn(x1 * _dn(a_lo - 0.5 * x1))
        vertex = a_hi
        if x0 <= vertex and vertex <= x1:
            hi[0] = _up(_up(a_hi * a_hi) * 0.5)
        else:
            xe = x0 if vertex < x0 else x1
            hi[0] = _up(xe * _up(a_hi - 0.5 * xe))
    else:
        lo0 = _dn(x0 * _dn(a_lo - x0))
        lo1 = _dn(x1 * _dn(a_lo - x1))
        vertex = 0.5 * a_hi
        if x0 <= vertex and vertex <= x1:
            hi[0] = _up(_up(a_hi * a_hi) * 0.25)
        else:
            xe = x0 if vertex < x0 else x1
            hi[0] = _up(xe * _up(a_hi - xe))
    lo[0] = lo0 if lo0 < lo1 else lo1


def gap_box(double l0, double l1, double e0, double e1):
    cdef double twelfth_lo = _dn(1.0 / 12.0)
    cdef double twelfth_hi = _up(1.0 / 12.0)
    cdef double s_hi0 = _up(2.0 + _up(3.0 * e0))
    cdef double s_lo1 = _dn(2.0 + _dn(3.0 * e1))
    cdef double beta_lo = _dn(_dn(1.5 * e0) / s_hi0)
    cdef double beta_hi = _up(_up(1.5 * e1) / s_lo1)
    cdef double a_lo, a_hi, b_lo, b_hi, m0, m1
    cdef double r1_lo, r1_hi, r2_lo, r2_hi, r0_lo, r0_hi
    cdef double L0, L1, g_lo, g_hi, ratio_lo, q_hi, h_lo, f_lo
    cdef int status
    if beta_lo < 0.0:
        beta_lo = 0.0
    a_lo = _dn(twelfth_lo + 0.5 * beta_lo)
    a_hi = _up(twelfth_hi + 0.5 * beta_hi)
    b_lo = _dn(0.5 - beta_hi)
    b_hi = _up(0.5 - beta_lo)

    m0 = _dn(1.0 - l1)
    m1 = _up(1.0 - l0)
    if m1 > 1.0:
        m1 = 1.0
    _quad_range(l0, l1, a_lo, a_hi, False, &r1_lo, &r1_hi)
    _quad_range(m0, m1, b_lo, b_hi, True, &r2_lo, &r2_hi)
    if r1_hi < 0.0 or r2_hi < 0.0:
        return 0, INFINITY, -INFINITY
    status = 1 if (r1_lo >= 0.0 and r2_lo >= 0.0) else 2

    L0 = l0 if l0 > 2.0 * beta_lo else 2.0 * beta_lo
    L1 = l1 if l1 < a_hi else a_hi
    if L0 > L1:
        return 0, INFINITY, -INFINITY
    if status == 2:
        m0 = _dn(1.0 - L1)
        m1 = _up(1.0 - L0)
        if m1 > 1.0:
            m1 = 1.0
        _quad_range(L0, L1, a_lo, a_hi, False, &r1_lo, &r1_hi)
        _quad_range(m0, m1, b_lo, b_hi, True, &r2_lo, &r2_hi)
        if r1_hi < 0.0 or r2_hi < 0.0:
            return 0, INFINITY, -INFINITY

    r0_lo = _dn(L0 * _dn(1.0 - L0))
    r0_hi = _up(L1 * _up(1.0 - L1))
    g_lo = _dn(_dn(_sqrt_dn(r0_lo) - _sqrt_up(r1_hi)) - _sqrt_up(r2_hi))
    g_hi = _up(_up(_sqrt_up(r0_hi) - _sqrt_dn(r1_lo)) - _sqrt_dn(r2_lo))

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
