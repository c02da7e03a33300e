# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled family scan; see _scan_py for the contract.

Mirrors the pure-Python reference operation for operation.  The build keeps
FP contraction off so both backends produce bit-identical doubles.
"""

import math

import numpy as np

from libc.math cimport INFINITY, pow


cdef class _State:
    cdef double[:, ::1] table
    cdef long long[::1] starts
    cdef double[::1] exps
    cdef double[:, ::1] sums
    cdef long long[::1] eta
    cdef long long[::1] best_eta
    cdef Py_ssize_t n, ncols, nblocks
    cdef int mode, status
    cdef bint has_best
    cdef double constant, best
    cdef long long families, degenerate


cdef bint _lex_smaller(long long[::1] a, long long[::1] b, Py_ssize_t n) noexcept:
    cdef Py_ssize_t i
    for i in range(n):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


cdef bint _evaluate(_State st, Py_ssize_t depth) noexcept:
    cdef Py_ssize_t k, c, lo, hi, i
    cdef double top, lhs, rhs, ratio, scaled, denom, slack
    st.families += 1
    lo = st.starts[0]
    hi = st.starts[1]
    top = st.sums[depth, lo]
    for c in range(lo + 1, hi):
        if st.sums[depth, c] > top:
            top = st.sums[depth, c]
    lhs = pow(top, st.exps[0])
    rhs = 1.0
    for k in range(1, st.nblocks):
        lo = st.starts[k]
        hi = st.starts[k + 1]
        top = st.sums[depth, lo]
        for c in range(lo + 1, hi):
            if st.sums[depth, c] > top:
                top = st.sums[depth, c]
        rhs *= pow(top, st.exps[k])
    if st.mode == 0:
        if rhs == 0.0:
            if lhs == 0.0:
                st.degenerate += 1
                return False
            st.status = 1
            st.best = INFINITY
            for i in range(st.n):
                st.best_eta[i] = st.eta[i]
            st.has_best = True
            return True
        ratio = lhs / rhs
        if (not st.has_best) or ratio > st.best:
            st.best = ratio
            st.has_best = True
            for i in range(st.n):
                st.best_eta[i] = st.eta[i]
        elif ratio == st.best and _lex_smaller(st.eta, st.best_eta, st.n):
            for i in range(st.n):
                st.best_eta[i] = st.eta[i]
    else:
        scaled = st.constant * rhs
        denom = scaled if scaled > 1.0 else 1.0
        slack = (scaled - lhs) / denom
        if (not st.has_best) or slack < st.best:
            st.best = slack
            st.has_best = True
            for i in range(st.n):
                st.best_eta[i] = st.eta[i]
        elif slack == st.best and _lex_smaller(st.eta, st.best_eta, st.n):
            for i in range(st.n):
                st.best_eta[i] = st.eta[i]
    return False


cdef bint _rec(_State st, Py_ssize_t start, long long rem, Py_ssize_t depth) noexcept:
    cdef Py_ssize_t k, c
    cdef long long v
    cdef double dv
    for k in range(start, st.n):
        for v in range(rem, 0, -1):
            st.eta[k] = v
            dv = <double> v
            for c in range(st.ncols):
                st.sums[depth + 1, c] = st.sums[depth, c] + dv * st.table[k, c]
            if _evaluate(st, depth + 1):
                return True
            if rem - v >= 1 and k + 1 < st.n:
                if _rec(st, k + 1, rem - v, depth + 1):
                    return True
        st.eta[k] = 0
    return False


def scan(table, starts, exps, budget, mode, constant):
    cdef _State st = _State()
    table_arr = np.ascontiguousarray(table, dtype=np.float64)
    st.table = table_arr
    st.starts = np.ascontiguousarray(starts, dtype=np.int64)
    st.exps = np.ascontiguousarray(exps, dtype=np.float64)
    st.n = table_arr.shape[0]
    st.ncols = table_arr.shape[1]
    st.nblocks = st.exps.shape[0]
    st.mode = int(mode)
    st.constant = float(constant)
    cdef long long bud = int(budget)
    sums_arr = np.zeros((bud + 1, st.ncols))
    st.sums = sums_arr
    eta_arr = np.zeros(st.n, dtype=np.int64)
    st.eta = eta_arr
    best_eta_arr = np.zeros(st.n, dtype=np.int64)
    st.best_eta = best_eta_arr
    st.has_best = False
    st.best = -INFINITY if st.mode == 0 else INFINITY
    st.families = 0
    st.degenerate = 0
    st.status = 0

    _rec(st, 0, bud, 0)

    if st.has_best:
        value = st.best
        out_eta = best_eta_arr.copy()
    else:
        value = -math.inf if st.mode == 0 else math.inf
        out_eta = None
    return st.status, value, out_eta, st.families, st.degenerate
