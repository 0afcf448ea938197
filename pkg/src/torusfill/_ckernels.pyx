# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled ray-dynamics kernels; see ``_pykernels`` for the contract."""

from libc.math cimport atan2, sin, cos, hypot, ceil, M_PI
from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

import numpy as np

cdef double TWO_PI = 2.0 * M_PI


cdef inline double _disp1(double a, double b, double c, double d,
                          double offset, double t) noexcept nogil:
    cdef double x = sin(t)
    cdef double y = cos(t)
    cdef double xp = a * x + b * y
    cdef double yp = c * x + d * y
    return offset + atan2(xp * y - yp * x, x * xp + y * yp)


def displacement(double a, double b, double c, double d, double offset, thetas):
    cdef double[::1] t = np.ascontiguousarray(thetas, dtype=np.float64).ravel()
    out = np.empty(t.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(t.shape[0]):
            o[i] = _disp1(a, b, c, d, offset, t[i])
    return out


cdef struct Cell:
    double al
    double be
    double fa
    double fb


cdef struct Ctx:
    double a, b, c, d, offset, sign, slack
    double p, R, psi


cdef inline double _f(Ctx* k, double t) noexcept nogil:
    return k.sign * _disp1(k.a, k.b, k.c, k.d, k.offset, t)


cdef inline double _bound(Ctx* k, double al, double be, double fa, double fb) noexcept nogil:
    cdef double u1 = 2.0 * al - k.psi
    cdef double u2 = 2.0 * be - k.psi
    cdef double c1 = cos(u1), c2 = cos(u2)
    cdef double clo = c1 if c1 < c2 else c2
    cdef double chi = c1 if c1 > c2 else c2
    if ceil(u1 / TWO_PI) * TWO_PI <= u2:
        chi = 1.0
    if ceil((u1 - M_PI) / TWO_PI) * TWO_PI + M_PI <= u2:
        clo = -1.0
    cdef double gmin = k.p + k.R * clo
    cdef double gmax = k.p + k.R * chi
    cdef double dlo = 1.0 / gmax - 1.0
    cdef double dhi = 1.0 / gmin - 1.0
    cdef double m, M
    if k.sign > 0:
        m = dlo
        M = dhi
    else:
        m = -dhi
        M = -dlo
    cdef double w = be - al
    cdef double x, ub
    if M <= 0.0:
        ub = fa
    elif m >= 0.0:
        ub = fb
    else:
        x = (fb - fa - m * w) / (M - m)
        if x < 0.0:
            x = 0.0
        elif x > w:
            x = w
        ub = fa + M * x
    return ub + k.slack


def enclose_max(double a, double b, double c, double d, double offset,
                double sign, double tol, double slack, long max_iter, int n_init=64):
    cdef Ctx k
    k.a = a; k.b = b; k.c = c; k.d = d
    k.offset = offset; k.sign = sign; k.slack = slack
    cdef double P = a * a + c * c
    cdef double Q = b * b + d * d
    cdef double q = 0.5 * (Q - P)
    cdef double s = a * b + c * d
    k.p = 0.5 * (P + Q)
    k.R = hypot(q, s)
    k.psi = atan2(s, q)

    cdef vector[Cell] cells
    cdef priority_queue[pair[double, Py_ssize_t]] heap
    cdef Cell cell, left, right
    cdef double h = M_PI / n_init
    cdef double best, arg, t, v, prev_t, prev_f, ub, mid, fm
    cdef Py_ssize_t i, idx
    cdef long it = 0
    cdef bint ok = False

    with nogil:
        prev_t = 0.0
        prev_f = _f(&k, 0.0)
        best = prev_f
        arg = 0.0
        for i in range(1, n_init + 1):
            t = i * h
            v = _f(&k, t)
            if v > best:
                best = v
                arg = t
            cell.al = prev_t; cell.be = t; cell.fa = prev_f; cell.fb = v
            cells.push_back(cell)
            heap.push(pair[double, Py_ssize_t](
                _bound(&k, cell.al, cell.be, cell.fa, cell.fb), cells.size() - 1))
            prev_t = t
            prev_f = v
        while True:
            ub = heap.top().first
            idx = heap.top().second
            if ub - best <= tol:
                ok = True
                break
            if it >= max_iter:
                break
            heap.pop()
            it += 1
            cell = cells[idx]
            mid = 0.5 * (cell.al + cell.be)
            fm = _f(&k, mid)
            if fm > best:
                best = fm
                arg = mid
            left.al = cell.al; left.be = mid; left.fa = cell.fa; left.fb = fm
            right.al = mid; right.be = cell.be; right.fa = fm; right.fb = cell.fb
            cells[idx] = left
            heap.push(pair[double, Py_ssize_t](
                _bound(&k, left.al, left.be, left.fa, left.fb), idx))
            cells.push_back(right)
            heap.push(pair[double, Py_ssize_t](
                _bound(&k, right.al, right.be, right.fa, right.fb), cells.size() - 1))
    return best, ub, arg, it, ok
