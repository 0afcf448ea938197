"""Pure-Python kernels for ray dynamics (fallback for ``_ckernels``).

Both backends expose the same two functions:

``displacement(a, b, c, d, offset, thetas)``
    ``offset + atan2(u x Au, u . Au)`` at each ``u = (sin t, cos t)``.  With
    the sign and offset chosen by the caller this is the continuous
    displacement ``h(t) - t`` of the anchored lift.

``enclose_max(a, b, c, d, offset, sign, tol, slack, max_iter)``
    Branch-and-bound enclosure of ``max sign * displacement`` over one period
    ``[0, pi]``.  Returns ``(lower, upper, argmax, iterations, converged)``.

The derivative of the displacement is ``1/g - 1`` with
``g(t) = |A u(t)|^2 = p + R cos(2t - psi)``, so on any interval the exact
range of ``g`` gives a two-sided slope bound.  With slopes in ``[m, M]`` and
endpoint values ``fa, fb`` the function cannot exceed the apex of the two
lines ``fa + M x`` and ``fb - m (w - x)``.  ``slack`` absorbs floating-point
error in each evaluation.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

TWO_PI = 2.0 * math.pi


def displacement(a, b, c, d, offset, thetas):
    t = np.asarray(thetas, dtype=np.float64)
    x = np.sin(t)
    y = np.cos(t)
    xp = a * x + b * y
    yp = c * x + d * y
    return offset + np.arctan2(xp * y - yp * x, x * xp + y * yp)


def _disp1(a, b, c, d, offset, t):
    x = math.sin(t)
    y = math.cos(t)
    xp = a * x + b * y
    yp = c * x + d * y
    return offset + math.atan2(xp * y - yp * x, x * xp + y * yp)


def _cos_range(u1, u2):
    lo = min(math.cos(u1), math.cos(u2))
    hi = max(math.cos(u1), math.cos(u2))
    if math.ceil(u1 / TWO_PI) * TWO_PI <= u2:
        hi = 1.0
    if math.ceil((u1 - math.pi) / TWO_PI) * TWO_PI + math.pi <= u2:
        lo = -1.0
    return lo, hi


def _upper(fa, fb, w, m, M):
    if M <= 0.0:
        return fa
    if m >= 0.0:
        return fb
    x = (fb - fa - m * w) / (M - m)
    if x < 0.0:
        x = 0.0
    elif x > w:
        x = w
    return fa + M * x


def enclose_max(a, b, c, d, offset, sign, tol, slack, max_iter, n_init=64):
    P = a * a + c * c
    Q = b * b + d * d
    p = 0.5 * (P + Q)
    q = 0.5 * (Q - P)
    s = a * b + c * d
    R = math.hypot(q, s)
    psi = math.atan2(s, q)

    def f(t):
        return sign * _disp1(a, b, c, d, offset, t)

    def bound(al, be, fa, fb):
        clo, chi = _cos_range(2.0 * al - psi, 2.0 * be - psi)
        gmin = p + R * clo
        gmax = p + R * chi
        dlo = 1.0 / gmax - 1.0
        dhi = 1.0 / gmin - 1.0
        if sign > 0:
            m, M = dlo, dhi
        else:
            m, M = -dhi, -dlo
        return _upper(fa, fb, be - al, m, M) + slack

    h = math.pi / n_init
    ts = [i * h for i in range(n_init + 1)]
    fs = [f(t) for t in ts]
    best = fs[0]
    arg = ts[0]
    for t, v in zip(ts, fs):
        if v > best:
            best, arg = v, t
    heap = []
    for i in range(n_init):
        ub = bound(ts[i], ts[i + 1], fs[i], fs[i + 1])
        heap.append((-ub, ts[i], ts[i + 1], fs[i], fs[i + 1]))
    heapq.heapify(heap)
    it = 0
    while True:
        nub, al, be, fa, fb = heap[0]
        ub = -nub
        if ub - best <= tol:
            return best, ub, arg, it, True
        if it >= max_iter:
            return best, ub, arg, it, False
        heapq.heappop(heap)
        it += 1
        mid = 0.5 * (al + be)
        fm = f(mid)
        if fm > best:
            best, arg = fm, mid
        heapq.heappush(heap, (-bound(al, mid, fa, fm), al, mid, fa, fm))
        heapq.heappush(heap, (-bound(mid, be, fm, fb), mid, be, fm, fb))
