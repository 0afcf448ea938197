"""High-precision reference values computed without the package's kernels."""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 40


def h_ref(A, theta):
    """Anchored lift of the ray map: h(0) = atan2(b, d) mod 2pi, h' = 1/|A u|^2."""
    a, b, c, d = (mp.mpf(x) for x in (A.a, A.b, A.c, A.d))
    h0 = mp.atan2(b, d) % (2 * mp.pi)

    def dh(t):
        x, y = mp.sin(t), mp.cos(t)
        return 1 / ((a * x + b * y) ** 2 + (c * x + d * y) ** 2)

    theta = mp.mpf(theta)
    if theta == 0:
        return h0
    # short subintervals so the integrand peaks are resolved
    n = int(abs(theta) / (mp.pi / 64)) + 1
    pts = [theta * i / n for i in range(n + 1)]
    return h0 + mp.quad(dh, pts)


def d_ref(A, theta):
    return h_ref(A, theta) - mp.mpf(theta)


def critical_points(A):
    """Angles in [0, pi) where |A u| = 1, i.e. where d' = 0."""
    a, b, c, d = (mp.mpf(x) for x in (A.a, A.b, A.c, A.d))
    P, Q = a * a + c * c, b * b + d * d
    p = (P + Q) / 2
    q = (Q - P) / 2
    s = a * b + c * d
    R = mp.hypot(q, s)
    if R == 0:
        return []
    psi = mp.atan2(s, q)
    acc = mp.acos((1 - p) / R)
    return [((psi + e * acc) / 2) % mp.pi for e in (1, -1)]


def d_extrema(A):
    """(min, max) of the anchored displacement, to working precision."""
    pts = critical_points(A)
    if not pts:
        v = d_ref(A, 0)
        return v, v
    vals = [d_ref(A, t) for t in pts]
    return min(vals), max(vals)
