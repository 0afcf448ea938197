"""Dynamics of SL(2, Z) on rays and the twisting of equivariant angle functions.

A ray is parametrised as ``Delta_theta = {s (sin theta, cos theta) : s >= 0}``
(note the ``(sin, cos)`` order).  A matrix ``A`` induces an orientation
preserving circle map on rays; a *lift* ``H`` of it is a continuous
increasing map of the real line with ``H(theta + 2 pi) = H(theta) + 2 pi``.

Twisting.  If ``phi`` is increasing with ``phi(t + 1) = H(phi(t))`` then
``sup_t (phi(t + 1) - phi(t))`` is the supremum of the displacement
``H(theta) - theta`` over the range of ``phi``.  When the displacement is
positive everywhere that range is the whole line; otherwise it is an arc
between fixed points and the maximum displacement is below ``2 pi`` anyway.
Either way the twisting ``n`` with ``2 n pi < sup <= 2 (n + 1) pi`` is read
off from ``d_max = max (H(theta) - theta)``.

The boundary case ``d_max in 2 pi Z`` happens exactly when ``d_max`` is
realised at a fixed ray.  All fixed rays of one lift carry the same
displacement ``2 pi j`` (the displacement range is shorter than ``2 pi``), and
on the arcs between them ``d - 2 pi j`` has constant sign.  For parabolic
matrices that sign is read from an integer cross product, so the decision is
exact; for hyperbolic ones the four fixed rays alternate between attracting
and repelling, the sign changes, and the certified enclosure confirms it.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import _backend
from .sl2z import E, MonodromyMatrix, eigen_rays

TWO_PI = 2.0 * math.pi
ENCLOSURE_TOL = 1e-9
MAX_ITER = 2_000_000
DEFAULT_GRID = 4096

ArrayLike = Union[float, np.ndarray]


class RayDynamicsError(Exception):
    pass


class CertificationError(RayDynamicsError):
    """The displacement enclosure could not be tightened enough."""


class NonPositiveDisplacement(RayDynamicsError, ValueError):
    """``d_max <= 0``: no increasing equivariant function on this branch."""


class BoundaryAmbiguityError(RayDynamicsError):
    """A sampled supremum sits on a multiple of 2 pi with no exact decision."""


def default_grid() -> int:
    """Samples per unit t-interval; ``TORUSFILL_GRID`` overrides the default."""
    env = os.environ.get("TORUSFILL_GRID")
    if env:
        n = int(env)
        if n < 8:
            raise ValueError("TORUSFILL_GRID must be at least 8")
        return n
    return DEFAULT_GRID


# --- ray angles ----------------------------------------------------------

def ray_angle(x: float, y: float) -> float:
    """Angle in ``[0, 2 pi)`` of the ray through ``(x, y)``."""
    return math.atan2(x, y) % TWO_PI


def ray_angle_image(A: MonodromyMatrix, theta: float) -> float:
    """The ``theta'`` in ``[0, 2 pi)`` with ``A(Delta_theta) = Delta_theta'``."""
    x, y = math.sin(theta), math.cos(theta)
    return ray_angle(A.a * x + A.b * y, A.c * x + A.d * y)


@dataclass(frozen=True)
class _LiftParams:
    a: float
    b: float
    c: float
    d: float
    offset: float
    slack: float


@lru_cache(maxsize=8192)
def _params(A: MonodromyMatrix) -> _LiftParams:
    # For trace <= -2 the angle from u to Au can reach pi, so measure it
    # against -A instead (whose eigenvalues are positive) and add pi.
    flip = A.trace <= -2
    s = -1 if flip else 1
    a, b, c, d = s * A.a, s * A.b, s * A.c, s * A.d
    offset = math.pi if flip else 0.0
    # anchor: h(0) in [0, 2 pi); at theta = 0 the angle is atan2(b, d)
    if not flip and A.b < 0:
        offset += TWO_PI
    fro2 = float(a * a + b * b + c * c + d * d)
    eps = np.finfo(float).eps
    slack = 8.0 * eps * (1.0 + fro2) + 4.0 * eps * (abs(offset) + TWO_PI)
    return _LiftParams(float(a), float(b), float(c), float(d), offset, slack)


def _base_displacement(A: MonodromyMatrix, theta: ArrayLike) -> ArrayLike:
    p = _params(A)
    arr = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    out = _backend.displacement(p.a, p.b, p.c, p.d, p.offset, arr)
    if np.ndim(theta) == 0:
        return float(out[0])
    return out.reshape(np.shape(theta))


def _norm2(A: MonodromyMatrix, theta: ArrayLike) -> ArrayLike:
    x, y = np.sin(theta), np.cos(theta)
    return (A.a * x + A.b * y) ** 2 + (A.c * x + A.d * y) ** 2


# --- lifts ---------------------------------------------------------------

@dataclass(frozen=True)
class LiftedCircleMap:
    """The lift ``theta -> h_base(theta) + 2 pi * branch`` of the ray map of
    ``matrix``, where ``h_base`` is anchored by ``h_base(0) in [0, 2 pi)``."""

    matrix: MonodromyMatrix
    branch: int = 0

    def __call__(self, theta: ArrayLike) -> ArrayLike:
        return lift_eval(self, theta)

    def derivative(self, theta: ArrayLike) -> ArrayLike:
        return lift_derivative(self, theta)

    def displacement(self, theta: ArrayLike) -> ArrayLike:
        return _base_displacement(self.matrix, theta) + TWO_PI * self.branch

    def shifted(self, dm: int) -> LiftedCircleMap:
        return LiftedCircleMap(self.matrix, self.branch + dm)


def base_lift(A: MonodromyMatrix) -> LiftedCircleMap:
    return LiftedCircleMap(A, 0)


def lift_eval(L: LiftedCircleMap, theta: ArrayLike) -> ArrayLike:
    return theta + _base_displacement(L.matrix, theta) + TWO_PI * L.branch


def lift_derivative(L: LiftedCircleMap, theta: ArrayLike) -> ArrayLike:
    """``h'(theta) = 1 / |A (sin theta, cos theta)|^2`` (det A = 1)."""
    return 1.0 / _norm2(L.matrix, theta)


def _branch_matching(A: MonodromyMatrix, theta: float, value: float) -> int:
    """Branch ``m`` of ``A``'s lift taking the value ``value`` at ``theta``."""
    raw = (value - (theta + _base_displacement(A, theta))) / TWO_PI
    m = round(raw)
    if abs(raw - m) > 1e-6:
        raise CertificationError(f"value {value} at {theta} is not on a lift of {A}")
    return int(m)


def inverse_lift(L: LiftedCircleMap) -> LiftedCircleMap:
    """The lift of ``A^-1`` inverting ``L``."""
    Ainv = L.matrix.inverse()
    return LiftedCircleMap(Ainv, _branch_matching(Ainv, float(L(0.0)), 0.0))


def conjugate_lift(L: LiftedCircleMap, P: MonodromyMatrix) -> LiftedCircleMap:
    """The lift ``P~ o H o P~^-1`` of ``P A P^-1`` for the anchored lift ``P~``."""
    Pl = base_lift(P)
    Pinv = inverse_lift(Pl)
    C = P @ L.matrix @ P.inverse()
    value = float(Pl(L(Pinv(0.0))))
    return LiftedCircleMap(C, _branch_matching(C, 0.0, value))


# --- displacement range and twisting -----------------------------------

@dataclass(frozen=True)
class _BaseInfo:
    max_enclosure: tuple[float, float]
    max_arg: float
    min_enclosure: tuple[float, float]
    min_arg: float
    fixed_multiple: Optional[int]   # displacement / 2 pi at fixed rays
    max_attained: bool
    min_attained: bool
    attainment_angles: tuple[float, ...]


def _enclose(A: MonodromyMatrix, sign: float, tol: float) -> tuple[float, float, float]:
    p = _params(A)
    tol = max(tol, 10.0 * p.slack)
    lo, hi, arg, _, ok = _backend.enclose_max(
        p.a, p.b, p.c, p.d, p.offset, sign, tol, p.slack, MAX_ITER
    )
    if not ok:
        raise CertificationError(
            f"displacement enclosure for {A} did not reach width {tol:g}"
        )
    if sign > 0:
        return lo, hi, arg
    return -hi, -lo, arg


@lru_cache(maxsize=8192)
def _base_info(A: MonodromyMatrix) -> _BaseInfo:
    mx_lo, mx_hi, mx_arg = _enclose(A, 1.0, ENCLOSURE_TOL)
    mn_lo, mn_hi, mn_arg = _enclose(A, -1.0, ENCLOSURE_TOL)
    rep = eigen_rays(A)
    j = None
    max_att = min_att = False
    angles: tuple[float, ...] = ()
    if rep.every_ray_fixed:
        j = round(_base_displacement(A, 0.0) / TWO_PI)
        max_att = min_att = True
        angles = tuple(r.angle for r in rep.rays)
    elif rep.rays:
        v = rep.rays[0].direction
        j = round(_base_displacement(A, rep.rays[0].angle) / TWO_PI)
        w = (1, 0) if v[0] * 0 - v[1] * 1 != 0 else (0, 1)
        Aw = A.apply(w)
        # cross > 0: Aw lies counterclockwise of w, so theta decreases there
        cross = w[0] * Aw[1] - w[1] * Aw[0]
        max_att = cross > 0
        min_att = cross < 0
        angles = tuple(r.angle for r in rep.rays)
    elif rep.fixed_rays_exist_irrational:
        js = {round(_base_displacement(A, t) / TWO_PI) for t in rep.irrational_angles}
        if len(js) != 1:
            raise CertificationError(f"inconsistent fixed-ray displacement for {A}")
        j = js.pop()
        # attracting and repelling fixed rays alternate: d - 2 pi j changes sign
        if not (mx_lo > TWO_PI * j and mn_hi < TWO_PI * j):
            raise CertificationError(f"could not separate d_max from 2 pi j for {A}")
    if max_att and not (mx_lo - ENCLOSURE_TOL <= TWO_PI * j <= mx_hi + ENCLOSURE_TOL):
        raise CertificationError(f"attained maximum of {A} disagrees with enclosure")
    if min_att and not (mn_lo - ENCLOSURE_TOL <= TWO_PI * j <= mn_hi + ENCLOSURE_TOL):
        raise CertificationError(f"attained minimum of {A} disagrees with enclosure")
    return _BaseInfo(
        (mx_lo, mx_hi), mx_arg, (mn_lo, mn_hi), mn_arg, j, max_att, min_att, angles
    )


@dataclass(frozen=True)
class DisplacementRange:
    """Range of ``h(theta) - theta`` for one lift.

    ``d_max``/``d_min`` are exact multiples of ``2 pi`` when attained at a
    fixed ray and enclosure midpoints otherwise; the enclosures are certified
    to width ``ENCLOSURE_TOL`` (scaled up for very large entries).
    """

    d_min: float
    d_max: float
    sup_attained: bool
    attainment_angles: tuple[float, ...]
    d_min_enclosure: tuple[float, float]
    d_max_enclosure: tuple[float, float]
    max_multiple: Optional[int] = None
    argmax: float = 0.0


def displacement_range(L: LiftedCircleMap) -> DisplacementRange:
    info = _base_info(L.matrix)
    shift = TWO_PI * L.branch
    mx = (info.max_enclosure[0] + shift, info.max_enclosure[1] + shift)
    mn = (info.min_enclosure[0] + shift, info.min_enclosure[1] + shift)
    mult = None
    if info.max_attained:
        mult = info.fixed_multiple + L.branch
        d_max = TWO_PI * mult
    else:
        d_max = 0.5 * (mx[0] + mx[1])
    if info.min_attained:
        d_min = TWO_PI * (info.fixed_multiple + L.branch)
    else:
        d_min = 0.5 * (mn[0] + mn[1])
    return DisplacementRange(
        d_min=d_min,
        d_max=d_max,
        sup_attained=info.max_attained,
        attainment_angles=info.attainment_angles if info.max_attained else (),
        d_min_enclosure=mn,
        d_max_enclosure=mx,
        max_multiple=mult,
        argmax=info.max_arg,
    )


@lru_cache(maxsize=8192)
def twisting_offset(A: MonodromyMatrix) -> int:
    """Integer ``c`` with ``twisting(lift of A on branch m) = m + c``."""
    info = _base_info(A)
    if info.max_attained:
        return info.fixed_multiple - 1
    lo, hi = info.max_enclosure
    fl, fh = math.floor(lo / TWO_PI), math.floor(hi / TWO_PI)
    if fl == fh:
        return fl
    lo, hi, _ = _enclose(A, 1.0, 1e-13)
    fl, fh = math.floor(lo / TWO_PI), math.floor(hi / TWO_PI)
    if fl != fh:
        raise BoundaryAmbiguityError(f"d_max of {A} is not separated from 2 pi Z")
    return fl


def twisting_of_lift(L: LiftedCircleMap) -> int:
    """The ``n >= 0`` with ``2 n pi < d_max <= 2 (n + 1) pi``."""
    n = L.branch + twisting_offset(L.matrix)
    if n < 0:
        raise NonPositiveDisplacement(
            f"lift of {L.matrix} on branch {L.branch} has d_max <= 0"
        )
    return n


def lift_for(A: MonodromyMatrix, n: int) -> LiftedCircleMap:
    """The lift of ``A`` whose twisting is ``n``."""
    if n < 0:
        raise ValueError("twisting must be non-negative")
    return LiftedCircleMap(A, n - twisting_offset(A))


def compose_lift(k: int, L: LiftedCircleMap) -> LiftedCircleMap:
    """The lift ``h_{E_k} o L`` of ``E_k A``, with ``h_{E_k}(0) = 0``.

    ``E_k`` fixes the ray at angle 0, so the composite takes the same value as
    ``L`` wherever ``L`` hits a multiple of ``2 pi``.
    """
    hk = base_lift(E(k))
    A = E(k) @ L.matrix
    m = _branch_matching(A, 0.0, float(hk(L(0.0))))
    out = LiftedCircleMap(A, m)
    if abs(float(out(1.0)) - float(hk(L(1.0)))) > 1e-6:  # pragma: no cover
        raise CertificationError("composed lift is not a lift of E_k A")
    return out


@dataclass(frozen=True)
class OracleStep:
    matrix: MonodromyMatrix
    twisting: int
    lift: LiftedCircleMap
    outside_hypotheses: bool


def surgery_oracle(k: int, A0: MonodromyMatrix, n0: int) -> OracleStep:
    """Twisting after contact (-1/k)-surgery on a fibre of ``(T_A0, zeta_n0)``.

    Results for ``n0 = 0`` are computed but flagged, since the surgery
    statement being modelled assumes ``n0 >= 1``.
    """
    if k == 0:
        raise ValueError("k must be non-zero")
    L = compose_lift(k, lift_for(A0, n0))
    return OracleStep(L.matrix, twisting_of_lift(L), L, n0 < 1)


def table_twisting(k: int, l: int, n0: int) -> int:
    """Closed-form twisting after (-1/k)-surgery on ``(T(l), zeta_n0)``."""
    if k > 0:
        return n0 - 1 if -k <= l < 0 else n0
    if k < 0:
        return n0 + 1 if 0 <= l < -k else n0
    raise ValueError("k must be non-zero")


# --- equivariant angle functions -------------------------------------------

@dataclass(frozen=True, eq=False)
class TwistingFunction:
    """Samples of an increasing ``phi`` on ``[-1, 1]`` with
    ``A(Delta_phi(t)) = Delta_phi(t+1)``.

    ``t`` is uniform with ``grid`` samples per unit, so ``t[i] + 1 == t[i + grid]``.
    """

    t: np.ndarray
    phi: np.ndarray
    matrix: MonodromyMatrix
    branch: int
    grid: int
    dphi: Optional[np.ndarray] = None
    anchor: float = 0.0
    joint: Optional[float] = None
    width: float = 0.0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_function(cls, A: MonodromyMatrix, f, grid: Optional[int] = None,
                      df=None) -> TwistingFunction:
        """Sample a user-supplied ``phi`` (vectorised callable) on ``[-1, 1]``."""
        grid = grid or default_grid()
        t = np.linspace(-1.0, 1.0, 2 * grid + 1)
        phi = np.asarray(f(t), dtype=np.float64)
        dphi = None if df is None else np.asarray(df(t), dtype=np.float64)
        m = _branch_matching(A, float(phi[grid]), float(phi[2 * grid]))
        return cls(t, phi, A, m, grid, dphi, anchor=float(phi[grid]))

    def __call__(self, s: ArrayLike) -> ArrayLike:
        return np.interp(s, self.t, self.phi)

    @property
    def lift(self) -> LiftedCircleMap:
        return LiftedCircleMap(self.matrix, self.branch)

    def is_strictly_increasing(self) -> bool:
        return bool(np.all(np.diff(self.phi) > 0))

    def equivariance_residual(self) -> float:
        """Max angle error between ``A u(phi(t))`` and ``u(phi(t + 1))``."""
        N = self.grid
        A = self.matrix
        p0 = self.phi[: N + 1]
        p1 = self.phi[N:]
        x, y = np.sin(p0), np.cos(p0)
        xp, yp = A.a * x + A.b * y, A.c * x + A.d * y
        x1, y1 = np.sin(p1), np.cos(p1)
        err = np.arctan2(xp * y1 - yp * x1, xp * x1 + yp * y1)
        return float(np.max(np.abs(err)))


def _hermite(t: np.ndarray, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    t2, t3 = t * t, t * t * t
    g = (-2 * t3 + 3 * t2) + alpha * (t3 - 2 * t2 + t) + beta * (t3 - t2)
    dg = (-6 * t2 + 6 * t) + alpha * (3 * t2 - 4 * t + 1) + beta * (3 * t2 - 2 * t)
    return g, dg


def construct_phi(A: MonodromyMatrix, n: int, grid: Optional[int] = None,
                  anchor: Optional[float] = None) -> TwistingFunction:
    """Build an increasing equivariant ``phi`` with twisting ``n``.

    On ``[0, 1]`` phi is a cubic Hermite curve from ``theta0`` to
    ``H(theta0)`` whose end slopes satisfy ``phi'(1) = H'(theta0) phi'(0)``;
    with slopes ``2/(1+s)`` and ``2s/(1+s)`` (in units of ``H(theta0) -
    theta0``) its derivative is linear in t and positive, so phi is strictly
    increasing and C^1 across the joints.  On ``[-1, 0]`` it is ``H^-1``
    applied to the values on ``[0, 1]``.  ``theta0 = 0`` unless
    ``H(0) <= 0``, in which case the point of maximal displacement is used.
    """
    grid = grid or default_grid()
    L = lift_for(A, n)
    if anchor is None:
        anchor = 0.0
        if float(L(0.0)) <= 0.0:
            anchor = float(displacement_range(L).argmax)
    th0 = float(anchor)
    delta = float(L(th0)) - th0
    if delta <= 0.0:
        raise ValueError(f"H(anchor) <= anchor for anchor {th0}; choose another anchor")
    s = float(L.derivative(th0))
    alpha, beta = 2.0 / (1.0 + s), 2.0 * s / (1.0 + s)
    tp = np.linspace(0.0, 1.0, grid + 1)
    g, dg = _hermite(tp, alpha, beta)
    phi_pos = th0 + delta * g
    dphi_pos = delta * dg
    phi_pos[-1] = float(L(th0))
    Linv = inverse_lift(L)
    phi_neg = np.asarray(Linv(phi_pos), dtype=np.float64)
    phi_neg[-1] = th0
    dphi_neg = dphi_pos / np.asarray(L.derivative(phi_neg))
    t = np.linspace(-1.0, 1.0, 2 * grid + 1)
    phi = np.concatenate([phi_neg[:-1], phi_pos])
    dphi = np.concatenate([dphi_neg[:-1], dphi_pos])
    return TwistingFunction(
        t, phi, A, L.branch, grid, dphi, anchor=th0, joint=1.0, width=1.0,
        meta={"n": n},
    )


def compose_phi(k: int, phi0: TwistingFunction) -> TwistingFunction:
    """The angle function for ``E_k A0`` obtained from one for ``A0``.

    Keep ``phi0`` on ``[-1, 0]`` and use ``h_{E_k}(phi0(t))`` on ``[0, 1]``,
    which is exactly the equivariant extension for the lift ``h_{E_k} o H0``.
    Requires ``phi0(0) = 0`` (the ray fixed by every ``E_k``).  Since
    ``h_{E_k}'(0) = 1`` the joint at ``t = 0`` is already C^1.
    """
    N = phi0.grid
    if abs(phi0.phi[N]) > 1e-12:
        raise ValueError("compose_phi needs phi0(0) = 0")
    hk = base_lift(E(k))
    pos = np.asarray(hk(phi0.phi[N:]), dtype=np.float64)
    pos[0] = 0.0
    phi = np.concatenate([phi0.phi[:N], pos])
    dphi = None
    if phi0.dphi is not None:
        dpos = phi0.dphi[N:] * np.asarray(hk.derivative(phi0.phi[N:]))
        dphi = np.concatenate([phi0.dphi[:N], dpos])
    L = compose_lift(k, phi0.lift)
    return TwistingFunction(
        phi0.t, phi, L.matrix, L.branch, N, dphi, anchor=0.0, joint=0.0, width=0.0,
        meta={"composed_with": k},
    )


def _grid_sup(phi: TwistingFunction) -> tuple[float, float]:
    """Sampled sup of ``psi(t) = phi(t+1) - phi(t)`` on ``[-1, 0]`` and an
    upper estimate for ``psi`` between samples.

    Each cell is modelled by the cubic Hermite interpolant of the end values
    and end derivatives of ``psi``; the estimate is that cubic's maximum plus
    its overshoot above the larger end value once more, as margin.  Without
    stored derivatives, centred differences stand in for them.
    """
    N = phi.grid
    psi = phi.phi[N:] - phi.phi[: N + 1]
    h = 1.0 / N
    if phi.dphi is not None:
        slope = phi.dphi[N:] - phi.dphi[: N + 1]
    else:
        slope = np.gradient(psi, h)
    p0, p1 = psi[:-1], psi[1:]
    m0, m1 = h * slope[:-1], h * slope[1:]
    # psi ~ c3 s^3 + c2 s^2 + m0 s + p0 on s in [0, 1]
    c3 = 2 * p0 + m0 - 2 * p1 + m1
    c2 = -3 * p0 - 2 * m0 + 3 * p1 - m1
    ends = np.maximum(p0, p1)
    best = ends.copy()
    qa, qb, qc = 3 * c3, 2 * c2, m0
    disc = np.maximum(qb * qb - 4 * qa * qc, 0.0)
    root = np.sqrt(disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        lin = np.where(qb != 0, -qc / qb, -1.0)
        cands = [
            np.where(np.abs(qa) > 1e-300, (-qb + root) / (2 * qa), lin),
            np.where(np.abs(qa) > 1e-300, (-qb - root) / (2 * qa), lin),
        ]
    for sr in cands:
        ok = (sr > 0) & (sr < 1)
        sc = np.where(ok, sr, 0.0)
        val = ((c3 * sc + c2) * sc + m0) * sc + p0
        best = np.where(ok, np.maximum(best, val), best)
    upper = best + (best - ends)
    return float(np.max(psi)), float(np.max(upper))


def twisting_of_phi(phi: TwistingFunction, tol: float = 1e-9) -> int:
    """The ``n`` with ``2 n pi < sup (phi(t+1) - phi(t)) <= 2 (n + 1) pi``.

    When the sampled sup lies within reach of a multiple of ``2 pi`` the
    decision is made exactly from the fixed rays of ``phi.matrix``.
    """
    S, upper = _grid_sup(phi)
    if S <= 0:
        raise NonPositiveDisplacement("phi is not increasing")
    lo, hi = S - tol, upper + tol
    j = math.ceil(lo / TWO_PI)
    if TWO_PI * j > hi:
        return math.floor(S / TWO_PI)
    info = _base_info(phi.matrix)
    if info.max_attained and info.fixed_multiple + phi.branch == j:
        return j - 1
    raise BoundaryAmbiguityError(
        f"sup of phi(t+1) - phi(t) in [{S!r}, {upper!r}] may equal 2 pi * {j}"
    )


# --- CSV ---------------------------------------------------------------------

def write_phi_csv(phi: TwistingFunction, path) -> None:
    """Write ``t,phi`` rows preceded by ``#`` metadata lines."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# matrix: {phi.matrix}\n")
        fh.write(f"# n: {phi.meta.get('n', twisting_of_phi(phi))}\n")
        fh.write(f"# branch: {phi.branch}\n")
        fh.write(f"# grid: {phi.grid}\n")
        w = csv.writer(fh)
        w.writerow(["t", "phi"])
        for t, p in zip(phi.t, phi.phi):
            w.writerow([repr(float(t)), repr(float(p))])


def read_phi_csv(path) -> TwistingFunction:
    meta = {}
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                meta[key.strip()] = val.strip()
            else:
                rows.append(line)
    reader = csv.DictReader(rows)
    data = [(float(r["t"]), float(r["phi"])) for r in reader]
    t = np.array([d[0] for d in data])
    p = np.array([d[1] for d in data])
    return TwistingFunction(
        t, p, MonodromyMatrix.parse(meta["matrix"]), int(meta["branch"]),
        int(meta["grid"]), meta={"n": int(meta["n"])},
    )


__all__ = [
    "RayDynamicsError", "CertificationError", "NonPositiveDisplacement",
    "BoundaryAmbiguityError", "LiftedCircleMap", "DisplacementRange",
    "TwistingFunction", "OracleStep", "ray_angle", "ray_angle_image",
    "base_lift", "lift_eval", "lift_derivative", "inverse_lift",
    "conjugate_lift", "displacement_range", "twisting_offset",
    "twisting_of_lift", "lift_for", "compose_lift", "surgery_oracle",
    "table_twisting", "construct_phi", "compose_phi", "twisting_of_phi",
    "write_phi_csv", "read_phi_csv", "default_grid",
]
