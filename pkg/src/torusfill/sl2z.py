"""Exact arithmetic in SL(2, Z).

Matrices are stored with Python integers, so products of long generator words
never overflow.  The generators used throughout are

    E_{-1} = [[1, 0], [-1, 1]]        (letter ``Em1``)
    E_1'   = [[1, 1], [0, 1]]         (letter ``E1p``)

and ``E_k = [[1, 0], [k, 1]]`` denotes the monodromy of T(k).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

__all__ = [
    "DeterminantError",
    "MonodromyMatrix",
    "GeneratorWord",
    "FixedRay",
    "EigenRayReport",
    "IDENTITY",
    "EM1",
    "E1P",
    "B",
    "E",
    "compose",
    "conjugate",
    "decompose_generators",
    "word_length_bound",
    "classify_Ek",
    "conjugator_to_Ek",
    "eigen_rays",
]


class DeterminantError(ValueError):
    """Raised when a matrix does not have determinant 1."""


_MATRIX_RE = re.compile(
    r"^\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*;\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*$"
)


@dataclass(frozen=True)
class MonodromyMatrix:
    """Row-major integer matrix ``[[a, b], [c, d]]`` with ``ad - bc = 1``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"entry {name} must be an int, got {v!r}")
        if self.a * self.d - self.b * self.c != 1:
            raise DeterminantError(
                f"determinant of {self} is {self.a * self.d - self.b * self.c}, not 1"
            )

    @classmethod
    def parse(cls, text: str) -> MonodromyMatrix:
        """Parse the text form ``"a,b;c,d"`` (whitespace allowed)."""
        m = _MATRIX_RE.match(text)
        if m is None:
            raise ValueError(f"malformed matrix string {text!r}; expected 'a,b;c,d'")
        return cls(*(int(g) for g in m.groups()))

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"

    def __matmul__(self, other: MonodromyMatrix) -> MonodromyMatrix:
        if not isinstance(other, MonodromyMatrix):
            return NotImplemented
        return MonodromyMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> MonodromyMatrix:
        return MonodromyMatrix(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, e: int) -> MonodromyMatrix:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = IDENTITY
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def inverse(self) -> MonodromyMatrix:
        return MonodromyMatrix(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def max_abs_entry(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))


IDENTITY = MonodromyMatrix(1, 0, 0, 1)
EM1 = MonodromyMatrix(1, 0, -1, 1)
E1P = MonodromyMatrix(1, 1, 0, 1)
B = MonodromyMatrix(0, 1, -1, 0)


def E(k: int) -> MonodromyMatrix:
    """The matrix ``E_k = [[1, 0], [k, 1]]``."""
    return MonodromyMatrix(1, 0, k, 1)


def compose(A: MonodromyMatrix, B_: MonodromyMatrix) -> MonodromyMatrix:
    """Exact product ``A @ B``."""
    return A @ B_


def conjugate(A: MonodromyMatrix, P: MonodromyMatrix) -> MonodromyMatrix:
    """Return ``P A P^-1``."""
    return P @ A @ P.inverse()


# --- generator words -------------------------------------------------------

_LETTERS = {"Em1": EM1, "E1p": E1P}

# (E_{-1} E_1')^6 = I gives inverse-free expressions for the inverse letters.
_INV_EM1 = ("E1p",) + ("Em1", "E1p") * 5
_INV_E1P = ("Em1", "E1p") * 5 + ("Em1",)
# (E_{-1} E_1')^3 = -I
_NEG_I = ("Em1", "E1p") * 3


@dataclass(frozen=True)
class GeneratorWord:
    """A word in ``Em1`` and ``E1p``, evaluated left to right as a product."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        bad = [x for x in letters if x not in _LETTERS]
        if bad:
            raise ValueError(f"unknown generator letters {bad}; use Em1 or E1p")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> GeneratorWord:
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(x.strip() for x in text.split(",")))

    def __str__(self) -> str:
        return ",".join(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: GeneratorWord) -> GeneratorWord:
        return GeneratorWord(self.letters + other.letters)

    def evaluate(self) -> MonodromyMatrix:
        out = IDENTITY
        for x in self.letters:
            out = out @ _LETTERS[x]
        return out


def _power_letters(letter: str, e: int) -> tuple[str, ...]:
    if e >= 0:
        return (letter,) * e
    inv = _INV_EM1 if letter == "Em1" else _INV_E1P
    return inv * (-e)


def _tdiv(x: int, y: int) -> int:
    """Integer quotient of x by y rounded toward zero."""
    q = abs(x) // abs(y)
    return q if (x >= 0) == (y >= 0) else -q


def decompose_generators(A: MonodromyMatrix) -> GeneratorWord:
    """Write ``A`` as a positive word in ``E_{-1}`` and ``E_1'``.

    Euclidean reduction of the first column by left multiplication with
    powers of the generators brings ``A`` to ``+-E_1'^b``.  Negative powers
    are then replaced through the order-6 relation, and a leading sign
    ``-I`` through ``(E_{-1} E_1')^3 = -I``.  The word is not minimal; its
    length never exceeds :func:`word_length_bound`.
    """
    a, b, c, d = A.a, A.b, A.c, A.d
    ops: list[tuple[str, int]] = []  # M <- gen^e @ M, in order
    while c != 0:
        if a == 0:
            # c = +-1 here; shift it into the top row
            ops.append(("E1p", 1))
            a, b = a + c, b + d
        elif abs(a) > abs(c):
            q = _tdiv(a, c)
            if a == q * c:
                # |c| = 1; stop at |a| = 1 instead of a = 0
                q -= 1 if q > 0 else -1
            ops.append(("E1p", -q))
            a, b = a - q * c, b - q * d
        else:
            q = _tdiv(c, a)
            # E_{-1}^q = E_{-q}: row2 -= q * row1
            ops.append(("Em1", q))
            c, d = c - q * a, d - q * b
    # now [[a, b], [0, d]] with a = d = +-1
    letters: list[str] = []
    for gen, e in ops:
        letters.extend(_power_letters(gen, -e))
    if a == 1:
        letters.extend(_power_letters("E1p", b))
    else:
        letters.extend(_power_letters("E1p", -b))
        letters.extend(_NEG_I)
    return GeneratorWord(tuple(letters))


def word_length_bound(A: MonodromyMatrix) -> int:
    """Upper bound on ``len(decompose_generators(A))``.

    With ``S = |a| + |b| + |c| + |d|``: the Euclidean quotients sum to at
    most ``S``, the final ``E_1'`` exponent is a Bezout combination of the
    entries and stays below ``S^2``, each letter expands to at most 11
    letters, and the sign costs 6 more.
    """
    s = abs(A.a) + abs(A.b) + abs(A.c) + abs(A.d)
    return 11 * (s + 1) ** 2 + 6


# --- E_l shape and conjugacy ---------------------------------------------

def classify_Ek(A: MonodromyMatrix) -> Optional[int]:
    """Return ``l`` if ``A == E_l``, else ``None``."""
    if A.a == 1 and A.b == 0 and A.d == 1:
        return A.c
    return None


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), (1 if x >= 0 else -1), 0)
    g, s, t = _ext_gcd(y, x % y)
    return g, t, s - (x // y) * t


@lru_cache(maxsize=4096)
def conjugator_to_Ek(A: MonodromyMatrix) -> Optional[tuple[int, MonodromyMatrix]]:
    """Find ``(k, P)`` with ``A == P E_k P^-1``, or ``None`` if no such k.

    Only trace-2 matrices are conjugate to some ``E_k``.  Writing
    ``A - I = k * [[xy, -x^2], [y^2, -xy]]`` with ``(x, y)`` primitive gives
    ``|k|`` as the gcd of the entries of ``A - I`` and the second column of
    ``P`` as ``(x, y)``; the first column comes from an extended gcd.
    """
    if A.trace != 2:
        return None
    if A == IDENTITY:
        return (0, IDENTITY)
    n11, n12, n21 = A.a - 1, A.b, A.c
    g = math.gcd(math.gcd(n11, n12), n21)
    k = g if (n21 > 0 or (n21 == 0 and n12 < 0)) else -g
    x2, y2 = -n12 // k, n21 // k
    x, y = math.isqrt(x2), math.isqrt(y2)
    if x * y != n11 // k:
        x = -x
    # need p11 * y - x * p21 = 1
    _, s, t = _ext_gcd(y, -x)
    P = MonodromyMatrix(s, x, t, y)
    if conjugate(E(k), P) != A:  # pragma: no cover - algebraic identity
        raise ArithmeticError(f"conjugator search failed for {A}")
    return (k, P)


# --- fixed rays --------------------------------------------------------------

@dataclass(frozen=True)
class FixedRay:
    """A ray ``{s (p, q) : s >= 0}`` with ``A (p, q) = eigenvalue * (p, q)``.

    ``angle`` is the ray's coordinate theta in ``[0, 2pi)`` for the
    parametrisation ``(sin theta, cos theta)``; ``angle_tag`` names it exactly.
    """

    direction: tuple[int, int]
    eigenvalue: Fraction
    angle_tag: str
    angle: float

    @property
    def eigenvalue_sign(self) -> int:
        return 1 if self.eigenvalue > 0 else -1


@dataclass(frozen=True)
class EigenRayReport:
    """Rays fixed by the induced map on rays.

    ``rays`` lists rational fixed rays (positive eigenvalue).  For the
    identity every ray is fixed: ``every_ray_fixed`` is set and ``rays`` holds
    the four coordinate rays as representatives.  Hyperbolic matrices
    (``trace > 2``) have four fixed rays with irrational slope; these are
    flagged by ``fixed_rays_exist_irrational`` and approximated in
    ``irrational_angles``.
    """

    has_fixed_ray: bool
    rays: tuple[FixedRay, ...]
    every_ray_fixed: bool = False
    fixed_rays_exist_irrational: bool = False
    irrational_angles: tuple[float, ...] = ()
    discriminant: int = 0


def _ray(p: int, q: int, lam: Fraction) -> FixedRay:
    ang = math.atan2(p, q) % (2 * math.pi)
    return FixedRay((p, q), lam, f"atan2({p},{q})", ang)


def _primitive(p: int, q: int) -> tuple[int, int]:
    g = math.gcd(p, q)
    return (p // g, q // g)


@lru_cache(maxsize=4096)
def eigen_rays(A: MonodromyMatrix) -> EigenRayReport:
    """Exact description of the rays fixed by ``A``."""
    t = A.trace
    disc = t * t - 4
    if A == IDENTITY:
        rays = tuple(_ray(p, q, Fraction(1)) for p, q in ((0, 1), (1, 0), (0, -1), (-1, 0)))
        return EigenRayReport(True, rays, every_ray_fixed=True, discriminant=disc)
    if t == 2:
        # A - I is nilpotent and nonzero; its kernel is the fixed line
        if A.a - 1 != 0 or A.b != 0:
            v = _primitive(-A.b, A.a - 1)
        else:
            v = _primitive(A.d - 1, -A.c)
        rays = []
        for p, q in (v, (-v[0], -v[1])):
            if A.apply((p, q)) != (p, q):  # pragma: no cover - kernel identity
                raise ArithmeticError("fixed-ray computation failed")
            rays.append(_ray(p, q, Fraction(1)))
        rays.sort(key=lambda r: r.angle)
        return EigenRayReport(True, tuple(rays), discriminant=disc)
    if t > 2:
        # irrational eigen-directions; t^2 - 4 is never a square here
        angles = []
        root = math.sqrt(disc)
        for lam in ((t + root) / 2, (t - root) / 2):
            if A.b != 0:
                x, y = float(A.b), lam - A.a
            else:
                x, y = lam - A.d, float(A.c)
            th = math.atan2(x, y)
            angles.extend([th % (2 * math.pi), (th + math.pi) % (2 * math.pi)])
        return EigenRayReport(
            False, (), fixed_rays_exist_irrational=True,
            irrational_angles=tuple(sorted(angles)), discriminant=disc,
        )
    # elliptic, or negative eigenvalues only
    return EigenRayReport(False, (), discriminant=disc)


def random_word(rng, max_len: int) -> GeneratorWord:
    """Random word of length ``0..max_len`` (``rng`` is a ``random.Random``)."""
    n = rng.randint(0, max_len)
    return GeneratorWord(tuple(rng.choice(("Em1", "E1p")) for _ in range(n)))
