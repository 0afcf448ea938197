"""Contact (-1/k)-surgery on the fibre Legendrian of a torus bundle.

States are pairs ``(A, n)`` standing for ``(T_A, zeta_n)``.  A step with
integer ``k != 0`` is contact surgery with coefficient ``-1/k`` on the
Legendrian ``{x = t = 0}``; it multiplies the monodromy by ``E_k`` on the left.
Only this fibre Legendrian is modelled: other Legendrian representatives of
the same knot type are out of reach of the calculus here.

A step may carry a conjugator ``P``, in which case the monodromy factor is
``P E_k P^-1``.  Such a step is the image of an ordinary step under the
contactomorphism induced by ``P``.  Words in ``E_{-1}`` and ``E_1'`` are
walked this way, since ``E_1' = B E_{-1} B^-1``.

Coefficient sign is ``-sign(k)``: ``k > 0`` is a negative-coefficient (Stein
type) surgery, ``k < 0`` a positive one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .raydyn import (
    NonPositiveDisplacement, compose_lift, lift_for, surgery_oracle,
    table_twisting, twisting_of_lift,
)
from .sl2z import IDENTITY, E, MonodromyMatrix, classify_Ek


class SurgeryError(ValueError):
    pass


class InvalidTwisting(SurgeryError):
    pass


class NotInImage(SurgeryError):
    pass


class TableMismatch(SurgeryError):
    """Oracle and closed-form table disagree: an implementation bug."""


@dataclass(frozen=True)
class TightStructure:
    monodromy: MonodromyMatrix
    twisting: int

    def __post_init__(self):
        if not isinstance(self.twisting, int) or isinstance(self.twisting, bool):
            raise TypeError("twisting must be an int")
        if self.twisting < 0:
            raise InvalidTwisting(f"twisting must be >= 0, got {self.twisting}")

    def __str__(self) -> str:
        return f"({self.monodromy}, n={self.twisting})"


@dataclass(frozen=True)
class SurgeryStep:
    k: int
    conjugator: Optional[MonodromyMatrix] = None

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise TypeError("k must be an int")
        if self.k == 0:
            raise SurgeryError("k = 0 is not a surgery")

    @property
    def coefficient(self) -> Fraction:
        return Fraction(-1, self.k)

    @property
    def factor(self) -> MonodromyMatrix:
        if self.conjugator is None:
            return E(self.k)
        P = self.conjugator
        return P @ E(self.k) @ P.inverse()

    def inverse(self) -> SurgeryStep:
        return SurgeryStep(-self.k, self.conjugator)

    def __str__(self) -> str:
        if self.conjugator is None:
            return f"k={self.k}"
        return f"k={self.k}@[{self.conjugator}]"


StepLike = Union[int, SurgeryStep]


def _as_step(step: StepLike) -> SurgeryStep:
    return step if isinstance(step, SurgeryStep) else SurgeryStep(step)


def _frame(A: MonodromyMatrix, step: SurgeryStep) -> MonodromyMatrix:
    """Monodromy seen in the frame where the step's factor is plain ``E_k``."""
    if step.conjugator is None:
        return A
    P = step.conjugator
    return P.inverse() @ A @ P


def _check_start(A0: MonodromyMatrix, n0: int, k: int, exc=InvalidTwisting) -> None:
    if n0 >= 1:
        return
    if n0 == 0 and k > 0 and A0 == IDENTITY:
        return
    raise exc(f"surgery on ({A0}, n={n0}) with k={k} is outside the modelled range")


def apply_step(s: TightStructure, step: StepLike) -> TightStructure:
    """Contact (-1/k)-surgery on the fibre Legendrian of ``s``.

    The twisting always comes from the lift oracle.  When the monodromy (in
    the step's frame) is some ``E_l`` the closed-form table is consulted too
    and a disagreement raises ``TableMismatch``.
    """
    step = _as_step(step)
    A0 = _frame(s.monodromy, step)
    _check_start(A0, s.twisting, step.k)
    try:
        n = surgery_oracle(step.k, A0, s.twisting).twisting
    except NonPositiveDisplacement as exc:
        raise InvalidTwisting(str(exc)) from exc
    l = classify_Ek(A0)
    if l is not None:
        expected = table_twisting(step.k, l, s.twisting)
        if expected != n:
            raise TableMismatch(
                f"k={step.k}, l={l}, n0={s.twisting}: oracle {n}, table {expected}"
            )
    return TightStructure(step.factor @ s.monodromy, n)


def invert_step(s_prime: TightStructure, step: StepLike) -> TightStructure:
    """The state ``s`` with ``apply_step(s, step) == s_prime``.

    The lift of the result is ``h_{E_-k} o H'``, which inverts the forward
    composition because the anchored lifts of ``E_k`` and ``E_-k`` are
    mutually inverse.
    """
    step = _as_step(step)
    A1 = _frame(s_prime.monodromy, step)
    try:
        L0 = compose_lift(-step.k, lift_for(A1, s_prime.twisting))
        n0 = twisting_of_lift(L0)
    except NonPositiveDisplacement as exc:
        raise NotInImage(f"{s_prime} has no preimage under {step}") from exc
    _check_start(L0.matrix, n0, step.k, NotInImage)
    s = TightStructure(step.factor.inverse() @ s_prime.monodromy, n0)
    if apply_step(s, step) != s_prime:
        raise NotInImage(f"{s_prime} is not reached by {step}")
    return s


def expand_to_unit_steps(k: int) -> list[SurgeryStep]:
    """``|k|`` unit steps of the same sign (coefficient ``-sign(k)`` each)."""
    if k == 0:
        raise SurgeryError("k = 0 is not a surgery")
    unit = 1 if k > 0 else -1
    return [SurgeryStep(unit) for _ in range(abs(k))]


@dataclass(frozen=True)
class SurgeryChain:
    start: TightStructure
    steps: tuple[SurgeryStep, ...] = ()
    states: tuple[TightStructure, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(_as_step(s) for s in self.steps))
        if not self.states:
            object.__setattr__(self, "states", _walk(self.start, self.steps))
        elif len(self.states) != len(self.steps):
            raise SurgeryError("one state per step is required")

    @classmethod
    def build(cls, start: TightStructure, steps: Iterable[StepLike]) -> SurgeryChain:
        return cls(start, tuple(_as_step(s) for s in steps))

    @property
    def end(self) -> TightStructure:
        return self.states[-1] if self.states else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def validate(self) -> None:
        if _walk(self.start, self.steps) != self.states:
            raise SurgeryError("chain states do not follow from its steps")

    def __str__(self) -> str:
        ks = ",".join(str(s.k) for s in self.steps)
        return f"{self.start.monodromy} n={self.start.twisting} steps={ks}"


def _walk(start: TightStructure, steps: Iterable[SurgeryStep]) -> tuple[TightStructure, ...]:
    out = []
    s = start
    for st in steps:
        s = apply_step(s, st)
        out.append(s)
    return tuple(out)


def simplify_chain(c: SurgeryChain) -> SurgeryChain:
    """Cancel adjacent inverse steps (same conjugator, opposite ``k``)."""
    stack: list[SurgeryStep] = []
    for st in c.steps:
        if stack and stack[-1] == st.inverse():
            stack.pop()
        else:
            stack.append(st)
    if len(stack) == len(c.steps):
        return c
    out = SurgeryChain.build(c.start, stack)
    if out.end != c.end:  # pragma: no cover
        raise SurgeryError("simplification changed the end state")
    return out


_CHAIN_RE = re.compile(r"^\s*(?P<m>\S+)\s+n=(?P<n>-?\d+)\s+steps=(?P<s>[-\d,\s]*)$")


def parse_chain(text: str) -> SurgeryChain:
    """Parse ``"a,b;c,d n=N steps=k1,k2,..."``."""
    m = _CHAIN_RE.match(text)
    if not m:
        raise SurgeryError(f"malformed chain: {text!r}")
    start = TightStructure(MonodromyMatrix.parse(m["m"]), int(m["n"]))
    ks = [int(x) for x in m["s"].replace(" ", "").split(",") if x]
    return SurgeryChain.build(start, ks)


__all__ = [
    "SurgeryError", "InvalidTwisting", "NotInImage", "TableMismatch",
    "TightStructure", "SurgeryStep", "SurgeryChain", "apply_step",
    "invert_step", "expand_to_unit_steps", "simplify_chain", "parse_chain",
    "table_twisting",
]
