"""Weak and strong fillability verdicts for ``(T_A, zeta_n)``.

Every ``zeta_n`` is weakly fillable.  Strong fillability is decided by the
first rule that fires:

R1  ``A = I`` (the 3-torus): fillable exactly when ``n = 0``.
R2  ``A`` conjugate to ``E_k`` and ``n = 0``: fillable.
R3  ``A`` conjugate to ``E_k`` with ``k < 0`` and ``n >= 2``: not fillable,
    witnessed by ``(I, n - 1)`` followed by one positive surgery.
R4  ``n > n(A)`` for a generator word of ``A``: not fillable, witnessed by
    the word's chain of positive surgeries starting at ``(I, n - n(A))``.
R5  propagation along a supplied chain: negative-coefficient surgery keeps
    fillability, positive-coefficient surgery keeps non-fillability.

Anything else is ``Unknown``; the rule set has real gaps (for instance
``(E_k, 1)`` with ``k < 0``) and they are reported rather than guessed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .raydyn import displacement_range, lift_for
from .sl2z import (
    B, IDENTITY, GeneratorWord, MonodromyMatrix, conjugator_to_Ek,
    decompose_generators,
)
from .surgery import SurgeryChain, SurgeryStep, TightStructure


class Strong(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


PROVENANCE = {
    "R1": "R1 (Eliashberg): zeta_n on the 3-torus is strongly symplectically "
          "fillable if and only if n = 0",
    "R2": "R2: zeta_0 on T(k) = T_{E_k} is strongly symplectically fillable for all k",
    "R3": "R3: zeta_n on T(k) is not strongly symplectically fillable for k <= 0 "
          "and n >= 2 (obtained from (T^3, zeta_{n-1}) by positive contact surgery)",
    "R4": "R4: zeta_n on T_A is not strongly symplectically fillable for n > n(A) "
          "(surgery chain of positive contact surgeries from the 3-torus)",
    "R5": "R5: strong fillability survives contact (-1/k)-surgery with k > 0 and "
          "non-fillability survives it with k < 0",
    "weak": "every zeta_n on a torus bundle is weakly symplectically fillable",
}

TRACE_MINUS_TWO_NOTE = (
    "trace(A) = -2: the zeta_n family does not exhaust the tight contact "
    "structures on T_A; this verdict concerns zeta_n only"
)


@dataclass(frozen=True)
class FillabilityVerdict:
    strong: Strong
    provenance: str = ""
    witness: Optional[SurgeryChain] = None
    rule: Optional[str] = None
    notes: tuple[str, ...] = ()
    weak: bool = True

    def __post_init__(self):
        if not self.weak:
            raise ValueError("zeta_n is always weakly fillable")
        if self.strong is not Strong.UNKNOWN and not self.provenance:
            raise ValueError("a decided verdict needs a provenance")


@dataclass(frozen=True)
class BoundReport:
    """``n(A)`` for one generator word.

    ``chain`` starts at ``(I, 1)`` and ends at ``(A, 1 + n_of_A)``.
    ``stable`` records that the same bound came out for starting twistings
    1 to 4; ``word_dependent`` that the canonical word gives another bound.
    """

    matrix: MonodromyMatrix
    word: GeneratorWord
    n_of_A: int
    chain: SurgeryChain
    word_dependent: bool = False
    stable: bool = True
    increments: tuple[int, ...] = ()


_LETTER_STEP = {"Em1": SurgeryStep(-1), "E1p": SurgeryStep(-1, B)}


def word_steps(word: GeneratorWord) -> list[SurgeryStep]:
    """Steps building ``word.evaluate()`` from ``I``: the last letter first."""
    return [_LETTER_STEP[x] for x in reversed(tuple(word))]


def word_chain(word: GeneratorWord, n_start: int) -> SurgeryChain:
    return SurgeryChain.build(TightStructure(IDENTITY, n_start), word_steps(word))


def _bound(A: MonodromyMatrix, word: GeneratorWord) -> tuple[int, SurgeryChain, bool, tuple[int, ...]]:
    if word.evaluate() != A:
        raise ValueError(f"word {word} does not evaluate to {A}")
    chains = [word_chain(word, n) for n in range(1, 5)]
    totals = {c.end.twisting - c.start.twisting for c in chains}
    c1 = chains[0]
    prev = c1.start.twisting
    inc = []
    for st in c1.states:
        inc.append(st.twisting - prev)
        prev = st.twisting
    return c1.end.twisting - 1, c1, len(totals) == 1, tuple(inc)


def compute_nA(A: MonodromyMatrix, word: Optional[GeneratorWord] = None) -> BoundReport:
    """Twisting bound ``n(A)`` read off the surgery chain of a generator word.

    ``E_-1`` letters are positive surgeries on the fibre Legendrian; ``E_1'``
    letters are the same surgery conjugated by ``B``.  The bound depends on
    the word, not just on ``A``.
    """
    canonical = decompose_generators(A)
    word = canonical if word is None else word
    n, chain, stable, inc = _bound(A, word)
    dependent = False
    if tuple(word) != tuple(canonical):
        dependent = _bound(A, canonical)[0] != n
    return BoundReport(A, word, n, chain, dependent, stable, inc)


def _with_notes(v: FillabilityVerdict, A: MonodromyMatrix) -> FillabilityVerdict:
    if A.trace == -2:
        return FillabilityVerdict(v.strong, v.provenance, v.witness, v.rule,
                                  v.notes + (TRACE_MINUS_TWO_NOTE,))
    return v


def _rules(s: TightStructure, words: Sequence[GeneratorWord]) -> FillabilityVerdict:
    A, n = s.monodromy, s.twisting
    if A == IDENTITY:
        return FillabilityVerdict(Strong.YES if n == 0 else Strong.NO,
                                  PROVENANCE["R1"], rule="R1")
    conj = conjugator_to_Ek(A)
    if conj is not None:
        k, P = conj
        if n == 0:
            return FillabilityVerdict(Strong.YES, PROVENANCE["R2"], rule="R2")
        if k < 0 and n >= 2:
            step = SurgeryStep(k, None if P == IDENTITY else P)
            w = SurgeryChain.build(TightStructure(IDENTITY, n - 1), [step])
            return FillabilityVerdict(Strong.NO, PROVENANCE["R3"], w, rule="R3")
    reports = [compute_nA(A, w) for w in words] or [compute_nA(A)]
    best = min(reports, key=lambda r: r.n_of_A)
    if n > best.n_of_A:
        w = word_chain(best.word, n - best.n_of_A)
        return FillabilityVerdict(Strong.NO, PROVENANCE["R4"], w, rule="R4",
                                  notes=(f"n(A) = {best.n_of_A} for word {best.word}",))
    return FillabilityVerdict(Strong.UNKNOWN)


def classify(s: TightStructure, word: Optional[GeneratorWord] = None,
             words: Iterable[GeneratorWord] = (),
             chain: Optional[SurgeryChain] = None) -> FillabilityVerdict:
    """Fillability verdict for ``s``.

    ``word``/``words`` feed R4 (the smallest bound wins; the canonical word is
    used when none is given).  ``chain`` must end at ``s`` and feeds R5.
    """
    ws = list(words) + ([word] if word is not None else [])
    v = _rules(s, ws)
    if v.strong is Strong.UNKNOWN and chain is not None:
        if chain.end != s:
            raise ValueError("chain does not end at the classified state")
        v = _propagate(chain)
    return _with_notes(v, s.monodromy)


def _propagate(chain: SurgeryChain) -> FillabilityVerdict:
    cur = _rules(chain.start, ())
    for step, st in zip(chain.steps, chain.states):
        if cur.strong is Strong.YES and step.k > 0:
            cur = FillabilityVerdict(Strong.YES, PROVENANCE["R5"], chain, rule="R5")
        elif cur.strong is Strong.NO and step.k < 0:
            cur = FillabilityVerdict(Strong.NO, PROVENANCE["R5"], chain, rule="R5")
        else:
            cur = _rules(st, ())
    return cur


def _chain_json(c: SurgeryChain) -> dict:
    return {
        "start": {"matrix": str(c.start.monodromy), "n": c.start.twisting},
        "steps": [
            {
                "k": st.k,
                "coefficient": str(st.coefficient),
                "conjugator": None if st.conjugator is None else str(st.conjugator),
                "matrix": str(state.monodromy),
                "n": state.twisting,
            }
            for st, state in zip(c.steps, c.states)
        ],
    }


def verdict_report(s: TightStructure, verdict: FillabilityVerdict) -> dict:
    """JSON-ready report for a verdict, with oracle diagnostics."""
    A = s.monodromy
    dr = displacement_range(lift_for(A, s.twisting))
    wit = _chain_json(verdict.witness) if verdict.witness is not None else None
    return {
        "matrix": str(A),
        "n": s.twisting,
        "weak": "yes",
        "strong": verdict.strong.value,
        "rule": verdict.rule,
        "provenance": verdict.provenance,
        "weak_provenance": PROVENANCE["weak"],
        "witness": wit["steps"] if wit else [],
        "witness_start": wit["start"] if wit else None,
        "notes": list(verdict.notes),
        "diagnostics": {
            "d_max_enclosure": list(dr.d_max_enclosure),
            "d_min_enclosure": list(dr.d_min_enclosure),
            "sup_attained": dr.sup_attained,
            "attainment_angles": list(dr.attainment_angles),
        },
    }


__all__ = [
    "Strong", "FillabilityVerdict", "BoundReport", "PROVENANCE",
    "compute_nA", "classify", "verdict_report", "word_chain", "word_steps",
]
