from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusfill import surgery
from torusfill.sl2z import B, E, E1P, IDENTITY, MonodromyMatrix, classify_Ek, conjugate
from torusfill.surgery import (
    InvalidTwisting, NotInImage, SurgeryChain, SurgeryError, SurgeryStep,
    TableMismatch, TightStructure, apply_step, expand_to_unit_steps,
    invert_step, parse_chain, simplify_chain, table_twisting,
)

from .conftest import matrices

T = TightStructure
KS = [1, -1, 2, -2, 3, -3]
GRID = list(itertools.product(KS, range(-6, 7), range(1, 5)))


class TestTypes:
    def test_negative_twisting_rejected(self):
        with pytest.raises(InvalidTwisting):
            T(IDENTITY, -1)

    def test_zero_step_rejected(self):
        with pytest.raises(SurgeryError):
            SurgeryStep(0)

    def test_coefficient_and_factor(self):
        s = SurgeryStep(3)
        assert s.coefficient == Fraction(-1, 3) and s.factor == E(3)
        assert SurgeryStep(-2).coefficient == Fraction(1, 2)
        assert SurgeryStep(-1, B).factor == E1P
        assert SurgeryStep(2, B).inverse() == SurgeryStep(-2, B)


class TestApply:
    def test_examples(self):
        assert apply_step(T(E(-1), 3), 1) == T(IDENTITY, 2)
        assert apply_step(T(IDENTITY, 1), -1) == T(E(-1), 2)
        assert apply_step(T(E(5), 4), 2) == T(E(7), 4)

    @pytest.mark.parametrize("k,l,n0", GRID)
    def test_table_grid(self, k, l, n0):
        s = apply_step(T(E(l), n0), k)
        assert s.monodromy == E(k) @ E(l)
        assert s.twisting == table_twisting(k, l, n0)

    @given(matrices(10), st.sampled_from(KS), st.integers(1, 4))
    @settings(max_examples=80)
    def test_monodromy_law_and_range(self, A, k, n0):
        s = apply_step(T(A, n0), k)
        assert s.monodromy == E(k) @ A
        allowed = {n0 - 1, n0} if k > 0 else {n0, n0 + 1}
        assert s.twisting in allowed

    @given(matrices(10), st.sampled_from(KS))
    @settings(max_examples=60)
    def test_increment_independent_of_n0(self, A, k):
        incs = {apply_step(T(A, n0), k).twisting - n0 for n0 in range(1, 5)}
        assert len(incs) == 1

    def test_zero_twisting_extension(self):
        assert apply_step(T(IDENTITY, 0), 2) == T(E(2), 0)
        with pytest.raises(InvalidTwisting):
            apply_step(T(IDENTITY, 0), -1)
        with pytest.raises(InvalidTwisting):
            apply_step(T(E(1), 0), 1)

    @given(matrices(8), matrices(6), st.sampled_from(KS), st.integers(1, 4))
    @settings(max_examples=40)
    def test_conjugated_step(self, A, P, k, n0):
        # a step conjugated by P acts like the plain step on P^-1 A P
        s = apply_step(T(A, n0), SurgeryStep(k, P))
        plain = apply_step(T(conjugate(A, P.inverse()), n0), k)
        assert s.monodromy == conjugate(E(k), P) @ A
        assert s.twisting == plain.twisting

    def test_table_mismatch_detected(self, monkeypatch):
        monkeypatch.setattr(surgery, "table_twisting", lambda k, l, n0: n0 + 7)
        with pytest.raises(TableMismatch):
            apply_step(T(E(2), 1), 1)


class TestInvert:
    def test_examples(self):
        assert invert_step(T(IDENTITY, 2), 1) == T(E(-1), 3)
        assert invert_step(T(E(-1), 2), -1) == T(IDENTITY, 1)

    @pytest.mark.parametrize("k,l,n0", GRID)
    def test_roundtrip_grid(self, k, l, n0):
        s = T(E(l), n0)
        assert invert_step(apply_step(s, k), k) == s

    @given(matrices(10), st.sampled_from(KS), st.integers(1, 4))
    @settings(max_examples=60)
    def test_roundtrip_random(self, A, k, n0):
        s = T(A, n0)
        assert invert_step(apply_step(s, k), k) == s

    def test_not_in_image(self):
        # (E_-1, 1) would need (I, 0) before a k = -1 step
        with pytest.raises(NotInImage):
            invert_step(T(E(-1), 1), -1)
        # k > 0 never raises the twisting, so (E_1, 0) needs (I, 0): allowed
        assert invert_step(T(E(1), 0), 1) == T(IDENTITY, 0)


class TestChains:
    def test_expand(self):
        assert [s.k for s in expand_to_unit_steps(3)] == [1, 1, 1]
        assert all(s.coefficient == -1 for s in expand_to_unit_steps(3))
        assert [s.coefficient for s in expand_to_unit_steps(-2)] == [1, 1]
        assert [s.k for s in expand_to_unit_steps(1)] == [1]
        with pytest.raises(SurgeryError):
            expand_to_unit_steps(0)

    @pytest.mark.parametrize("k", [1, 2, 3, -1, -2, -3])
    @pytest.mark.parametrize("l", [-3, 0, 2])
    def test_expansion_has_same_endpoint(self, k, l):
        start = T(E(l), 3)
        c = SurgeryChain.build(start, expand_to_unit_steps(k))
        assert c.end == apply_step(start, k)

    def test_states_follow(self):
        c = SurgeryChain.build(T(E(-1), 3), [1, -2])
        assert c.states == (T(IDENTITY, 2), T(E(-2), 3))
        c.validate()
        bad = SurgeryChain(c.start, c.steps, (T(IDENTITY, 2), T(E(-2), 4)))
        with pytest.raises(SurgeryError):
            bad.validate()

    def test_simplify_examples(self):
        s = T(IDENTITY, 2)
        assert simplify_chain(SurgeryChain.build(s, [1, -1])).steps == ()
        out = simplify_chain(SurgeryChain.build(s, [2, -2, 3]))
        assert [x.k for x in out.steps] == [3]
        reduced = SurgeryChain.build(s, [1, 2, -3])
        assert simplify_chain(reduced) is reduced

    @given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8))
    @settings(max_examples=40)
    def test_simplify_preserves_endpoints(self, ks):
        c = SurgeryChain.build(T(E(-2), 3), ks)
        out = simplify_chain(c)
        assert out.start == c.start and out.end == c.end
        assert all(a != b.inverse() for a, b in zip(out.steps, out.steps[1:]))

    def test_parse_chain(self):
        c = parse_chain("1,0;-1,1 n=3 steps=1,-2")
        assert c.start == T(E(-1), 3) and [s.k for s in c.steps] == [1, -2]
        assert str(c) == "1,0;-1,1 n=3 steps=1,-2"
        assert parse_chain("1,0;0,1 n=1 steps=").steps == ()
        for bad in ("1,0;0,1 steps=1", "1,0;0,1 n=1 steps=0", "x n=1 steps=1"):
            with pytest.raises(ValueError):
                parse_chain(bad)


def test_oracle_only_territory_is_flagged_by_type():
    # non-E_l monodromy: the table is not consulted, the oracle decides
    A = MonodromyMatrix(2, 1, 1, 1)
    assert classify_Ek(A) is None
    assert apply_step(T(A, 2), 1).twisting in (1, 2)
