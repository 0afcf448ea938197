from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torusfill.sl2z import (
    B, E1P, EM1, IDENTITY, DeterminantError, E, GeneratorWord, MonodromyMatrix,
    classify_Ek, compose, conjugate, conjugator_to_Ek, decompose_generators,
    eigen_rays, word_length_bound,
)

from .conftest import matrices, words


def M(a, b, c, d):
    return MonodromyMatrix(a, b, c, d)


class TestMatrix:
    def test_parse_roundtrip(self):
        A = MonodromyMatrix.parse(" 2, 1 ; 1, 1 ")
        assert A == M(2, 1, 1, 1)
        assert str(A) == "2,1;1,1"
        assert MonodromyMatrix.parse(str(A)) == A

    @pytest.mark.parametrize("bad", ["1,0,0,1", "1,0;0", "a,b;c,d", "", "1.0,0;0,1"])
    def test_parse_malformed(self, bad):
        with pytest.raises(ValueError):
            MonodromyMatrix.parse(bad)

    def test_determinant_enforced(self):
        with pytest.raises(DeterminantError):
            M(2, 0, 0, 1)
        with pytest.raises(DeterminantError):
            MonodromyMatrix.parse("1,1;1,1")

    def test_integer_entries_only(self):
        with pytest.raises(TypeError):
            M(1.0, 0, 0, 1)

    def test_big_integers_exact(self):
        A = E1P ** 10**30
        assert A == M(1, 10**30, 0, 1)
        assert A @ A.inverse() == IDENTITY

    def test_products_and_powers(self):
        assert compose(E1P, EM1) == E1P @ EM1 == M(0, 1, -1, 1)
        assert E(3) ** -2 == E(-6)
        assert E(2) ** 0 == IDENTITY
        assert -IDENTITY == M(-1, 0, 0, -1)
        assert (-IDENTITY).trace == -2

    def test_B_conjugates_generators(self):
        assert conjugate(E1P, B) == B @ E1P @ B.inverse() == EM1
        assert conjugate(EM1, B.inverse()) == E1P
        assert B @ E(-1) @ B.inverse() == E1P
        assert B ** 4 == IDENTITY and B ** 2 == -IDENTITY

    def test_order_six_relation(self):
        assert (EM1 @ E1P) ** 6 == IDENTITY
        assert (EM1 @ E1P) ** 3 == -IDENTITY
        assert (E1P @ EM1) ** 6 == IDENTITY

    @given(matrices(12), matrices(12))
    def test_group_laws(self, A, C):
        assert (A @ C).inverse() == C.inverse() @ A.inverse()
        assert A @ A.inverse() == IDENTITY
        assert (A @ C).trace == (C @ A).trace


class TestWords:
    def test_parse_and_str(self):
        w = GeneratorWord.parse("Em1, E1p,Em1")
        assert str(w) == "Em1,E1p,Em1" and len(w) == 3
        assert GeneratorWord.parse("") == GeneratorWord(())
        assert w.evaluate() == EM1 @ E1P @ EM1

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            GeneratorWord.parse("Em1,E2")

    def test_empty_word_is_identity(self):
        assert GeneratorWord(()).evaluate() == IDENTITY
        assert decompose_generators(IDENTITY) == GeneratorWord(())

    def test_twelve_letter_identity_word(self):
        assert GeneratorWord(("Em1", "E1p") * 6).evaluate() == IDENTITY

    @pytest.mark.parametrize("k", range(-6, 7))
    def test_Ek_words(self, k):
        w = decompose_generators(E(k))
        assert w.evaluate() == E(k)
        # E_k for k < 0 is a pure E_-1 power; for k > 0 inverses are rewritten
        if k < 0:
            assert tuple(w) == ("Em1",) * (-k)
        else:
            assert len(w) == 11 * k

    @given(words(40))
    def test_decompose_roundtrip(self, w):
        A = w.evaluate()
        d = decompose_generators(A)
        assert d.evaluate() == A
        assert len(d) <= word_length_bound(A)

    def test_decompose_long_word(self, rng):
        w = GeneratorWord(tuple(rng.choice(["Em1", "E1p"]) for _ in range(400)))
        A = w.evaluate()
        assert A.max_abs_entry() > 2**53
        assert decompose_generators(A).evaluate() == A

    def test_negative_identity(self):
        w = decompose_generators(-IDENTITY)
        assert w.evaluate() == -IDENTITY


class TestConjugacy:
    def test_classify_Ek(self):
        assert classify_Ek(E(-4)) == -4
        assert classify_Ek(IDENTITY) == 0
        assert classify_Ek(E1P) is None

    @given(st.integers(-8, 8).filter(bool), matrices(8))
    def test_conjugator_recovers_k(self, k, P):
        A = conjugate(E(k), P)
        found = conjugator_to_Ek(A)
        assert found is not None
        kk, Q = found
        assert kk == k and conjugate(E(kk), Q) == A

    def test_E1p_is_type_minus_one(self):
        k, P = conjugator_to_Ek(E1P)
        assert k == -1 and conjugate(E(-1), P) == E1P

    @pytest.mark.parametrize("A", [M(2, 1, 1, 1), -IDENTITY, M(0, 1, -1, 0), M(-1, 0, 3, -1)])
    def test_not_conjugate(self, A):
        assert conjugator_to_Ek(A) is None

    def test_identity(self):
        assert conjugator_to_Ek(IDENTITY) == (0, IDENTITY)


class TestEigenRays:
    def test_identity(self):
        r = eigen_rays(IDENTITY)
        assert r.every_ray_fixed and r.has_fixed_ray

    def test_parabolic(self):
        r = eigen_rays(E(1))
        assert [x.direction for x in r.rays] == [(0, 1), (0, -1)]
        assert [x.angle for x in r.rays] == [0.0, math.pi]
        assert all(x.eigenvalue == Fraction(1) for x in r.rays)
        assert r.rays[0].angle_tag == "atan2(0,1)"

    @given(st.integers(-6, 6).filter(bool), matrices(6))
    def test_parabolic_rays_fixed(self, k, P):
        A = conjugate(E(k), P)
        r = eigen_rays(A)
        assert len(r.rays) == 2
        for x in r.rays:
            assert A.apply(x.direction) == x.direction

    def test_hyperbolic(self):
        A = M(2, 1, 1, 1)
        r = eigen_rays(A)
        assert not r.has_fixed_ray and r.fixed_rays_exist_irrational
        assert len(r.irrational_angles) == 4 and r.discriminant == 5
        for th in r.irrational_angles:
            x, y = math.sin(th), math.cos(th)
            xp, yp = A.a * x + A.b * y, A.c * x + A.d * y
            assert abs(x * yp - y * xp) < 1e-12 and x * xp + y * yp > 0

    @pytest.mark.parametrize("A", [M(0, 1, -1, 0), M(1, 1, -1, 0), -IDENTITY, M(-3, 1, -1, 0)])
    def test_no_fixed_rays(self, A):
        r = eigen_rays(A)
        assert not r.has_fixed_ray and not r.fixed_rays_exist_irrational
