"""切断冪級数と Aut⁺ₙO のテスト"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.jetgroup import (
    AutJet,
    TruncSeries,
    aut_inverse,
    aut_mul,
    aut_power,
    compose,
    conjugate_by_scaling,
    decompose,
    is_unipotent,
    kernel_element,
    kernel_witness,
    project,
    recompose,
    scaling,
    series_derive,
    series_mul,
)
from src.algebra.rings import QQ_RING
from src.errors import CompositionDomainError, NonUnitError, OrderError, RingMismatchError
from src.models import UnipotentPart
from tests.strategies import LAURENT, aut_tuples, auts, elements, unipotent_auts

Q = QQ_RING


def jet(*coeffs, order=3) -> AutJet:
    return AutJet.create(Q, [Fraction(c) for c in coeffs], order)


# ============================================================
# 切断冪級数
# ============================================================

class TestTruncSeries:
    def test_product_truncates_to_smaller_order(self):
        a = TruncSeries.create(Q, [1, 1], 4)
        b = TruncSeries.create(Q, [1, 1], 3)
        assert series_mul(a, b).coeffs == (1, 2, 1)

    def test_derivative_lowers_order(self):
        a = TruncSeries.create(Q, [5, 1, 3, 2])
        assert series_derive(a).coeffs == (1, 6, 6)

    def test_compose_examples(self):
        f = TruncSeries.create(Q, [0, 1, 1], 4)
        g = TruncSeries.create(Q, [0, 2], 4)
        # f(2z) = 2z + 4z²
        assert compose(f, g).coeffs == (0, 2, 4, 0)
        # g(f(z)) = 2z + 2z²
        assert compose(g, f).coeffs == (0, 2, 2, 0)

    def test_compose_needs_zero_constant_term(self):
        f = TruncSeries.create(Q, [0, 1], 3)
        g = TruncSeries.create(Q, [1, 1], 3)
        with pytest.raises(CompositionDomainError):
            compose(f, g)

    def test_too_many_coefficients(self):
        with pytest.raises(OrderError):
            TruncSeries.create(Q, [0, 1, 2, 3], 3)

    def test_ring_mismatch(self, laurent):
        a = TruncSeries.create(Q, [0, 1], 3)
        b = TruncSeries.create(laurent, [0, 1], 3)
        with pytest.raises(RingMismatchError):
            series_mul(a, b)

    def test_str(self):
        assert str(TruncSeries.create(Q, [0, 2, Fraction(-1, 2)])) == "2z - 1/2·z²"
        assert str(TruncSeries.create(Q, [0, 0, 0])) == "0"


# ============================================================
# 群演算
# ============================================================

class TestAutJet:
    def test_linear_coefficient_must_be_unit(self):
        with pytest.raises(NonUnitError):
            jet(0, 0, 1)

    def test_constant_term_must_vanish(self):
        with pytest.raises(CompositionDomainError):
            jet(1, 1)

    def test_order_one_is_rejected(self):
        with pytest.raises(OrderError):
            AutJet.create(Q, [0], 1)

    def test_non_unit_over_laurent(self, laurent):
        with pytest.raises(NonUnitError):
            AutJet.create(laurent, [0, laurent.element([1, 1])], 3)

    def test_mul_is_reversed_composition(self):
        tau = jet(0, 1, 1)
        lam = jet(0, 2)
        assert str(aut_mul(tau, lam)) == "2z + 2z²"
        assert str(aut_mul(lam, tau)) == "2z + 4z²"

    def test_mul_order_mismatch(self):
        with pytest.raises(OrderError):
            aut_mul(jet(0, 1, order=3), jet(0, 1, order=4))

    def test_inverse_examples(self):
        assert str(aut_inverse(jet(0, 2))) == "1/2·z"
        assert str(aut_inverse(jet(0, 1, 1))) == "z - z²"
        assert str(aut_inverse(jet(0, 1, 1, order=4))) == "z - z² + 2z³"

    def test_identity_is_neutral(self):
        tau = jet(0, 3, -1, 2, order=4)
        e = AutJet.identity(Q, 4)
        assert aut_mul(e, tau) == tau
        assert aut_mul(tau, e) == tau

    def test_power(self):
        tau = jet(0, 1, 1)
        assert aut_power(tau, 3) == jet(0, 1, 3)
        assert aut_power(tau, -1) == aut_inverse(tau)
        assert aut_power(tau, 0) == AutJet.identity(Q, 3)

    def test_project(self):
        tau = jet(0, 1, 1, 1, order=4)
        assert str(project(tau, 3)) == "z + z²"
        assert project(tau, 4) == tau
        with pytest.raises(OrderError):
            project(tau, 5)
        with pytest.raises(OrderError):
            project(tau, 1)

    @settings(max_examples=20)
    @given(a=auts(Q, 6), b=auts(Q, 6))
    def test_project_is_homomorphism(self, a, b):
        assert project(aut_mul(a, b), 4) == aut_mul(project(a, 4), project(b, 4))

    def test_laurent_coefficients(self, laurent):
        t = laurent.variable_element()
        tau = AutJet.create(laurent, [0, 2 * t, 1], 3)
        assert str(aut_inverse(tau)) == "1/(2t)·z - 1/(8t³)·z²"


def assert_group_axioms(a: AutJet, b: AutJet, c: AutJet) -> None:
    e = AutJet.identity(a.ring, a.order)
    assert aut_mul(aut_mul(a, b), c) == aut_mul(a, aut_mul(b, c))
    assert aut_mul(a, e) == a == aut_mul(e, a)
    inv = aut_inverse(a)
    assert aut_mul(a, inv) == e
    assert aut_mul(inv, a) == e


@settings(max_examples=40)
@given(triple=aut_tuples(Q, range(2, 9)))
def test_group_axioms_over_q(triple):
    """結合律・単位元・逆元を ℚ 係数で確認"""
    assert_group_axioms(*triple)


@settings(max_examples=15)
@given(triple=aut_tuples(LAURENT, [2, 3, 5]))
def test_group_axioms_over_laurent(triple):
    assert_group_axioms(*triple)


@pytest.mark.slow
@pytest.mark.parametrize("ring", [Q, LAURENT], ids=["QQ", "laurent"])
@pytest.mark.parametrize("order", range(2, 9))
def test_group_axioms_sweep(ring, order):
    """各次数・各係数環で 200 例"""

    @settings(max_examples=200)
    @given(triple=aut_tuples(ring, [order]))
    def check(triple):
        assert_group_axioms(*triple)

    check()


@settings(max_examples=20)
@given(tau=auts(LAURENT, 8))
def test_inverse_at_high_order(tau):
    """次数 8 の逆元は両側逆元"""
    e = AutJet.identity(LAURENT, 8)
    inv = aut_inverse(tau)
    assert aut_mul(tau, inv) == e
    assert aut_inverse(inv) == tau


# ============================================================
# 半直積分解と核
# ============================================================

class TestDecompose:
    def test_example(self):
        gm, u = decompose(jet(0, 2, 4))
        assert gm.unit == 2
        assert str(u.jet) == "z + z²"

    @settings(max_examples=20)
    @given(tau=st.one_of(auts(Q, 3), auts(Q, 5), auts(LAURENT, 4)))
    def test_recompose_round_trip(self, tau):
        gm, u = decompose(tau)
        assert is_unipotent(u.jet)
        assert recompose(gm, u) == tau

    def test_recompose_rejects_non_unipotent(self):
        gm, _ = decompose(jet(0, 2, 4))
        with pytest.raises(NonUnitError):
            recompose(gm, UnipotentPart(jet(0, 3)))

    @settings(max_examples=10)
    @given(u=unipotent_auts(Q, 5))
    def test_scaling_normalizes_unipotent(self, u):
        assert is_unipotent(conjugate_by_scaling(Fraction(3), u))

    def test_scaling_is_homomorphism(self):
        assert aut_mul(scaling(Q, 2, 4), scaling(Q, 3, 4)) == scaling(Q, 6, 4)


class TestKernel:
    def test_witness(self):
        assert kernel_witness(jet(0, 1, 0, 5, order=4)) == 5
        assert kernel_witness(jet(0, 1, 1, 5, order=4)) is None
        assert kernel_witness(jet(0, 2, 0, 5, order=4)) is None

    def test_witness_needs_order_three(self):
        with pytest.raises(OrderError):
            kernel_witness(jet(0, 1, order=2))

    def test_kernel_is_additive(self):
        """(z + a·zⁿ)·(z + b·zⁿ) = z + (a+b)·zⁿ"""
        for n in (2, 3, 5):
            a = kernel_element(Q, Fraction(2), n)
            b = kernel_element(Q, Fraction(-7, 3), n)
            assert kernel_witness(aut_mul(a, b)) == Fraction(-1, 3)

    def test_kernel_projects_to_identity(self):
        k = kernel_element(Q, 4, 4)
        assert project(k, 4) == AutJet.identity(Q, 4)

    @settings(max_examples=10)
    @given(u=unipotent_auts(Q, 5))
    def test_kernel_is_central(self, u):
        k = kernel_element(Q, 3, 4)
        assert aut_mul(k, u) == aut_mul(u, k)


@pytest.mark.slow
@settings(max_examples=200)
@given(tau=st.one_of([auts(ring, n) for ring in (Q, LAURENT) for n in range(2, 9)]))
def test_recompose_sweep(tau):
    gm, u = decompose(tau)
    assert recompose(gm, u) == tau


@pytest.mark.slow
@settings(max_examples=200)
@given(n=st.integers(2, 5), c1=elements(LAURENT, 2), c2=elements(LAURENT, 2))
def test_kernel_additivity_sweep(n, c1, c2):
    """次数 3〜6 で ker π ≅ 𝔾_a"""
    product = aut_mul(kernel_element(LAURENT, c1, n), kernel_element(LAURENT, c2, n))
    assert kernel_witness(product) == c1 + c2
