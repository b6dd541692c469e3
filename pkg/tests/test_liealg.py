"""リー環の実現・主 sl₂ 三つ組・トーラス元・r のテスト"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.jetgroup import AutJet, aut_mul
from src.algebra.liealg import (
    GroupElement,
    LieRealization,
    b2ad_to_jet3,
    build_sl,
    exp_e,
    exp_nilpotent,
    jet3_to_b2ad,
    r_map,
    rho_check,
    torus_element,
)
from src.algebra.matrices import commutator, elementary, mat_add, mat_diagonal, mat_identity, mat_scale, mat_zero
from src.algebra.rings import QQ_RING
from src.errors import NotInAlgebraError, OrderError, RealizationError
from src.models import B2AdElement
from src.utils import io
from tests.strategies import LAURENT, auts, b2ad_elements, elements, rationals, units

Q = QQ_RING


def b2(a, b) -> B2AdElement:
    return B2AdElement(Q, Fraction(a), Fraction(b))


# ============================================================
# 標準実現 sl_n
# ============================================================

class TestBuildSl:
    def test_sl2(self, sl2):
        assert sl2.dimension == 3
        assert sl2.rank == 1
        assert sl2.e0 == elementary(2, 0, 1)
        assert sl2.f0 == elementary(2, 1, 0)
        assert sl2.exponents == (1,)

    def test_sl3_principal_triple(self, sl3):
        expected = [[0, 2, 0], [0, 0, 2], [0, 0, 0]]
        assert [[int(x) for x in row] for row in sl3.e0] == expected
        assert sl3.exponents == (1, 2)
        assert sl3.top_degree == 2

    def test_sl1_rejected(self):
        with pytest.raises(OrderError):
            build_sl(1)

    def test_describe(self, sl2):
        text = sl2.describe()
        assert "lie: sl2 (size 2, dim 3, rank 1)" in text
        assert "exponents: 1" in text


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
class TestPrincipalStructure:
    def test_triple_relations(self, n):
        lie = build_sl(n)
        assert commutator(Q, lie.h0, lie.e0) == mat_scale(Fraction(2), lie.e0)
        assert commutator(Q, lie.h0, lie.f0) == mat_scale(Fraction(-2), lie.f0)
        assert commutator(Q, lie.e0, lie.f0) == lie.h0

    def test_kostant_decomposition(self, n):
        lie = build_sl(n)
        assert lie.kostant_rank() == lie.dimension
        assert lie.exponents == tuple(range(1, n))
        assert len(lie.vcan) == lie.rank

    def test_ad_f0_injective_on_positive_part(self, n):
        lie = build_sl(n)
        for deg in range(1, lie.top_degree + 1):
            assert lie.ad_f0_injective(deg)

    def test_vcan_is_highest_weight(self, n):
        lie = build_sl(n)
        for v in lie.vcan:
            assert all(x == 0 for row in commutator(Q, lie.e0, v) for x in row)

    def test_rho_check_scales_grading(self, n):
        """Ad ρ̌(a) は次数 k の元を a^k 倍する"""
        lie = build_sl(n)
        g = rho_check(lie, Q, Fraction(3))
        for deg, piece in lie.graded.items():
            for x in piece:
                assert g.adjoint(x) == mat_scale(Fraction(3) ** deg, x)

    def test_rho_check_is_diagonal_power(self, n):
        lie = build_sl(n)
        g = rho_check(lie, Q, Fraction(2))
        assert g == GroupElement.create(Q, mat_diagonal(Q, [Fraction(2) ** (n - 1 - i) for i in range(n)]))


# ============================================================
# 座標と次数分解
# ============================================================

class TestCoordinates:
    def test_identity_is_not_in_sl(self, sl2):
        with pytest.raises(NotInAlgebraError):
            sl2.coordinates(mat_identity(Q, 2))
        assert not sl2.in_algebra(mat_identity(Q, 2))

    @settings(max_examples=10)
    @given(coords=st.lists(rationals(), min_size=8, max_size=8))
    def test_element_round_trip(self, sl3, coords):
        assert sl3.coordinates(sl3.element(coords)) == coords

    def test_grading_decompose_of_f0(self, sl3):
        assert list(sl3.grading_decompose(sl3.f0)) == [-1]

    @settings(max_examples=10)
    @given(coords=st.lists(rationals(nonzero=True), min_size=8, max_size=8))
    def test_grading_decompose(self, sl3, coords):
        x = sl3.element(coords)
        total = mat_zero(Q, 3)
        for part in sl3.grading_decompose(x).values():
            total = mat_add(total, part)
        assert total == x

    def test_split_sl2_degree_zero(self, sl2, laurent):
        """𝔤₀ = ad f₀(𝔤₁)（V_can₀ = 0）"""
        t = laurent.variable_element()
        y, v = sl2.split(0, [t], laurent)
        assert v == []
        assert y == [-t]

    def test_in_borel(self, sl2, sl3):
        assert sl2.in_borel(rho_check(sl2, Q, 5))
        assert sl3.in_borel(exp_e(sl3, Q, 2))
        assert not sl2.in_borel(exp_nilpotent(Q, sl2.f0))


# ============================================================
# 利用者定義の実現
# ============================================================

class TestCustomRealization:
    def test_sl2_plus_trivial(self):
        lie = io.parse_lie("sl2_trivial.json", io.SAMPLES_DIR)
        assert lie.label == "sl2+trivial"
        assert lie.size == 3
        assert lie.exponents == (1,)

    def test_broken_realization_reports_all_failures(self):
        with pytest.raises(RealizationError) as info:
            io.parse_lie("broken_realization.json", io.SAMPLES_DIR)
        assert len(info.value.failures) >= 2

    def test_dependent_basis(self):
        e = [[0, 1], [0, 0]]
        with pytest.raises(RealizationError):
            LieRealization.from_chevalley(2, [e, e], [0], [1], [0])


# ============================================================
# 群の元
# ============================================================

class TestGroupElement:
    def test_equality_up_to_scalar(self, sl2, laurent):
        g = exp_e(sl2, Q, 3)
        assert GroupElement.create(Q, mat_scale(Fraction(2), g.matrix)) == g
        t = laurent.variable_element()
        h = GroupElement.create(laurent, g.matrix)
        assert GroupElement.create(laurent, mat_scale(t, h.matrix)) == h
        assert exp_e(sl2, Q, 1) != exp_e(sl2, Q, 2)

    def test_inverse(self, sl3):
        g = exp_e(sl3, Q, 5) * rho_check(sl3, Q, Fraction(-2))
        assert g * g.inverse() == GroupElement.identity(Q, 3)

    def test_format_is_normalized(self, sl2):
        g = GroupElement.create(Q, [[4, 6], [0, 2]])
        assert str(g) == "[[2, 3], [0, 1]]"

    @settings(max_examples=5)
    @given(a=elements(LAURENT), b=elements(LAURENT))
    def test_exp_e_is_additive(self, sl3, a, b):
        assert exp_e(sl3, LAURENT, a) * exp_e(sl3, LAURENT, b) == exp_e(sl3, LAURENT, a + b)

    def test_exp_e_sl2(self, sl2):
        assert exp_e(sl2, Q, 7).matrix == ((1, 7), (0, 1))

    def test_exp_of_non_nilpotent(self):
        with pytest.raises(NotInAlgebraError):
            exp_nilpotent(Q, ((1, 0), (0, -1)))

    @settings(max_examples=5)
    @given(values=st.lists(units(LAURENT), min_size=2, max_size=2))
    def test_torus_element_scales_simple_roots(self, sl3, values):
        g = torus_element(sl3, LAURENT, values)
        for u, fi in zip(values, sl3.f):
            expected = tuple(tuple(LAURENT.inverse(u) * x for x in row) for row in fi)
            assert g.adjoint(fi) == expected


# ============================================================
# (B₂)_ad と r
# ============================================================

class TestR:
    def test_sl2_shape(self, sl2):
        assert r_map(sl2, b2(2, 3)).matrix == ((2, 3), (0, 1))

    def test_identity(self, sl3):
        assert r_map(sl3, B2AdElement.identity(Q)) == GroupElement.identity(Q, 3)

    @settings(max_examples=20)
    @given(n=st.integers(2, 4), g=b2ad_elements(Q), h=b2ad_elements(Q))
    def test_homomorphism(self, n, g, h):
        lie = build_sl(n)
        assert r_map(lie, g * h) == r_map(lie, g) * r_map(lie, h)

    @settings(max_examples=5)
    @given(g=b2ad_elements(LAURENT), h=b2ad_elements(LAURENT))
    def test_homomorphism_over_laurent(self, sl3, g, h):
        assert r_map(sl3, g * h) == r_map(sl3, g) * r_map(sl3, h)

    def test_image_in_borel(self, sl3):
        assert sl3.in_borel(r_map(sl3, b2(-2, 5)))


class TestJet3ToB2ad:
    def test_example(self):
        g = jet3_to_b2ad(AutJet.create(Q, [0, 2, 6], 3))
        assert (g.a, g.b) == (2, 3)

    @settings(max_examples=10)
    @given(tau=auts(Q, 3))
    def test_round_trip(self, tau):
        assert b2ad_to_jet3(jet3_to_b2ad(tau)) == tau

    def test_needs_order_three(self):
        with pytest.raises(OrderError):
            jet3_to_b2ad(AutJet.create(Q, [0, 1, 1, 1], 4))

    @settings(max_examples=20)
    @given(pair=st.one_of(st.tuples(auts(Q, 3), auts(Q, 3)), st.tuples(auts(LAURENT, 3), auts(LAURENT, 3))))
    def test_homomorphism(self, pair):
        a, b = pair
        lhs = jet3_to_b2ad(aut_mul(a, b))
        rhs = jet3_to_b2ad(a) * jet3_to_b2ad(b)
        assert (lhs.a, lhs.b) == (rhs.a, rhs.b)
