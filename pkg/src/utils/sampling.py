"""乱数サンプル生成（受け入れスクリプト・サンプル生成用）

すべて random.Random を引数で受け取るので、シードを固定すれば再現できる。
チャート環は ℚ[t, 1/t] を想定（単元は c·t^k）。
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any

from src.algebra.curve import Chart, LocalizedRing, RationalFunction
from src.algebra.jetgroup import AutJet
from src.algebra.liealg import GroupElement, LieRealization, exp_nilpotent
from src.algebra.matrices import mat_add, mat_scale, mat_zero
from src.algebra.oper import CanonicalOper, OperConnection
from src.algebra.rings import QQ_RING, CoefficientRing

# 係数の範囲
COEFF_BOUND = 5


def laurent_chart(variable: str = "t") -> Chart:
    """ℚ[t, 1/t]"""
    return Chart.create(LocalizedRing.create(variable, [0, 1]))


def random_rational(rng: random.Random, bound: int = COEFF_BOUND, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if value != 0 or not nonzero:
            return value


def random_unit(rng: random.Random, ring: CoefficientRing) -> Any:
    """ℚ なら非零有理数、ℚ[t, 1/t] なら c·t^k"""
    c = random_rational(rng, nonzero=True)
    if ring == QQ_RING:
        return c
    k = rng.randint(-2, 2)
    if k >= 0:
        return ring.element([0] * k + [c])
    return ring.element([c], [0] * (-k) + [1])


def random_laurent(rng: random.Random, ring: LocalizedRing, degree: int = 3) -> RationalFunction:
    """Σ_{|k| ≤ degree} c_k t^k（係数の半分程度は 0）"""
    low = rng.randint(0, degree)
    high = rng.randint(0, degree)
    coeffs = [random_rational(rng) if rng.random() < 0.6 else Fraction(0) for _ in range(low + high + 1)]
    return ring.element(coeffs, [0] * low + [1])


def random_element(rng: random.Random, ring: CoefficientRing, degree: int = 3) -> Any:
    if ring == QQ_RING:
        return random_rational(rng)
    return random_laurent(rng, ring, degree)


def random_aut(rng: random.Random, ring: CoefficientRing, order: int) -> AutJet:
    coeffs = [ring.zero(), random_unit(rng, ring)]
    coeffs += [random_element(rng, ring, 2) for _ in range(order - 2)]
    return AutJet.create(ring, coeffs, order)


def random_coordinate(rng: random.Random, ring: LocalizedRing) -> RationalFunction:
    """a·t^k + b（k ≠ 0）。微分 a·k·t^{k−1} は単元"""
    a = random_rational(rng, nonzero=True)
    b = random_rational(rng)
    k = rng.choice([-3, -2, -1, 1, 2, 3])
    if k > 0:
        return ring.element([b] + [0] * (k - 1) + [a])
    return ring.element([a], [0] * (-k) + [1]) + b


def random_mobius(rng: random.Random, ring: LocalizedRing) -> RationalFunction:
    """(a·t + b)/(c·t) または (a·t + b)/d（ad − bc ≠ 0）。ℚ[t, 1/t] の座標になる形のみ"""
    a = random_rational(rng)
    b = random_rational(rng, nonzero=True)
    if rng.random() < 0.5:
        c = random_rational(rng, nonzero=True)
        return ring.element([b, a], [0, c])
    a = random_rational(rng, nonzero=True)
    d = random_rational(rng, nonzero=True)
    return ring.element([b, a]) * (1 / d)


# ============================================================
# oper・ゲージ元
# ============================================================

def random_oper(rng: random.Random, lie: LieRealization, chart: Chart, coordinate: str = "t", degree: int = 3) -> OperConnection:
    """Σ u_i f_i + (𝔤_{≥0} の乱数元)。u_i は単元"""
    ring = chart.ring
    matrix = mat_zero(ring, lie.size)
    for fi in lie.f:
        matrix = mat_add(matrix, mat_scale(random_unit(rng, ring), fi))
    for deg, piece in lie.graded.items():
        if deg < 0:
            continue
        for x in piece:
            if rng.random() < 0.7:
                matrix = mat_add(matrix, mat_scale(random_laurent(rng, ring, degree), x))
    return OperConnection.create(lie, chart, coordinate, matrix)


def random_canonical(rng: random.Random, lie: LieRealization, chart: Chart, coordinate: str = "t", degree: int = 3) -> CanonicalOper:
    values = [random_laurent(rng, chart.ring, degree) for _ in range(lie.rank)]
    return CanonicalOper.create(lie, chart, coordinate, values)


def random_unipotent_gauge(rng: random.Random, lie: LieRealization, ring: CoefficientRing, degree: int = 2) -> GroupElement:
    """exp(𝔤_{>0} の乱数元)"""
    y = mat_zero(ring, lie.size)
    for deg, piece in lie.graded.items():
        if deg <= 0:
            continue
        for x in piece:
            y = mat_add(y, mat_scale(random_element(rng, ring, degree), x))
    return exp_nilpotent(ring, y)
