"""切断冪級数と群 Aut⁺ₙO

TruncSeries は O_R/𝔪_R^n の元 c₀ + c₁z + … + c_{n-1}z^{n-1}。
AutJet はさらに ρ₀ = 0, ρ₁ ∈ R* を満たすもの（Aut⁺ₙO(R) の元）。

群演算は τ₁·τ₂ = τ₂(τ₁(z))（関数合成とは逆順）。
演算結果の次数は入力の最小次数。自動で次数を伸ばすことはしない。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from src.algebra.rings import QQ_RING, CoefficientRing, is_scalar
from src.errors import CompositionDomainError, NonUnitError, OrderError, RingMismatchError
from src.models import GmPart, UnipotentPart
from src.utils.render import format_series


# ============================================================
# 切断冪級数
# ============================================================

@dataclass(frozen=True)
class TruncSeries:
    """次数 n の切断冪級数（係数は低次から）"""

    ring: CoefficientRing
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise OrderError("truncation order must be positive")

    @classmethod
    def create(cls, ring: CoefficientRing, coeffs: Iterable[Any], order: int | None = None) -> "TruncSeries":
        """係数列から生成。order を指定すると 0 埋め（長すぎれば OrderError）"""
        values = [ring.coerce(c) for c in coeffs]
        if order is not None:
            if order < 1:
                raise OrderError(f"truncation order must be positive, got {order}")
            if len(values) > order:
                raise OrderError(f"{len(values)} coefficients do not fit in order {order}")
            values += [ring.zero()] * (order - len(values))
        return cls(ring, tuple(values))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def coefficient(self, k: int) -> Any:
        return self.coeffs[k] if k < self.order else self.ring.zero()

    def truncate(self, order: int) -> "TruncSeries":
        if not 1 <= order <= self.order:
            raise OrderError(f"cannot truncate order {self.order} series to order {order}")
        return TruncSeries(self.ring, self.coeffs[:order])

    def map_coeffs(self, ring: CoefficientRing, func) -> "TruncSeries":
        """係数ごとに環準同型を適用（点での評価など）"""
        return TruncSeries(ring, tuple(ring.coerce(func(c)) for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return series_add(self, other)

    def __mul__(self, other: Any) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    def __rmul__(self, other: Any) -> "TruncSeries":
        return series_scale(self, other)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.ring, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return series_add(self, -other)

    def __str__(self) -> str:
        return format_series(
            [(k, self.ring.format(c)) for k, c in enumerate(self.coeffs) if not self.ring.is_zero(c)]
        )


def _check_rings(a: TruncSeries, b: TruncSeries) -> CoefficientRing:
    if a.ring != b.ring:
        raise RingMismatchError(f"coefficient rings differ: {a.ring.name} vs {b.ring.name}")
    return a.ring


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """係数ごとの和（次数は小さい方）"""
    ring = _check_rings(a, b)
    n = min(a.order, b.order)
    return TruncSeries(ring, tuple(a.coeffs[k] + b.coeffs[k] for k in range(n)))


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """コーシー積（次数は小さい方）"""
    ring = _check_rings(a, b)
    n = min(a.order, b.order)
    out = []
    for k in range(n):
        acc = ring.zero()
        for i in range(k + 1):
            acc = acc + a.coeffs[i] * b.coeffs[k - i]
        out.append(acc)
    return TruncSeries(ring, tuple(out))


def series_scale(a: TruncSeries, c: Any) -> TruncSeries:
    """スカラー倍（c は係数環の元または有理数）"""
    if not (is_scalar(c) or a.ring.contains(c)):
        raise RingMismatchError(f"scalar {c!r} is not in {a.ring.name}")
    c = a.ring.coerce(c)
    return TruncSeries(a.ring, tuple(c * x for x in a.coeffs))


def series_derive(a: TruncSeries) -> TruncSeries:
    """形式微分 d/dz。次数は 1 下がる"""
    if a.order < 2:
        raise OrderError("derivative of an order 1 series has order 0")
    return TruncSeries(a.ring, tuple((k + 1) * a.coeffs[k + 1] for k in range(a.order - 1)))


def compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g(z)) を共通次数で。g の定数項は 0 でなければならない"""
    ring = _check_rings(f, g)
    if not ring.is_zero(g.coeffs[0]):
        raise CompositionDomainError("inner series must have zero constant term")
    n = min(f.order, g.order)
    g = g.truncate(n)
    # ホーナー法: (((f_{n-1})g + f_{n-2})g + …) + f_0
    result = TruncSeries.create(ring, [f.coeffs[n - 1]], n)
    for k in range(n - 2, -1, -1):
        result = series_mul(result, g)
        result = TruncSeries(ring, (result.coeffs[0] + f.coeffs[k],) + result.coeffs[1:])
    return result


# ============================================================
# Aut⁺ₙO
# ============================================================

@dataclass(frozen=True)
class AutJet:
    """Aut⁺ₙO(R) の元 ρ₁z + … + ρ_{n-1}z^{n-1}（ρ₁ は単元）"""

    series: TruncSeries

    def __post_init__(self):
        s = self.series
        if s.order < 2:
            raise OrderError(f"Aut⁺ₙO needs order ≥ 2, got {s.order}")
        if not s.ring.is_zero(s.coeffs[0]):
            raise CompositionDomainError("an element of Aut⁺ₙO has zero constant term")
        if not s.ring.is_unit(s.coeffs[1]):
            raise NonUnitError(f"linear coefficient {s.ring.format(s.coeffs[1])} is not a unit")

    @classmethod
    def create(cls, ring: CoefficientRing, coeffs: Sequence[Any], order: int | None = None) -> "AutJet":
        """低次からの係数列（定数項を含む）から生成"""
        return cls(TruncSeries.create(ring, coeffs, order))

    @classmethod
    def identity(cls, ring: CoefficientRing, order: int) -> "AutJet":
        return cls.create(ring, [0, 1], order)

    @property
    def ring(self) -> CoefficientRing:
        return self.series.ring

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def coeffs(self) -> tuple:
        return self.series.coeffs

    def __mul__(self, other: "AutJet") -> "AutJet":
        return aut_mul(self, other)

    def __str__(self) -> str:
        return str(self.series)


def scaling(ring: CoefficientRing, unit: Any, order: int) -> AutJet:
    """𝔾_m ↪ Aut⁺ₙO, λ ↦ (z ↦ λz)"""
    return AutJet.create(ring, [0, unit], order)


def aut_mul(tau1: AutJet, tau2: AutJet) -> AutJet:
    """τ₁·τ₂ = τ₂(τ₁(z))"""
    if tau1.order != tau2.order:
        raise OrderError(f"order mismatch: {tau1.order} vs {tau2.order}")
    return AutJet(compose(tau2.series, tau1.series))


def aut_inverse(tau: AutJet) -> AutJet:
    """合成逆元 σ（τ(σ(z)) = z）

    τ(σ) の z^k の係数は τ₁σ_k + Σ_{j≥2} τ_j·[z^k]σ^j で、右の和は σ₁..σ_{k−1}
    だけで決まる。σ の冪の係数表を k の小さい順に埋めながら σ_k を解く。
    """
    ring, n = tau.ring, tau.order
    zero = ring.zero()
    inv1 = ring.inverse(tau.coeffs[1])
    sigma = [zero, inv1] + [zero] * (n - 2)
    # powers[j][k] = σ^j の z^k の係数（k < j では 0）
    powers = [[zero] * n for _ in range(n)]
    powers[1] = sigma
    for k in range(2, n):
        acc = zero
        for j in range(2, k + 1):
            c = zero
            for i in range(1, k - j + 2):
                c = c + sigma[i] * powers[j - 1][k - i]
            powers[j][k] = c
            acc = acc + tau.coeffs[j] * c
        sigma[k] = -(acc * inv1)
    return AutJet(TruncSeries(ring, tuple(sigma)))


def aut_power(tau: AutJet, exponent: int) -> AutJet:
    """τ^k（負の冪は逆元の冪）"""
    base = aut_inverse(tau) if exponent < 0 else tau
    result = AutJet.identity(tau.ring, tau.order)
    for _ in range(abs(exponent)):
        result = aut_mul(result, base)
    return result


def project(tau: AutJet, m: int) -> AutJet:
    """π_{m,n}: Aut⁺ₙO → Aut⁺ₘO（切断）"""
    if not 2 <= m <= tau.order:
        raise OrderError(f"projection target {m} outside 2..{tau.order}")
    return AutJet(tau.series.truncate(m))


def is_unipotent(tau: AutJet) -> bool:
    """Aut⁰ₙO（O/𝔪² 上で恒等）に属するか"""
    return tau.coeffs[1] == tau.ring.one()


# ============================================================
# 半直積分解 Aut⁺O = 𝔾_m ⋉ Aut⁰O
# ============================================================

def decompose(tau: AutJet) -> tuple[GmPart, UnipotentPart]:
    """τ = aut_mul(scaling(λ), u) となる (λ, u) を返す（スケーリングが先）

    u(λz) = τ(z) より u_k = τ_k / λ^k。
    """
    ring = tau.ring
    lam = tau.coeffs[1]
    inv = ring.inverse(lam)
    coeffs = [ring.zero()]
    power = ring.one()
    for k in range(1, tau.order):
        power = power * inv
        coeffs.append(tau.coeffs[k] * power)
    return GmPart(lam), UnipotentPart(AutJet(TruncSeries(ring, tuple(coeffs))))


def recompose(gm: GmPart, unipotent: UnipotentPart) -> AutJet:
    """decompose の逆"""
    u = unipotent.jet
    if not is_unipotent(u):
        raise NonUnitError("unipotent part must have linear coefficient 1")
    return aut_mul(scaling(u.ring, gm.unit, u.order), u)


def conjugate_by_scaling(unit: Any, u: AutJet) -> AutJet:
    """λ·u·λ⁻¹（𝔾_m は Aut⁰O を正規化する）"""
    lam = scaling(u.ring, unit, u.order)
    return aut_mul(aut_mul(lam, u), aut_inverse(lam))


# ============================================================
# ker π_{n,n+1} ≅ 𝔾_a
# ============================================================

def kernel_element(ring: CoefficientRing, c: Any, n: int) -> AutJet:
    """z + c·zⁿ（次数 n+1）"""
    if n < 2:
        raise OrderError(f"kernel of π_(n,n+1) needs n ≥ 2, got {n}")
    coeffs = [ring.zero(), ring.one()] + [ring.zero()] * (n - 2) + [ring.coerce(c)]
    return AutJet(TruncSeries(ring, tuple(coeffs)))


def kernel_witness(tau: AutJet) -> Any | None:
    """τ = z + c·zⁿ（n = order − 1）なら c、そうでなければ None"""
    n = tau.order - 1
    if n < 2:
        raise OrderError(f"kernel witness needs order ≥ 3, got {tau.order}")
    ring = tau.ring
    if tau.coeffs[1] != ring.one():
        return None
    if any(not ring.is_zero(c) for c in tau.coeffs[2:n]):
        return None
    return tau.coeffs[n]


if __name__ == "__main__":
    q = QQ_RING
    tau = AutJet.create(q, [0, 1, 1], 3)
    print("=== Aut⁺ₙO デモ ===\n")
    print(f"τ = {tau}")
    print(f"τ⁻¹ = {aut_inverse(tau)}")
    print(f"(z+z²)·(2z) = {aut_mul(tau, scaling(q, 2, 3))}")
    print(f"(2z)·(z+z²) = {aut_mul(scaling(q, 2, 3), tau)}")
    lam, u = decompose(AutJet.create(q, [0, 2, Fraction(4)], 3))
    print(f"decompose(2z+4z²) = ({lam.unit}, {u.jet})")
