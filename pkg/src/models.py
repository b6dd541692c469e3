"""結果レコード定義

モジュール間で受け渡す小さなデータクラス。計算ロジックは持たない
（B2AdElement の群演算のみ例外）。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class PointQ:
    """チャート変数の有理点 x（q(x) ≠ 0 は curve.point で検証）"""

    value: Fraction


@dataclass(frozen=True)
class CoordinateCheck:
    """座標判定の結果"""

    valid: bool
    witness: Any = None  # (∂s)^{-1}（valid のときのみ）
    reason: str = ""


@dataclass(frozen=True)
class GmPart:
    """Aut⁺O = 𝔾_m ⋉ Aut⁰O の 𝔾_m 成分（z ↦ λz）"""

    unit: Any


@dataclass(frozen=True)
class UnipotentPart:
    """Aut⁰ₙO の元（線形係数 1 の AutJet）"""

    jet: Any


@dataclass(frozen=True)
class B2AdElement:
    """(B₂)_ad の元 [[a, b], [0, 1]]"""

    ring: Any
    a: Any  # 単元
    b: Any

    def __mul__(self, other: "B2AdElement") -> "B2AdElement":
        # [[a, b], [0, 1]]·[[a', b'], [0, 1]] = [[aa', ab' + b], [0, 1]]
        return B2AdElement(self.ring, self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> "B2AdElement":
        inv_a = self.ring.inverse(self.a)
        return B2AdElement(self.ring, inv_a, -(inv_a * self.b))

    @classmethod
    def identity(cls, ring: Any) -> "B2AdElement":
        return cls(ring, ring.one(), ring.zero())


@dataclass(frozen=True)
class OperDiagnostics:
    """is_oper の判定結果"""

    is_oper: bool
    problems: list[str] = field(default_factory=list)
    simple_root_components: list[Any] = field(default_factory=list)


@dataclass(frozen=True)
class CoordinateChange:
    """座標変換の結果（新しい正準形と、それを与えるゲージ元）"""

    oper: Any  # CanonicalOper
    gauge: Any  # GroupElement


@dataclass(frozen=True)
class CocycleReport:
    """torsor_cocycle_check のレポート"""

    coordinate_i: str
    coordinate_j: str
    oper_cocycle: Any  # c_ji（t_j の f₀ を t_i で正準化したゲージ元）
    jet_cocycle: Any  # Aut⁺₃O の元
    b2ad: B2AdElement
    r_image: Any  # r(jet3_to_b2ad(jet))
    jet_orientation: str  # "direct" | "inverse" | "none"
    gauge_orientation: str  # "same" | "inverse" | "none"
    coordinate_k: str | None = None
    triple_orientation: str | None = None  # "c_ki = c_ji·c_kj" など
    triple_jet_holds: bool | None = None

    @property
    def passed(self) -> bool:
        ok = self.jet_orientation != "none" and self.gauge_orientation != "none"
        if self.coordinate_k is not None:
            ok = ok and self.triple_orientation is not None and bool(self.triple_jet_holds)
        return ok

