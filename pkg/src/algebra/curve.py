"""アフィン曲線のチャートと座標変換コサイクル

チャート環は局所化多項式環 ℚ[v, 1/q(v)]。「至る所で消えない」「単元」の
判定は q の因子による割り切りに帰着させる。

    RationalFunction   … チャート環の元（約分済み・分母モニック）
    LocalizedRing      … ℚ[v, 1/q(v)]
    Chart              … 環 + 名前付き座標の表
    QuadraticExtension … √u（u は単元）を 1 つ添加した環（トーラス段階用）
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Any, Iterable, Sequence

from sympy import QQ, Poly, Symbol, diff

from src.algebra.jetgroup import AutJet, TruncSeries, aut_inverse, aut_mul
from src.algebra.rings import (
    QQ_RING,
    CoefficientRing,
    is_scalar,
    rational_sqrt,
    to_fraction,
    to_sympy,
)
from src.errors import (
    ChartMismatchError,
    InvalidCoordinateError,
    NonUnitError,
    PointOutsideChartError,
    RingMismatchError,
)
from src.models import CoordinateCheck, PointQ
from src.utils.render import format_poly, format_quotient, format_sqrt, is_compound


# ============================================================
# 多項式ヘルパー（sympy Poly, domain = QQ）
# ============================================================

def make_poly(coeffs: Iterable[Any], symbol: Symbol) -> Poly:
    """低次からの係数列 → Poly"""
    rev = [to_sympy(to_fraction(c)) for c in reversed(list(coeffs))]
    if not rev:
        return Poly(0, symbol, domain=QQ)
    return Poly(rev, symbol, domain=QQ)


def poly_coeffs(p: Poly) -> list[Fraction]:
    """Poly → 低次からの係数列（零多項式は []）"""
    if p.is_zero:
        return []
    return [to_fraction(c) for c in reversed(p.all_coeffs())]


def poly_sqrt(p: Poly) -> Poly | None:
    """多項式の正確な平方根（存在しなければ None）"""
    if p.is_zero:
        return p
    coeff, factors = p.sqf_list()
    root = rational_sqrt(to_fraction(coeff))
    if root is None or any(k % 2 for _, k in factors):
        return None
    out = Poly(to_sympy(root), *p.gens, domain=QQ)
    for f, k in factors:
        out = out * f ** (k // 2)
    return out


# ============================================================
# 局所化多項式環
# ============================================================

@dataclass(frozen=True)
class LocalizedRing(CoefficientRing):
    """ℚ[v, 1/q(v)]。q は無平方部分・モニックに正規化して保持する"""

    variable: str
    localization: tuple[Fraction, ...] = (Fraction(1),)

    @classmethod
    def create(cls, variable: str, localization: Sequence[Any] = (1,)) -> "LocalizedRing":
        q = make_poly(localization, Symbol(variable))
        if q.is_zero:
            raise NonUnitError("localization polynomial must be nonzero")
        q = q.sqf_part().monic() if not q.is_ground else Poly(1, Symbol(variable), domain=QQ)
        return cls(variable, tuple(poly_coeffs(q)))

    @cached_property
    def symbol(self) -> Symbol:
        return Symbol(self.variable)

    @cached_property
    def q(self) -> Poly:
        return make_poly(self.localization, self.symbol)

    @property
    def name(self) -> str:
        if self.q.is_ground:
            return f"QQ[{self.variable}]"
        q = format_poly(self.localization, self.variable)
        return f"QQ[{self.variable}, 1/({q})]" if is_compound(q) else f"QQ[{self.variable}, 1/{q}]"

    # --- 単元判定 ---

    @cached_property
    def q_factors(self) -> tuple[Poly, ...]:
        """q の既約因子（モニック）。単元の分母はこれらの積"""
        if self.q.is_ground:
            return ()
        return tuple(f.monic() for f, _ in self.q.factor_list()[1])

    def _split_factor(self, p: Poly, f: Poly) -> tuple[Poly, int]:
        """p = f^k·p'（f ∤ p'）の (p', k)"""
        k = 0
        while p.degree() >= f.degree():
            quotient, remainder = p.div(f)
            if not remainder.is_zero:
                break
            p, k = quotient, k + 1
        return p, k

    def strip_units(self, p: Poly) -> Poly:
        """q と共通の既約因子を重複度ごと取り除く"""
        for f in self.q_factors:
            p, _ = self._split_factor(p, f)
        return p

    def is_unit_poly(self, p: Poly) -> bool:
        return not p.is_zero and self.strip_units(p).is_ground

    def cancel_unit_factors(self, num: Poly, den: Poly) -> tuple[Poly, Poly]:
        """den が q の因子の積のとき、num との共通因子を割り算だけで約す"""
        for f in self.q_factors:
            if den.is_ground:
                break
            den_rest, k = self._split_factor(den, f)
            if k == 0:
                continue
            num_rest, j = self._split_factor(num, f)
            common = min(j, k)
            if common:
                num = num_rest * f ** (j - common)
                den = den_rest * f ** (k - common)
        return num, den

    # --- 元の生成 ---

    def element(self, num: Sequence[Any], den: Sequence[Any] = (1,)) -> "RationalFunction":
        return RationalFunction(self, make_poly(num, self.symbol), make_poly(den, self.symbol))

    def constant(self, value: Any) -> "RationalFunction":
        return self.element([value])

    def variable_element(self) -> "RationalFunction":
        return self.element([0, 1])

    def from_expr(self, expr: Any) -> "RationalFunction":
        """sympy 式（有理式）から生成"""
        num, den = expr.together().as_numer_denom()
        return RationalFunction(self, Poly(num, self.symbol, domain=QQ), Poly(den, self.symbol, domain=QQ))

    # --- CoefficientRing ---

    def coerce(self, value: Any) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring.name} vs {self.name}")
            return value
        if is_scalar(value):
            return self.constant(value)
        raise RingMismatchError(f"{value!r} is not an element of {self.name}")

    def contains(self, value: Any) -> bool:
        return is_scalar(value) or (isinstance(value, RationalFunction) and value.ring == self)

    def is_unit(self, value: Any) -> bool:
        return self.is_unit_poly(self.coerce(value).num)

    def inverse(self, value: Any) -> "RationalFunction":
        f = self.coerce(value)
        if not self.is_unit_poly(f.num):
            raise NonUnitError(f"{self.format(f)} is not a unit of {self.name}")
        return RationalFunction(self, f.den, f.num, checked=True)

    def derive(self, value: Any) -> "RationalFunction":
        return self.coerce(value).derive()

    def sqrt(self, value: Any) -> "RationalFunction | None":
        f = self.coerce(value)
        num, den = poly_sqrt(f.num), poly_sqrt(f.den)
        if num is None or den is None:
            return None
        return RationalFunction(self, num, den)

    def format(self, value: Any) -> str:
        f = self.coerce(value)
        return format_quotient(poly_coeffs(f.num), poly_coeffs(f.den), self.variable)

    def contains_point(self, value: Fraction) -> bool:
        return self.q.eval(to_sympy(value)) != 0


class RationalFunction:
    """チャート環 ℚ[v, 1/q] の元。約分済みで分母はモニック"""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: LocalizedRing, num: Poly, den: Poly | None = None, checked: bool = False):
        if den is None:
            den = Poly(1, ring.symbol, domain=QQ)
        if den.is_zero:
            raise NonUnitError("zero denominator")
        if num.is_zero:
            den = Poly(1, ring.symbol, domain=QQ)
        elif checked:
            # 分母は単元の積なので q の因子だけを見ればよい
            num, den = ring.cancel_unit_factors(num, den)
        elif not den.is_ground:
            g = num.gcd(den)
            if not g.is_ground:
                num, den = num.exquo(g), den.exquo(g)
        lc = den.LC()
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        if not checked and not ring.is_unit_poly(den):
            raise NonUnitError(
                f"denominator {format_quotient(poly_coeffs(den), [Fraction(1)], ring.variable)} "
                f"is not a unit of {ring.name}"
            )
        self.ring = ring
        self.num = num
        self.den = den

    # --- 補助 ---

    def _coerce(self, other: Any) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.name} vs {other.ring.name}")
            return other
        if is_scalar(other):
            return self.ring.constant(other)
        return NotImplemented

    def constant_value(self) -> Fraction | None:
        if self.num.is_ground and self.den.is_ground:
            return to_fraction(self.num.LC()) if not self.num.is_zero else Fraction(0)
        return None

    def coefficients(self) -> tuple[list[Fraction], list[Fraction]]:
        return poly_coeffs(self.num), poly_coeffs(self.den)

    def to_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    # --- 演算 ---

    def __add__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.ring, self.num + o.num, self.den, checked=True)
        return RationalFunction(self.ring, self.num * o.den + o.num * self.den, self.den * o.den, checked=True)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(self.ring, -self.num, self.den, checked=True)

    def __sub__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.ring, self.num * o.num, self.den * o.den, checked=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self.ring.inverse(o)

    def __rtruediv__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.ring.inverse(self)

    def __pow__(self, exponent: int) -> "RationalFunction":
        return self.ring.power(self, exponent)

    def derive(self) -> "RationalFunction":
        """d/dv"""
        v = self.ring.symbol
        num = self.num.diff(v) * self.den - self.num * self.den.diff(v)
        return RationalFunction(self.ring, num, self.den * self.den, checked=True)

    def evaluate(self, point: Fraction) -> Fraction:
        """有理点での値（点はチャート内であること）"""
        x = to_fraction(point)
        if not self.ring.contains_point(x):
            raise PointOutsideChartError(f"point {x} is outside {self.ring.name}")
        return to_fraction(self.num.eval(to_sympy(x))) / to_fraction(self.den.eval(to_sympy(x)))

    # --- 比較 ---

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, RationalFunction):
            return self.ring == other.ring and self.num == other.num and self.den == other.den
        if is_scalar(other):
            value = self.constant_value()
            return value is not None and value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, tuple(self.num.all_coeffs()), tuple(self.den.all_coeffs())))

    def __repr__(self) -> str:
        return f"RationalFunction({self.ring.format(self)!r} on {self.ring.name})"

    def __str__(self) -> str:
        return self.ring.format(self)


# ============================================================
# 二次拡大 ℚ[v, 1/q][√u]
# ============================================================

@dataclass(frozen=True)
class QuadraticExtension(CoefficientRing):
    """チャート環に単元 u の平方根 w = √u を添加した環 R[w]/(w² − u)"""

    base: LocalizedRing
    radicand: RationalFunction

    def __post_init__(self):
        if not self.base.is_unit(self.radicand):
            raise NonUnitError("radicand of a quadratic extension must be a unit")

    @property
    def name(self) -> str:
        return f"{self.base.name}[{format_sqrt(self.base.format(self.radicand))}]"

    def element(self, a: Any, b: Any = 0) -> "QuadraticFunction":
        return QuadraticFunction(self, self.base.coerce(a), self.base.coerce(b))

    def root(self) -> "QuadraticFunction":
        return self.element(0, 1)

    def coerce(self, value: Any) -> "QuadraticFunction":
        if isinstance(value, QuadraticFunction):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring.name} vs {self.name}")
            return value
        return self.element(value, 0)

    def contains(self, value: Any) -> bool:
        if isinstance(value, QuadraticFunction):
            return value.ring == self
        return self.base.contains(value)

    def norm(self, value: Any) -> RationalFunction:
        x = self.coerce(value)
        return x.a * x.a - x.b * x.b * self.radicand

    def is_unit(self, value: Any) -> bool:
        return self.base.is_unit(self.norm(value))

    def inverse(self, value: Any) -> "QuadraticFunction":
        x = self.coerce(value)
        n_inv = self.base.inverse(self.norm(x))
        return QuadraticFunction(self, x.a * n_inv, -(x.b * n_inv))

    def derive(self, value: Any) -> "QuadraticFunction":
        # ∂√u = ∂u/(2√u) = (∂u/(2u))·√u
        x = self.coerce(value)
        log_d = self.radicand.derive() * self.base.inverse(self.radicand) * Fraction(1, 2)
        return QuadraticFunction(self, x.a.derive(), x.b.derive() + x.b * log_d)

    def sqrt(self, value: Any) -> None:
        return None

    def format(self, value: Any) -> str:
        x = self.coerce(value)
        root = format_sqrt(self.base.format(self.radicand))
        if x.b == 0:
            return self.base.format(x.a)
        b = self.base.format(x.b)
        if x.b == 1:
            irrational = root
        elif x.b == -1:
            irrational = f"-{root}"
        else:
            irrational = f"({b})·{root}" if "+" in b or " - " in b else f"{b}·{root}"
        if x.a == 0:
            return irrational
        if irrational.startswith("-"):
            return f"{self.base.format(x.a)} - {irrational[1:]}"
        return f"{self.base.format(x.a)} + {irrational}"

    def descend(self, value: Any) -> RationalFunction | None:
        """√u 成分が 0 なら底環の元を返す"""
        x = self.coerce(value)
        return x.a if x.b == 0 else None


class QuadraticFunction:
    """a + b·√u（a, b はチャート環の元）"""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: QuadraticExtension, a: RationalFunction, b: RationalFunction):
        self.ring = ring
        self.a = a
        self.b = b

    def _coerce(self, other: Any):
        if isinstance(other, QuadraticFunction):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.name} vs {other.ring.name}")
            return other
        if is_scalar(other) or (isinstance(other, RationalFunction) and other.ring == self.ring.base):
            return self.ring.element(other, 0)
        return NotImplemented

    def __add__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticFunction(self.ring, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticFunction":
        return QuadraticFunction(self.ring, -self.a, -self.b)

    def __sub__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        u = self.ring.radicand
        return QuadraticFunction(self.ring, self.a * o.a + self.b * o.b * u, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.ring, self.a, self.b))

    def __repr__(self) -> str:
        return f"QuadraticFunction({self.ring.format(self)!r})"

    def __str__(self) -> str:
        return self.ring.format(self)


def common_ring(first: CoefficientRing, second: CoefficientRing) -> CoefficientRing:
    """二つの環の両方を含む環（同一チャート上のみ）"""
    if first == second:
        return first
    if isinstance(first, QuadraticExtension) and first.base == second:
        return first
    if isinstance(second, QuadraticExtension) and second.base == first:
        return second
    if first == QQ_RING:
        return second
    if second == QQ_RING:
        return first
    raise ChartMismatchError(f"values live on different charts: {first.name} vs {second.name}")


# ============================================================
# チャート
# ============================================================

@dataclass(frozen=True)
class Chart:
    """アフィン曲線のチャート（局所化多項式環 + 名前付き座標）"""

    ring: LocalizedRing
    coordinates: tuple[tuple[str, RationalFunction], ...] = field(default=())

    @classmethod
    def create(cls, ring: LocalizedRing, coordinates: dict[str, Any] | None = None) -> "Chart":
        """座標を検証してチャートを生成。チャート変数自身も座標として登録する"""
        table: dict[str, RationalFunction] = {}
        if ring.variable not in (coordinates or {}):
            table[ring.variable] = ring.variable_element()
        for name, value in (coordinates or {}).items():
            s = ring.coerce(value)
            check = validate_coordinate_in_ring(ring, s)
            if not check.valid:
                raise InvalidCoordinateError(f"coordinate {name!r}: {check.reason}")
            table[name] = s
        return cls(ring, tuple(table.items()))

    @property
    def variable(self) -> str:
        return self.ring.variable

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.coordinates]

    def coordinate(self, name: str) -> RationalFunction:
        for key, value in self.coordinates:
            if key == name:
                return value
        raise InvalidCoordinateError(f"unknown coordinate {name!r} (chart has {', '.join(self.names)})")

    def resolve(self, coordinate: "str | RationalFunction") -> RationalFunction:
        """名前または有理関数を座標として解決（未登録なら検証する）"""
        if isinstance(coordinate, str):
            return self.coordinate(coordinate)
        s = self.ring.coerce(coordinate)
        check = validate_coordinate(self, s)
        if not check.valid:
            raise InvalidCoordinateError(check.reason)
        return s

    def with_coordinate(self, name: str, value: Any) -> "Chart":
        return Chart.create(self.ring, dict(self.coordinates) | {name: value})


def point(chart: Chart, value: Any) -> PointQ:
    """チャート内の有理点（q(x) ≠ 0）"""
    x = to_fraction(value)
    if not chart.ring.contains_point(x):
        raise PointOutsideChartError(f"point {x} is outside {chart.ring.name}")
    return PointQ(x)


# ============================================================
# 座標と微分
# ============================================================

def validate_coordinate_in_ring(ring: LocalizedRing, s: Any) -> CoordinateCheck:
    if not ring.contains(s):
        return CoordinateCheck(False, reason=f"{s!r} is not in {ring.name}")
    ds = ring.coerce(s).derive()
    if not ring.is_unit(ds):
        return CoordinateCheck(False, reason=f"d{ring.variable}-derivative {ring.format(ds)} is not a unit of {ring.name}")
    return CoordinateCheck(True, witness=ring.inverse(ds))


def validate_coordinate(chart: Chart, s: Any) -> CoordinateCheck:
    """∂s（チャート変数について）が単元なら True。witness は (∂s)⁻¹"""
    return validate_coordinate_in_ring(chart.ring, s)


def derive_wrt(chart: Chart, f: Any, t: "str | RationalFunction") -> Any:
    """∂_t f = (∂_v t)⁻¹·∂_v f（連鎖律）"""
    t_fn = chart.resolve(t)
    witness = chart.ring.inverse(t_fn.derive())
    ring = f.ring if hasattr(f, "ring") else chart.ring
    return ring.derive(f) * witness


def derivatives_wrt(chart: Chart, f: RationalFunction, t: "str | RationalFunction", count: int) -> list[RationalFunction]:
    """[f, ∂_t f, …, ∂_t^count f]"""
    t_fn = chart.resolve(t)
    witness = chart.ring.inverse(t_fn.derive())
    out = [chart.ring.coerce(f)]
    for _ in range(count):
        out.append(out[-1].derive() * witness)
    return out


# ============================================================
# テイラーコサイクル
# ============================================================

def taylor_cocycle_universal(chart: Chart, s: "str | RationalFunction", t: "str | RationalFunction", order: int) -> AutJet:
    """triv^univ_{st}(z) = Σ_{k≥1} (1/k!)(∂_t^k s) z^k（チャート環係数）"""
    s_fn = chart.resolve(s)
    chart.resolve(t)
    ders = derivatives_wrt(chart, s_fn, t, order - 1)
    coeffs = [chart.ring.zero()] + [ders[k] * Fraction(1, factorial(k)) for k in range(1, order)]
    return AutJet(TruncSeries(chart.ring, tuple(coeffs)))


def evaluate_jet(jet: AutJet, x: PointQ) -> AutJet:
    """チャート環係数の AutJet を有理点で評価"""
    return AutJet(jet.series.map_coeffs(QQ_RING, lambda c: c.evaluate(x.value)))


def taylor_cocycle_at_point(chart: Chart, s, t, x: "PointQ | Any", order: int) -> AutJet:
    """ρ^x_{st}(z) = Σ_{k≥1} x((1/k!)∂_t^k s) z^k（ℚ 係数）"""
    x = x if isinstance(x, PointQ) else point(chart, x)
    if not chart.ring.contains_point(x.value):
        raise PointOutsideChartError(f"point {x.value} is outside {chart.ring.name}")
    return evaluate_jet(taylor_cocycle_universal(chart, s, t, order), x)


def taylor_at_point_oracle(chart: Chart, s, t, x: "PointQ | Any", order: int) -> AutJet:
    """独立な検算: s − s(x) を t − t(x) の冪で展開する

    sympy で S(w) = s(x+w) − s(x), T(w) = t(x+w) − t(x) をテイラー展開し、
    S(T⁻¹(z)) = aut_mul(T⁻¹, S) を返す。
    """
    x = x if isinstance(x, PointQ) else point(chart, x)
    v = chart.ring.symbol
    x0 = to_sympy(x.value)

    def expand(fn: RationalFunction) -> AutJet:
        expr = fn.to_expr()
        coeffs = [Fraction(0)]
        for k in range(1, order):
            value = diff(expr, v, k).subs(v, x0) / factorial(k)
            coeffs.append(to_fraction(value))
        return AutJet.create(QQ_RING, coeffs, order)

    big_s = expand(chart.resolve(s))
    big_t = expand(chart.resolve(t))
    return aut_mul(aut_inverse(big_t), big_s)


def point_cocycle_oracle(chart: Chart, s, t, x: "PointQ | Any", order: int) -> bool:
    """点評価した係数公式とテイラー展開の検算が一致するか"""
    return taylor_cocycle_at_point(chart, s, t, x, order) == taylor_at_point_oracle(chart, s, t, x, order)


# ρ_{ut} = ρ_{us} ∘ ρ_{st}（関数合成）= aut_mul(ρ_{st}, ρ_{us})
CONSISTENCY_ORDER = "aut_mul(triv_st, triv_us) = triv_ut"


def cocycle_consistency(chart: Chart, u, s, t, order: int) -> bool:
    """triv_{ut} = aut_mul(triv_{st}, triv_{us}) を確認"""
    rho_ut = taylor_cocycle_universal(chart, u, t, order)
    rho_us = taylor_cocycle_universal(chart, u, s, order)
    rho_st = taylor_cocycle_universal(chart, s, t, order)
    return aut_mul(rho_st, rho_us) == rho_ut


if __name__ == "__main__":
    ring = LocalizedRing.create("t", [0, 1])
    chart = Chart.create(ring, {"s": ring.element([1], [0, 1]), "u": ring.element([0, 0, 1])})
    print("=== 座標変換コサイクル デモ ===\n")
    print(f"チャート: {ring.name}, 座標: {chart.names}")
    print(f"triv(t², t) = {taylor_cocycle_universal(chart, 'u', 't', 3)}")
    print(f"triv(1/t, t) = {taylor_cocycle_universal(chart, 's', 't', 3)}")
    print(f"t = 3 で評価: {taylor_cocycle_at_point(chart, 'u', 't', 3, 3)}")
    print(f"整合性: {cocycle_consistency(chart, 'u', 's', 't', 5)}")
