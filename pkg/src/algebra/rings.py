"""係数環の抽象化

切断冪級数・行列の係数として使う環を共通インターフェースで扱う。
元そのものは Python の演算子（+, -, *, ==）をサポートし、
単元判定・除算・微分などは環オブジェクト側のメソッドで行う。

実装:
    RationalField      … ℚ（元は fractions.Fraction）
    LocalizedRing      … ℚ[v, 1/q(v)]（src/algebra/curve.py）
    QuadraticExtension … 上の環に √u を 1 つ添加したもの（同上）
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any

from sympy import Rational

from src.errors import NonUnitError, ParseError


# ============================================================
# 有理数ヘルパー
# ============================================================

def to_fraction(value: Any) -> Fraction:
    """int / Fraction / sympy Rational / "p/q" 文字列を Fraction に変換"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    # sympy の Integer / Rational
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot convert {value!r} to a rational number")


def to_sympy(value: Fraction) -> Rational:
    """Fraction を sympy Rational に変換"""
    return Rational(value.numerator, value.denominator)


def parse_rational(text: str, source: str = "<literal>") -> Fraction:
    """ "p/q" または "p" 形式の文字列を解析"""
    raw = text.strip()
    try:
        if "/" in raw:
            num, den = raw.split("/", 1)
            if int(den) == 0:
                raise ParseError(f"zero denominator in {text!r}", source)
            return Fraction(int(num), int(den))
        return Fraction(int(raw))
    except ValueError as e:
        raise ParseError(f"not an exact rational: {text!r}", source) from e


def format_rational(value: Fraction) -> str:
    """既約・分母正の "p/q"（分母 1 なら "p"）"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_scalar(value: Any) -> bool:
    """ℚ のスカラー（int / Fraction）かどうか"""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


# ============================================================
# 環インターフェース
# ============================================================

class CoefficientRing(ABC):
    """可換係数環"""

    @property
    @abstractmethod
    def name(self) -> str:
        """表示用の名前"""

    @abstractmethod
    def coerce(self, value: Any) -> Any:
        """スカラーや部分環の元をこの環の元に持ち上げる"""

    @abstractmethod
    def contains(self, value: Any) -> bool:
        """value がこの環の元として扱えるか"""

    @abstractmethod
    def is_unit(self, value: Any) -> bool:
        """単元判定"""

    @abstractmethod
    def inverse(self, value: Any) -> Any:
        """単元の逆元（単元でなければ NonUnitError）"""

    @abstractmethod
    def derive(self, value: Any) -> Any:
        """チャート変数 v についての微分 ∂/∂v（定数環では 0）"""

    @abstractmethod
    def sqrt(self, value: Any) -> Any | None:
        """環の中での平方根（なければ None）"""

    @abstractmethod
    def format(self, value: Any) -> str:
        """決定的なテキスト表現"""

    def zero(self) -> Any:
        return self.coerce(0)

    def one(self) -> Any:
        return self.coerce(1)

    def is_zero(self, value: Any) -> bool:
        return self.coerce(value) == self.zero()

    def divide(self, a: Any, b: Any) -> Any:
        """単元による除算 a / b"""
        return self.coerce(a) * self.inverse(b)

    def power(self, value: Any, exponent: int) -> Any:
        """整数冪（負の冪は単元のみ）"""
        base = self.coerce(value)
        if exponent < 0:
            base = self.inverse(base)
            exponent = -exponent
        result = self.one()
        for _ in range(exponent):
            result = result * base
        return result


@dataclass(frozen=True)
class RationalField(CoefficientRing):
    """有理数体 ℚ"""

    @property
    def name(self) -> str:
        return "QQ"

    def coerce(self, value: Any) -> Fraction:
        if is_scalar(value):
            return Fraction(value)
        # 定数の有理関数は ℚ に落とせる
        if hasattr(value, "constant_value"):
            constant = value.constant_value()
            if constant is not None:
                return constant
        raise TypeError(f"{value!r} is not an element of QQ")

    def contains(self, value: Any) -> bool:
        return is_scalar(value)

    def is_unit(self, value: Any) -> bool:
        return self.coerce(value) != 0

    def inverse(self, value: Any) -> Fraction:
        q = self.coerce(value)
        if q == 0:
            raise NonUnitError("0 is not a unit of QQ")
        return 1 / q

    def derive(self, value: Any) -> Fraction:
        return Fraction(0)

    def sqrt(self, value: Any) -> Fraction | None:
        return rational_sqrt(self.coerce(value))

    def format(self, value: Any) -> str:
        return format_rational(self.coerce(value))


QQ_RING = RationalField()


def rational_sqrt(value: Fraction) -> Fraction | None:
    """有理数の正確な平方根（存在しなければ None）"""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None
