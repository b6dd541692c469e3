"""テキスト表示用フォーマッタ

CLI のゴールデンテストに使うため、出力はバイト単位で決定的であること。
多項式は低次から順に並べる。
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from src.algebra.rings import format_rational

SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def superscript(k: int) -> str:
    """指数を上付き文字に（1 は省略）"""
    return "" if k == 1 else str(k).translate(SUPERSCRIPT)


def monomial(var: str, k: int) -> str:
    return "" if k == 0 else f"{var}{superscript(k)}"


def is_compound(text: str) -> bool:
    """括弧の外に " + " / " - " を含むか"""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and i > 0 and text[i - 1:i + 2] in (" + ", " - "):
            return True
    return False


def _join(terms: list[tuple[bool, str]]) -> str:
    if not terms:
        return "0"
    first_neg, first = terms[0]
    out = ("-" if first_neg else "") + first
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def format_poly(coeffs: Sequence[Fraction], var: str) -> str:
    """低次からの係数列を "1 + 2t - 1/2·t²" の形に"""
    terms: list[tuple[bool, str]] = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        a = abs(c)
        mono = monomial(var, k)
        if k == 0:
            body = format_rational(a)
        elif a == 1:
            body = mono
        elif a.denominator == 1:
            body = f"{a.numerator}{mono}"
        else:
            body = f"{format_rational(a)}·{mono}"
        terms.append((c < 0, body))
    return _join(terms)


def format_quotient(num: Sequence[Fraction], den: Sequence[Fraction], var: str) -> str:
    """有理関数 num/den（分母はモニック）。係数の分母は払って表示する: -3/(2t²)"""
    if len(den) == 1 and den[0] == 1:
        return format_poly(num, var)
    scale = lcm(*(c.denominator for c in [*num, *den]))
    n = format_poly([c * scale for c in num], var)
    d = format_poly([c * scale for c in den], var)
    if is_compound(n):
        n = f"({n})"
    if is_compound(d) or d[0].isdigit():
        d = f"({d})"
    return f"{n}/{d}"


def format_series(terms: Sequence[tuple[int, str]], var: str = "z") -> str:
    """(次数, 係数の文字列) の列を "2t·z + z²" の形に。係数 0 の項は渡さないこと"""
    out: list[tuple[bool, str]] = []
    for k, text in terms:
        neg = False
        if text.startswith("-") and not is_compound(text):
            neg, text = True, text[1:]
        wrapped = f"({text})" if is_compound(text) else text
        mono = monomial(var, k)
        if k == 0:
            body = wrapped
        elif text == "1":
            body = mono
        elif text.isdigit():
            body = f"{text}{mono}"
        else:
            body = f"{wrapped}·{mono}"
        out.append((neg, body))
    return _join(out)


def format_matrix(rows: Sequence[Sequence[str]]) -> str:
    """行列を "[[a, b], [c, d]]" の形に"""
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in rows) + "]"


def format_sqrt(text: str) -> str:
    """√t, √(1 + t)"""
    if is_compound(text) or any(ch in text for ch in "/·-"):
        return f"√({text})"
    return f"√{text}"
