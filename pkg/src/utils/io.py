"""入力ファイルの読み込みと正準シリアライズ

ファイルはすべて JSON。有理数は "p/q" 文字列（整数は "p" または JSON 整数）、
多項式は低次からの係数リスト（零多項式は []）。

    有理関数    {"num": [...], "den": [...]}（多項式・有理数リテラルも可）
    チャート    {"variable": "t", "localization": [...], "coordinates": {名前: 有理関数}}
    リー環実現  {"size": m, "basis": [行列...], "e": [番号], "f": [番号], "h": [番号]}
    ジェット    {"order": n, "coeffs": [...], "chart": チャート（省略時は ℚ 係数）}
    接続        {"lie": "sl2" | {"sl": n} | 実現ファイル, "chart": ..., "coordinate": "t", "matrix": [[...]]}
    正準形      {"lie": ..., "chart": ..., "coordinate": "t", "coefficients": [{"degree": d, "value": ...}]}

"chart" と "lie" にはインラインのオブジェクトか、参照元ファイルからの相対パスを書ける。
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from src.algebra.curve import Chart, LocalizedRing, QuadraticExtension, RationalFunction
from src.algebra.jetgroup import AutJet
from src.algebra.liealg import LieRealization, build_sl
from src.algebra.oper import CanonicalOper, OperConnection
from src.algebra.rings import QQ_RING, CoefficientRing, format_rational, parse_rational
from src.errors import ParseError

# プロジェクトルート
PROJECT_ROOT = Path(__file__).parent.parent.parent
SAMPLES_DIR = PROJECT_ROOT / "data" / "samples"


# ============================================================
# 読み込み
# ============================================================

def load_json(path: Path) -> Any:
    """JSON ファイルを読み込む（構文エラーは行・列つきの ParseError）"""
    path = Path(path)
    if not path.exists():
        raise ParseError("file not found", str(path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, str(path), e.lineno, e.colno) from e


def _field(data: Any, key: str, source: str) -> Any:
    if not isinstance(data, dict):
        raise ParseError(f"expected an object with field {key!r}", source)
    if key not in data:
        raise ParseError(f"missing field {key!r}", source)
    return data[key]


def _resolve(ref: Any, base: Path | None, source: str) -> tuple[Any, str, Path | None]:
    """インラインのオブジェクトかファイル参照を読み込む"""
    if isinstance(ref, str):
        path = Path(ref)
        if not path.is_absolute() and base is not None:
            path = base / path
        return load_json(path), str(path), path.parent
    return ref, source, base


# ============================================================
# 値の解析
# ============================================================

def parse_rational_value(value: Any, source: str = "<input>") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"not an exact rational: {value!r} (write it as a \"p/q\" string)", source)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value, source)
    raise ParseError(f"not a rational number: {value!r}", source)


def parse_poly(value: Any, source: str = "<input>") -> list[Fraction]:
    if not isinstance(value, list):
        raise ParseError(f"polynomial must be a coefficient list, got {value!r}", source)
    return [parse_rational_value(c, source) for c in value]


def parse_rf(ring: LocalizedRing, value: Any, source: str = "<input>") -> RationalFunction:
    """有理関数レコード・多項式リスト・有理数リテラルのいずれか"""
    if isinstance(value, dict):
        num = parse_poly(_field(value, "num", source), source)
        den = parse_poly(value.get("den", ["1"]), source)
        if not den or all(c == 0 for c in den):
            raise ParseError("zero denominator", source)
        return ring.element(num, den)
    if isinstance(value, list):
        return ring.element(parse_poly(value, source))
    return ring.constant(parse_rational_value(value, source))


def parse_chart(data: Any, source: str = "<chart>") -> Chart:
    variable = _field(data, "variable", source)
    if not isinstance(variable, str) or not variable.isidentifier():
        raise ParseError(f"chart variable must be an identifier, got {variable!r}", source)
    localization = parse_poly(data.get("localization", ["1"]), source)
    ring = LocalizedRing.create(variable, localization or [1])
    coordinates = {
        name: parse_rf(ring, value, f"{source}:coordinates.{name}")
        for name, value in data.get("coordinates", {}).items()
    }
    return Chart.create(ring, coordinates)


def parse_realization(data: Any, source: str = "<realization>") -> LieRealization:
    size = _field(data, "size", source)
    basis = [
        [[parse_rational_value(x, source) for x in row] for row in mat]
        for mat in _field(data, "basis", source)
    ]
    return LieRealization.from_chevalley(
        size,
        basis,
        list(_field(data, "e", source)),
        list(_field(data, "f", source)),
        list(_field(data, "h", source)),
        label=data.get("label", Path(source).stem),
    )


def parse_lie(ref: Any, base: Path | None = None, source: str = "<lie>") -> LieRealization:
    """"sl2" / "sl:3" / {"sl": n} / 実現ファイルのパス"""
    if isinstance(ref, dict) and "sl" in ref:
        return build_sl(int(ref["sl"]))
    if isinstance(ref, str):
        name = ref.replace(":", "").lower()
        if name.startswith("sl") and name[2:].isdigit():
            return build_sl(int(name[2:]))
    data, src, _ = _resolve(ref, base, source)
    return parse_realization(data, src)


def parse_jet(data: Any, base: Path | None = None, source: str = "<jet>") -> AutJet:
    order = _field(data, "order", source)
    coeffs = _field(data, "coeffs", source)
    if "chart" in data:
        chart_data, chart_src, _ = _resolve(data["chart"], base, source)
        ring = parse_chart(chart_data, chart_src).ring
        values = [parse_rf(ring, c, source) for c in coeffs]
        return AutJet.create(ring, values, order)
    return AutJet.create(QQ_RING, [parse_rational_value(c, source) for c in coeffs], order)


def parse_jet_literal(text: str, order: int, source: str = "<literal>") -> AutJet:
    """"0,2,1" のような係数列（低次から、定数項を含む）"""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ParseError("empty series literal", source)
    return AutJet.create(QQ_RING, [parse_rational(p, source) for p in parts], order)


def parse_connection(data: Any, base: Path | None = None, source: str = "<connection>") -> OperConnection:
    lie = parse_lie(_field(data, "lie", source), base, source)
    chart_data, chart_src, _ = _resolve(_field(data, "chart", source), base, source)
    chart = parse_chart(chart_data, chart_src)
    matrix = [[parse_rf(chart.ring, x, source) for x in row] for row in _field(data, "matrix", source)]
    return OperConnection.create(lie, chart, _field(data, "coordinate", source), matrix)


def parse_canonical(data: Any, base: Path | None = None, source: str = "<canonical>") -> CanonicalOper:
    lie = parse_lie(_field(data, "lie", source), base, source)
    chart_data, chart_src, _ = _resolve(_field(data, "chart", source), base, source)
    chart = parse_chart(chart_data, chart_src)
    entries = _field(data, "coefficients", source)
    if len(entries) != lie.rank:
        raise ParseError(f"{lie.label} needs {lie.rank} coefficients, got {len(entries)}", source)
    values = []
    for entry, degree in zip(entries, lie.exponents):
        if isinstance(entry, dict) and "value" in entry:
            if entry.get("degree", degree) != degree:
                raise ParseError(f"coefficient degree {entry['degree']} does not match exponent {degree}", source)
            entry = entry["value"]
        values.append(parse_rf(chart.ring, entry, source))
    return CanonicalOper.create(lie, chart, _field(data, "coordinate", source), values)


def load_chart(path: Path) -> Chart:
    return parse_chart(load_json(path), str(path))


def load_connection(path: Path) -> OperConnection:
    path = Path(path)
    return parse_connection(load_json(path), path.parent, str(path))


def load_canonical(path: Path) -> CanonicalOper:
    path = Path(path)
    return parse_canonical(load_json(path), path.parent, str(path))


def load_jet(path: Path) -> AutJet:
    path = Path(path)
    return parse_jet(load_json(path), path.parent, str(path))


# ============================================================
# シリアライズ
# ============================================================

def serialize_rational(value: Fraction) -> str:
    return format_rational(value)


def serialize_value(ring: CoefficientRing, value: Any) -> Any:
    """係数環の元を JSON 値に"""
    if ring == QQ_RING:
        return serialize_rational(QQ_RING.coerce(value))
    if isinstance(ring, QuadraticExtension):
        x = ring.coerce(value)
        out = {"rational": serialize_value(ring.base, x.a)}
        if x.b != 0:
            out["sqrt_coefficient"] = serialize_value(ring.base, x.b)
            out["radicand"] = serialize_value(ring.base, ring.radicand)
        return out
    num, den = ring.coerce(value).coefficients()
    return {"num": [serialize_rational(c) for c in num], "den": [serialize_rational(c) for c in den]}


def serialize_ring(ring: LocalizedRing) -> dict:
    """チャート環だけのチャートレコード（座標なし）"""
    return {
        "variable": ring.variable,
        "localization": [serialize_rational(c) for c in ring.localization],
    }


def serialize_chart(chart: Chart) -> dict:
    return {
        **serialize_ring(chart.ring),
        "coordinates": {name: serialize_value(chart.ring, value) for name, value in chart.coordinates},
    }


def serialize_jet(tau: AutJet) -> dict:
    """ℚ 以外の係数なら parse_jet が読めるよう "chart" に環を書く"""
    data = {
        "order": tau.order,
        "ring": tau.ring.name,
        "coeffs": [serialize_value(tau.ring, c) for c in tau.coeffs],
        "text": str(tau),
    }
    if isinstance(tau.ring, LocalizedRing):
        data["chart"] = serialize_ring(tau.ring)
    return data


def serialize_connection(conn: OperConnection) -> dict:
    return {
        "lie": conn.lie.label,
        "chart": serialize_chart(conn.chart),
        "coordinate": conn.coordinate,
        "matrix": [[serialize_value(conn.ring, x) for x in row] for row in conn.matrix],
    }


def serialize_canonical(canon: CanonicalOper) -> dict:
    return {
        "lie": canon.lie.label,
        "chart": serialize_chart(canon.chart),
        "coordinate": canon.coordinate,
        "coefficients": [
            {"degree": d, "value": serialize_value(canon.ring, c)}
            for d, c in zip(canon.degrees, canon.coefficients)
        ],
    }


def serialize_group_element(g: Any) -> dict:
    m = g.normalized().matrix
    return {
        "ring": g.ring.name,
        "matrix": [[serialize_value(g.ring, x) for x in row] for row in m],
        "text": g.format(),
    }


def dumps(data: Any) -> str:
    """決定的な JSON 文字列（キー順は挿入順のまま）"""
    return json.dumps(data, ensure_ascii=False, indent=2)


def save_json(data: Any, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data) + "\n")
