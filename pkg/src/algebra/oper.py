"""oper の正準形・座標変換・トルソルのコサイクル比較

接続は自明化したチャート上の ∇ = d + A dt（A は 𝔤 値の行列）。
ゲージ作用は g·A = gAg⁻¹ − (∂_t g)g⁻¹。行列はスカラー倍を除いて扱うので
(∂g)g⁻¹ のスカラー部分（トレース）は取り除く:

    g·A = gAg⁻¹ − (∂_t g)g⁻¹ + (1/m)·tr((∂_t g)g⁻¹)·I

正準化の手順:
    1. トーラス段階   … 次数 −1 成分の単元 u_i を 1 にする（必要なら √u を添加）
    2. 冪単段階       … k = 0, 1, … の順に A_k = ad f₀(Y) + v と分け exp(Y) で消す
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from src.algebra.curve import (
    Chart,
    QuadraticExtension,
    RationalFunction,
    cocycle_consistency,
    common_ring,
    derivatives_wrt,
    taylor_cocycle_universal,
)
from src.algebra.jetgroup import project
from src.algebra.liealg import (
    GroupElement,
    LieRealization,
    exp_e,
    exp_nilpotent,
    jet3_to_b2ad,
    r_map,
    rho_check,
    torus_element,
)
from src.algebra.matrices import (
    Mat,
    format_entries,
    mat_add,
    mat_coerce,
    mat_identity,
    mat_is_zero,
    mat_map,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_trace,
)
from src.algebra.rings import CoefficientRing
from src.errors import ChartMismatchError, NotAnOperError, NotInAlgebraError
from src.models import CocycleReport, CoordinateChange, OperDiagnostics
from src.utils.render import format_matrix


# ============================================================
# 接続と正準形
# ============================================================

@dataclass(frozen=True)
class OperConnection:
    """∇ = d + A dt（A は座標 t に関する 𝔤 値行列）"""

    lie: LieRealization
    chart: Chart
    coordinate: str
    matrix: Mat
    ring: CoefficientRing = field(compare=False, default=None)

    @classmethod
    def create(cls, lie: LieRealization, chart: Chart, coordinate: str, matrix: Sequence[Sequence[Any]],
               ring: CoefficientRing | None = None) -> "OperConnection":
        ring = ring or chart.ring
        chart.coordinate(coordinate)
        if len(matrix) != lie.size:
            raise NotInAlgebraError(f"connection matrix must be {lie.size}×{lie.size}")
        m = tuple(tuple(ring.coerce(x) for x in row) for row in matrix)
        lie.coordinates(m, ring)
        return cls(lie, chart, coordinate, m, ring)

    def format(self) -> str:
        return format_matrix(format_entries(self.ring, self.matrix))


@dataclass(frozen=True)
class CanonicalOper:
    """d + (f₀ + Σ_j ω_j·x_j) dt（x_j は V_can の基底）"""

    lie: LieRealization
    chart: Chart
    coordinate: str
    coefficients: tuple[Any, ...]
    ring: CoefficientRing = field(compare=False, default=None)

    @classmethod
    def create(cls, lie: LieRealization, chart: Chart, coordinate: str, coefficients: Sequence[Any],
               ring: CoefficientRing | None = None) -> "CanonicalOper":
        ring = ring or chart.ring
        chart.coordinate(coordinate)
        if len(coefficients) != lie.rank:
            raise NotInAlgebraError(f"{lie.label} canonical opers have {lie.rank} coefficients, got {len(coefficients)}")
        return cls(lie, chart, coordinate, tuple(ring.coerce(c) for c in coefficients), ring)

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.lie.exponents

    def to_connection(self) -> OperConnection:
        ring = self.ring
        matrix = mat_coerce(ring, self.lie.f0)
        for c, x in zip(self.coefficients, self.lie.vcan):
            matrix = mat_add(matrix, mat_scale(c, mat_coerce(ring, x)))
        return OperConnection(self.lie, self.chart, self.coordinate, matrix, ring)

    def lines(self) -> list[str]:
        return [
            f"ω{_sup(j + 1)} (degree {d}) = {self.ring.format(c)}"
            for j, (d, c) in enumerate(zip(self.degrees, self.coefficients))
        ]


def _sup(k: int) -> str:
    return str(k).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))


def _derivation_witness(chart: Chart, coordinate: str) -> RationalFunction:
    """(∂_v t)⁻¹。∂_t = witness·∂_v"""
    return chart.ring.inverse(chart.coordinate(coordinate).derive())


def derive_matrix(conn_chart: Chart, coordinate: str, ring: CoefficientRing, m: Mat) -> Mat:
    witness = _derivation_witness(conn_chart, coordinate)
    return mat_map(m, lambda x: ring.derive(x) * witness)


# ============================================================
# ゲージ作用
# ============================================================

def gauge_action(g: GroupElement, conn: OperConnection) -> OperConnection:
    """g·A = gAg⁻¹ − (∂_t g)g⁻¹ + (1/m)·tr((∂_t g)g⁻¹)·I"""
    ring = common_ring(g.ring, conn.ring)
    if g.size != conn.lie.size:
        raise ChartMismatchError(f"gauge element is {g.size}×{g.size}, connection is {conn.lie.size}×{conn.lie.size}")
    g = g.lift(ring)
    a = mat_coerce(ring, conn.matrix)
    adjoint = mat_mul(ring, mat_mul(ring, g.matrix, a), g.inverse_matrix)
    log_d = mat_mul(ring, derive_matrix(conn.chart, conn.coordinate, ring, g.matrix), g.inverse_matrix)
    scalar = mat_trace(ring, log_d) * Fraction(1, g.size)
    result = mat_add(mat_sub(adjoint, log_d), mat_scale(scalar, mat_identity(ring, g.size)))
    conn.lie.coordinates(result, ring)
    return OperConnection(conn.lie, conn.chart, conn.coordinate, result, ring)


# ============================================================
# oper 判定
# ============================================================

def is_oper(conn: OperConnection) -> OperDiagnostics:
    """次数 < −1 の成分が 0 で、各 f_i 成分がチャート環の単元か"""
    lie, ring = conn.lie, conn.ring
    problems: list[str] = []
    try:
        coords = lie.graded_coordinates(conn.matrix, ring)
    except NotInAlgebraError as e:
        return OperDiagnostics(False, [str(e)])
    for deg in lie.graded:
        if deg >= -1:
            continue
        for n, c in enumerate(lie.piece(coords, deg)):
            if not ring.is_zero(c):
                problems.append(f"degree {deg} component #{n + 1} is {ring.format(c)}, expected 0")
    units = lie.piece(coords, -1)
    for i, u in enumerate(units):
        if not ring.is_unit(u):
            problems.append(f"component on f{_sup(i + 1)} is {ring.format(u)}, which vanishes somewhere on {conn.chart.ring.name}")
    return OperDiagnostics(not problems, problems, units)


# ============================================================
# 正準化
# ============================================================

def _descend(ring: CoefficientRing, values: Sequence[Any]) -> tuple[CoefficientRing, list[Any]]:
    """二次拡大の元がすべて底環に落ちるなら底環へ"""
    if isinstance(ring, QuadraticExtension):
        down = [ring.descend(v) for v in values]
        if all(v is not None for v in down):
            return ring.base, down
    return ring, list(values)


def canonicalize(conn: OperConnection, allow_quadratic_extension: bool = False) -> tuple[CanonicalOper, GroupElement]:
    """(正準形, ゲージ元 g)。gauge_action(g, conn) が正準形の接続に一致する"""
    diagnostics = is_oper(conn)
    if not diagnostics.is_oper:
        raise NotAnOperError(diagnostics.problems)
    lie = conn.lie

    total = torus_element(lie, conn.ring, diagnostics.simple_root_components, allow_quadratic_extension)
    current = gauge_action(total, conn)
    ring = current.ring
    for deg in range(0, lie.top_degree):
        coords = lie.graded_coordinates(current.matrix, ring)
        upper, _ = lie.split(deg, lie.piece(coords, deg), ring)
        y = lie.from_piece(upper, deg + 1, ring)
        if mat_is_zero(ring, y):
            continue
        step = exp_nilpotent(ring, y)
        current = gauge_action(step, current)
        total = step * total

    coords = lie.graded_coordinates(current.matrix, ring)
    omega: list[Any] = []
    for deg in sorted(lie.vcan_by_degree):
        _, v = lie.split(deg, lie.piece(coords, deg), ring)
        omega.extend(v)
    out_ring, omega = _descend(ring, omega)
    canonical = CanonicalOper(lie, conn.chart, conn.coordinate, tuple(omega), out_ring)
    return canonical, total


# ============================================================
# シュワルツ微分と座標変換
# ============================================================

def schwarzian(chart: Chart, t: str | RationalFunction, s: str | RationalFunction) -> RationalFunction:
    """{t, s} = ∂³_s t/∂_s t − (3/2)(∂²_s t/∂_s t)²"""
    _, d1, d2, d3 = derivatives_wrt(chart, chart.resolve(t), s, 3)
    inv = chart.ring.inverse(d1)
    ratio = d2 * inv
    return d3 * inv - Fraction(3, 2) * ratio * ratio


def change_coords_gauge(
    lie: LieRealization, chart: Chart, t: str, s: str, allow_quadratic_extension: bool = False
) -> GroupElement:
    """座標 t の正準形を座標 s の正準形に移す元 e(∂²_s t/(2∂_s t))·ρ̌(∂_s t)"""
    _, phi, phi_d = derivatives_wrt(chart, chart.coordinate(t), s, 2)
    shift = phi_d * chart.ring.inverse(phi) * Fraction(1, 2)
    return exp_e(lie, chart.ring, shift) * rho_check(lie, chart.ring, phi, allow_quadratic_extension)


def change_coords(canon: CanonicalOper, s: str, allow_quadratic_extension: bool = False) -> CoordinateChange:
    """ω^{s,1} = φ²ω^{t,1} − ½{t,s}, ω^{s,j} = φ^{d_j+1}ω^{t,j}（φ = ∂_s t）"""
    chart, t = canon.chart, canon.coordinate
    phi = derivatives_wrt(chart, chart.coordinate(t), s, 1)[1]
    ring = canon.ring
    coefficients = []
    for j, (d, w) in enumerate(zip(canon.degrees, canon.coefficients)):
        value = ring.power(ring.coerce(phi), d + 1) * w
        if j == 0:
            value = value - schwarzian(chart, t, s) * Fraction(1, 2)
        coefficients.append(value)
    new = CanonicalOper(canon.lie, chart, s, tuple(coefficients), ring)
    gauge = change_coords_gauge(canon.lie, chart, t, s, allow_quadratic_extension)
    return CoordinateChange(new, gauge)


def rewrite_in_coordinate(conn: OperConnection, s: str) -> OperConnection:
    """d + A dt = d + (∂_s t)·A ds"""
    phi = derivatives_wrt(conn.chart, conn.chart.coordinate(conn.coordinate), s, 1)[1]
    matrix = mat_scale(conn.ring.coerce(phi), conn.matrix)
    return OperConnection(conn.lie, conn.chart, s, matrix, conn.ring)


def change_coords_oracle(canon: CanonicalOper, s: str, allow_quadratic_extension: bool = False) -> CanonicalOper:
    """独立な経路: A に ∂_s t を掛けて座標 s で正準化し直す"""
    rewritten = rewrite_in_coordinate(canon.to_connection(), s)
    return canonicalize(rewritten, allow_quadratic_extension)[0]


# ============================================================
# トルソルのコサイクル比較
# ============================================================

def _orientation(candidate: GroupElement, target: GroupElement, names: tuple[str, str]) -> str:
    if candidate == target:
        return names[0]
    if candidate.inverse() == target:
        return names[1]
    return "none"


def oper_cocycle(lie: LieRealization, chart: Chart, ti: str, tj: str, allow_quadratic_extension: bool = False) -> GroupElement:
    """c_ji: t_j での正準形 f₀ を t_i に書き直し、正準化したときのゲージ元"""
    base = CanonicalOper(lie, chart, tj, tuple(chart.ring.zero() for _ in range(lie.rank)), chart.ring)
    _, gauge = canonicalize(rewrite_in_coordinate(base.to_connection(), ti), allow_quadratic_extension)
    return gauge


def torsor_cocycle_check(
    lie: LieRealization,
    chart: Chart,
    ti: str,
    tj: str,
    tk: str | None = None,
    allow_quadratic_extension: bool = False,
) -> CocycleReport:
    """oper 側のコサイクル c_ji と、3 次ジェットのコサイクルの r による像を比較する

    c_ji は正準化アルゴリズムだけから得る（oper_cocycle）。
    jet_orientation: r(jet3_to_b2ad(ρ_{t_j t_i})) が c_ji に一致すれば "direct"、
    逆元に一致すれば "inverse"。
    gauge_orientation: 閉じた式 e(∂²t_j/(2∂t_j))·ρ̌(∂t_j)（∂ = ∂_{t_i}）が
    c_ji なら "same"、その逆元なら "inverse"。
    tk を与えると三重の重なりでの積の順序も記録する。
    """
    cocycle = oper_cocycle(lie, chart, ti, tj, allow_quadratic_extension)
    jet = project(taylor_cocycle_universal(chart, tj, ti, 3), 3)
    b2 = jet3_to_b2ad(jet)
    image = r_map(lie, b2, allow_quadratic_extension)
    jet_orientation = _orientation(image, cocycle, ("direct", "inverse"))

    closed_form = change_coords_gauge(lie, chart, tj, ti, allow_quadratic_extension)
    gauge_orientation = _orientation(closed_form, cocycle, ("same", "inverse"))

    triple_orientation, triple_jet = None, None
    if tk is not None:
        c_ki = oper_cocycle(lie, chart, ti, tk, allow_quadratic_extension)
        c_kj = oper_cocycle(lie, chart, tj, tk, allow_quadratic_extension)
        if c_ki == cocycle * c_kj:
            triple_orientation = "c_ki = c_ji·c_kj"
        elif c_ki == c_kj * cocycle:
            triple_orientation = "c_ki = c_kj·c_ji"
        triple_jet = cocycle_consistency(chart, tk, tj, ti, 3)

    return CocycleReport(
        coordinate_i=ti,
        coordinate_j=tj,
        oper_cocycle=cocycle,
        jet_cocycle=jet,
        b2ad=b2,
        r_image=image,
        jet_orientation=jet_orientation,
        gauge_orientation=gauge_orientation,
        coordinate_k=tk,
        triple_orientation=triple_orientation,
        triple_jet_holds=triple_jet,
    )


if __name__ == "__main__":
    from src.algebra.curve import LocalizedRing
    from src.algebra.liealg import build_sl

    ring = LocalizedRing.create("t", [0, 1])
    chart = Chart.create(ring, {"s": ring.element([1], [0, 1])})
    lie = build_sl(2)
    t = ring.variable_element()
    conn = OperConnection.create(lie, chart, "t", [[t, 1], [1, -t]])
    canon, g = canonicalize(conn)
    print("=== oper 正準化デモ ===\n")
    print(f"A = {conn.format()}")
    print("\n".join(canon.lines()))
    print(f"g = {g}")
    print(f"{{t, s}} = {schwarzian(chart, 't', 's')}")
    report = torsor_cocycle_check(lie, chart, "t", "s")
    print(f"cocycle check: jet={report.jet_orientation}, gauge={report.gauge_orientation}, passed={report.passed}")
