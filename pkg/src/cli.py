#!/usr/bin/env python3
"""
jetoper CLI

ジェット群・座標コサイクル・oper の正準形を厳密計算する

    aut      … Aut⁺ₙO の演算（mul / inv / project / decompose / kernel）
    cocycle  … 座標変換のテイラーコサイクル
    oper     … oper の正準化・座標変換・シュワルツ微分・判定・コサイクル比較
"""

import argparse
import os
import sys
from pathlib import Path

# プロジェクトルートをパスに追加
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

# .envファイルから環境変数を読み込み
try:
    from dotenv import load_dotenv
    load_dotenv(PROJECT_ROOT / ".env")
except ImportError:
    pass

from src.algebra.curve import taylor_cocycle_at_point, taylor_cocycle_universal
from src.algebra.jetgroup import aut_inverse, aut_mul, decompose, kernel_witness, project
from src.algebra.oper import (
    canonicalize,
    change_coords,
    is_oper,
    rewrite_in_coordinate,
    schwarzian,
    torsor_cocycle_check,
)
from src.algebra.rings import parse_rational
from src.errors import EXIT_OK, CocycleMismatchError, JetOperError, ParseError
from src.utils import io

# 設定（フラグが優先）
DEFAULT_ORDER = int(os.getenv("JETOPER_DEFAULT_ORDER", "3"))
DEFAULT_ALLOW_EXTENSION = os.getenv("JETOPER_ALLOW_QUADRATIC_EXTENSION", "0") == "1"


def progress(args: argparse.Namespace, message: str) -> None:
    """進捗表示（標準エラー出力、-q で抑制）"""
    if not args.quiet:
        print(message, file=sys.stderr)


def emit(args: argparse.Namespace, text: str, data) -> None:
    """結果を標準出力へ（--json なら正準 JSON）"""
    print(io.dumps(data) if args.json else text)


# ============================================================
# aut
# ============================================================

def load_series(args: argparse.Namespace, ref: str):
    """ファイルパスまたは "0,2,1" 形式のリテラル"""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        progress(args, f"📥 読み込み中: {path}")
        return io.load_jet(path)
    return io.parse_jet_literal(ref, args.order)


def cmd_aut(args: argparse.Namespace) -> int:
    tau = load_series(args, args.series)
    if args.action == "mul":
        if args.other is None:
            raise ParseError("aut mul needs two series", "<args>")
        result = aut_mul(tau, load_series(args, args.other))
        emit(args, str(result), io.serialize_jet(result))
    elif args.action == "inv":
        result = aut_inverse(tau)
        emit(args, str(result), io.serialize_jet(result))
    elif args.action == "project":
        if args.to is None:
            raise ParseError("aut project needs --to m", "<args>")
        result = project(tau, args.to)
        emit(args, str(result), io.serialize_jet(result))
    elif args.action == "decompose":
        gm, unipotent = decompose(tau)
        text = f"λ = {tau.ring.format(gm.unit)}\nu = {unipotent.jet}"
        emit(args, text, {"unit": io.serialize_value(tau.ring, gm.unit), "unipotent": io.serialize_jet(unipotent.jet)})
    elif args.action == "kernel":
        c = kernel_witness(tau)
        text = "not in the kernel" if c is None else f"c = {tau.ring.format(c)}"
        emit(args, text, {"witness": None if c is None else io.serialize_value(tau.ring, c)})
    return EXIT_OK


# ============================================================
# cocycle
# ============================================================

def cmd_cocycle(args: argparse.Namespace) -> int:
    progress(args, f"📥 読み込み中: {args.chart}")
    chart = io.load_chart(args.chart)
    progress(args, "⚙️  コサイクル計算中...")
    if args.at is not None:
        x = parse_rational(args.at, "--at")
        result = taylor_cocycle_at_point(chart, args.s, args.t, x, args.order)
    else:
        result = taylor_cocycle_universal(chart, args.s, args.t, args.order)
    emit(args, str(result), io.serialize_jet(result))
    return EXIT_OK


# ============================================================
# oper
# ============================================================

def _canonical_text(canon) -> str:
    return "\n".join([f"coordinate: {canon.coordinate}"] + canon.lines())


def cmd_oper(args: argparse.Namespace) -> int:
    allow = args.allow_quadratic_extension or DEFAULT_ALLOW_EXTENSION
    action = args.action

    if action in ("schwarzian", "cocycle-check"):
        progress(args, f"📥 読み込み中: {args.chart}")
        chart = io.load_chart(args.chart)
        if action == "schwarzian":
            value = schwarzian(chart, args.t, args.s)
            emit(args, chart.ring.format(value), {"schwarzian": io.serialize_value(chart.ring, value)})
            return EXIT_OK
        lie = io.parse_lie(args.lie or "sl2", Path.cwd(), "--lie")
        progress(args, f"⚙️  コサイクル比較中 ({lie.label})...")
        report = torsor_cocycle_check(lie, chart, args.ti, args.tj, args.tk, allow)
        lines = [
            f"c_ji = {report.oper_cocycle}",
            f"jet = {report.jet_cocycle}",
            f"b2ad = ({chart.ring.format(report.b2ad.a)}, {chart.ring.format(report.b2ad.b)})",
            f"r(jet) = {report.r_image}",
            f"jet orientation: {report.jet_orientation}",
            f"gauge orientation: {report.gauge_orientation}",
        ]
        if report.coordinate_k is not None:
            lines.append(f"triple: {report.triple_orientation or 'none'}")
            lines.append(f"triple jet cocycle: {str(report.triple_jet_holds).lower()}")
        lines.append(f"passed: {str(report.passed).lower()}")
        data = {
            "coordinates": [report.coordinate_i, report.coordinate_j] + ([report.coordinate_k] if report.coordinate_k else []),
            "oper_cocycle": io.serialize_group_element(report.oper_cocycle),
            "jet_cocycle": io.serialize_jet(report.jet_cocycle),
            "r_image": io.serialize_group_element(report.r_image),
            "jet_orientation": report.jet_orientation,
            "gauge_orientation": report.gauge_orientation,
            "triple_orientation": report.triple_orientation,
            "triple_jet_holds": report.triple_jet_holds,
            "passed": report.passed,
        }
        emit(args, "\n".join(lines), data)
        if not report.passed:
            raise CocycleMismatchError(
                f"{report.coordinate_i} → {report.coordinate_j}: "
                f"jet {report.jet_orientation}, gauge {report.gauge_orientation}"
            )
        return EXIT_OK

    path = args.file
    progress(args, f"📥 読み込み中: {path}")
    raw = io.load_json(path)

    if action == "change-coords":
        if "coefficients" in raw:
            canon = io.parse_canonical(raw, path.parent, str(path))
        else:
            canon, _ = canonicalize(io.parse_connection(raw, path.parent, str(path)), allow)
        progress(args, f"⚙️  座標変換中: {canon.coordinate} → {args.to}")
        change = change_coords(canon, args.to, allow)
        text = _canonical_text(change.oper) + f"\ngauge = {change.gauge}"
        emit(args, text, {"oper": io.serialize_canonical(change.oper), "gauge": io.serialize_group_element(change.gauge)})
        return EXIT_OK

    conn = io.parse_connection(raw, path.parent, str(path))
    if action == "is-oper":
        diag = is_oper(conn)
        text = "\n".join([str(diag.is_oper).lower()] + [f"  - {p}" for p in diag.problems])
        emit(args, text, {"is_oper": diag.is_oper, "problems": diag.problems})
    elif action == "canonicalize":
        progress(args, "⚙️  正準化中...")
        canon, gauge = canonicalize(conn, allow)
        text = _canonical_text(canon) + f"\ngauge = {gauge}"
        emit(args, text, {"oper": io.serialize_canonical(canon), "gauge": io.serialize_group_element(gauge)})
    elif action == "rewrite":
        rewritten = rewrite_in_coordinate(conn, args.to)
        emit(args, f"coordinate: {rewritten.coordinate}\nA = {rewritten.format()}", io.serialize_connection(rewritten))
    return EXIT_OK


# ============================================================
# エントリポイント
# ============================================================

class CliParser(argparse.ArgumentParser):
    """引数エラーを ParseError として送出する"""

    def error(self, message: str):
        raise ParseError(message, "<args>")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="jetoper",
        description="jetoper: ジェット群・座標コサイクル・oper 正準形の厳密計算"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="結果を正準 JSON で出力")
    common.add_argument("-q", "--quiet", action="store_true", help="進捗表示を抑制")
    sub = parser.add_subparsers(dest="command", required=True)

    aut = sub.add_parser("aut", parents=[common], help="Aut⁺ₙO の演算")
    aut.add_argument("action", choices=["mul", "inv", "project", "decompose", "kernel"])
    aut.add_argument("series", help="ジェットファイル（.json）または係数リテラル \"0,1,1\"")
    aut.add_argument("other", nargs="?", help="mul の第 2 引数")
    aut.add_argument("--order", type=int, default=DEFAULT_ORDER, help=f"リテラルの切断次数 (default: {DEFAULT_ORDER})")
    aut.add_argument("--to", type=int, help="project の行き先の次数")
    aut.set_defaults(handler=cmd_aut)

    cocycle = sub.add_parser("cocycle", parents=[common], help="座標変換コサイクル triv_st")
    cocycle.add_argument("--chart", type=Path, required=True, help="チャートファイル")
    cocycle.add_argument("s", help="座標 s")
    cocycle.add_argument("t", help="座標 t")
    cocycle.add_argument("--order", type=int, default=DEFAULT_ORDER, help=f"切断次数 (default: {DEFAULT_ORDER})")
    cocycle.add_argument("--at", help="有理点で評価（例: 3, 1/2）")
    cocycle.set_defaults(handler=cmd_cocycle)

    oper = sub.add_parser("oper", help="oper の正準化・座標変換")
    actions = oper.add_subparsers(dest="action", required=True)
    extension = argparse.ArgumentParser(add_help=False)
    extension.add_argument(
        "--allow-quadratic-extension",
        action="store_true",
        help="トーラス段階で単元の平方根を添加する",
    )

    for name, help_text in [
        ("canonicalize", "接続を正準形へ"),
        ("is-oper", "oper 条件の判定"),
    ]:
        p = actions.add_parser(name, parents=[common, extension], help=help_text)
        p.add_argument("file", type=Path, help="接続ファイル")

    for name, help_text, file_help in [
        ("change-coords", "正準形の座標変換", "正準形または接続ファイル"),
        ("rewrite", "接続を別の座標で書き直す", "接続ファイル"),
    ]:
        p = actions.add_parser(name, parents=[common, extension], help=help_text)
        p.add_argument("file", type=Path, help=file_help)
        p.add_argument("--to", required=True, help="新しい座標名")

    p = actions.add_parser("schwarzian", parents=[common, extension], help="シュワルツ微分 {t, s}")
    p.add_argument("--chart", type=Path, required=True, help="チャートファイル")
    p.add_argument("t", help="座標 t")
    p.add_argument("s", help="座標 s")

    p = actions.add_parser("cocycle-check", parents=[common, extension], help="oper のコサイクルと r(jet) の比較")
    p.add_argument("--chart", type=Path, required=True, help="チャートファイル")
    p.add_argument("--lie", help="sl2 / sl:3 / 実現ファイル (default: sl2)")
    p.add_argument("ti", help="座標 t_i")
    p.add_argument("tj", help="座標 t_j")
    p.add_argument("tk", nargs="?", help="三重重なりの座標 t_k")

    oper.set_defaults(handler=cmd_oper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except JetOperError as e:
        print(f"❌ {e.code}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
