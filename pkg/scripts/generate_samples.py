#!/usr/bin/env python3
"""乱数サンプル入力ファイル生成スクリプト

ℚ[t, 1/t] 上のチャート・oper・正準形を JSON に書き出す。
CLI の入力例や手動検証用（シードを固定すれば同じファイルになる）。
"""

import argparse
import os
import random
import sys
from pathlib import Path

# プロジェクトルート
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

try:
    from dotenv import load_dotenv
    load_dotenv(PROJECT_ROOT / ".env")
except ImportError:
    pass

from src.algebra.curve import Chart
from src.algebra.liealg import build_sl
from src.utils.io import save_json, serialize_canonical, serialize_chart, serialize_connection, serialize_jet
from src.utils.sampling import (
    laurent_chart,
    random_aut,
    random_canonical,
    random_coordinate,
    random_mobius,
    random_oper,
)

# === 設定 ===
DEFAULT_SEED = int(os.getenv("JETOPER_SEED", "20240613"))
DEFAULT_COUNT = 3
DEFAULT_ORDER = int(os.getenv("JETOPER_DEFAULT_ORDER", "3"))
OUTPUT_DIR = PROJECT_ROOT / "data" / "generated"
LIE_SIZES = (2, 3)


def build_chart(rng: random.Random) -> Chart:
    """ℚ[t, 1/t] に乱数座標 c1, c2 とメビウス座標 m を登録"""
    base = laurent_chart()
    ring = base.ring
    return Chart.create(ring, {
        "c1": random_coordinate(rng, ring),
        "c2": random_coordinate(rng, ring),
        "m": random_mobius(rng, ring),
    })


def generate(rng: random.Random, count: int, order: int, output_dir: Path) -> list[Path]:
    written: list[Path] = []

    chart = build_chart(rng)
    path = output_dir / "chart.json"
    save_json(serialize_chart(chart), path)
    written.append(path)

    for i in range(count):
        path = output_dir / f"jet_{i}.json"
        tau = random_aut(rng, chart.ring, order)
        data = serialize_jet(tau)
        data["chart"] = "chart.json"
        save_json(data, path)
        written.append(path)

    for n in LIE_SIZES:
        lie = build_sl(n)
        for i in range(count):
            conn = serialize_connection(random_oper(rng, lie, chart))
            conn["chart"] = "chart.json"
            path = output_dir / f"sl{n}_oper_{i}.json"
            save_json(conn, path)
            written.append(path)

            canon = serialize_canonical(random_canonical(rng, lie, chart))
            canon["chart"] = "chart.json"
            path = output_dir / f"sl{n}_canonical_{i}.json"
            save_json(canon, path)
            written.append(path)

    return written


def main():
    parser = argparse.ArgumentParser(description="乱数サンプル入力ファイルを生成")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"乱数シード（デフォルト: {DEFAULT_SEED}）")
    parser.add_argument("--count", type=int, default=DEFAULT_COUNT, help="種類ごとの生成数")
    parser.add_argument("--order", type=int, default=DEFAULT_ORDER, help="ジェットの切断次数")
    parser.add_argument("--output", type=str, default=str(OUTPUT_DIR), help="出力ディレクトリ")
    args = parser.parse_args()

    if args.count < 1 or args.order < 2:
        print("❌ --count は 1 以上、--order は 2 以上を指定してください", file=sys.stderr)
        sys.exit(2)

    print(f"⚙️ 生成中（seed={args.seed}, count={args.count}）...", file=sys.stderr)
    written = generate(random.Random(args.seed), args.count, args.order, Path(args.output))
    for path in written:
        print(f"📄 {path}", file=sys.stderr)
    print(f"✅ {len(written)} ファイルを出力しました", file=sys.stderr)


if __name__ == "__main__":
    main()
