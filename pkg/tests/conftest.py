"""共通フィクスチャと hypothesis の設定"""

import pytest
from hypothesis import HealthCheck, settings

from src.algebra.curve import Chart, LocalizedRing
from src.algebra.liealg import build_sl
from src.cli import main
from tests.strategies import CHART, LAURENT

# 乱数生成は決定的（derandomize）。例数は各テストの @settings で指定する
settings.register_profile(
    "jetoper",
    derandomize=True,
    deadline=None,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("jetoper")


@pytest.fixture
def laurent() -> LocalizedRing:
    """ℚ[t, 1/t]"""
    return LAURENT


@pytest.fixture
def polynomial() -> LocalizedRing:
    """ℚ[t]"""
    return LocalizedRing.create("t", [1])


@pytest.fixture
def chart() -> Chart:
    """ℚ[t, 1/t] と座標 t, 1/t, t², 2t, 2t + 5"""
    return CHART


@pytest.fixture
def sl2():
    return build_sl(2)


@pytest.fixture
def sl3():
    return build_sl(3)


@pytest.fixture
def run_cli(capsys):
    """CLI を実行して (終了コード, 標準出力, 標準エラー出力) を返す"""

    def _run(*argv) -> tuple[int, str, str]:
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
