"""例外定義

ライブラリ内のエラーはすべて JetOperError を継承する。
CLI は code を機械可読なプレフィックスとして出力し、exit_code で終了する。
"""

from __future__ import annotations

# 終了コード
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3


class JetOperError(Exception):
    """jetoper の基底例外"""

    code = "domain-error"
    exit_code = EXIT_DOMAIN


class ParseError(JetOperError):
    """入力ファイル・リテラルの解析エラー（行・列つき）"""

    code = "parse-error"
    exit_code = EXIT_PARSE

    def __init__(self, message: str, source: str = "<input>", line: int | None = None, column: int | None = None):
        self.source = source
        self.line = line
        self.column = column
        location = source
        if line is not None:
            location += f":{line}"
            if column is not None:
                location += f":{column}"
        super().__init__(f"{location}: {message}")


class RingMismatchError(JetOperError):
    """係数環が異なる値同士の演算"""

    code = "ring-mismatch"


class OrderError(JetOperError):
    """切断次数の不一致・範囲外"""

    code = "order-error"


class CompositionDomainError(JetOperError):
    """合成 f(g(z)) で g の定数項が 0 でない"""

    code = "composition-domain"


class NonUnitError(JetOperError):
    """単元でない元による除算・単元であるべき引数が単元でない"""

    code = "non-unit"


class InvalidCoordinateError(JetOperError):
    """∂s がチャート環の単元でない（座標ではない）"""

    code = "invalid-coordinate"


class PointOutsideChartError(JetOperError):
    """q(x) = 0 となる点（チャート外）"""

    code = "point-outside-chart"


class NotInAlgebraError(JetOperError):
    """行列が 𝔤 の基底の張る空間に入っていない"""

    code = "not-in-algebra"


class RealizationError(JetOperError):
    """リー環の行列実現が不変条件を満たさない"""

    code = "invalid-realization"

    def __init__(self, failures: list[str]):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class NotAnOperError(JetOperError):
    """接続が oper 条件を満たさない"""

    code = "not-an-oper"

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class TorusObstructionError(JetOperError):
    """トーラス段階で必要な単元の冪根がチャート環で表せない"""

    code = "torus-obstruction"


class ChartMismatchError(JetOperError):
    """異なるチャート・座標の値を混ぜた"""

    code = "chart-mismatch"


class CocycleMismatchError(JetOperError):
    """oper のコサイクルと 3 次ジェットの像が一致しない"""

    code = "cocycle-mismatch"
