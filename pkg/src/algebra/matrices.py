"""係数環上の正方行列

行列は行のタプルのタプル。係数環は引数で明示する。
ℚ 上の線形代数（階数・核・逆行列）は sympy.Matrix に任せる。
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Sequence

from sympy import Matrix

from src.algebra.rings import CoefficientRing, to_fraction, to_sympy
from src.errors import NonUnitError

Mat = tuple[tuple[Any, ...], ...]


# ============================================================
# 生成
# ============================================================

def mat_zero(ring: CoefficientRing, size: int) -> Mat:
    return tuple(tuple(ring.zero() for _ in range(size)) for _ in range(size))


def mat_identity(ring: CoefficientRing, size: int) -> Mat:
    return tuple(tuple(ring.one() if i == j else ring.zero() for j in range(size)) for i in range(size))


def mat_diagonal(ring: CoefficientRing, values: Sequence[Any]) -> Mat:
    n = len(values)
    return tuple(tuple(ring.coerce(values[i]) if i == j else ring.zero() for j in range(n)) for i in range(n))


def elementary(size: int, i: int, j: int) -> Mat:
    """ℚ 上の行列単位 E_ij（0 始まり）"""
    return tuple(
        tuple(Fraction(1) if (r, c) == (i, j) else Fraction(0) for c in range(size)) for r in range(size)
    )


# ============================================================
# 演算
# ============================================================

def mat_map(m: Mat, func: Callable[[Any], Any]) -> Mat:
    return tuple(tuple(func(x) for x in row) for row in m)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat) -> Mat:
    return mat_map(a, lambda x: -x)


def mat_scale(c: Any, a: Mat) -> Mat:
    return mat_map(a, lambda x: c * x)


def mat_mul(ring: CoefficientRing, a: Mat, b: Mat) -> Mat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero()
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if x == 0 or y == 0:
                    continue
                acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def commutator(ring: CoefficientRing, a: Mat, b: Mat) -> Mat:
    """[a, b] = ab − ba"""
    return mat_sub(mat_mul(ring, a, b), mat_mul(ring, b, a))


def mat_power(ring: CoefficientRing, a: Mat, k: int) -> Mat:
    out = mat_identity(ring, len(a))
    for _ in range(k):
        out = mat_mul(ring, out, a)
    return out


def mat_trace(ring: CoefficientRing, a: Mat) -> Any:
    acc = ring.zero()
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def mat_is_zero(ring: CoefficientRing, a: Mat) -> bool:
    return all(ring.is_zero(x) for row in a for x in row)


def mat_coerce(ring: CoefficientRing, a: Mat) -> Mat:
    return mat_map(a, ring.coerce)


# ============================================================
# 行列式・逆行列
# ============================================================

def mat_det(ring: CoefficientRing, a: Mat) -> Any:
    """第 1 行からの余因子展開（列の部分集合でメモ化）"""
    n = len(a)
    memo: dict[tuple[int, frozenset], Any] = {}

    def minor(row: int, cols: frozenset) -> Any:
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        ordered = sorted(cols)
        for pos, c in enumerate(ordered):
            x = a[row][c]
            if ring.is_zero(x):
                continue
            term = x * minor(row + 1, cols - {c})
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, frozenset(range(n)))


def mat_adjugate(ring: CoefficientRing, a: Mat) -> Mat:
    """余因子行列の転置"""
    n = len(a)
    if n == 1:
        return ((ring.one(),),)
    out = [[ring.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = tuple(tuple(a[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            cof = mat_det(ring, sub)
            out[j][i] = -cof if (i + j) % 2 else cof
    return tuple(tuple(row) for row in out)


def mat_inverse(ring: CoefficientRing, a: Mat) -> Mat:
    det = mat_det(ring, a)
    if not ring.is_unit(det):
        raise NonUnitError(f"determinant {ring.format(det)} is not a unit of {ring.name}")
    inv = ring.inverse(det)
    return mat_scale(inv, mat_adjugate(ring, a))


# ============================================================
# 平坦化と sympy 行列
# ============================================================

def flatten(a: Mat) -> list[Any]:
    return [x for row in a for x in row]


def unflatten(values: Sequence[Any], size: int) -> Mat:
    return tuple(tuple(values[i * size + j] for j in range(size)) for i in range(size))


def columns_matrix(mats: Sequence[Mat]) -> Matrix:
    """ℚ 行列の列を平坦化したものを列ベクトルとして並べる"""
    if not mats:
        return Matrix.zeros(0, 0)
    return Matrix.hstack(*[Matrix([to_sympy(to_fraction(x)) for x in flatten(m)]) for m in mats])


def format_entries(ring: CoefficientRing, a: Mat) -> list[list[str]]:
    return [[ring.format(x) for x in row] for row in a]
