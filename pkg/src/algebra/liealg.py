"""単純リー環の行列実現

シュバレー生成元 e_i, f_i, h_i を与えると以下を計算する。

    - 主 sl₂ 三つ組 (e₀, h₀, f₀)（f₀ = Σ f_i）
    - 主次数付け 𝔤 = ⊕ 𝔤_k（e_i の次数 1, f_i の次数 −1）
    - V_can = ker(ad e₀) の次数付き基底と指数
    - 各次数での分解 𝔤_k = ad f₀(𝔤_{k+1}) ⊕ V_can_k
    - 基本余ウェイトとのペアリング（トーラス元 ρ̌ の計算用）

群の元は「スカラー倍を除いて」扱う（随伴群）。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import floor
from typing import Any, Sequence

from sympy import Matrix

from src.algebra.curve import LocalizedRing, QuadraticExtension, common_ring
from src.algebra.jetgroup import AutJet
from src.algebra.matrices import (
    Mat,
    columns_matrix,
    commutator,
    elementary,
    flatten,
    format_entries,
    mat_add,
    mat_coerce,
    mat_diagonal,
    mat_identity,
    mat_inverse,
    mat_is_zero,
    mat_mul,
    mat_neg,
    mat_power,
    mat_scale,
    mat_sub,
    mat_zero,
    unflatten,
)
from src.algebra.rings import QQ_RING, CoefficientRing, to_fraction
from src.errors import NonUnitError, NotInAlgebraError, OrderError, RealizationError, TorusObstructionError
from src.models import B2AdElement
from src.utils.render import format_matrix, format_sqrt

# 疎な射影行列の 1 行: (列番号, 係数) の列
SparseRow = tuple[tuple[int, Fraction], ...]


# ============================================================
# ℚ 行列の疎な座標計算
# ============================================================

def _projector(mats: Sequence[Mat]) -> tuple[SparseRow, ...]:
    """基底行列 B に対する左逆 (BᵀB)⁻¹Bᵀ を疎行で"""
    big = columns_matrix(mats)
    proj = (big.T * big).inv() * big.T
    rows = []
    for i in range(proj.rows):
        rows.append(tuple((j, to_fraction(proj[i, j])) for j in range(proj.cols) if proj[i, j] != 0))
    return tuple(rows)


def _apply(proj: Sequence[SparseRow], vec: Sequence[Any], ring: CoefficientRing) -> list[Any]:
    out = []
    for row in proj:
        acc = ring.zero()
        for j, p in row:
            x = vec[j]
            if x == 0:
                continue
            acc = acc + p * x
        out.append(acc)
    return out


def _combine(ring: CoefficientRing, coeffs: Sequence[Any], mats: Sequence[Mat], size: int) -> Mat:
    """Σ c_i·M_i（M_i は ℚ 行列）"""
    acc = [ring.zero()] * (size * size)
    for c, m in zip(coeffs, mats):
        if ring.is_zero(c):
            continue
        for idx, x in enumerate(flatten(m)):
            if x != 0:
                acc[idx] = acc[idx] + x * c
    return unflatten(acc, size)


def _rank(mats: Sequence[Mat]) -> int:
    return columns_matrix(mats).rank() if mats else 0


# ============================================================
# リー環の実現
# ============================================================

@dataclass(eq=False)
class LieRealization:
    """m×m 行列による 𝔤 の実現（構築は from_chevalley / build_sl）"""

    label: str
    size: int
    basis: tuple[Mat, ...]
    e: tuple[Mat, ...]
    f: tuple[Mat, ...]
    h: tuple[Mat, ...]
    cartan: tuple[tuple[Fraction, ...], ...]  # cartan[l][i] = α_i(h_l)
    graded: dict[int, tuple[Mat, ...]]
    e0: Mat
    f0: Mat
    h0: Mat
    vcan_by_degree: dict[int, tuple[Mat, ...]]
    pairing: tuple[tuple[Fraction, ...], ...]  # pairing[k][j] = ⟨μ_k, ω̌_j⟩
    _basis_proj: tuple[SparseRow, ...] = field(repr=False)
    _graded_proj: tuple[SparseRow, ...] = field(repr=False)
    _split: dict[int, tuple[tuple[Fraction, ...], ...]] = field(repr=False)

    # ------------------------------------------------------------
    # 構築
    # ------------------------------------------------------------

    @classmethod
    def from_chevalley(
        cls,
        size: int,
        basis: Sequence[Sequence[Sequence[Any]]],
        e: Sequence[int],
        f: Sequence[int],
        h: Sequence[int],
        label: str = "custom",
    ) -> "LieRealization":
        """基底行列とシュバレー生成元の番号から実現を構築し、全不変条件を検証する

        失敗した条件はまとめて RealizationError で報告する。
        """
        failures: list[str] = []
        mats: list[Mat] = []
        for n, rows in enumerate(basis):
            if len(rows) != size or any(len(r) != size for r in rows):
                failures.append(f"basis[{n}] is not {size}×{size}")
                continue
            mats.append(tuple(tuple(to_fraction(x) for x in r) for r in rows))
        if size < 2:
            failures.append("matrix size must be at least 2")
        if not (len(e) == len(f) == len(h) >= 1):
            failures.append("e, f, h must list the same positive number of generators")
        for key, idx in (("e", e), ("f", f), ("h", h)):
            for i in idx:
                if not 0 <= i < len(basis):
                    failures.append(f"{key} index {i} outside the basis")
        if failures:
            raise RealizationError(failures)

        d = len(mats)
        if _rank(mats) != d:
            raise RealizationError(["basis matrices are linearly dependent"])
        es, fs, hs = [mats[i] for i in e], [mats[i] for i in f], [mats[i] for i in h]
        r = len(es)
        proj = _projector(mats)

        def in_span(x: Mat) -> bool:
            coords = _apply(proj, flatten(x), QQ_RING)
            return _combine(QQ_RING, coords, mats, size) == x

        def br(x: Mat, y: Mat) -> Mat:
            return commutator(QQ_RING, x, y)

        # 括弧積で閉じているか
        for a in range(d):
            for b in range(a + 1, d):
                if not in_span(br(mats[a], mats[b])):
                    failures.append(f"[basis[{a}], basis[{b}]] leaves the span of the basis")
        for i, hi in enumerate(hs):
            if any(hi[p][q] != 0 for p in range(size) for q in range(size) if p != q):
                failures.append(f"h[{i}] is not diagonal")

        # シュバレー関係式
        cartan = [[Fraction(0)] * r for _ in range(r)]
        for l in range(r):
            for i in range(r):
                z = br(hs[l], es[i])
                pivot = next(((p, q) for p in range(size) for q in range(size) if es[i][p][q] != 0), None)
                if pivot is None:
                    failures.append(f"e[{i}] is zero")
                    continue
                lam = z[pivot[0]][pivot[1]] / es[i][pivot[0]][pivot[1]]
                cartan[l][i] = lam
                if z != mat_scale(lam, es[i]):
                    failures.append(f"e[{i}] is not an eigenvector of ad h[{l}]")
                if br(hs[l], fs[i]) != mat_scale(-lam, fs[i]):
                    failures.append(f"[h[{l}], f[{i}]] ≠ {-lam}·f[{i}]")
                expected = hs[i] if l == i else mat_zero(QQ_RING, size)
                if br(es[i], fs[l]) != expected:
                    failures.append(f"[e[{i}], f[{l}]] ≠ {'h[' + str(i) + ']' if l == i else '0'}")
                if not mat_is_zero(QQ_RING, br(hs[l], hs[i])):
                    failures.append(f"[h[{l}], h[{i}]] ≠ 0")
        for i in range(r):
            if cartan[i][i] != 2:
                failures.append(f"α_{i + 1}(h_{i + 1}) = {cartan[i][i]}, expected 2")
        cartan_sym = Matrix(r, r, lambda l, i: cartan[l][i])
        if cartan_sym.det() == 0:
            failures.append("Cartan matrix is singular")
        if failures:
            raise RealizationError(failures)

        # 主次数付け（生成元から括弧積で張る）
        graded: dict[int, list[Mat]] = {-1: list(fs), 0: list(hs), 1: list(es)}
        k = 1
        while graded[k]:
            piece: list[Mat] = []
            for x in graded[k]:
                for ei in es:
                    cand = br(x, ei)
                    if not mat_is_zero(QQ_RING, cand) and _rank(piece + [cand]) > len(piece):
                        piece.append(cand)
            k += 1
            graded[k] = piece
        k = -1
        while graded[k]:
            piece = []
            for x in graded[k]:
                for fi in fs:
                    cand = br(fi, x)
                    if not mat_is_zero(QQ_RING, cand) and _rank(piece + [cand]) > len(piece):
                        piece.append(cand)
            k -= 1
            graded[k] = piece
        graded_t = {deg: tuple(ms) for deg, ms in sorted(graded.items()) if ms}
        flat = [m for deg in graded_t for m in graded_t[deg]]
        if len(flat) != d or _rank(flat) != d:
            raise RealizationError([f"generators span a subalgebra of dimension {len(flat)}, basis has {d}"])
        graded_proj = _projector(flat)
        offsets = _offsets(graded_t)

        def piece_coords(x: Mat, deg: int) -> list[Fraction]:
            coords = _apply(graded_proj, flatten(x), QQ_RING)
            start, stop = offsets[deg]
            return coords[start:stop]

        # 主 sl₂ 三つ組: α_i(h₀) = 2 を解き e₀ = Σ c_i e_i
        c = cartan_sym.T.solve(Matrix([2] * r))
        cs = [to_fraction(x) for x in c]
        h0 = _combine(QQ_RING, cs, hs, size)
        e0 = _combine(QQ_RING, cs, es, size)
        f0 = _combine(QQ_RING, [Fraction(1)] * r, fs, size)
        if br(e0, f0) != h0:
            failures.append("[e₀, f₀] ≠ h₀")
        if br(h0, e0) != mat_scale(Fraction(2), e0):
            failures.append("[h₀, e₀] ≠ 2e₀")
        if br(h0, f0) != mat_scale(Fraction(-2), f0):
            failures.append("[h₀, f₀] ≠ −2f₀")

        # V_can = ker ad e₀（次数ごと）
        top = max(graded_t)
        vcan: dict[int, tuple[Mat, ...]] = {}
        for deg in range(1, top + 1):
            piece = graded_t[deg]
            if deg + 1 in graded_t:
                cols = Matrix.hstack(*[Matrix(piece_coords(br(e0, x), deg + 1)) for x in piece])
                kernel = cols.nullspace()
            else:
                kernel = [Matrix([1 if i == j else 0 for i in range(len(piece))]) for j in range(len(piece))]
            chosen: list[Mat] = []
            power = mat_power(QQ_RING, e0, deg)
            if not mat_is_zero(QQ_RING, power) and in_span(power) and _combine(
                QQ_RING, piece_coords(power, deg), piece, size
            ) == power:
                chosen.append(power)
            for vec in kernel:
                if len(chosen) == len(kernel):
                    break
                cand = _combine(QQ_RING, [to_fraction(x) for x in vec], piece, size)
                if _rank(chosen + [cand]) > len(chosen):
                    chosen.append(cand)
            if chosen:
                vcan[deg] = tuple(chosen)
        if sum(len(v) for v in vcan.values()) != r:
            failures.append(f"dim V_can = {sum(len(v) for v in vcan.values())}, rank is {r}")
        if 1 not in vcan or vcan[1][0] != e0:
            failures.append("e₀ is not the first V_can basis vector")

        # 𝔤_k = ad f₀(𝔤_{k+1}) ⊕ V_can_k
        split: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
        for deg in range(0, top + 1):
            upper = graded_t.get(deg + 1, ())
            columns = [piece_coords(br(f0, y), deg) for y in upper]
            columns += [piece_coords(v, deg) for v in vcan.get(deg, ())]
            n_k = len(graded_t[deg])
            if len(columns) != n_k:
                failures.append(f"degree {deg}: ad f₀(𝔤_{deg + 1}) ⊕ V_can has {len(columns)} generators for dimension {n_k}")
                continue
            square = Matrix.hstack(*[Matrix(col) for col in columns])
            if square.det() == 0:
                failures.append(f"degree {deg}: ad f₀ is not injective or meets V_can")
                continue
            inv = square.inv()
            split[deg] = tuple(tuple(to_fraction(inv[i, j]) for j in range(n_k)) for i in range(n_k))
        if failures:
            raise RealizationError(failures)

        # 余ウェイトとのペアリング
        coweight = cartan_sym.inv()
        pairing = tuple(
            tuple(
                sum((to_fraction(coweight[j, l]) * hs[l][k][k] for l in range(r)), Fraction(0))
                for j in range(r)
            )
            for k in range(size)
        )

        return cls(
            label=label,
            size=size,
            basis=tuple(mats),
            e=tuple(es),
            f=tuple(fs),
            h=tuple(hs),
            cartan=tuple(tuple(row) for row in cartan),
            graded=graded_t,
            e0=e0,
            f0=f0,
            h0=h0,
            vcan_by_degree=vcan,
            pairing=pairing,
            _basis_proj=proj,
            _graded_proj=graded_proj,
            _split=split,
        )

    # ------------------------------------------------------------
    # 基本データ
    # ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.e)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def top_degree(self) -> int:
        return max(self.graded)

    @cached_property
    def graded_basis(self) -> tuple[Mat, ...]:
        return tuple(m for deg in self.graded for m in self.graded[deg])

    @cached_property
    def offsets(self) -> dict[int, tuple[int, int]]:
        return _offsets(self.graded)

    @cached_property
    def vcan(self) -> tuple[Mat, ...]:
        return tuple(v for deg in sorted(self.vcan_by_degree) for v in self.vcan_by_degree[deg])

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        """V_can 基底の次数 d_1 ≤ … ≤ d_r"""
        return tuple(deg for deg in sorted(self.vcan_by_degree) for _ in self.vcan_by_degree[deg])

    # ------------------------------------------------------------
    # 括弧積と座標
    # ------------------------------------------------------------

    def bracket(self, x: Mat, y: Mat, ring: CoefficientRing = QQ_RING) -> Mat:
        return commutator(ring, x, y)

    def coordinates(self, x: Mat, ring: CoefficientRing = QQ_RING) -> list[Any]:
        """基底に関する座標（𝔤 に入らなければ NotInAlgebraError）"""
        coords = _apply(self._basis_proj, flatten(x), ring)
        if _combine(ring, coords, self.basis, self.size) != mat_coerce(ring, x):
            raise NotInAlgebraError(f"matrix is not in the span of {self.label}")
        return coords

    def graded_coordinates(self, x: Mat, ring: CoefficientRing = QQ_RING) -> list[Any]:
        coords = _apply(self._graded_proj, flatten(x), ring)
        if _combine(ring, coords, self.graded_basis, self.size) != mat_coerce(ring, x):
            raise NotInAlgebraError(f"matrix is not in the span of {self.label}")
        return coords

    def in_algebra(self, x: Mat, ring: CoefficientRing = QQ_RING) -> bool:
        try:
            self.coordinates(x, ring)
        except NotInAlgebraError:
            return False
        return True

    def element(self, coords: Sequence[Any], ring: CoefficientRing = QQ_RING) -> Mat:
        """基底座標から行列を作る"""
        return _combine(ring, [ring.coerce(c) for c in coords], self.basis, self.size)

    def piece(self, coords: Sequence[Any], degree: int) -> list[Any]:
        start, stop = self.offsets.get(degree, (0, 0))
        return list(coords[start:stop])

    def from_piece(self, coords: Sequence[Any], degree: int, ring: CoefficientRing) -> Mat:
        return _combine(ring, coords, self.graded.get(degree, ()), self.size)

    def grading_decompose(self, x: Mat, ring: CoefficientRing = QQ_RING) -> dict[int, Mat]:
        """次数ごとの成分（0 の成分は含めない）"""
        coords = self.graded_coordinates(x, ring)
        out: dict[int, Mat] = {}
        for deg in self.graded:
            part = self.piece(coords, deg)
            if any(not ring.is_zero(c) for c in part):
                out[deg] = self.from_piece(part, deg, ring)
        return out

    def ad(self, x: Mat) -> list[list[Fraction]]:
        """ad x の表現行列（基底座標、x は ℚ 行列）"""
        columns = [self.coordinates(commutator(QQ_RING, x, b)) for b in self.basis]
        return [[columns[j][i] for j in range(self.dimension)] for i in range(self.dimension)]

    def split(self, degree: int, coords: Sequence[Any], ring: CoefficientRing) -> tuple[list[Any], list[Any]]:
        """𝔤_k の元 = ad f₀(Y) + v を (Y の 𝔤_{k+1} 座標, v の V_can_k 座標) に分ける"""
        inv = self._split[degree]
        n_up = len(self.graded.get(degree + 1, ()))
        solved = []
        for row in inv:
            acc = ring.zero()
            for s, c in zip(row, coords):
                if s != 0:
                    acc = acc + s * c
            solved.append(acc)
        return solved[:n_up], solved[n_up:]

    def kostant_rank(self) -> int:
        """dim(im ad f₀ + ker ad e₀)。𝔤 全体なら dimension に等しい"""
        image = [commutator(QQ_RING, self.f0, b) for b in self.basis]
        return _rank([m for m in image if not mat_is_zero(QQ_RING, m)] + list(self.vcan))

    def ad_f0_injective(self, degree: int) -> bool:
        piece = self.graded.get(degree, ())
        return _rank([commutator(QQ_RING, self.f0, x) for x in piece]) == len(piece)

    def in_borel(self, g: "GroupElement") -> bool:
        """Ad_g が 𝔤_{≥0} を保つか"""
        ring = g.ring
        for deg, piece in self.graded.items():
            if deg < 0:
                continue
            for y in piece:
                coords = self.graded_coordinates(g.adjoint(mat_coerce(ring, y)), ring)
                if any(not ring.is_zero(c) for d, c in zip(self._degree_list, coords) if d < 0):
                    return False
        return True

    @cached_property
    def _degree_list(self) -> tuple[int, ...]:
        return tuple(deg for deg in self.graded for _ in self.graded[deg])

    def describe(self) -> str:
        lines = [
            f"lie: {self.label} (size {self.size}, dim {self.dimension}, rank {self.rank})",
            f"e0 = {format_matrix(format_entries(QQ_RING, self.e0))}",
            f"h0 = {format_matrix(format_entries(QQ_RING, self.h0))}",
            f"f0 = {format_matrix(format_entries(QQ_RING, self.f0))}",
            f"exponents: {', '.join(str(d) for d in self.exponents)}",
        ]
        return "\n".join(lines)


def _offsets(graded: dict[int, Sequence[Mat]]) -> dict[int, tuple[int, int]]:
    out, start = {}, 0
    for deg in sorted(graded):
        out[deg] = (start, start + len(graded[deg]))
        start += len(graded[deg])
    return out


@lru_cache(maxsize=None)
def build_sl(n: int) -> LieRealization:
    """標準実現 sl_n（f_i = E_{i+1,i}, e_i = E_{i,i+1}, h_i = E_ii − E_{i+1,i+1}）"""
    if n < 2:
        raise OrderError(f"sl_n needs n ≥ 2, got {n}")
    basis: list[Mat] = []
    e_idx, f_idx, h_idx = [], [], []
    for i in range(n - 1):
        e_idx.append(len(basis))
        basis.append(elementary(n, i, i + 1))
    for i in range(n - 1):
        f_idx.append(len(basis))
        basis.append(elementary(n, i + 1, i))
    for i in range(n - 1):
        h_idx.append(len(basis))
        basis.append(mat_sub(elementary(n, i, i), elementary(n, i + 1, i + 1)))
    for i in range(n):
        for j in range(n):
            if abs(i - j) >= 2:
                basis.append(elementary(n, i, j))
    return LieRealization.from_chevalley(n, basis, e_idx, f_idx, h_idx, label=f"sl{n}")


# ============================================================
# 群の元（スカラー倍を除いて）
# ============================================================

@dataclass(frozen=True, eq=False)
class GroupElement:
    """可逆行列（係数はチャート環または二次拡大）"""

    ring: CoefficientRing
    matrix: Mat
    known_inverse: Mat | None = field(default=None, repr=False)

    @classmethod
    def create(cls, ring: CoefficientRing, matrix: Sequence[Sequence[Any]], inverse: Mat | None = None) -> "GroupElement":
        m = tuple(tuple(ring.coerce(x) for x in row) for row in matrix)
        if inverse is None:
            inverse = mat_inverse(ring, m)
        return cls(ring, m, inverse)

    @classmethod
    def identity(cls, ring: CoefficientRing, size: int) -> "GroupElement":
        eye = mat_identity(ring, size)
        return cls(ring, eye, eye)

    @property
    def size(self) -> int:
        return len(self.matrix)

    @cached_property
    def inverse_matrix(self) -> Mat:
        if self.known_inverse is not None:
            return self.known_inverse
        return mat_inverse(self.ring, self.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.ring, self.inverse_matrix, self.matrix)

    def lift(self, ring: CoefficientRing) -> "GroupElement":
        if ring == self.ring:
            return self
        return GroupElement(ring, mat_coerce(ring, self.matrix), mat_coerce(ring, self.inverse_matrix))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        ring = common_ring(self.ring, other.ring)
        a, b = self.lift(ring), other.lift(ring)
        return GroupElement(
            ring,
            mat_mul(ring, a.matrix, b.matrix),
            mat_mul(ring, b.inverse_matrix, a.inverse_matrix),
        )

    def adjoint(self, x: Mat) -> Mat:
        """Ad_g(x) = g x g⁻¹"""
        ring = self.ring
        return mat_mul(ring, mat_mul(ring, self.matrix, mat_coerce(ring, x)), self.inverse_matrix)

    def __eq__(self, other: object) -> bool:
        """スカラー倍を除いた等号: A·b_p = B·a_p（p は A の非零成分）"""
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.size != other.size:
            return False
        ring = common_ring(self.ring, other.ring)
        a, b = mat_coerce(ring, self.matrix), mat_coerce(ring, other.matrix)
        p = next((i, j) for i in range(self.size) for j in range(self.size) if not ring.is_zero(a[i][j]))
        ap, bp = a[p[0]][p[1]], b[p[0]][p[1]]
        if ring.is_zero(bp):
            return False
        return mat_is_zero(ring, mat_sub(mat_scale(bp, a), mat_scale(ap, b)))

    __hash__ = None

    def normalized(self) -> "GroupElement":
        """最後の単元の対角成分（なければ最初の単元成分）が 1 になるようスカラー倍

        二次拡大上では √ を含まない成分を優先する。
        """
        ring, n = self.ring, self.size
        diag = [(i, i) for i in range(n - 1, -1, -1)]
        rest = [(i, j) for i in range(n) for j in range(n)]

        def usable(x: Any, plain: bool) -> bool:
            if ring.is_zero(x) or not ring.is_unit(x):
                return False
            return not plain or not isinstance(ring, QuadraticExtension) or ring.descend(x) is not None

        p = next(
            (
                (i, j)
                for plain in (True, False)
                for i, j in diag + rest
                if usable(self.matrix[i][j], plain)
            ),
            None,
        )
        if p is None:
            return self
        c = self.matrix[p[0]][p[1]]
        inv = ring.inverse(c)
        return GroupElement(ring, mat_scale(inv, self.matrix), mat_scale(c, self.inverse_matrix))

    def format(self) -> str:
        return format_matrix(format_entries(self.ring, self.normalized().matrix))

    def __str__(self) -> str:
        return self.format()


# ============================================================
# トーラス元（余ウェイトの積）
# ============================================================

def _square_root(ring: CoefficientRing, u: Any, allow: bool) -> tuple[CoefficientRing, Any]:
    """単元 u の平方根。必要なら二次拡大を作る"""
    root = ring.sqrt(u)
    if root is not None:
        return ring, root
    if isinstance(ring, QuadraticExtension):
        a = ring.descend(u)
        if a is not None:
            plain = ring.base.sqrt(a)
            if plain is not None:
                return ring, ring.coerce(plain)
            # √a = √w·√(a/w)
            ratio = ring.base.sqrt(ring.base.divide(a, ring.radicand))
            if ratio is not None:
                return ring, ring.element(0, ratio)
        raise TorusObstructionError(
            f"{format_sqrt(ring.format(u))} needs a second square root beyond {ring.name}"
        )
    if allow and isinstance(ring, LocalizedRing):
        ext = QuadraticExtension(ring, ring.coerce(u))
        return ext, ext.root()
    hint = "" if allow else "; pass --allow-quadratic-extension to adjoin it"
    raise TorusObstructionError(f"{format_sqrt(ring.format(u))} is not in {ring.name}{hint}")


def diagonal_from_exponents(
    ring: CoefficientRing,
    units: Sequence[Any],
    exponents: Sequence[Sequence[Fraction]],
    allow_quadratic_extension: bool = False,
) -> GroupElement:
    """diag(∏_j u_j^{exponents[k][j]})。指数は非負の整数または半整数"""
    values = [ring.coerce(u) for u in units]
    for u in values:
        if not ring.is_unit(u):
            raise NonUnitError(f"{ring.format(u)} is not a unit of {ring.name}")
    roots: dict[int, Any] = {}
    for j in range(len(values)):
        column = [row[j] for row in exponents]
        if any(x.denominator not in (1, 2) for x in column):
            raise TorusObstructionError(
                f"torus element needs a root of order {max(x.denominator for x in column)} of {ring.format(values[j])}"
            )
        if any(x.denominator == 2 for x in column):
            ring, roots[j] = _square_root(ring, values[j], allow_quadratic_extension)
            values = [ring.coerce(u) for u in values]
            roots = {i: ring.coerce(r) for i, r in roots.items()}
    diag, inv = [], []
    for row in exponents:
        entry = ring.one()
        for j, x in enumerate(row):
            entry = entry * ring.power(values[j], floor(x))
            if x.denominator == 2:
                entry = entry * roots[j]
        diag.append(entry)
        inv.append(ring.inverse(entry))
    return GroupElement(ring, mat_diagonal(ring, diag), mat_diagonal(ring, inv))


def torus_element(
    lie: LieRealization, ring: CoefficientRing, units: Sequence[Any], allow_quadratic_extension: bool = False
) -> GroupElement:
    """Ad が f_i を u_i⁻¹ 倍するトーラス元 ∏_j ω̌_j(u_j)"""
    mins = [min(row[j] for row in lie.pairing) for j in range(lie.rank)]
    exps = [[row[j] - mins[j] for j in range(lie.rank)] for row in lie.pairing]
    return diagonal_from_exponents(ring, units, exps, allow_quadratic_extension)


def rho_check(lie: LieRealization, ring: CoefficientRing, a: Any, allow_quadratic_extension: bool = False) -> GroupElement:
    """主余指標 ρ̌(a)。sl_n では diag(a^{n−1}, …, a, 1)"""
    totals = [sum(row, Fraction(0)) for row in lie.pairing]
    low = min(totals)
    return diagonal_from_exponents(ring, [a], [[x - low] for x in totals], allow_quadratic_extension)


# ============================================================
# 指数写像と r : (B₂)_ad → B
# ============================================================

def exp_nilpotent(ring: CoefficientRing, x: Mat) -> GroupElement:
    """冪零行列の指数関数（有限和）。逆元は exp(−x)"""

    def series(y: Mat) -> Mat:
        total = mat_identity(ring, len(y))
        term = total
        for k in range(1, len(y) + 1):
            term = mat_scale(Fraction(1, k), mat_mul(ring, term, y))
            if mat_is_zero(ring, term):
                return total
            total = mat_add(total, term)
        raise NotInAlgebraError("exponential of a matrix that is not nilpotent")

    x = mat_coerce(ring, x)
    return GroupElement(ring, series(x), series(mat_neg(x)))


def exp_e(lie: LieRealization, ring: CoefficientRing, b: Any) -> GroupElement:
    """e(b) = exp(b·e₀)"""
    b = ring.coerce(b)
    return exp_nilpotent(ring, mat_scale(b, mat_coerce(ring, lie.e0)))


def r_map(lie: LieRealization, g: B2AdElement, allow_quadratic_extension: bool = False) -> GroupElement:
    """r(a, β) = e(β)·ρ̌(a)。sl₂ では [[a, β], [0, 1]]"""
    return exp_e(lie, g.ring, g.b) * rho_check(lie, g.ring, g.a, allow_quadratic_extension)


def jet3_to_b2ad(tau: AutJet) -> B2AdElement:
    """az + bz² ↦ (a, b/a)。aut_mul を (B₂)_ad の積に移す準同型"""
    if tau.order != 3:
        raise OrderError(f"jet3_to_b2ad needs an order 3 jet, got order {tau.order}")
    ring = tau.ring
    a, b = tau.coeffs[1], tau.coeffs[2]
    return B2AdElement(ring, a, ring.divide(b, a))


def b2ad_to_jet3(g: B2AdElement) -> AutJet:
    """(a, β) ↦ az + aβz²"""
    return AutJet.create(g.ring, [0, g.a, g.a * g.b], 3)


if __name__ == "__main__":
    print("=== 主 sl₂ 三つ組デモ ===\n")
    for n in (2, 3, 4):
        lie = build_sl(n)
        print(lie.describe())
        print(f"kostant rank = {lie.kostant_rank()} / {lie.dimension}\n")
    lie = build_sl(2)
    g = r_map(lie, B2AdElement(QQ_RING, Fraction(2), Fraction(3)))
    print(f"r(2, 3) = {g}")
    print(f"ρ̌(5) in sl3 = {rho_check(build_sl(3), QQ_RING, 5)}")
