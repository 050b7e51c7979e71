"""
Ext 표 모듈
- FiniteModule: 유한 길이 가군 N 의 차수별 k-기저와 환 원소의 작용 행렬
- ext_table: Ext^i_R(M, N) (0 ≤ i ≤ D) 의 차원과 χ_j 작용 행렬 X_j^{(i)}: Ext^i → Ext^{i+2}
    - N = k: b_i = rank F_i, X_j = (t_j mod 𝔪)^T
    - 일반 N: Hom_R(P, N) 의 코호몰로지, χ_j 는 t_j 와의 합성
- 내부 차수는 합쳐서 센다 (k[χ]-가군으로서의 전체 차원)
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

import numpy as np

from apps.algebra.exactalg import FMatrix, column_space_basis, extend_basis, mat_kernel, mat_solve
from apps.algebra.graded import span_in_degree
from apps.algebra.groebner import buchberger, module_krull_dimension
from apps.algebra.poly import Poly, PolyMatrix, PolyRing, add_scaled
from apps.homology.complexes import ModulePresentation, minimal_resolution
from apps.homology.operators import eisenbud_operators, ext_operator_matrices, lift_resolution
from common.errors import ComputationError, InputError

logger = logging.getLogger(__name__)

MIN_DEPTH = 4


class NotFiniteLength(InputError):
    pass


# ============================================================================
# 📋 유한 길이 가군
# ============================================================================


@dataclass
class _DegreePiece:
    degree: int
    basis: List[Tuple[int, Tuple[int, ...]]]  # 자유가군의 차수 t 표준 기저
    chosen: List[int]  # N_t 의 기저로 고른 basis 인덱스
    proj: FMatrix  # basis 좌표 → N_t 좌표
    offset: int

    @property
    def dim(self) -> int:
        return len(self.chosen)


class FiniteModule:
    """
    N = coker(relations) 의 k-벡터공간 모델

    차수 t 마다 관계 span 의 여공간을 표준 기저 원소 중에서 골라 N_t 의 기저로 쓰고,
    환 원소 r 의 작용은 act(r) 로 (dim N × dim N) 행렬이 된다.
    """

    def __init__(self, N: ModulePresentation):
        check_finite_length(N)
        self.module = N
        self.setup = N.setup
        self.field = self.setup.field
        self.pieces: Dict[int, _DegreePiece] = {}
        self._act_cache: Dict[Poly, FMatrix] = {}
        self._build()

    def _build(self):
        N = self.module
        if N.ngens == 0:
            return
        alg = N.algebra
        F = self.field
        shifts = list(N.degrees)
        rels = [alg.nf_terms(r) for r in N.relation_terms()]
        rel_degs = [alg.vector_degree(r, shifts) for r in rels]
        step = max(self.setup.q_ring.degrees)
        t, empty_run, offset = min(shifts), 0, 0
        while t <= max(shifts) or empty_run < step:
            S, basis, _ = span_in_degree(alg, rels, rel_degs, shifts, t)
            chosen = extend_basis(S, FMatrix.identity(F, len(basis))) if basis else []
            if not chosen:
                empty_run += 1
                t += 1
                continue
            B = column_space_basis(S)
            full = B.hstack(FMatrix.identity(F, len(basis)).submatrix(range(len(basis)), chosen))
            cols = []
            for k in range(len(basis)):
                unit = np.zeros(len(basis), dtype=np.int64)
                unit[k] = 1
                x = mat_solve(full, unit)
                if x is None:
                    raise ComputationError(f"차수 {t} 에서 여공간 사영을 만들 수 없습니다")
                cols.append(x[B.cols:])
            proj = FMatrix.from_columns(F, cols, len(chosen))
            self.pieces[t] = _DegreePiece(t, basis, chosen, proj, offset)
            offset += len(chosen)
            empty_run = 0
            t += 1
        logger.debug("유한 가군 %s: 차수별 차원 %s", N, self.hilbert())

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.pieces.values())

    def hilbert(self) -> Dict[int, int]:
        return {d: p.dim for d, p in sorted(self.pieces.items())}

    def act(self, r: Poly) -> FMatrix:
        """r·(−): N → N 의 행렬 (열 = 기저 원소의 상)"""
        alg = self.module.algebra
        r = alg.nf(r)
        if r in self._act_cache:
            return self._act_cache[r]
        F = self.field
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for piece in self.pieces.values():
            for k, idx in enumerate(piece.chosen):
                src = {piece.basis[idx]: 1}
                for m, c in r.terms.items():
                    target = self.pieces.get(piece.degree + r.ring.mono_degree(m))
                    if target is None:
                        continue
                    prod: Dict = {}
                    add_scaled(prod, src, c, m, F)
                    prod = alg.nf_terms(prod)
                    if not prod:
                        continue
                    v = FMatrix.from_columns(F, [alg.coords(prod, target.basis)], len(target.basis))
                    seg = slice(target.offset, target.offset + target.dim)
                    col = piece.offset + k
                    out[seg, col] = F.vadd(out[seg, col], (target.proj @ v).column(0))
        A = FMatrix(F, out)
        self._act_cache[r] = A
        return A


def check_finite_length(N: ModulePresentation) -> None:
    """Q^r / (관계 + f·e_i) 의 Krull 차원이 0 이하인지 확인 (R 아르틴이면 항상 참)"""
    setup = N.setup
    if N.ngens == 0 or setup.is_artinian:
        return
    Q = setup.q_ring
    gens = [list(col) for col in N.relations.columns()]
    for i in range(N.ngens):
        for fj in setup.f:
            vec = [Q.zero()] * N.ngens
            vec[i] = fj
            gens.append(vec)
    G = buchberger(gens, ring=Q, rank=N.ngens, shifts=list(N.degrees))
    dim = module_krull_dimension(G)
    if dim > 0:
        raise NotFiniteLength(f"{N} 의 Krull 차원이 {dim} 입니다 (유한 길이 가군이 아님)")


# ============================================================================
# 📋 Ext 표
# ============================================================================


@dataclass
class ExtTable:
    """
    Ext^i(M, N), 0 ≤ i ≤ D 의 차원과 χ 작용

    actions[(j, i)] 는 b_{i+2} × b_i 행렬 (i + 2 ≤ D 인 경우만 저장)
    """

    field: object
    c: int
    D: int
    dims: List[int]
    actions: Dict[Tuple[int, int], FMatrix]
    pair: Tuple[str, str] = ("", "")
    route: str = "residue"
    betti: List[int] = dc_field(default_factory=list)
    chi_ring: Optional[PolyRing] = None

    def dim(self, i: int) -> int:
        return self.dims[i] if 0 <= i <= self.D else 0

    def action(self, j: int, i: int) -> FMatrix:
        if (j, i) in self.actions:
            return self.actions[(j, i)]
        if i + 2 > self.D or i < 0:
            raise InputError(f"χ_{j + 1} 작용 Ext^{i} → Ext^{i + 2} 는 계산 범위 [0, {self.D}] 밖입니다")
        return FMatrix.zeros(self.field, self.dim(i + 2), self.dim(i))

    def monomial_matrix(self, mono: Tuple[int, ...], i: int) -> FMatrix:
        """χ^a: Ext^i → Ext^{i + 2|a|}, χ_1 부터 차례로 적용"""
        A = FMatrix.identity(self.field, self.dim(i))
        idx = i
        for j, a in enumerate(mono):
            for _ in range(a):
                A = self.action(j, idx) @ A
                idx += 2
        return A

    def phi_matrix(self, phi: Poly, i: int) -> FMatrix:
        """φ ∈ k[χ] 의 작용 Ext^i → Ext^{i + deg φ}"""
        d = phi.degree()
        out = FMatrix.zeros(self.field, self.dim(i + d), self.dim(i))
        for m, coeff in phi.sorted_terms():
            out = out + self.monomial_matrix(m, i).scale(coeff)
        return out

    def commutes(self) -> bool:
        """X_j'∘X_j = X_j∘X_j' (합성 가능한 모든 위치)"""
        for i in range(0, self.D - 3):
            for j in range(self.c):
                for jj in range(j + 1, self.c):
                    a = self.action(jj, i + 2) @ self.action(j, i)
                    b = self.action(j, i + 2) @ self.action(jj, i)
                    if a != b:
                        return False
        return True

    def eventually_zero(self) -> Optional[int]:
        """D 이하에서 Ext 가 0 이 되기 시작하는 최소 인덱스 (마지막까지 0 이 아니면 None)"""
        for i in range(self.D + 1):
            if all(d == 0 for d in self.dims[i:]):
                return i
        return None

    def to_json(self) -> Dict:
        return {
            "pair": list(self.pair),
            "route": self.route,
            "D": self.D,
            "dims": list(self.dims),
            "actions": {
                f"chi{j + 1}@{i}": A.to_lists() for (j, i), A in sorted(self.actions.items(), key=lambda x: (x[0][1], x[0][0]))
            },
        }


def is_residue_field(N: ModulePresentation) -> bool:
    return N.hash == ModulePresentation.residue_field(N.setup).hash


def ext_table(M: ModulePresentation, N: ModulePresentation, D: int, cache=None) -> ExtTable:
    """
    Ext^i_R(M, N) 표 (0 ≤ i ≤ D)

    Args:
        M: 분해할 가군
        N: 유한 길이 가군 ("k" 이면 Betti 수 지름길)
        D: 코호몰로지 차수 상한 (≥ 4)

    Returns:
        ExtTable
    """
    if D < MIN_DEPTH:
        raise InputError(f"D={D} 는 {MIN_DEPTH} 이상이어야 합니다")
    if M.setup is not N.setup:
        raise InputError("M 과 N 은 같은 환 위의 가군이어야 합니다")
    setup = M.setup
    if setup.field.e > 1:
        raise InputError("Ext 표는 소체 위의 환에서만 계산합니다 (확장체는 오라클 전용)")
    if is_residue_field(N):
        P = minimal_resolution(M, D, cache=cache)
        F = eisenbud_operators(lift_resolution(P))
        dims = [P.complex.module(i).rank for i in range(D + 1)]
        actions = {}
        for i in range(D - 1):
            for j, X in enumerate(ext_operator_matrices(F, i)):
                actions[(j, i)] = X
        table = ExtTable(setup.field, setup.c, D, dims, actions, (M.hash, N.hash), "residue", list(P.betti),
                         setup.chi_ring)
    else:
        table = _hom_ext_table(M, N, D, cache)
    logger.info("Ext(%s, %s) D=%d: 차원 %s", M, N, D, table.dims)
    return table


def _hom_ext_table(M: ModulePresentation, N: ModulePresentation, D: int, cache) -> ExtTable:
    setup = M.setup
    Fld = setup.field
    fin = FiniteModule(N)
    n = fin.dim
    P = minimal_resolution(M, D + 1, cache=cache)
    ops = eisenbud_operators(lift_resolution(P))
    C = P.complex
    ranks = [C.module(i).rank for i in range(D + 2)]

    def coboundary(i: int) -> FMatrix:
        """δ^i: Hom(P_{i-1}, N) → Hom(P_i, N), 블록 [g, g'] = act(d_i[g', g])"""
        cols = ranks[i - 1] * n if i >= 1 else 0
        out = np.zeros((ranks[i] * n, cols), dtype=np.int64)
        if out.size:
            _fill_blocks(out, C.d(i), fin, n)
        return FMatrix(Fld, out)

    def operator(j: int, i: int) -> FMatrix:
        """χ_j: Hom(P_i, N) → Hom(P_{i+2}, N), 블록 [g, g'] = act(t_j[g', g])"""
        out = np.zeros((ranks[i + 2] * n, ranks[i] * n), dtype=np.int64)
        if out.size:
            _fill_blocks(out, ops.t(j, i + 2), fin, n)
        return FMatrix(Fld, out)

    reps: List[FMatrix] = []
    bounds: List[FMatrix] = []
    for i in range(D + 1):
        Z = mat_kernel(coboundary(i + 1))
        B = column_space_basis(coboundary(i))
        idx = extend_basis(B, Z)
        reps.append(Z.submatrix(range(Z.rows), idx))
        bounds.append(B)
    dims = [R.cols for R in reps]

    def coords(i: int, v: np.ndarray) -> np.ndarray:
        full = bounds[i].hstack(reps[i])
        x = mat_solve(full, v)
        if x is None:
            raise ComputationError(f"Ext^{i} 의 코사이클이 아닌 벡터입니다")
        return x[bounds[i].cols:]

    actions: Dict[Tuple[int, int], FMatrix] = {}
    for i in range(D - 1):
        for j in range(setup.c):
            if not dims[i] or not dims[i + 2]:
                actions[(j, i)] = FMatrix.zeros(Fld, dims[i + 2], dims[i])
                continue
            image = operator(j, i) @ reps[i]
            cols = [coords(i + 2, image.column(k)) for k in range(image.cols)]
            actions[(j, i)] = FMatrix.from_columns(Fld, cols, dims[i + 2])
    return ExtTable(Fld, setup.c, D, dims, actions, (M.hash, N.hash), "hom", list(P.betti), setup.chi_ring)


def _fill_blocks(out: np.ndarray, A: PolyMatrix, fin: FiniteModule, n: int) -> None:
    # A: P_a → P_b 의 행렬. Hom(P_b, N) → Hom(P_a, N) 의 블록 [g, g'] 에 act(A[g', g]) 를 채움
    for gp in range(A.nrows):
        for g in range(A.ncols):
            entry = A[gp, g]
            if entry.is_zero():
                continue
            out[g * n:(g + 1) * n, gp * n:(gp + 1) * n] = fin.act(entry).data
