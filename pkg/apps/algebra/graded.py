"""
차수별 선형대수 모듈
- GradedAlgebra: 다항식환 Q (와 선택적 GB) 로 주어진 그레이디드 환 Q/I
- 자유가군 원소는 정규형 {(성분, mono): coeff} dict, 성분 i의 생성원 차수는 shifts[i]
- 한 내부 차수 t의 k-기저는 (성분 i, 차수 t - shifts[i] 의 표준 단항식) 쌍
- minimal_generators: 차수 오름차순 Nakayama greedy
- graded_kernel: 아르틴 환에서 차수별 핵 계산
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from apps.algebra.exactalg import FMatrix, extend_basis, mat_kernel, mat_solve
from apps.algebra.groebner import GBasis, krull_dimension
from apps.algebra.poly import Poly, PolyRing, mono_divides, mono_mul, terms_to_vector, vector_to_terms
from common.errors import InputError

logger = logging.getLogger(__name__)

Terms = Dict[Tuple[int, Tuple[int, ...]], int]


class GradedAlgebra:
    """Q/I (gb 가 None 이면 Q 자체). 원소는 항상 gb 에 대한 정규형으로 다룸"""

    def __init__(self, ring: PolyRing, gb: Optional[GBasis] = None):
        self.ring = ring
        self.gb = gb
        self.field = ring.field
        self._std_cache: Dict[int, List[Tuple[int, ...]]] = {}
        self._basis_cache: Dict[Tuple, List[Tuple[int, Tuple[int, ...]]]] = {}
        self._dim: Optional[int] = None

    @property
    def dimension(self) -> int:
        if self._dim is None:
            self._dim = krull_dimension(self.gb) if self.gb is not None else self.ring.nvars
        return self._dim

    @property
    def is_artinian(self) -> bool:
        return self.dimension <= 0

    def top_degree(self) -> int:
        """아르틴 환에서 표준 단항식이 존재하는 최고 차수"""
        if not self.is_artinian:
            raise InputError(f"{self.ring} / I 는 아르틴 환이 아닙니다")
        t, top, empty_run = 0, 0, 0
        step = max(self.ring.degrees)
        while empty_run < step:
            if self.standard_monomials(t):
                top, empty_run = t, 0
            else:
                empty_run += 1
            t += 1
        return top

    # 정규형
    def nf_terms(self, terms: Terms) -> Terms:
        if self.gb is None or not terms:
            return dict(terms)
        by_comp: Dict[int, Dict] = {}
        for (c, m), v in terms.items():
            by_comp.setdefault(c, {})[(0, m)] = v
        out: Terms = {}
        for c, sub in by_comp.items():
            for (_, m), v in self.gb.reduce(sub).items():
                out[(c, m)] = v
        return out

    def nf(self, p: Poly) -> Poly:
        if self.gb is None:
            return p
        return self.gb.normal_form(p)

    def nf_vector(self, vec: Sequence[Poly]) -> List[Poly]:
        return terms_to_vector(self.ring, self.nf_terms(vector_to_terms(vec)), len(vec))

    # 표준 단항식과 차수별 기저
    def standard_monomials(self, t: int) -> List[Tuple[int, ...]]:
        """차수 t 의 표준 단항식 (gb 선도항으로 나누어지지 않는 것), 순서상 내림차순"""
        if t in self._std_cache:
            return self._std_cache[t]
        monos = self.ring.monomials_of_degree(t)
        if self.gb is not None:
            leads = [m for _, m in self.gb.leads]
            monos = [m for m in monos if not any(mono_divides(l, m) for l in leads)]
        self._std_cache[t] = monos
        return monos

    def degree_basis(self, shifts: Sequence[int], t: int) -> List[Tuple[int, Tuple[int, ...]]]:
        key = (tuple(shifts), t)
        if key not in self._basis_cache:
            self._basis_cache[key] = [
                (i, m) for i, s in enumerate(shifts) for m in self.standard_monomials(t - s)
            ]
        return self._basis_cache[key]

    def vector_degree(self, terms: Terms, shifts: Sequence[int]) -> Optional[int]:
        if not terms:
            return None
        c, m = next(iter(terms))
        return shifts[c] + self.ring.mono_degree(m)

    def coords(self, terms: Terms, basis: Sequence[Tuple[int, Tuple[int, ...]]]) -> np.ndarray:
        index = {b: k for k, b in enumerate(basis)}
        v = np.zeros(len(basis), dtype=np.int64)
        for t, c in terms.items():
            v[index[t]] = c
        return v

    def multiples(self, terms: Terms, degree: int, t: int) -> List[Terms]:
        """차수 degree 인 원소에 차수 t-degree 표준 단항식을 곱한 정규형 목록"""
        out = []
        for m in self.standard_monomials(t - degree):
            prod = {(c, mono_mul(mm, m)): v for (c, mm), v in terms.items()}
            out.append(self.nf_terms(prod))
        return out


# ============================================================================
# 📋 차수별 span / 최소 생성원
# ============================================================================


def span_in_degree(
    alg: GradedAlgebra, vectors: Sequence[Terms], degrees: Sequence[int], shifts: Sequence[int], t: int
) -> Tuple[FMatrix, List[Tuple[int, Tuple[int, ...]]], List[Tuple[int, Tuple[int, ...]]]]:
    """
    R·vectors 의 차수 t 부분을 생성하는 열 행렬

    Returns:
        (S, basis, labels): S의 열은 basis 좌표, labels[k] = (vector 인덱스, 곱한 단항식)
    """
    basis = alg.degree_basis(shifts, t)
    cols, labels = [], []
    for idx, (v, d) in enumerate(zip(vectors, degrees)):
        if d is None or d > t:
            continue
        for m, prod in zip(alg.standard_monomials(t - d), alg.multiples(v, d, t)):
            cols.append(alg.coords(prod, basis))
            labels.append((idx, m))
    return FMatrix.from_columns(alg.field, cols, len(basis)), basis, labels


def minimal_generators(alg: GradedAlgebra, vectors: Sequence[Terms], shifts: Sequence[int]) -> List[int]:
    """
    차수 오름차순 Nakayama greedy

    같은 차수에서는 입력 순서를 따르며, 이미 고른 원소들의 R-배수 span 에
    속하는 원소는 버린다.

    Returns:
        List[int]: 남긴 vectors 인덱스 (차수, 입력 순서로 정렬)
    """
    vectors = [alg.nf_terms(v) for v in vectors]
    degs = [alg.vector_degree(v, shifts) for v in vectors]
    order = sorted((k for k in range(len(vectors)) if degs[k] is not None), key=lambda k: (degs[k], k))
    kept: List[int] = []
    for t in sorted({degs[k] for k in order}):
        here = [k for k in order if degs[k] == t]
        S, basis, _ = span_in_degree(alg, [vectors[k] for k in kept], [degs[k] for k in kept], shifts, t)
        cand = FMatrix.from_columns(alg.field, [alg.coords(vectors[k], basis) for k in here], len(basis))
        kept.extend(here[j] for j in extend_basis(S, cand))
    return kept


def in_graded_span(alg: GradedAlgebra, v: Terms, vectors: Sequence[Terms], shifts: Sequence[int]) -> bool:
    return solve_in_degree(alg, v, vectors, shifts) is not None


def solve_in_degree(
    alg: GradedAlgebra, v: Terms, vectors: Sequence[Terms], shifts: Sequence[int]
) -> Optional[List[Terms]]:
    """
    v = Σ r_k·vectors_k 를 만족하는 동차 계수 r_k (rank 1 dict) 를 찾음

    Returns:
        계수 목록 또는 None (v ∉ R·vectors)
    """
    v = alg.nf_terms(v)
    coeffs: List[Terms] = [{} for _ in vectors]
    if not v:
        return coeffs
    t = alg.vector_degree(v, shifts)
    vectors = [alg.nf_terms(w) for w in vectors]
    degs = [alg.vector_degree(w, shifts) for w in vectors]
    S, basis, labels = span_in_degree(alg, vectors, degs, shifts, t)
    x = mat_solve(S, alg.coords(v, basis))
    if x is None:
        return None
    for (idx, m), c in zip(labels, x.tolist()):
        if c:
            coeffs[idx][(0, m)] = int(c)
    return coeffs


def graded_kernel(
    alg: GradedAlgebra, columns: Sequence[Terms], src_degrees: Sequence[int], tgt_degrees: Sequence[int]
) -> List[Terms]:
    """
    동차 R-행렬 (열 = columns) 의 핵을 차수별로 계산 (R 아르틴일 때만 완전)

    Returns:
        List[Terms]: 소스 자유가군 원소로 표현된 최소 생성원
    """
    if not alg.is_artinian:
        raise InputError("graded 핵 계산은 아르틴 환에서만 사용할 수 있습니다")
    if not src_degrees:
        return []
    top = alg.top_degree()
    columns = [alg.nf_terms(c) for c in columns]
    candidates: List[Terms] = []
    for t in range(min(src_degrees), max(src_degrees) + top + 1):
        src_basis = alg.degree_basis(src_degrees, t)
        if not src_basis:
            continue
        tgt_basis = alg.degree_basis(tgt_degrees, t)
        images = []
        for j, m in src_basis:
            prod = {(c, mono_mul(mm, m)): v for (c, mm), v in columns[j].items()}
            images.append(alg.coords(alg.nf_terms(prod), tgt_basis))
        A = FMatrix.from_columns(alg.field, images, len(tgt_basis))
        K = mat_kernel(A)
        for k in range(K.cols):
            col = K.column(k)
            candidates.append({src_basis[i]: int(c) for i, c in enumerate(col.tolist()) if c})
        logger.debug("graded_kernel: 차수 %d, 소스 %d, 핵 %d", t, len(src_basis), K.cols)
    keep = minimal_generators(alg, candidates, src_degrees)
    return [candidates[k] for k in keep]


def hilbert_function(module, degrees: Sequence[int]) -> List[int]:
    """
    dim_k M_t (M = 자유가군 / 관계 R-부분가군)

    Args:
        module: .algebra, .degrees, .relation_terms() 를 가진 가군 표현
    """
    alg: GradedAlgebra = module.algebra
    shifts = list(module.degrees)
    rels = [alg.nf_terms(r) for r in module.relation_terms()]
    rel_degs = [alg.vector_degree(r, shifts) for r in rels]
    out = []
    for t in degrees:
        S, basis, _ = span_in_degree(alg, rels, rel_degs, shifts, t)
        out.append(len(basis) - S.rank())
    return out
