"""
코호몰로지 서포트 모듈
- chi_presentation: Ext 표의 꼬리 𝓜^{≥n0} 를 k[χ]-가군으로 표현 (생성원은 [n0, n0+w] 차수)
    - 안정화 검사 (a) 윈도우 위에서 χ-작용 + 생성원이 전사, (b) 지평선 D-2 와 D 의 annihilator 가 같은 닫힌집합
- support_cone / support_pair: annihilator ∩_g (Rel : e_g) 를 saturate 한 원뿔 이데알
- is_perfect: 분해 종료 여부와 서포트 공집합 여부가 일치하는지 확인
- rational_points / ext_dims_of_complex / cone_sequence_check / support_of_koszul_pair
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from apps.algebra.exactalg import FMatrix, extend_basis, mat_kernel
from apps.algebra.fields import galois_field, projective_points
from apps.algebra.graded import GradedAlgebra, Terms, hilbert_function, minimal_generators
from apps.algebra.groebner import ConeIdeal, syzygies
from apps.algebra.poly import Poly, PolyRing, terms_to_vector
from apps.homology.complexes import FreeComplex, ModulePresentation, cone, minimal_resolution
from apps.homology.operators import eisenbud_operators, koszul_cone, lift_resolution, operator_chain_map
from apps.support.ext import ExtTable, ext_table
from common.errors import InputError, VerificationError

logger = logging.getLogger(__name__)


class StabilizationNotReached(VerificationError):
    pass


class Inconclusive(VerificationError):
    pass


# ============================================================================
# 📋 k[χ]-가군 표현
# ============================================================================


@dataclass
class ChiModulePresentation:
    """
    coker(⊕ k[χ](-r) → ⊕ k[χ](-g)) ≈ Ext^{≥n0}

    relations 는 차수 오름차순 최소 생성원이며 D 이하 차수의 관계만 담는다.
    """

    ring: PolyRing
    gen_degrees: List[int]
    relations: List[Terms]
    relation_degrees: List[int]
    n0: int
    w: int
    D: int
    checks: Dict[str, object] = dc_field(default_factory=dict)
    table: Optional[ExtTable] = dc_field(default=None, repr=False)
    saturated_annihilator: Optional[ConeIdeal] = dc_field(default=None, repr=False)

    def __post_init__(self):
        self.algebra = GradedAlgebra(self.ring, None)

    # hilbert_function 이 요구하는 가군 인터페이스
    @property
    def degrees(self) -> List[int]:
        return self.gen_degrees

    def relation_terms(self) -> List[Terms]:
        return self.relations

    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    @property
    def stabilized(self) -> bool:
        return bool(self.checks.get("surjective")) and bool(self.checks.get("annihilator_stable")) \
            and bool(self.checks.get("dims_match"))

    def annihilator(self, horizon: Optional[int] = None) -> ConeIdeal:
        """∩_g (Rel_{≤horizon} : e_g), 생성원이 없으면 단위 이데알"""
        ring = self.ring
        if not self.gen_degrees:
            return ConeIdeal(ring, (ring.one(),))
        horizon = self.D if horizon is None else horizon
        rels = [terms_to_vector(ring, r, self.ngens)
                for r, d in zip(self.relations, self.relation_degrees) if d <= horizon]
        if not rels:
            return ConeIdeal(ring, ())
        ann: Optional[ConeIdeal] = None
        for g in range(self.ngens):
            unit = [ring.zero()] * self.ngens
            unit[g] = ring.one()
            syz = syzygies(rels + [unit], ring=ring, rank=self.ngens, shifts=self.gen_degrees)
            col = ConeIdeal(ring, tuple(v[-1] for v in syz if not v[-1].is_zero()))
            ann = col if ann is None else ann.intersect(col)
            if not ann.gens:
                break
        return ann

    def to_json(self) -> Dict:
        return {
            "n0": self.n0,
            "w": self.w,
            "D": self.D,
            "generators": list(self.gen_degrees),
            "relations": [[str(p) for p in terms_to_vector(self.ring, r, self.ngens)] for r in self.relations],
            "checks": dict(self.checks),
            "stabilized": self.stabilized,
        }


def _apply(field, A: FMatrix, v: np.ndarray) -> np.ndarray:
    return field.vmatmul(A.data, v.reshape(-1, 1)).reshape(-1)


def chi_presentation(T: ExtTable, w: int, strict: bool = False) -> ChiModulePresentation:
    """
    Ext 표 T 의 꼬리를 k[χ]-가군으로 표현

    Args:
        T: ext_table 결과
        w: 생성원 윈도우 폭 (n0 = D - 2w - 2)
        strict: 안정화 검사 실패 시 StabilizationNotReached 를 던짐

    Returns:
        ChiModulePresentation: checks 에 surjective / annihilator_stable / dims_match 기록
    """
    D = T.D
    n0 = D - 2 * w - 2
    if w < 0 or n0 < 0:
        raise InputError(f"D={D} 는 2w+2={2 * w + 2} 이상이어야 합니다")
    if T.chi_ring is None:
        raise InputError("Ext 표에 연산자 환 정보가 없습니다")
    ring = T.chi_ring
    F = T.field
    gens: List[Tuple[int, np.ndarray]] = []
    images: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}

    def image(g: int, mono: Tuple[int, ...]) -> np.ndarray:
        # χ^a·g, 첫 번째 양의 지수부터 하나씩 벗겨 재귀
        key = (g, mono)
        if key not in images:
            if not any(mono):
                images[key] = gens[g][1]
            else:
                j = next(k for k, a in enumerate(mono) if a)
                prev = mono[:j] + (mono[j] - 1,) + mono[j + 1:]
                start = gens[g][0] + ring.mono_degree(prev)
                images[key] = _apply(F, T.action(j, start), image(g, prev))
        return images[key]

    def evaluation(i: int) -> Tuple[FMatrix, List[Tuple[int, Tuple[int, ...]]]]:
        labels = [(g, m) for g, (dg, _) in enumerate(gens) for m in ring.monomials_of_degree(i - dg)]
        cols = [image(g, m) for g, m in labels]
        return FMatrix.from_columns(F, cols, T.dim(i)), labels

    rels: List[Terms] = []
    rel_degs: List[int] = []
    failed: List[int] = []
    for i in range(n0, D + 1):
        E, labels = evaluation(i)
        if i <= n0 + w:
            for k in extend_basis(E, FMatrix.identity(F, T.dim(i))):
                unit = np.zeros(T.dim(i), dtype=np.int64)
                unit[k] = 1
                gens.append((i, unit))
            E, labels = evaluation(i)
        elif E.rank() < T.dim(i):
            failed.append(i)
        K = mat_kernel(E)
        for k in range(K.cols):
            col = K.column(k)
            rels.append({labels[r]: int(c) for r, c in enumerate(col.tolist()) if c})
            rel_degs.append(i)
    gen_degrees = [d for d, _ in gens]
    alg = GradedAlgebra(ring, None)
    keep = minimal_generators(alg, rels, gen_degrees)
    pres = ChiModulePresentation(
        ring, gen_degrees, [rels[k] for k in keep], [rel_degs[k] for k in keep], n0, w, D, table=T
    )
    pres.checks["surjective"] = not failed
    pres.checks["failed_degrees"] = failed
    full = pres.annihilator().saturate()
    if all(d <= D - 2 for d in pres.relation_degrees):
        stable = True
    else:
        stable = pres.annihilator(D - 2).saturate().same_ideal(full)
    pres.checks["annihilator_stable"] = stable
    pres.checks["dims_match"] = hilbert_function(pres, range(n0, D + 1)) == [T.dim(i) for i in range(n0, D + 1)]
    pres.saturated_annihilator = full
    logger.info(
        "k[χ]-표현: n0=%d, 생성원 차수 %s, 관계 %d개, 안정화 %s",
        n0, gen_degrees, len(pres.relations), "통과" if pres.stabilized else "실패",
    )
    if not pres.stabilized:
        logger.warning("안정화 검사 실패: %s", pres.checks)
        if strict:
            raise StabilizationNotReached(f"D={D}, w={w} 에서 안정화되지 않았습니다: {pres.checks}")
    return pres


# ============================================================================
# 📋 서포트
# ============================================================================


@dataclass
class SupportCone:
    ideal: ConeIdeal
    pair: Tuple[str, str] = ("", "")
    stabilized: bool = True
    presentation: Optional[ChiModulePresentation] = dc_field(default=None, repr=False)

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    def is_empty(self) -> bool:
        return self.ideal.is_empty_in_proj()

    def contains_point(self, point: Sequence[int], field) -> bool:
        return self.ideal.vanishes_at(point, field)

    def to_json(self) -> Dict:
        return {
            "pair": list(self.pair),
            "ideal": self.ideal.to_json(),
            "text": self.ideal.text(),
            "saturated": self.ideal.saturated,
            "stabilized": self.stabilized,
            "empty": self.is_empty(),
        }


def support_cone(pres: ChiModulePresentation) -> SupportCone:
    """annihilator 의 saturation (chi_presentation 에서 이미 계산했으면 재사용)"""
    ideal = pres.saturated_annihilator or pres.annihilator().saturate()
    pair = pres.table.pair if pres.table is not None else ("", "")
    return SupportCone(ideal, tuple(pair), pres.stabilized, pres)


def support_pair(
    M: ModulePresentation,
    N: Optional[ModulePresentation] = None,
    D: int = 12,
    w: int = 2,
    cache=None,
    strict: bool = False,
) -> SupportCone:
    """Supp(M, N) (N 기본값 k)"""
    if N is None:
        N = ModulePresentation.residue_field(M.setup)
    T = ext_table(M, N, D, cache=cache)
    S = support_cone(chi_presentation(T, w, strict=strict))
    logger.info("Supp(%s, %s) = %s%s", M, N, S.ideal.text(), "" if S.stabilized else " (미검증)")
    return S


def support_of_koszul_pair(
    M: ModulePresentation, N: ModulePresentation, phis: Sequence[Poly], D: int = 12, w: int = 2, cache=None
) -> SupportCone:
    """Supp(M, K(φ|N))"""
    NK, _ = koszul_cone(N, phis, cache=cache)
    return support_pair(M, NK, D, w, cache=cache)


def is_perfect(M: ModulePresentation, D: int = 12, w: int = 2, cache=None) -> bool:
    """
    pd_R M < ∞ 판정

    깊이 dim R + 1 까지 분해하면 유한 사영차원은 반드시 드러난다 (pd ≤ depth R).
    서포트가 비었는지와 다르면 Inconclusive.
    """
    setup = M.setup
    P = minimal_resolution(M, setup.dim + 1, cache=cache)
    S = support_pair(M, None, D, w, cache=cache)
    empty = S.is_empty()
    if P.terminated != empty:
        raise Inconclusive(
            f"{M}: 분해 종료={P.terminated} 이지만 서포트 공집합={empty} (stabilized={S.stabilized})"
        )
    return P.terminated


def rational_points(cone_ideal, e: int = 1) -> List[Tuple[int, ...]]:
    """원뿔이 정의하는 Proj 닫힌집합의 F_{p^e}-유리점 (정규화 대표원)"""
    ideal = cone_ideal.ideal if isinstance(cone_ideal, SupportCone) else cone_ideal
    ring = ideal.ring
    field = galois_field(ring.field.p, e)
    return [pt for pt in projective_points(field, ring.nvars) if ideal.vanishes_at(pt, field)]


# ============================================================================
# 📋 원뿔의 Ext 차원
# ============================================================================


def ext_dims_of_complex(C: FreeComplex) -> Dict[int, int]:
    """dim_k Ext^i(C, k) = rank C_i − rank(d_i mod 𝔪) − rank(d_{i+1} mod 𝔪), 신뢰 구간 안에서"""
    lo, hi = C.reliable_range()
    out = {}
    for i in range(lo, hi + 1):
        r_in = C.d(i).constant_part().rank() if C.module(i).rank and C.module(i - 1).rank else 0
        r_out = C.d(i + 1).constant_part().rank() if C.module(i + 1).rank and C.module(i).rank else 0
        out[i] = C.module(i).rank - r_in - r_out
    return out


def cone_sequence_check(M: ModulePresentation, phi: Poly, D: int = 12, cache=None) -> Dict:
    """
    K = cone(ζ_M(φ)) 의 Ext 차원을 𝓜 = Ext(M, k) 의 φ-여핵과 φ-핵 차원 합과 비교

    dim Ext^i(K) = dim coker(φ: 𝓜^{i-1-d} → 𝓜^{i-1}) + dim ker(φ: 𝓜^{i-d} → 𝓜^i)
    """
    setup = M.setup
    T = ext_table(M, ModulePresentation.residue_field(setup), D, cache=cache)
    P = minimal_resolution(M, D, cache=cache)
    u = operator_chain_map(P, eisenbud_operators(lift_resolution(P)), phi)
    d = phi.degree()
    actual = ext_dims_of_complex(cone(u))

    def rank_phi(src: int) -> int:
        if src < 0 or src + d > D:
            return 0
        return T.phi_matrix(phi, src).rank()

    rows = []
    ok = True
    for i in sorted(actual):
        if i < 0 or i > D:
            continue
        coker = T.dim(i - 1) - rank_phi(i - 1 - d)
        ker = T.dim(i - d) - rank_phi(i - d)
        expected = coker + ker
        rows.append({"i": i, "expected": expected, "actual": actual[i]})
        ok = ok and expected == actual[i]
    return {"phi": str(phi), "degree": d, "rows": rows, "ok": ok}
