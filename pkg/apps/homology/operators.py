"""
Eisenbud 연산자 모듈
- lift_resolution: 분해의 미분을 Q 위 행렬 d̃ 로 읽음 (정규형이 곧 Q 대표원)
- eisenbud_operators: d̃_{i-1}·d̃_i = Σ f_j·t̃_j 분해 (차수 -2 의 사슬 사상 t_j)
- operator_chain_map: φ ∈ k[χ] 를 t_j 합성으로 펼친 사슬 사상 P → Σ^{deg φ} P
- koszul_cone: φ 마다 cone → syzygy → 최소화를 반복하고 단계 인증서를 기록
- central_koszul: 중심 원소 z 의 곱셈 사상에 대한 반복 원뿔 (M ⊗ K(z))
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Sequence, Tuple

from apps.algebra.poly import Poly, PolyMatrix
from apps.algebra.ring import NonHomogeneous, RingSetup, f_coefficients
from apps.homology.complexes import (
    ChainMap,
    FreeComplex,
    ModulePresentation,
    Resolution,
    cone,
    homology_bound,
    minimal_resolution,
    minimize,
    syzygy_module,
)
from common.errors import ComputationError, InputError

logger = logging.getLogger(__name__)


class DecompositionFailed(ComputationError):
    pass


class InsufficientDepth(InputError):
    pass


@dataclass
class Lift:
    resolution: Resolution
    matrices: Dict[int, PolyMatrix]

    @property
    def setup(self) -> RingSetup:
        return self.resolution.complex.setup

    @property
    def depth(self) -> int:
        return self.resolution.depth


@dataclass
class OperatorFamily:
    lift: Lift
    ops: Dict[Tuple[int, int], PolyMatrix]  # (j, i) → t̃_j : F_i → F_{i-2}
    computed_to: int
    _reduced: Dict[Tuple[int, int], PolyMatrix] = dc_field(default_factory=dict, repr=False)

    @property
    def c(self) -> int:
        return self.lift.setup.c

    def t_tilde(self, j: int, i: int) -> PolyMatrix:
        if (j, i) in self.ops:
            return self.ops[(j, i)]
        C = self.lift.resolution.complex
        return PolyMatrix.zeros(self.lift.setup.q_ring, C.module(i - 2).rank, C.module(i).rank)

    def t(self, j: int, i: int) -> PolyMatrix:
        """t_j = t̃_j mod (f)"""
        if (j, i) not in self._reduced:
            self._reduced[(j, i)] = self.lift.setup.normal_form(self.t_tilde(j, i))
        return self._reduced[(j, i)]


def lift_resolution(P: Resolution) -> Lift:
    return Lift(P, {i: P.d(i) for i in range(1, P.depth + 1)})


def eisenbud_operators(L: Lift) -> OperatorFamily:
    """
    i = 2..depth 에서 d̃_{i-1}·d̃_i 의 각 성분을 Σ_j f_j·a_j 로 분해

    d̃² 의 성분이 (f) 에 속하지 않으면 DecompositionFailed.
    분해 후 d̃² = Σ f_j t̃_j 항등식과 t_j 의 사슬 사상 조건을 모두 확인한다.
    """
    setup = L.setup
    Q = setup.q_ring
    c = setup.c
    ops: Dict[Tuple[int, int], PolyMatrix] = {}
    C = L.resolution.complex
    for i in range(2, L.depth + 1):
        prod = L.matrices[i - 1] @ L.matrices[i]
        rows, cols = prod.nrows, prod.ncols
        entries = [[[Q.zero()] * cols for _ in range(rows)] for _ in range(c)]
        for r in range(rows):
            for s in range(cols):
                h = prod[r, s]
                if h.is_zero():
                    continue
                coeffs = f_coefficients(setup, h)
                if coeffs is None:
                    raise DecompositionFailed(f"d̃_{i - 1}·d̃_{i} 의 ({r},{s}) 성분 {h} 가 (f) 에 없습니다")
                for j in range(c):
                    entries[j][r][s] = coeffs[j]
        for j in range(c):
            ops[(j, i)] = PolyMatrix(Q, rows, cols, entries[j])
        total = PolyMatrix.zeros(Q, rows, cols)
        for j in range(c):
            total = total + ops[(j, i)].map(lambda p, fj=setup.f[j]: p * fj)
        if total != prod:
            raise DecompositionFailed(f"인덱스 {i} 에서 d̃² = Σ f_j t̃_j 가 성립하지 않습니다")
    family = OperatorFamily(L, ops, L.depth)
    for i in range(3, L.depth + 1):
        for j in range(c):
            lhs = C.d(i - 2) @ family.t(j, i)
            rhs = family.t(j, i - 1) @ C.d(i)
            if not setup.normal_form(lhs - rhs).is_zero():
                raise DecompositionFailed(f"t_{j + 1} 이 인덱스 {i} 에서 사슬 사상이 아닙니다")
    logger.debug("Eisenbud 연산자: c=%d, 인덱스 2..%d", c, L.depth)
    return family


def operator_weight(setup: RingSetup, phi: Poly) -> int:
    """φ 의 단항식 χ^a 마다 Σ a_j·deg f_j 가 같아야 함 (내부 차수 보존)"""
    fdeg = setup.f_degrees()
    weights = {sum(a * d for a, d in zip(m, fdeg)) for m in phi.terms}
    if len(weights) != 1:
        raise NonHomogeneous(f"{phi} 는 내부 차수에 대해 동차가 아닙니다 (f 차수 {fdeg})")
    return weights.pop()


def _check_phi(setup: RingSetup, phi: Poly) -> Poly:
    if phi.ring != setup.chi_ring:
        raise InputError(f"φ={phi} 는 연산자 환 {setup.chi_ring} 의 원소가 아닙니다")
    if phi.is_zero():
        raise InputError("φ = 0 으로는 원뿔을 만들 수 없습니다")
    if not phi.is_homogeneous():
        raise NonHomogeneous(f"φ={phi} 가 동차가 아닙니다")
    return phi


def operator_chain_map(P: Resolution, F: OperatorFamily, phi: Poly) -> ChainMap:
    """
    φ(t_1..t_c) 를 인덱스별 행렬로 펼친 사슬 사상 P → Σ^{deg φ} P(w)

    단항식 χ^a 는 t_1 부터 오름차순으로 합성한다. w 는 내부 차수 이동량.
    """
    setup = P.complex.setup
    phi = _check_phi(setup, phi)
    d = phi.degree()
    w = operator_weight(setup, phi)
    if P.depth < d and not P.terminated:
        raise InsufficientDepth(f"deg φ = {d} 에는 깊이 {d} 이상의 분해가 필요합니다 (현재 {P.depth})")
    C = P.complex
    Q = setup.q_ring
    target = C.twist(w).shift(d)
    maps: Dict[int, PolyMatrix] = {}
    for i in range(max(C.low, d), C.high + 1):
        total = PolyMatrix.zeros(Q, C.module(i - d).rank, C.module(i).rank)
        for mono, coeff in phi.sorted_terms():
            M = PolyMatrix.identity(Q, C.module(i).rank)
            idx = i
            for j, a in enumerate(mono):
                for _ in range(a):
                    M = setup.normal_form(F.t(j, idx) @ M)
                    idx -= 2
            total = total + M.scale(coeff)
        maps[i] = setup.normal_form(total)
    u = ChainMap(source=C, target=target, maps=maps, degree=d)
    u.verify()
    logger.debug("연산자 사슬 사상 φ=%s (차수 %d, 가중치 %d)", phi, d, w)
    return u


@dataclass
class KoszulResult:
    module: ModulePresentation
    certificate: List[Dict]
    bounds: List[Dict]


def koszul_cone(
    M: ModulePresentation, phis: Sequence[Poly], cache=None
) -> Tuple[ModulePresentation, List[Dict]]:
    """
    K(φ_1..φ_m | M): φ 하나마다 cone(ζ(φ)) → Ω^{deg φ} → 최소화

    Returns:
        (ModulePresentation, certificate): 최종 가군과 cone/syzygy 단계 목록
    """
    result = koszul_cone_detailed(M, phis, cache=cache)
    return result.module, result.certificate


def koszul_cone_detailed(M: ModulePresentation, phis: Sequence[Poly], cache=None) -> KoszulResult:
    setup = M.setup
    current = minimize(M)
    certificate: List[Dict] = []
    bounds: List[Dict] = []
    for phi in phis:
        phi = _check_phi(setup, phi)
        d = phi.degree()
        certificate.append({"op": "cone", "phi": str(phi)})
        if current.ngens == 0:
            certificate.append({"op": "syzygy", "n": d})
            continue
        P = minimal_resolution(current, max(d + 2, 3), cache=cache)
        F = eisenbud_operators(lift_resolution(P))
        u = operator_chain_map(P, F, phi)
        K = cone(u)
        K.theoretical_bound = d
        bound = homology_bound(K, (0, d + 2))
        bounds.append(bound.to_json())
        if bound.s > d:
            raise ComputationError(f"cone(ζ({phi})) 의 호몰로지가 인덱스 {bound.s} > {d} 에 남아 있습니다")
        current = syzygy_module(K, d, bound=bound)
        certificate.append({"op": "syzygy", "n": d})
        logger.info("cone φ=%s → Ω^%d: 생성원 %d개, 관계 %d개", phi, d, current.ngens, current.relations.ncols)
    return KoszulResult(current, certificate, bounds)


def central_koszul(M: ModulePresentation, zs: Sequence, cache=None) -> FreeComplex:
    """
    M ⊗ K(z): M 의 최소 분해 위에서 z·id 의 원뿔을 차례로 취함

    z 의 차수만큼 소스 생성원 차수를 올려 각 사상이 차수 0 이 되도록 한다.
    """
    setup = M.setup
    Q = setup.q_ring
    zs = [setup.normal_form(z if isinstance(z, Poly) else Q.parse(z)) for z in zs]
    for z in zs:
        if not z.is_homogeneous():
            raise NonHomogeneous(f"z={z} 가 동차가 아닙니다")
    P = minimal_resolution(M, len(zs) + 2, cache=cache)
    C = P.complex
    for z in zs:
        s = max(z.degree(), 0)
        source = C.twist(s)
        maps = {i: PolyMatrix.identity(Q, C.module(i).rank).map(lambda p, z=z: p * z)
                for i in range(C.low, C.high + 1)}
        C = cone(ChainMap(source=source, target=C, maps=maps, degree=0))
    return C


def ext_operator_matrices(F: OperatorFamily, i: int) -> List:
    """Ext^i(M,k) → Ext^{i+2}(M,k) 의 χ_j 작용 (t_j mod 𝔪 의 전치)"""
    return [F.t(j, i + 2).constant_part().T for j in range(F.c)]
