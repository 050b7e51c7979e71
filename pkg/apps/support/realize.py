"""
실현 모듈
- realize: 닫힌 원뿔 X 와 기저 가군 M (기본 k) 으로부터 Supp(M_X) = X ∩ Supp(M) 인 M_X 를 만들고 검증
    - φ 목록 = sat(X) 의 reduced 기저 (차수, 순서 오름차순)
    - 검증: proj_compare(Supp(M_X), X') == equal, 오라클 점 전부 일치, Ext 표 안정화
- realize_pair: (M_X, N_X) 와 세 가지 쌍 서포트 검증 (N = M 이면 N_X = M_X)
- gorenstein_vanishing_check: dim R < i ≤ D 에서 Ext^i(M, R) = 0 확인
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from apps.algebra.groebner import ConeIdeal, ProjRelation, proj_compare
from apps.algebra.poly import Poly
from apps.homology.complexes import FreeComplex, GradedFree, ModulePresentation, homology_bound, minimal_resolution
from apps.homology.operators import koszul_cone
from apps.support.oracle import oracle_report
from apps.support.support import SupportCone, support_pair
from common.errors import ComputationError

logger = logging.getLogger(__name__)

VERIFIED = "verified"
UNVERIFIED = "unverified"
GORENSTEIN_NOTE = "complete intersection ⇒ Gorenstein, injdim R = dim R ⇒ Ext^i(M,R) = 0 for i > dim R"


class VanishingFailed(ComputationError):
    pass


@dataclass
class RealizationReport:
    target: ConeIdeal
    effective: ConeIdeal
    base: ModulePresentation
    module: ModulePresentation
    certificate: List[Dict]
    support: SupportCone
    relation: ProjRelation
    oracle: List[Dict]
    params: Dict
    base_N: Optional[ModulePresentation] = None
    module_N: Optional[ModulePresentation] = None
    certificate_N: List[Dict] = dc_field(default_factory=list)
    pair_supports: Dict[str, SupportCone] = dc_field(default_factory=dict)
    vanishing: Optional[Dict] = None
    warnings: List[Dict] = dc_field(default_factory=list)

    @property
    def agreement(self) -> bool:
        return all(r["agree"] for r in self.oracle)

    @property
    def stabilized(self) -> bool:
        return self.support.stabilized and all(s.stabilized for s in self.pair_supports.values())

    @property
    def pair_equal(self) -> bool:
        return all(proj_compare(s.ideal, self.effective) == ProjRelation.EQUAL for s in self.pair_supports.values())

    @property
    def verdict(self) -> str:
        ok = self.relation == ProjRelation.EQUAL and self.agreement and self.stabilized and self.pair_equal
        return VERIFIED if ok else UNVERIFIED

    def to_json(self) -> Dict:
        data = {
            "target": self.target.to_json(),
            "effective_target": self.effective.to_json(),
            "base": {"hash": self.base.hash, "presentation": self.base.to_json()},
            "module": {"hash": self.module.hash, "presentation": self.module.to_json()},
            "certificate": self.certificate,
            "support": self.support.to_json(),
            "relation": self.relation.value,
            "oracle_points_checked": self.oracle,
            "agreement": self.agreement,
            "stabilized": self.stabilized,
            "params": self.params,
            "warnings": self.warnings,
            "notes": ["indecomposability of the output is not checked; it may split into summands"],
            "verdict": self.verdict,
        }
        if self.base_N is not None:
            data["base_N"] = {"hash": self.base_N.hash, "presentation": self.base_N.to_json()}
            data["module_N"] = {"hash": self.module_N.hash, "presentation": self.module_N.to_json()}
            data["certificate_N"] = self.certificate_N
            data["pair_supports"] = {k: v.to_json() for k, v in sorted(self.pair_supports.items())}
        if self.vanishing is not None:
            data["vanishing"] = self.vanishing
        return data


def phi_list(X: ConeIdeal) -> List[Poly]:
    """sat(X) 의 reduced 기저를 (차수, 기저 순서) 로 정렬"""
    polys = X.saturate().gb().polys()
    return [p for _, p in sorted(enumerate(polys), key=lambda ip: (ip[1].degree(), ip[0]))]


def _effective_target(X: ConeIdeal, S: SupportCone, warnings: List[Dict]) -> ConeIdeal:
    effective = (X + S.ideal).saturate()
    if proj_compare(X, S.ideal) not in (ProjRelation.EQUAL, ProjRelation.SUBSET):
        warnings.append({"type": "ClippedTarget", "target": X.to_json(), "effective": effective.to_json()})
        logger.warning("ClippedTarget: X=%s ⊄ Supp=%s, 실제 목표 X'=%s", X.text(), S.ideal.text(), effective.text())
    return effective


def realize(
    X: ConeIdeal,
    M: Optional[ModulePresentation] = None,
    setup=None,
    D: int = 12,
    w: int = 2,
    e: int = 2,
    cache=None,
) -> RealizationReport:
    """
    X 를 서포트로 갖는 가군 M_X 구성

    Args:
        X: k[χ] 의 동차 이데알
        M: 기저 가군 (None 이면 잉여체 k, 이때 setup 필요)
        D, w: Ext 표 상한과 생성원 윈도우
        e: 오라클 확장 차수 상한

    Returns:
        RealizationReport
    """
    if M is None:
        M = ModulePresentation.residue_field(setup)
    warnings: List[Dict] = []
    S = support_pair(M, None, D, w, cache=cache)
    effective = _effective_target(X, S, warnings)
    phis = phi_list(X)
    logger.info("실현 X=%s: φ 목록 %s", X.text(), [str(p) for p in phis])
    MX, certificate = koszul_cone(M, phis, cache=cache)
    SX = support_pair(MX, None, D, w, cache=cache)
    relation = proj_compare(SX.ideal, effective)
    oracle = oracle_report(MX, SX.ideal, e, cache=cache)
    report = RealizationReport(
        target=X, effective=effective, base=M, module=MX, certificate=certificate, support=SX,
        relation=relation, oracle=oracle, params={"D": D, "w": w, "e": e}, warnings=warnings,
    )
    if not SX.stabilized:
        report.warnings.append({"type": "StabilizationNotReached", "pair": list(SX.pair)})
    logger.info("실현 결과: Supp(M_X)=%s, %s → %s", SX.ideal.text(), relation.value, report.verdict)
    return report


def realize_pair(
    X: ConeIdeal,
    M: ModulePresentation,
    N: ModulePresentation,
    D: int = 12,
    w: int = 2,
    e: int = 2,
    cache=None,
) -> RealizationReport:
    """
    (M_X, N_X) 구성과 Supp(M_X, N) = Supp(M, N_X) = Supp(M_X, N_X) = X' 검증

    Ext(M, R) 의 최종 소멸은 Gorenstein 성질로 보장되며 gorenstein_vanishing_check 로 한 번 더 확인한다.
    """
    warnings: List[Dict] = []
    S = support_pair(M, N, D, w, cache=cache)
    effective = _effective_target(X, S, warnings)
    phis = phi_list(X)
    MX, cert_M = koszul_cone(M, phis, cache=cache)
    if N.hash == M.hash:
        NX, cert_N = MX, cert_M
    else:
        NX, cert_N = koszul_cone(N, phis, cache=cache)
    pairs = {
        "M_X,N": support_pair(MX, N, D, w, cache=cache),
        "M,N_X": support_pair(M, NX, D, w, cache=cache),
        "M_X,N_X": support_pair(MX, NX, D, w, cache=cache),
    }
    SX = pairs["M_X,N_X"]
    relation = proj_compare(SX.ideal, effective)
    oracle = oracle_report(MX, support_pair(MX, None, D, w, cache=cache).ideal, e, cache=cache)
    vanishing = gorenstein_vanishing_check(M, D, cache=cache)
    report = RealizationReport(
        target=X, effective=effective, base=M, module=MX, certificate=cert_M, support=SX,
        relation=relation, oracle=oracle, params={"D": D, "w": w, "e": e}, base_N=N, module_N=NX,
        certificate_N=cert_N, pair_supports=pairs, vanishing=vanishing, warnings=warnings,
    )
    logger.info("쌍 실현 결과: %s", {k: v.ideal.text() for k, v in pairs.items()})
    return report


def dual_complex(M: ModulePresentation, D: int, cache=None) -> FreeComplex:
    """Hom_R(P, R): C_{-i} = F_i^* (생성원 차수 부호 반전), d_{-i+1} = d_i^T"""
    P = minimal_resolution(M, D, cache=cache)
    C = P.complex
    mods = [GradedFree(tuple(-d for d in C.module(i).degrees)) for i in range(D, -1, -1)]
    diffs = {-i + 1: C.d(i).T for i in range(1, D + 1)}
    return FreeComplex(M.setup, -D, mods, diffs, exact_low=P.terminated, exact_top=True)


def gorenstein_vanishing_check(M: ModulePresentation, D: int = 12, cache=None) -> Dict:
    """
    dim R < i ≤ D 에서 Ext^i(M, R) = H_{-i}(Hom(P, R)) = 0 확인

    Returns:
        Dict: 구조적 근거와 확인한 인덱스 범위

    Raises:
        VanishingFailed: 0 이 아닌 Ext 가 발견된 경우
    """
    setup = M.setup
    lo, hi = setup.dim + 1, D
    out = {"dim_R": setup.dim, "checked": [lo, hi] if lo <= hi else [], "nonzero": [], "structural": GORENSTEIN_NOTE}
    if lo > hi or M.ngens == 0:
        return out
    # Ext^D 까지 보려면 F_{D+1} 이 필요
    C = dual_complex(M, D + 1, cache=cache)
    bound = homology_bound(C, (-hi, -lo))
    if bound.nonzero:
        out["nonzero"] = sorted(-i for i in bound.nonzero)
        raise VanishingFailed(f"Ext^i({M}, R) ≠ 0 for i ∈ {out['nonzero']}")
    logger.info("Ext^i(%s, R) = 0 확인 (%d ≤ i ≤ %d)", M, lo, hi)
    return out
