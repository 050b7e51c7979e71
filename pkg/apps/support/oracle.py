"""
hypersurface 오라클 모듈
- 점 α ∈ P^{c-1}(F_{p^e}) 마다 f_α = Σ α_j f_j 로 hypersurface 환 Q_α = F_{p^e}[vars]/(f_α) 를 만들고
  M 을 Q_α-가군으로 보아 (관계 + f_j·e_i) 깊이 n+2 까지 분해
- 분해가 끝나지 않으면 α ∈ Supp(M) (유한 사영차원이면 pd ≤ depth Q_α = n-1)
- oracle_report: 점마다 오라클 판정과 이데알 판정을 나란히 기록
"""

import logging
from typing import Dict, List, Sequence, Tuple

from apps.algebra.fields import galois_field, projective_points
from apps.algebra.poly import PolyMatrix, PolyRing
from apps.algebra.ring import RingSetup, build_ci
from apps.homology.complexes import ModulePresentation, minimal_resolution
from common.errors import InputError, VerificationError

logger = logging.getLogger(__name__)

_HYPERSURFACE_LIMIT = 32
_hypersurfaces: Dict[Tuple, RingSetup] = {}


class OracleDisagreement(VerificationError):
    def __init__(self, message: str, rows: List[Dict]):
        super().__init__(message)
        self.rows = rows


def oracle_points(setup: RingSetup, e_max: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """(e, α) 목록: e = 1..e_max 각각의 P^{c-1}(F_{p^e}) 정규화 대표원"""
    out = []
    for e in range(1, e_max + 1):
        for pt in projective_points(galois_field(setup.p, e), setup.c):
            out.append((e, pt))
    return out


def hypersurface_setup(setup: RingSetup, alpha: Sequence[int], e: int = 1) -> RingSetup:
    """Q_α = F_{p^e}[vars] / (Σ α_j f_j)"""
    if len(alpha) != setup.c:
        raise InputError(f"점 {tuple(alpha)} 의 좌표 수가 c={setup.c} 와 다릅니다")
    if not any(alpha):
        raise InputError("α = 0 은 사영 점이 아닙니다")
    if len(set(setup.f_degrees())) > 1:
        raise InputError(f"f 의 차수가 서로 달라 f_α 가 동차가 아닙니다: {setup.f_degrees()}")
    key = (setup.hash, setup.kernel_method, e, tuple(alpha))
    if key in _hypersurfaces:
        return _hypersurfaces[key]
    field = galois_field(setup.p, e)
    Q = setup.q_ring
    Qe = PolyRing(field, Q.names, Q.degrees, Q.order)
    f_alpha = Qe.zero()
    for a, fj in zip(alpha, setup.f):
        if a:
            f_alpha = f_alpha + fj.change_ring(Qe).scale(a)
    variables = [{"name": n, "deg": d} for n, d in zip(Q.names, Q.degrees)]
    method = "groebner" if setup.kernel_method == "groebner" else "auto"
    hs = build_ci(setup.p, variables, [f_alpha], order=Q.order.kind, e=e, kernel_method=method)
    if len(_hypersurfaces) >= _HYPERSURFACE_LIMIT:
        _hypersurfaces.pop(next(iter(_hypersurfaces)))
    _hypersurfaces[key] = hs
    return hs


def clear_hypersurfaces():
    _hypersurfaces.clear()


def module_over_hypersurface(M: ModulePresentation, hs: RingSetup) -> ModulePresentation:
    """M 의 관계에 f_j·e_i 를 더해 Q_α 위의 표현으로 옮김"""
    Qe = hs.q_ring
    setup = M.setup
    cols = [[p.change_ring(Qe) for p in col] for col in M.relations.columns()]
    for i in range(M.ngens):
        for fj in setup.f:
            vec = [Qe.zero()] * M.ngens
            vec[i] = fj.change_ring(Qe)
            cols.append(vec)
    rel = PolyMatrix.from_columns(Qe, cols, M.ngens)
    return ModulePresentation(hs, M.degrees, rel, name=f"{M.name}|α" if M.name else "")


def hypersurface_oracle(M: ModulePresentation, alpha: Sequence[int], e: int = 1, cache=None) -> bool:
    """
    α ∈ Supp(M) 판정 (True = 서포트에 속함)

    Args:
        alpha: F_{p^e} 원소 좌표 (정수 인코딩)
        e: 확장 차수
    """
    if M.ngens == 0:
        return False
    hs = hypersurface_setup(M.setup, alpha, e)
    Ma = module_over_hypersurface(M, hs)
    res = minimal_resolution(Ma, M.setup.n + 2, cache=cache)
    logger.debug("오라클 α=%s (e=%d): Betti %s", tuple(alpha), e, res.betti)
    return not res.terminated


def oracle_report(M: ModulePresentation, ideal, e_max: int, cache=None) -> List[Dict]:
    """
    점마다 오라클과 이데알 판정을 비교

    Args:
        ideal: 비교 대상 ConeIdeal (vanishes_at 사용)

    Returns:
        List[Dict]: {"e", "point", "oracle", "ideal", "agree"}
    """
    rows = []
    for e, pt in oracle_points(M.setup, e_max):
        field = galois_field(M.setup.p, e)
        by_oracle = hypersurface_oracle(M, pt, e, cache=cache)
        by_ideal = ideal.vanishes_at(pt, field)
        rows.append({"e": e, "point": list(pt), "oracle": by_oracle, "ideal": by_ideal,
                     "agree": by_oracle == by_ideal})
    bad = [r for r in rows if not r["agree"]]
    if bad:
        logger.warning("오라클 불일치 %d점: %s", len(bad), [(r["e"], r["point"]) for r in bad])
    return rows


def assert_agreement(rows: List[Dict]) -> None:
    bad = [r for r in rows if not r["agree"]]
    if bad:
        raise OracleDisagreement(f"오라클과 이데알 판정이 {len(bad)}점에서 다릅니다", bad)
