"""
자유 복합체 모듈
- GradedFree / FreeComplex / ChainMap: 유한 생성 그레이디드 자유 R-가군의 유계 복합체
- ModulePresentation: 생성원 차수 + 관계 행렬 (열 = 관계) 로 주어진 유한 R-가군
- minimal_resolution: 최소 자유 분해 (차수 D 까지)
- minimize / cone / homology / homology_bound / syzygy_module
- 관례: (Σ^d C)_n = C_{n-d}, d^{Σ^d C} = (-1)^d d^C, d_i: C_i → C_{i-1}
"""

import logging
import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from apps.algebra.graded import GradedAlgebra, graded_kernel, minimal_generators, solve_in_degree
from apps.algebra.groebner import syzygies
from apps.algebra.poly import Poly, PolyMatrix, add_scaled, terms_to_vector, vector_to_terms
from apps.algebra.ring import NonHomogeneous, RingSetup
from common.errors import ComputationError, InputError
from common.io import content_hash

logger = logging.getLogger(__name__)

NO_HOMOLOGY = -math.inf
_MEMO_LIMIT = 64
_memo: Dict[Tuple[str, str], "Resolution"] = {}


class NotAChainMap(ComputationError):
    pass


class WindowOutOfRange(InputError):
    pass


class BoundTooLow(InputError):
    pass


# ============================================================================
# 📋 자유가군과 복합체
# ============================================================================


@dataclass(frozen=True)
class GradedFree:
    degrees: Tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def twist(self, s: int) -> "GradedFree":
        return GradedFree(tuple(d + s for d in self.degrees))

    def __add__(self, other: "GradedFree") -> "GradedFree":
        return GradedFree(self.degrees + other.degrees)


def columns_terms(A: PolyMatrix) -> List[Dict]:
    return [vector_to_terms(col) for col in A.columns()]


def matrix_from_terms(setup: RingSetup, cols: Sequence[Dict], nrows: int) -> PolyMatrix:
    return PolyMatrix.from_columns(setup.q_ring, [terms_to_vector(setup.q_ring, t, nrows) for t in cols], nrows)


class FreeComplex:
    """
    C_low, ..., C_high 의 자유가군과 미분 d_i (low < i ≤ high)

    exact_low/exact_top 은 양 끝이 실제로 0 과 이어지는지 (잘린 복합체가 아닌지) 를 뜻한다.
    """

    def __init__(
        self,
        setup: RingSetup,
        low: int,
        modules: Sequence[GradedFree],
        diffs: Dict[int, PolyMatrix],
        exact_low: bool = True,
        exact_top: bool = False,
        theoretical_bound: Optional[int] = None,
    ):
        self.setup = setup
        self.low = low
        self.modules = list(modules)
        self.diffs = dict(diffs)
        self.exact_low = exact_low
        self.exact_top = exact_top
        self.theoretical_bound = theoretical_bound
        for i, D in self.diffs.items():
            if (D.nrows, D.ncols) != (self.module(i - 1).rank, self.module(i).rank):
                raise InputError(f"d_{i} 의 모양 {D.nrows}x{D.ncols} 가 가군 계수와 맞지 않습니다")

    @property
    def high(self) -> int:
        return self.low + len(self.modules) - 1

    def module(self, i: int) -> GradedFree:
        if self.low <= i <= self.high:
            return self.modules[i - self.low]
        return GradedFree()

    def d(self, i: int) -> PolyMatrix:
        if i in self.diffs:
            return self.diffs[i]
        return PolyMatrix.zeros(self.setup.q_ring, self.module(i - 1).rank, self.module(i).rank)

    def reliable_range(self) -> Tuple[int, int]:
        lo = self.low if self.exact_low else self.low + 1
        hi = self.high if self.exact_top else self.high - 1
        return lo, hi

    def ranks(self) -> List[int]:
        return [m.rank for m in self.modules]

    def is_zero(self) -> bool:
        return all(m.rank == 0 for m in self.modules)

    def check_d_squared(self) -> bool:
        for i in range(self.low + 2, self.high + 1):
            prod = self.d(i - 1) @ self.d(i)
            if not self.setup.normal_form(prod).is_zero():
                return False
        return True

    def shift(self, k: int) -> "FreeComplex":
        """Σ^k C"""
        sign = -1 if k % 2 else 1
        diffs = {i + k: (D if sign == 1 else -D) for i, D in self.diffs.items()}
        return FreeComplex(self.setup, self.low + k, self.modules, diffs, self.exact_low, self.exact_top)

    def twist(self, s: int) -> "FreeComplex":
        """모든 생성원 차수에 s 를 더함"""
        return FreeComplex(self.setup, self.low, [m.twist(s) for m in self.modules], self.diffs,
                           self.exact_low, self.exact_top)

    def to_json(self) -> Dict:
        return {
            "low": self.low,
            "degrees": [list(m.degrees) for m in self.modules],
            "diffs": {str(i): D.to_json() for i, D in sorted(self.diffs.items())},
        }


@dataclass
class ChainMap:
    """source_i → target_i 의 차수 0 사상 (target 은 이미 Σ^d / 차수 이동이 반영된 복합체)"""

    source: FreeComplex
    target: FreeComplex
    maps: Dict[int, PolyMatrix]
    degree: int = 0

    def at(self, i: int) -> PolyMatrix:
        if i in self.maps:
            return self.maps[i]
        ring = self.source.setup.q_ring
        return PolyMatrix.zeros(ring, self.target.module(i).rank, self.source.module(i).rank)

    def verify(self) -> None:
        """d^T u_i = u_{i-1} d^S (R 위) 를 확인, 아니면 NotAChainMap"""
        setup = self.source.setup
        lo = max(self.source.low, self.target.low)
        hi = min(self.source.high, self.target.high)
        for i in range(lo + 1, hi + 1):
            lhs = self.target.d(i) @ self.at(i)
            rhs = self.at(i - 1) @ self.source.d(i)
            if not setup.normal_form(lhs - rhs).is_zero():
                raise NotAChainMap(f"사슬 사상 조건이 {i} 번째 성분에서 성립하지 않습니다")


# ============================================================================
# 📋 가군 표현
# ============================================================================


class ModulePresentation:
    """coker(relations: ⊕ R(-b) → ⊕ R(-a)), 관계 행렬 성분은 R 정규형"""

    def __init__(self, setup: RingSetup, degrees: Sequence[int], relations: Optional[PolyMatrix] = None,
                 name: str = ""):
        self.setup = setup
        self.degrees = tuple(int(d) for d in degrees)
        if relations is None:
            relations = PolyMatrix.zeros(setup.q_ring, len(self.degrees), 0)
        if relations.nrows != len(self.degrees):
            raise InputError(f"관계 행렬의 행 수 {relations.nrows} ≠ 생성원 수 {len(self.degrees)}")
        self.relations = setup.normal_form(relations)
        self.name = name
        self.relation_degrees = tuple(self._column_degree(j) for j in range(self.relations.ncols))

    def _column_degree(self, j: int) -> Optional[int]:
        deg = None
        for i, p in enumerate(self.relations.column(j)):
            if p.is_zero():
                continue
            if not p.is_homogeneous():
                raise NonHomogeneous(f"관계 {j} 의 성분 {p} 가 동차가 아닙니다")
            d = p.degree() + self.degrees[i]
            if deg is not None and d != deg:
                raise NonHomogeneous(f"관계 {j} 가 동차 벡터가 아닙니다 (차수 {deg} vs {d})")
            deg = d
        return deg

    @property
    def algebra(self) -> GradedAlgebra:
        return self.setup.algebra

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    def relation_terms(self) -> List[Dict]:
        return columns_terms(self.relations)

    def is_zero_presentation(self) -> bool:
        return self.ngens == 0

    # 생성자
    @classmethod
    def residue_field(cls, setup: RingSetup) -> "ModulePresentation":
        gens = setup.q_ring.gens()
        return cls(setup, [0], PolyMatrix(setup.q_ring, 1, len(gens), [gens]), name="k")

    @classmethod
    def free(cls, setup: RingSetup, degrees: Sequence[int] = (0,)) -> "ModulePresentation":
        return cls(setup, degrees, name="R" if tuple(degrees) == (0,) else "")

    @classmethod
    def cyclic(cls, setup: RingSetup, ideal: Sequence) -> "ModulePresentation":
        """R/I"""
        gens = [g if isinstance(g, Poly) else setup.q_ring.parse(g) for g in ideal]
        return cls(setup, [0], PolyMatrix(setup.q_ring, 1, len(gens), [gens]))

    @classmethod
    def zero(cls, setup: RingSetup) -> "ModulePresentation":
        return cls(setup, [])

    @classmethod
    def from_json(cls, setup: RingSetup, data) -> "ModulePresentation":
        if data == "k":
            return cls.residue_field(setup)
        if data == "R":
            return cls.free(setup)
        if not isinstance(data, dict) or "gens" not in data:
            raise InputError(f"가군 스키마 오류: {data!r}")
        degrees = [int(g.get("deg", 0)) if isinstance(g, dict) else int(g) for g in data["gens"]]
        cols = data.get("relations", [])
        parsed = []
        for col in cols:
            if len(col) != len(degrees):
                raise InputError(f"관계 열의 길이 {len(col)} ≠ 생성원 수 {len(degrees)}")
            parsed.append([setup.q_ring.parse(x) for x in col])
        rel = PolyMatrix.from_columns(setup.q_ring, parsed, len(degrees))
        return cls(setup, degrees, rel, name=str(data.get("name", "")))

    def to_json(self) -> Dict:
        return {"gens": [{"deg": d} for d in self.degrees], "relations": self.relations.to_json()}

    @property
    def hash(self) -> str:
        return content_hash(self.to_json())

    def twist(self, s: int) -> "ModulePresentation":
        """생성원 차수에 s 를 더함 (R(-s) ⊗ M)"""
        return ModulePresentation(self.setup, [d + s for d in self.degrees], self.relations)

    def direct_sum(self, other: "ModulePresentation") -> "ModulePresentation":
        ring = self.setup.q_ring
        z1 = PolyMatrix.zeros(ring, self.ngens, other.relations.ncols)
        z2 = PolyMatrix.zeros(ring, other.ngens, self.relations.ncols)
        if not self.ngens or not other.ngens:
            rel = other.relations if not self.ngens else self.relations
        else:
            rel = PolyMatrix.block(ring, [[self.relations, z1], [z2, other.relations]])
        return ModulePresentation(self.setup, self.degrees + other.degrees, rel)

    def is_minimal(self) -> bool:
        return all(p.constant_term() == 0 for row in self.relations.entries for p in row)

    def __repr__(self) -> str:
        return f"ModulePresentation(gens={list(self.degrees)}, relations={self.relations.ncols})"


# ============================================================================
# 📋 최소화와 핵
# ============================================================================


def minimize(M: ModulePresentation) -> ModulePresentation:
    """
    graded Nakayama 최소화

    상수 성분 a = A[i, j] 가 있으면 열 연산으로 i 행을 지우고 생성원 i 와 관계 j 를 제거한다.
    마지막으로 0 열을 없애고 관계 열을 최소 생성원으로 줄인다.
    """
    setup = M.setup
    alg = setup.algebra
    F = setup.field
    zero = (0,) * setup.n
    degs = list(M.degrees)
    cols = [alg.nf_terms(t) for t in M.relation_terms()]
    while True:
        pivot = None
        for j, col in enumerate(cols):
            rows = sorted(i for (i, m) in col if m == zero)
            if rows:
                pivot = (rows[0], j)
                break
        if pivot is None:
            break
        i, j = pivot
        P = cols[j]
        inv = F.inv(P[(i, zero)])
        rest = []
        for k, col in enumerate(cols):
            if k == j:
                continue
            entry = [(m, c) for (r, m), c in col.items() if r == i]
            if entry:
                col = dict(col)
                for m, c in entry:
                    add_scaled(col, P, F.neg(F.mul(c, inv)), m, F)
                col = alg.nf_terms(col)
            rest.append(col)
        degs.pop(i)
        cols = [{(r - (r > i), m): c for (r, m), c in col.items() if r != i} for col in rest]
    cols = [c for c in cols if c]
    keep = minimal_generators(alg, cols, degs)
    cols = [cols[k] for k in keep]
    return ModulePresentation(setup, degs, matrix_from_terms(setup, cols, len(degs)), name=M.name)


def kernel_R(setup: RingSetup, A: PolyMatrix, src_degrees: Sequence[int], tgt_degrees: Sequence[int]) -> List[Dict]:
    """
    동차 R-행렬 A 의 핵의 최소 생성원

    groebner: [Ã | f_j·e_i] 의 syzygy 를 Q 위에서 계산하고 첫 블록으로 사영한 뒤 (f) 로 환원
    graded: 아르틴 환에서 차수별 선형대수

    Returns:
        List[Dict]: 소스 자유가군의 원소 (terms)
    """
    alg = setup.algebra
    src_degrees, tgt_degrees = list(src_degrees), list(tgt_degrees)
    ncols = A.ncols
    if ncols == 0:
        return []
    if A.nrows == 0:
        zero = (0,) * setup.n
        return [{(j, zero): 1} for j in range(ncols)]
    cols = [alg.nf_terms(t) for t in columns_terms(A)]
    if setup.use_graded_kernel():
        return graded_kernel(alg, cols, src_degrees, tgt_degrees)
    Q = setup.q_ring
    gens = [terms_to_vector(Q, t, A.nrows) for t in cols]
    for i in range(A.nrows):
        for fj in setup.f:
            vec = [Q.zero()] * A.nrows
            vec[i] = fj
            gens.append(vec)
    syz = syzygies(gens, ring=Q, rank=A.nrows, shifts=tgt_degrees)
    projected = []
    for v in syz:
        t = alg.nf_terms(vector_to_terms(v[:ncols]))
        if t:
            projected.append(t)
    keep = minimal_generators(alg, projected, src_degrees)
    logger.debug("kernel_R(groebner): syzygy %d개 → 최소 생성원 %d개", len(projected), len(keep))
    return [projected[k] for k in keep]


def column_degrees(setup: RingSetup, cols: Sequence[Dict], shifts: Sequence[int]) -> List[int]:
    out = []
    for t in cols:
        d = setup.algebra.vector_degree(t, shifts)
        if d is None:
            raise ComputationError("0 열은 차수가 없습니다")
        out.append(d)
    return out


# ============================================================================
# 📋 최소 자유 분해
# ============================================================================


@dataclass
class Resolution:
    complex: FreeComplex
    module: ModulePresentation
    depth: int
    terminated: bool
    minimal: bool = True

    @property
    def betti(self) -> List[int]:
        return [self.complex.module(i).rank for i in range(self.depth + 1)]

    def graded_betti(self) -> List[List[int]]:
        return [list(self.complex.module(i).degrees) for i in range(self.depth + 1)]

    def d(self, i: int) -> PolyMatrix:
        return self.complex.d(i)

    def truncate(self, D: int) -> "Resolution":
        C = self.complex
        mods = [C.module(i) for i in range(D + 1)]
        diffs = {i: C.d(i) for i in range(1, D + 1)}
        terminated = any(C.module(i).rank == 0 for i in range(D + 1))
        return Resolution(FreeComplex(C.setup, 0, mods, diffs, exact_top=terminated), self.module, D, terminated)

    def to_json(self) -> Dict:
        return {
            "depth": self.depth,
            "terminated": self.terminated,
            "degrees": self.graded_betti(),
            "diffs": [self.d(i).to_json() for i in range(1, self.depth + 1)],
        }

    @classmethod
    def from_json(cls, M: ModulePresentation, data: Dict) -> "Resolution":
        setup = M.setup
        Q = setup.q_ring
        degrees = [tuple(d) for d in data["degrees"]]
        diffs = {}
        for i, cols in enumerate(data["diffs"], start=1):
            parsed = [[Q.parse(x) for x in col] for col in cols]
            diffs[i] = PolyMatrix.from_columns(Q, parsed, len(degrees[i - 1]))
        C = FreeComplex(setup, 0, [GradedFree(d) for d in degrees], diffs, exact_top=bool(data["terminated"]))
        return cls(C, M, int(data["depth"]), bool(data["terminated"]))


def minimal_resolution(M: ModulePresentation, D: int, cache=None) -> Resolution:
    """
    F_0 ← F_1 ← ... ← F_D 최소 자유 분해

    Args:
        M: 분해할 가군 (먼저 minimize)
        D: 호몰로지 차수 상한 (D ≥ 1)
        cache: load(setup, M, D) / store(setup, M, D, data) 를 가진 분해 캐시 (선택)
    """
    if D < 1:
        raise InputError(f"분해 깊이 D 는 1 이상이어야 합니다 (D={D})")
    setup = M.setup
    memo_key = (setup.hash + str(id(setup)), M.hash)
    known = _memo.get(memo_key)
    if known is not None and known.depth >= D:
        return known.truncate(D) if known.depth > D else known
    if cache is not None and setup.field.e == 1:
        data = cache.load(setup, M, D)
        if data is not None:
            res = Resolution.from_json(minimize(M), data)
            _remember(memo_key, res)
            return res

    M0 = minimize(M)
    Q = setup.q_ring
    mods = [GradedFree(M0.degrees)]
    diffs: Dict[int, PolyMatrix] = {}
    current = M0.relations
    cur_degrees = list(M0.relation_degrees)
    terminated = False
    for i in range(1, D + 1):
        mods.append(GradedFree(tuple(cur_degrees)))
        diffs[i] = current
        if not cur_degrees:
            terminated = True
            for _ in range(i + 1, D + 1):
                mods.append(GradedFree())
            break
        if i == D:
            break
        ker = kernel_R(setup, current, cur_degrees, mods[i - 1].degrees)
        nxt_degrees = column_degrees(setup, ker, cur_degrees)
        current = matrix_from_terms(setup, ker, len(cur_degrees))
        cur_degrees = nxt_degrees
        logger.debug("분해 %s: F_%d 계수 %d", M0, i + 1, len(cur_degrees))
    terminated = terminated or any(m.rank == 0 for m in mods)
    C = FreeComplex(setup, 0, mods, {i: m for i, m in diffs.items() if i <= D}, exact_top=terminated)
    res = Resolution(C, M0, D, terminated)
    logger.info("최소 분해 (D=%d): Betti %s%s", D, res.betti, " (유한)" if terminated else "")
    _remember(memo_key, res)
    if cache is not None and setup.field.e == 1:
        cache.store(setup, M, D, res.to_json())
    return res


def _remember(key, res: Resolution):
    if len(_memo) >= _MEMO_LIMIT:
        _memo.pop(next(iter(_memo)))
    _memo[key] = res


def clear_memo():
    _memo.clear()


# ============================================================================
# 📋 원뿔, 호몰로지, syzygy
# ============================================================================


def cone(u: ChainMap) -> FreeComplex:
    """
    cone(u)_n = T_n ⊕ S_{n-1}, d = [[d^T, u], [0, -d^S]]
    """
    u.verify()
    S, T = u.source, u.target
    setup = S.setup
    Q = setup.q_ring
    low = min(T.low, S.low + 1)
    exact_top = S.exact_top and T.exact_top
    high = max(T.high, S.high + 1) if exact_top else min(T.high, S.high + 1)
    mods = [T.module(n) + S.module(n - 1) for n in range(low, high + 1)]
    diffs = {}
    for n in range(low + 1, high + 1):
        dT = T.d(n)
        dS = S.d(n - 1)
        un = u.at(n - 1)
        zero = PolyMatrix.zeros(Q, S.module(n - 2).rank, T.module(n).rank)
        diffs[n] = PolyMatrix.block(Q, [[dT, un], [zero, -dS]])
    C = FreeComplex(setup, low, mods, diffs, exact_low=S.exact_low and T.exact_low, exact_top=exact_top)
    if not C.check_d_squared():
        raise NotAChainMap("원뿔의 미분이 d² = 0 을 만족하지 않습니다")
    return C


def _check_window(C: FreeComplex, window: Tuple[int, int]):
    lo, hi = C.reliable_range()
    if C.is_zero():
        return
    if (window[0] < lo and not C.exact_low) or window[1] > hi:
        raise WindowOutOfRange(f"창 {window} 가 계산된 범위 [{lo}, {hi}] 를 벗어납니다")


def homology_is_zero(C: FreeComplex, i: int) -> bool:
    setup = C.setup
    alg = setup.algebra
    src = C.module(i)
    if src.rank == 0:
        return True
    ker = kernel_R(setup, C.d(i), src.degrees, C.module(i - 1).degrees)
    image = [alg.nf_terms(t) for t in columns_terms(C.d(i + 1))]
    image = [t for t in image if t]
    return all(solve_in_degree(alg, v, image, src.degrees) is not None for v in ker)


@dataclass
class HomologyBound:
    s: float
    window: Tuple[int, int]
    theoretical: Optional[int] = None
    nonzero: List[int] = dc_field(default_factory=list)

    def to_json(self) -> Dict:
        return {
            "s": None if self.s == NO_HOMOLOGY else int(self.s),
            "window": list(self.window),
            "theoretical": self.theoretical,
            "nonzero": self.nonzero,
        }


def homology_bound(C: FreeComplex, window: Optional[Tuple[int, int]] = None) -> HomologyBound:
    """창 안에서 호몰로지가 0 이 아닌 가장 큰 인덱스 s (없으면 -∞)"""
    window = tuple(window) if window is not None else C.reliable_range()
    _check_window(C, window)
    nonzero = [i for i in range(window[0], window[1] + 1) if not homology_is_zero(C, i)]
    s = max(nonzero) if nonzero else NO_HOMOLOGY
    return HomologyBound(s=s, window=window, theoretical=C.theoretical_bound, nonzero=nonzero)


def homology(C: FreeComplex, i: int) -> ModulePresentation:
    """H_i(C) = ker d_i / im d_{i+1} 의 최소 표현"""
    _check_window(C, (i, i))
    setup = C.setup
    alg = setup.algebra
    src = C.module(i)
    if src.rank == 0:
        return ModulePresentation.zero(setup)
    K = kernel_R(setup, C.d(i), src.degrees, C.module(i - 1).degrees)
    if not K:
        return ModulePresentation.zero(setup)
    k_degrees = column_degrees(setup, K, src.degrees)
    rel_cols: List[Dict] = []
    zero = (0,) * setup.n
    for b in columns_terms(C.d(i + 1)):
        b = alg.nf_terms(b)
        if not b:
            continue
        coeffs = solve_in_degree(alg, b, K, src.degrees)
        if coeffs is None:
            raise ComputationError(f"d_{i + 1} 의 상이 ker d_{i} 에 들어 있지 않습니다")
        col: Dict = {}
        for r, cf in enumerate(coeffs):
            for (_, m), c in cf.items():
                col[(r, m)] = c
        rel_cols.append(col)
    Kmat = matrix_from_terms(setup, K, src.rank)
    rel_cols.extend(kernel_R(setup, Kmat, k_degrees, src.degrees))
    M = ModulePresentation(setup, k_degrees, matrix_from_terms(setup, rel_cols, len(k_degrees)))
    return minimize(M)


def syzygy_module(
    C: FreeComplex,
    n: int,
    window: Optional[Tuple[int, int]] = None,
    bound: Optional["HomologyBound"] = None,
) -> ModulePresentation:
    """
    coker(d_{n+1}: C_{n+1} → C_n) = H_0(Σ^{-n} C_{≥n}) 의 최소 표현

    n 보다 큰 인덱스에서 호몰로지가 남아 있으면 BoundTooLow.
    이미 계산한 bound 를 넘기면 호몰로지 검사를 다시 하지 않는다.
    """
    hi = C.reliable_range()[1]
    if n + 1 > C.high and not C.exact_top:
        raise WindowOutOfRange(f"syzygy 인덱스 {n} 에는 d_{n + 1} 이 필요합니다 (계산 범위 ≤ {C.high})")
    if bound is None:
        check = window if window is not None else (n + 1, hi)
        if check[0] <= check[1]:
            bound = homology_bound(C, check)
    if bound is not None and bound.s > n:
        raise BoundTooLow(f"n={n} < 호몰로지 상한 s={bound.s}")
    M = ModulePresentation(C.setup, C.module(n).degrees, C.d(n + 1), name=f"Ω^{n}")
    return minimize(M)


def resolution_complex_with_padding(res: Resolution) -> FreeComplex:
    """P ⊕ cone(id_R): 호몰로지가 같은 비최소 복합체 (인덱스 0, 1 에 R 한 장씩 추가)"""
    C = res.complex
    setup = C.setup
    Q = setup.q_ring
    mods = [C.module(i) for i in range(C.low, C.high + 1)]
    mods[0] = mods[0] + GradedFree((0,))
    mods[1] = mods[1] + GradedFree((0,))
    diffs = {}
    for i in range(1, C.high + 1):
        D = C.d(i)
        if i == 1:
            top = D.hstack(PolyMatrix.zeros(Q, D.nrows, 1))
            bottom = PolyMatrix(Q, 1, D.ncols + 1, [[Q.zero()] * D.ncols + [Q.one()]])
            D = PolyMatrix(Q, top.nrows + 1, top.ncols, list(top.entries) + list(bottom.entries))
        elif i == 2:
            D = PolyMatrix(Q, D.nrows + 1, D.ncols, list(D.entries) + [[Q.zero()] * D.ncols])
        diffs[i] = D
    return FreeComplex(setup, 0, mods, diffs, exact_top=C.exact_top)
