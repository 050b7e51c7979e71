"""
그뢰브너 기저 모듈
- buchberger: 이데알 / 자유가군의 부분가군에 대한 Buchberger 알고리즘 (normal strategy + 두 판정법)
- syzygies: Schreyer 방법으로 syzygy 가군 생성원 계산
- ideal_member / radical_member (Rabinowitsch) / colon / intersect / saturate
- krull_dimension: 선도항 이데알의 최대 독립 변수 집합으로 차원 계산
- ConeIdeal / proj_compare: k[χ] 의 동차 이데알이 정의하는 Proj 닫힌집합 비교
"""

import heapq
import itertools
import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from apps.algebra.poly import (
    MonomialOrder,
    Poly,
    PolyRing,
    RingMismatch,
    add_scaled,
    mono_div,
    mono_divides,
    mono_lcm,
    reduce_terms,
    terms_to_vector,
    vector_to_terms,
)
from common.errors import ComputationError, InputError

logger = logging.getLogger(__name__)

RABINOWITSCH_VAR = "_rabinowitsch"


# ============================================================================
# 📋 GBasis
# ============================================================================


@dataclass
class GBasis:
    ring: PolyRing
    rank: int
    elements: List[Dict]
    order: MonomialOrder
    shifts: Optional[Tuple[int, ...]] = None
    reduced: bool = True
    transform: Optional[List[Dict]] = None  # 입력 생성원에 대한 표현 {(입력 인덱스, mono): coeff}
    n_inputs: int = 0

    def __post_init__(self):
        self.key = self.order.term_key(self.ring.degrees, self.shifts)
        self._divisors = []
        for t in self.elements:
            ld = max(t, key=self.key)
            self._divisors.append((ld, t[ld], t))

    @property
    def leads(self) -> List[Tuple]:
        return [d[0] for d in self._divisors]

    def __len__(self) -> int:
        return len(self.elements)

    def polys(self) -> List[Poly]:
        return [terms_to_vector(self.ring, t, 1)[0] for t in self.elements]

    def vectors(self) -> List[List[Poly]]:
        return [terms_to_vector(self.ring, t, self.rank) for t in self.elements]

    def is_unit(self) -> bool:
        """rank 1 에서 1 ∈ I 인지 (가군이면 모든 성분이 생성되는지)"""
        zero = (0,) * self.ring.nvars
        comps = {c for c, m in self.leads if m == zero}
        return len(comps) == self.rank

    def reduce(self, terms: Dict, rep: Optional[Dict] = None) -> Dict:
        reps = self.transform if rep is not None else None
        return reduce_terms(terms, self._divisors, self.key, self.ring.field, rep=rep, reps=reps)

    def normal_form(self, g):
        if isinstance(g, Poly):
            r = self.reduce(vector_to_terms([g]))
            return terms_to_vector(self.ring, r, 1)[0]
        r = self.reduce(vector_to_terms(g))
        return terms_to_vector(self.ring, r, self.rank)

    def contains(self, g) -> bool:
        vec = [g] if isinstance(g, Poly) else list(g)
        return not self.reduce(vector_to_terms(vec))

    def same_as(self, other: "GBasis") -> bool:
        """두 reduced 기저가 같은 부분가군을 생성하는지 (reduced 표현의 동일성)"""
        return set(map(_frozen, self.elements)) == set(map(_frozen, other.elements))

    def to_json(self) -> List:
        if self.rank == 1:
            return [str(p) for p in self.polys()]
        return [[str(p) for p in v] for v in self.vectors()]


def _frozen(t: Dict) -> frozenset:
    return frozenset(t.items())


# ============================================================================
# 📋 Buchberger
# ============================================================================


def _to_terms(g) -> Dict:
    if isinstance(g, Poly):
        return vector_to_terms([g])
    if isinstance(g, dict):
        return dict(g)
    return vector_to_terms(list(g))


def _infer(gens, ring, rank):
    if ring is None:
        for g in gens:
            if isinstance(g, Poly):
                ring = g.ring
                break
            if not isinstance(g, dict) and len(g):
                ring = g[0].ring
                break
    if ring is None:
        raise InputError("환을 추론할 수 없습니다 (빈 생성원 목록에는 ring 인자가 필요)")
    if rank is None:
        rank = 1
        for g in gens:
            if not isinstance(g, (Poly, dict)):
                rank = len(g)
                break
    for g in gens:
        polys = [g] if isinstance(g, Poly) else ([] if isinstance(g, dict) else list(g))
        for p in polys:
            if p.ring != ring:
                raise RingMismatch(f"서로 다른 환의 생성원: {p.ring} vs {ring}")
    return ring, rank


def _monic(terms: Dict, key, field, rep: Optional[Dict] = None):
    ld = max(terms, key=key)
    inv = field.inv(terms[ld])
    if inv != 1:
        terms = {t: field.mul(inv, v) for t, v in terms.items()}
        if rep is not None:
            rep = {t: field.mul(inv, v) for t, v in rep.items()}
    return ld, terms, rep


def buchberger(
    gens: Sequence,
    ring: Optional[PolyRing] = None,
    rank: Optional[int] = None,
    shifts: Optional[Sequence[int]] = None,
    order: Optional[MonomialOrder] = None,
    reduce: bool = True,
    track: bool = False,
) -> GBasis:
    """
    그뢰브너 기저 계산

    Args:
        gens: Poly, Poly 벡터, 또는 {(성분, mono): coeff} dict 목록
        shifts: 자유가군 생성원의 차수 (term-over-position 순서의 차수 비교에 사용)
        reduce: reduced 기저로 정리할지
        track: 입력 생성원에 대한 표현(transform)을 기록할지

    Returns:
        GBasis: 선도항 오름차순으로 정렬된 기저
    """
    ring, rank = _infer(gens, ring, rank)
    order = order or ring.order
    shifts = tuple(shifts) if shifts is not None else None
    key = order.term_key(ring.degrees, shifts)
    F = ring.field
    zero = (0,) * ring.nvars

    basis: List[Dict] = []
    leads: List[Tuple] = []
    reps: List[Dict] = []
    divisors: List[Tuple] = []

    def add(terms: Dict, rep: Optional[Dict]):
        ld, terms, rep = _monic(terms, key, F, rep)
        basis.append(terms)
        leads.append(ld)
        reps.append(rep)
        divisors.append((ld, 1, terms))

    n_inputs = len(gens)
    for idx, g in enumerate(gens):
        t = _to_terms(g)
        if t:
            add(t, {(idx, zero): 1} if track else None)

    pairs: List[Tuple] = []
    pending = set()

    def push_pairs(k: int):
        ck, mk = leads[k]
        for i in range(k):
            ci, mi = leads[i]
            if ci != ck:
                continue
            if rank == 1 and all(a == 0 or b == 0 for a, b in zip(mi, mk)):
                # 선도항이 서로소 (product criterion)
                continue
            lcm = mono_lcm(mi, mk)
            heapq.heappush(pairs, (key((ck, lcm)), i, k))
            pending.add((i, k))

    for k in range(len(basis)):
        push_pairs(k)

    n_reductions = 0
    while pairs:
        _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        c, mi = leads[i]
        mj = leads[j][1]
        lcm = mono_lcm(mi, mj)
        if _chain_skip(i, j, c, lcm, leads, pending):
            continue
        s: Dict = {}
        add_scaled(s, basis[i], 1, mono_div(lcm, mi), F)
        add_scaled(s, basis[j], F.neg(1), mono_div(lcm, mj), F)
        rep = None
        if track:
            rep = {}
            add_scaled(rep, reps[i], 1, mono_div(lcm, mi), F)
            add_scaled(rep, reps[j], F.neg(1), mono_div(lcm, mj), F)
        r = reduce_terms(s, divisors, key, F, rep=rep, reps=reps if track else None)
        n_reductions += 1
        if r:
            add(r, rep)
            push_pairs(len(basis) - 1)
            if leads[-1][1] == zero and rank == 1:
                break

    logger.debug("buchberger: %d개 입력, %d회 S-쌍 환원, 기저 크기 %d", n_inputs, n_reductions, len(basis))

    # 최소화: 다른 원소의 선도항으로 나누어지는 선도항 제거 (같으면 앞선 것을 남김)
    keep = []
    for k, (ck, mk) in enumerate(leads):
        dominated = False
        for l, (cl, ml) in enumerate(leads):
            if l == k or cl != ck or not mono_divides(ml, mk):
                continue
            if ml != mk or l < k:
                dominated = True
                break
        if not dominated:
            keep.append(k)

    elements = [basis[k] for k in keep]
    kept_reps = [reps[k] for k in keep] if track else None

    if reduce:
        elements, kept_reps = _interreduce(elements, kept_reps, key, F)

    idx = sorted(range(len(elements)), key=lambda k: key(max(elements[k], key=key)))
    elements = [elements[k] for k in idx]
    if kept_reps is not None:
        kept_reps = [kept_reps[k] for k in idx]
    return GBasis(
        ring=ring,
        rank=rank,
        elements=elements,
        order=order,
        shifts=shifts,
        reduced=reduce,
        transform=kept_reps,
        n_inputs=n_inputs,
    )


def _chain_skip(i: int, j: int, comp: int, lcm, leads, pending) -> bool:
    """Buchberger 두 번째 판정법: lcm을 (엄격히) 나누는 선도항 k가 있고 (i,k),(j,k) 쌍이 이미 처리됨"""
    for k, (ck, mk) in enumerate(leads):
        if k == i or k == j or ck != comp:
            continue
        if not mono_divides(mk, lcm):
            continue
        if mono_lcm(mk, leads[i][1]) == lcm or mono_lcm(mk, leads[j][1]) == lcm:
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(elements: List[Dict], reps: Optional[List[Dict]], key, F):
    out = [dict(t) for t in elements]
    out_reps = [dict(r) for r in reps] if reps is not None else None
    for k in range(len(out)):
        ld = max(out[k], key=key)
        others = [(max(out[l], key=key), 1, out[l]) for l in range(len(out)) if l != k]
        other_reps = [out_reps[l] for l in range(len(out)) if l != k] if out_reps is not None else None
        head = {ld: out[k][ld]}
        tail = {t: v for t, v in out[k].items() if t != ld}
        rep = out_reps[k] if out_reps is not None else None
        tail = reduce_terms(tail, others, key, F, rep=rep, reps=other_reps)
        head.update(tail)
        out[k] = head
    return out, out_reps


# ============================================================================
# 📋 Syzygy
# ============================================================================


def syzygies(
    gens: Sequence,
    ring: Optional[PolyRing] = None,
    rank: Optional[int] = None,
    shifts: Optional[Sequence[int]] = None,
) -> List[List[Poly]]:
    """
    Schreyer 방법으로 syzygy 가군의 생성원 계산

    Args:
        gens: 길이 s 의 생성원 목록 (Poly 또는 Poly 벡터)
        shifts: 대상 자유가군의 생성원 차수 (동차 입력이면 결과도 동차)

    Returns:
        List[List[Poly]]: 각 원소는 Σ a_i·gen_i = 0 을 만족하는 길이 s 의 벡터
    """
    ring, rank = _infer(gens, ring, rank)
    s = len(gens)
    F = ring.field
    zero_mono = (0,) * ring.nvars
    G = buchberger(gens, ring=ring, rank=rank, shifts=shifts, reduce=True, track=True)
    key = G.key
    leads = G.leads
    out: List[Dict] = []

    # GB 원소 쌍의 S-다항식 환원에서 나오는 syzygy
    for a, b in itertools.combinations(range(len(G)), 2):
        (ca, ma), (cb, mb) = leads[a], leads[b]
        if ca != cb:
            continue
        lcm = mono_lcm(ma, mb)
        spoly: Dict = {}
        add_scaled(spoly, G.elements[a], 1, mono_div(lcm, ma), F)
        add_scaled(spoly, G.elements[b], F.neg(1), mono_div(lcm, mb), F)
        rep: Dict = {}
        add_scaled(rep, G.transform[a], 1, mono_div(lcm, ma), F)
        add_scaled(rep, G.transform[b], F.neg(1), mono_div(lcm, mb), F)
        r = G.reduce(spoly, rep=rep)
        if r:
            raise AssertionError("그뢰브너 기저의 S-쌍이 0으로 환원되지 않습니다")
        if rep:
            out.append(rep)

    # 입력 생성원을 기저로 다시 표현할 때 나오는 syzygy
    for i, g in enumerate(gens):
        rep = {(i, zero_mono): 1}
        r = G.reduce(_to_terms(g), rep=rep)
        if r:
            raise AssertionError("입력 생성원이 자기 기저로 환원되지 않습니다")
        if rep:
            out.append(rep)

    seen = set()
    vectors = []
    for rep in out:
        fz = _frozen(rep)
        if fz in seen:
            continue
        seen.add(fz)
        vectors.append(terms_to_vector(ring, rep, s))
    return vectors


# ============================================================================
# 📋 이데알 연산
# ============================================================================


def ideal_member(g: Poly, B: GBasis) -> bool:
    if g.ring != B.ring:
        raise RingMismatch(f"서로 다른 환: {g.ring} vs {B.ring}")
    return g.is_zero() or B.contains(g)


def _ideal_gb(I) -> GBasis:
    return I if isinstance(I, GBasis) else buchberger(list(I.gens) if isinstance(I, ConeIdeal) else list(I),
                                                      ring=_ring_of(I))


def _ring_of(I) -> Optional[PolyRing]:
    if isinstance(I, (GBasis, ConeIdeal)):
        return I.ring
    return None


def radical_member(g: Poly, I, ring: Optional[PolyRing] = None) -> bool:
    """Rabinowitsch: g ∈ rad(I) ⇔ 1 ∈ I + (1 − t·g) (t 는 새 변수)"""
    base = ring or g.ring
    gens = list(I.gens) if isinstance(I, ConeIdeal) else (I.polys() if isinstance(I, GBasis) else list(I))
    ext = base.extend(RABINOWITSCH_VAR, 1)

    def lift(p: Poly) -> Poly:
        return Poly(ext, {m + (0,): c for m, c in p.terms.items()})

    t = ext.var(RABINOWITSCH_VAR)
    G = buchberger([lift(p) for p in gens] + [ext.one() - t * lift(g)], ring=ext)
    return G.is_unit()


def colon(I: Sequence[Poly], h: Poly, ring: Optional[PolyRing] = None) -> List[Poly]:
    """(I : h) 의 생성원 (syzygy 첫 성분)"""
    ring = ring or h.ring
    if h.is_zero():
        return [ring.one()]
    syz = syzygies([h] + list(I), ring=ring, rank=1)
    return [v[0] for v in syz if not v[0].is_zero()]


def intersect(I: Sequence[Poly], J: Sequence[Poly], ring: PolyRing) -> List[Poly]:
    """I ∩ J: rank 2 자유가군에서 (1,1), (g,0), (0,h) 의 syzygy 첫 성분"""
    one, zero = ring.one(), ring.zero()
    gens = [[one, one]] + [[g, zero] for g in I] + [[zero, h] for h in J]
    syz = syzygies(gens, ring=ring, rank=2)
    return [v[0] for v in syz if not v[0].is_zero()]


def ideal_colon(I: Sequence[Poly], J: Sequence[Poly], ring: PolyRing) -> List[Poly]:
    """(I : J) = ∩_{h ∈ J} (I : h)"""
    J = [h for h in J if not h.is_zero()]
    if not J:
        return [ring.one()]
    result = buchberger(colon(I, J[0], ring), ring=ring).polys()
    for h in J[1:]:
        result = buchberger(intersect(result, colon(I, h, ring), ring), ring=ring).polys()
    return result


def saturate(I: Sequence[Poly], J: Sequence[Poly], ring: PolyRing, max_steps: int = 64) -> Tuple[GBasis, int]:
    """
    (I : J^∞) 를 반복 colon 으로 계산

    Returns:
        (GBasis, steps): 안정화된 reduced 기저와 반복 횟수 (연속된 두 단계의 기저가 같으면 종료)
    """
    current = buchberger(list(I), ring=ring)
    for step in range(1, max_steps + 1):
        if current.is_unit():
            return current, step - 1
        nxt = buchberger(ideal_colon(current.polys(), J, ring), ring=ring)
        if nxt.same_as(current):
            return current, step
        current = nxt
    raise ComputationError(f"saturation이 {max_steps}단계 안에 안정화되지 않았습니다")


def krull_dimension(I, ring: Optional[PolyRing] = None) -> int:
    """
    Q/I 의 Krull 차원 (선도항 이데알의 최대 독립 변수 집합 크기)

    Returns:
        int: 단위 이데알이면 -1
    """
    G = I if isinstance(I, GBasis) else buchberger(list(I), ring=ring)
    if G.is_unit():
        return -1
    return _independent_dimension([m for _, m in G.leads], G.ring.nvars)


def _independent_dimension(lead_monos: List[Tuple[int, ...]], nvars: int) -> int:
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lead_monos]
    for size in range(nvars, -1, -1):
        for U in itertools.combinations(range(nvars), size):
            U = frozenset(U)
            if not any(s <= U for s in supports):
                return size
    return -1


def module_krull_dimension(G: GBasis) -> int:
    """Q^r / M 의 Krull 차원 (성분별 선도항 이데알 차원의 최댓값, 0 가군이면 -1)"""
    dims = []
    for comp in range(G.rank):
        monos = [m for c, m in G.leads if c == comp]
        if any(not any(m) for m in monos):
            continue
        dims.append(_independent_dimension(monos, G.ring.nvars))
    return max(dims) if dims else -1


# ============================================================================
# 📋 원뿔 이데알 (Proj 닫힌집합)
# ============================================================================


class ProjRelation(str, Enum):
    EQUAL = "equal"
    SUBSET = "X⊂Y"
    SUPERSET = "Y⊂X"
    INCOMPARABLE = "incomparable"


@dataclass
class ConeIdeal:
    ring: PolyRing
    gens: Tuple[Poly, ...]
    saturated: bool = False
    _gb: Optional[GBasis] = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.gens = tuple(g for g in self.gens if not g.is_zero())
        for g in self.gens:
            if g.ring != self.ring:
                raise RingMismatch(f"원뿔 이데알의 환 불일치: {g.ring} vs {self.ring}")
            if not g.is_homogeneous():
                raise InputError(f"원뿔 이데알의 생성원은 동차여야 합니다: {g}")

    @classmethod
    def parse(cls, ring: PolyRing, texts: Sequence[str]) -> "ConeIdeal":
        return cls(ring, tuple(ring.parse(t) for t in texts))

    @classmethod
    def irrelevant(cls, ring: PolyRing) -> "ConeIdeal":
        return cls(ring, tuple(ring.gens()))

    def gb(self) -> GBasis:
        if self._gb is None:
            self._gb = buchberger(list(self.gens), ring=self.ring)
        return self._gb

    def saturate(self) -> "ConeIdeal":
        if self.saturated:
            return self
        G, steps = saturate(list(self.gens), self.ring.gens(), self.ring)
        logger.debug("saturation %s: %d단계", self, steps)
        out = ConeIdeal(self.ring, tuple(G.polys()), saturated=True)
        out._gb = G
        return out

    def __add__(self, other: "ConeIdeal") -> "ConeIdeal":
        if other.ring != self.ring:
            raise RingMismatch(f"원뿔 이데알의 환 불일치: {self.ring} vs {other.ring}")
        return ConeIdeal(self.ring, self.gens + other.gens)

    def intersect(self, other: "ConeIdeal") -> "ConeIdeal":
        """V(I) ∪ V(J) = V(I ∩ J)"""
        if not self.gens or not other.gens:
            return ConeIdeal(self.ring, ())
        G = buchberger(intersect(list(self.gens), list(other.gens), self.ring), ring=self.ring)
        return ConeIdeal(self.ring, tuple(G.polys()))

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_empty_in_proj(self) -> bool:
        return self.saturate().is_unit()

    def same_ideal(self, other: "ConeIdeal") -> bool:
        return self.gb().same_as(other.gb())

    def vanishes_at(self, point: Sequence[int], field) -> bool:
        return all(g.evaluate(point, field) == 0 for g in self.gens)

    def to_json(self) -> List[str]:
        return [str(p) for p in self.gb().polys()]

    def text(self) -> str:
        return "(" + ", ".join(self.to_json()) + ")" if self.gens else "(0)"

    def __str__(self) -> str:
        return self.text()


def proj_subset(X: ConeIdeal, Y: ConeIdeal) -> bool:
    """V(X) ⊆ V(Y) in Proj ⇔ sat(Y) 의 모든 생성원이 rad(sat(X)) 에 속함"""
    sx, sy = X.saturate(), Y.saturate()
    if sx.is_unit():
        return True
    return all(radical_member(g, sx.gb(), ring=X.ring) for g in sy.gb().polys())


def proj_compare(X: ConeIdeal, Y: ConeIdeal) -> ProjRelation:
    if X.ring != Y.ring:
        raise RingMismatch(f"서로 다른 χ-환: {X.ring} vs {Y.ring}")
    xy, yx = proj_subset(X, Y), proj_subset(Y, X)
    if xy and yx:
        return ProjRelation.EQUAL
    if xy:
        return ProjRelation.SUBSET
    if yx:
        return ProjRelation.SUPERSET
    return ProjRelation.INCOMPARABLE


def colon_and_saturate(I: ConeIdeal, J: ConeIdeal) -> ConeIdeal:
    """(I : J^∞), J 가 무관 이데알이면 I.saturate() 와 같음"""
    if I.ring != J.ring:
        raise RingMismatch(f"원뿔 이데알의 환 불일치: {I.ring} vs {J.ring}")
    G, steps = saturate(list(I.gens), list(J.gens), I.ring)
    logger.debug("(%s : %s^∞): %d단계", I, J, steps)
    out = ConeIdeal(I.ring, tuple(G.polys()), saturated=J.same_ideal(ConeIdeal.irrelevant(I.ring)))
    out._gb = G
    return out
