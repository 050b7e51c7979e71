"""
완전교차환 구성 모듈
- build_ci: Q = k[vars], 정칙열 f ⊆ 𝔪², R = Q/(f), 연산자 환 k[χ₁..χ_c] (deg χ = 2) 를 만들고 검증
- 검증 항목: 동차성 (NonHomogeneous), f ⊆ 𝔪² (NotInSquareOfMaximalIdeal), dim Q/(f) = n - c (NotRegularSequence)
- normal_form_R: gb_f 에 대한 정규형 (R 원소의 표준 대표원)
- f_coefficients: g ∈ (f) 를 Σ a_j f_j 로 표현 (GB 몫 × 기록된 변환 행렬)
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

from apps.algebra.fields import galois_field, prime_field
from apps.algebra.graded import GradedAlgebra
from apps.algebra.groebner import GBasis, buchberger, krull_dimension
from apps.algebra.poly import MonomialOrder, Poly, PolyMatrix, PolyRing, reduce_terms, vector_to_terms
from common.errors import InputError
from common.io import content_hash

logger = logging.getLogger(__name__)

KERNEL_METHODS = ("auto", "groebner", "graded")
CHI_DEGREE = 2


class NonHomogeneous(InputError):
    pass


class NotRegularSequence(InputError):
    pass


class NotInSquareOfMaximalIdeal(InputError):
    pass


@dataclass(eq=False)
class RingSetup:
    field: Any
    q_ring: PolyRing
    f: List[Poly]
    gb_f: GBasis
    chi_ring: PolyRing
    kernel_method: str = "auto"

    def __post_init__(self):
        self.algebra = GradedAlgebra(self.q_ring, self.gb_f)
        self.chi_algebra = GradedAlgebra(self.chi_ring, None)
        self._hash: Optional[str] = None

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def c(self) -> int:
        return len(self.f)

    @property
    def n(self) -> int:
        return self.q_ring.nvars

    @property
    def dim(self) -> int:
        return self.n - self.c

    @property
    def is_artinian(self) -> bool:
        return self.dim == 0

    def use_graded_kernel(self) -> bool:
        if self.kernel_method == "graded":
            if not self.is_artinian:
                raise InputError("kernel_method=graded 는 아르틴 환(dim R = 0)에서만 쓸 수 있습니다")
            return True
        if self.kernel_method == "groebner":
            return False
        return self.is_artinian

    def normal_form(self, g: Union[Poly, PolyMatrix, Sequence[Poly]]):
        return normal_form_R(self, g)

    def f_degrees(self) -> List[int]:
        return [fj.degree() for fj in self.f]

    def to_json(self) -> Dict:
        data = {
            "p": self.p,
            "vars": [{"name": n, "deg": d} for n, d in zip(self.q_ring.names, self.q_ring.degrees)],
            "f": [str(fj) for fj in self.f],
            "order": self.q_ring.order.kind,
        }
        if self.field.e > 1:
            data["e"] = self.field.e
        return data

    @property
    def hash(self) -> str:
        if self._hash is None:
            self._hash = content_hash(self.to_json())
        return self._hash

    def __repr__(self) -> str:
        return f"RingSetup({self.q_ring} / ({', '.join(map(str, self.f))}))"


def build_ci(
    p: int,
    variables: Sequence,
    f: Sequence[Union[str, Poly]],
    order: str = "grevlex",
    e: int = 1,
    kernel_method: str = "auto",
    chi_prefix: str = "chi",
) -> RingSetup:
    """
    완전교차환 R = Q/(f) 구성과 검증

    Args:
        p: 표수 (소수)
        variables: 변수 이름 목록, 또는 {"name", "deg"} dict 목록
        f: 정칙열 (텍스트 또는 Poly)
        e: 계수체를 F_{p^e} 로 확장 (hypersurface 오라클용)

    Returns:
        RingSetup: 검증이 끝난 환 데이터
    """
    if kernel_method not in KERNEL_METHODS:
        raise InputError(f"지원하지 않는 kernel_method: {kernel_method}")
    field = galois_field(p, e) if e > 1 else prime_field(p)
    names, degrees = [], []
    for v in variables:
        if isinstance(v, dict):
            names.append(v["name"])
            degrees.append(int(v.get("deg", 1)))
        else:
            names.append(str(v))
            degrees.append(1)
    Q = PolyRing(field, names, degrees, MonomialOrder(order))
    fs = [fj if isinstance(fj, Poly) else Q.parse(fj) for fj in f]
    if not fs:
        raise InputError("f 는 비어 있을 수 없습니다")
    for fj in fs:
        if fj.ring != Q:
            raise InputError(f"f 의 원소 {fj} 가 {Q} 에 속하지 않습니다")
        if fj.is_zero() or not fj.is_homogeneous():
            raise NonHomogeneous(f"f 의 원소는 0이 아닌 동차식이어야 합니다: {fj}")
        if fj.min_plain_degree() < 2:
            raise NotInSquareOfMaximalIdeal(f"{fj} 는 𝔪² 에 속하지 않습니다")
    c, n = len(fs), Q.nvars
    if c > n:
        raise NotRegularSequence(f"길이 {c} 의 정칙열은 변수 {n}개 환에 존재하지 않습니다")
    gb = buchberger(fs, ring=Q, track=True)
    dim = krull_dimension(gb)
    if dim != n - c:
        raise NotRegularSequence(f"dim Q/(f) = {dim} ≠ n - c = {n - c}: f 는 정칙열이 아닙니다")
    chi = PolyRing(prime_field(p), [f"{chi_prefix}{j + 1}" for j in range(c)], [CHI_DEGREE] * c, MonomialOrder(order))
    setup = RingSetup(field=field, q_ring=Q, f=fs, gb_f=gb, chi_ring=chi, kernel_method=kernel_method)
    logger.info("환 구성: %s (c=%d, n=%d, dim R=%d)", setup, c, n, dim)
    return setup


def ring_from_json(data: Dict, order: Optional[str] = None, kernel_method: str = "auto",
                   chi_prefix: str = "chi") -> RingSetup:
    for k in ("p", "vars", "f"):
        if k not in data:
            raise InputError(f"환 스키마에 '{k}' 키가 없습니다")
    return build_ci(
        int(data["p"]),
        data["vars"],
        data["f"],
        order=order or data.get("order", "grevlex"),
        e=int(data.get("e", 1)),
        kernel_method=kernel_method,
        chi_prefix=chi_prefix,
    )


def normal_form_R(setup: RingSetup, g):
    """Poly, Poly 벡터, PolyMatrix 를 (f) 에 대한 정규형으로"""
    if isinstance(g, Poly):
        return setup.gb_f.normal_form(g)
    if isinstance(g, PolyMatrix):
        return g.map(setup.gb_f.normal_form)
    return [setup.gb_f.normal_form(p) for p in g]


def f_coefficients(setup: RingSetup, g: Poly) -> Optional[List[Poly]]:
    """
    g = Σ a_j f_j 인 a_j 목록 (g ∉ (f) 이면 None)

    gb_f 로 나눈 몫을 기록된 변환 (gb 원소 = Σ rep·f) 으로 다시 f 에 대한 계수로 바꾼다.
    """
    G = setup.gb_f
    Q = setup.q_ring
    quotients: List[Dict] = [{} for _ in G.elements]
    rem = reduce_terms(vector_to_terms([g]), G._divisors, G.key, Q.field, quotients=quotients)
    if rem:
        return None
    coeffs = [Q.zero() for _ in setup.f]
    for q, rep in zip(quotients, G.transform):
        if not q:
            continue
        qp = Poly(Q, q)
        for (j, m), c in rep.items():
            coeffs[j] = coeffs[j] + qp.mul_monomial(m, c)
    return coeffs
