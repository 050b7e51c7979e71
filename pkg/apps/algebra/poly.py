"""
가중치 다변수 다항식 모듈
- PolyRing: 유한체 위의 다항식환 (변수별 양의 정수 차수, grevlex / lex)
- Poly: {단항식 지수 튜플: 계수} 희소 표현, 0 계수는 저장하지 않음
- 자유가군 원소(Poly-vector)는 엔진 내부에서 {(성분, 단항식): 계수} dict로 다룸
- nf_divide: 몫을 추적하는 다변수 나눗셈 (벡터 버전 포함)
- PolyMatrix: 다항식 행렬 (복합체의 미분, 연쇄사상 등)
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Poly as SymPoly
from sympy import Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from apps.algebra.exactalg import FMatrix
from common.errors import InputError

Monomial = Tuple[int, ...]
Term = Tuple[int, Monomial]  # (성분, 단항식)

ORDER_KINDS = ("grevlex", "lex")
POSITIONS = ("top", "pot")


class RingMismatch(InputError):
    pass


class ParseError(InputError):
    pass


# ============================================================================
# 📋 단항식 순서
# ============================================================================


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"
    position: str = "top"  # 가군 순서: term-over-position / position-over-term

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise InputError(f"지원하지 않는 단항식 순서: {self.kind}")
        if self.position not in POSITIONS:
            raise InputError(f"지원하지 않는 위치 순서: {self.position}")

    def mono_key(self, degrees: Sequence[int]) -> Callable[[Monomial], tuple]:
        if self.kind == "lex":
            return lambda m: m
        return lambda m: (sum(e * d for e, d in zip(m, degrees)), tuple(-e for e in reversed(m)))

    def term_key(self, degrees: Sequence[int], shifts: Optional[Sequence[int]] = None) -> Callable[[Term], tuple]:
        """
        가군 단항식 (c, m) 의 비교 키 (클수록 선도항)

        grevlex + top 이면 shift[c] + deg(m) 을 먼저 비교 → 동차 가군에서 차수 호환
        성분 비교는 인덱스가 작을수록 큼
        """
        if self.kind == "lex":
            if self.position == "pot":
                return lambda t: (-t[0], t[1])
            return lambda t: (t[1], -t[0])
        sh = list(shifts) if shifts is not None else None
        if self.position == "pot":
            return lambda t: (
                -t[0],
                sum(e * d for e, d in zip(t[1], degrees)),
                tuple(-e for e in reversed(t[1])),
            )

        def key(t):
            s = sh[t[0]] if sh is not None and t[0] < len(sh) else 0
            return (
                s + sum(e * d for e, d in zip(t[1], degrees)),
                tuple(-e for e in reversed(t[1])),
                -t[0],
            )

        return key


# ============================================================================
# 📋 단항식/항 연산 (엔진용)
# ============================================================================


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def add_scaled(dst: Dict, src: Dict, coeff: int, mono: Monomial, field) -> None:
    """dst += coeff · mono · src (dst를 제자리에서 수정, 0 계수는 제거)"""
    if coeff == 0:
        return
    add, mul = field.add, field.mul
    for (c, m), v in src.items():
        t = (c, mono_mul(m, mono))
        nv = add(dst.get(t, 0), mul(coeff, v))
        if nv:
            dst[t] = nv
        else:
            dst.pop(t, None)


def reduce_terms(
    terms: Dict,
    divisors: Sequence[Tuple[Term, int, Dict]],
    key: Callable,
    field,
    quotients: Optional[List[Dict]] = None,
    rep: Optional[Dict] = None,
    reps: Optional[Sequence[Dict]] = None,
) -> Dict:
    """
    완전 나눗셈 (나머지의 어떤 항도 나누는 원소의 선도항으로 나누어지지 않음)

    Args:
        terms: 나눌 원소 {(c, m): coeff}
        divisors: (선도항, 선도계수, 항 dict) 목록 - 목록 순서대로 먼저 맞는 것을 사용
        key: 항 비교 키
        quotients: 주어지면 divisor별 몫 {mono: coeff} 누적
        rep/reps: 주어지면 rep -= factor · mono · reps[i] 도 함께 적용 (표현 추적)

    Returns:
        Dict: 나머지
    """
    p = dict(terms)
    r: Dict = {}
    while p:
        lt = max(p, key=key)
        c = p[lt]
        for idx, (ld, lc, dterms) in enumerate(divisors):
            if ld[0] == lt[0] and mono_divides(ld[1], lt[1]):
                factor = field.div(c, lc)
                mono = mono_div(lt[1], ld[1])
                add_scaled(p, dterms, field.neg(factor), mono, field)
                if quotients is not None:
                    q = quotients[idx]
                    nv = field.add(q.get(mono, 0), factor)
                    if nv:
                        q[mono] = nv
                    else:
                        q.pop(mono, None)
                if rep is not None:
                    add_scaled(rep, reps[idx], field.neg(factor), mono, field)
                break
        else:
            r[lt] = c
            del p[lt]
    return r


# ============================================================================
# 📋 다항식환과 다항식
# ============================================================================


class PolyRing:
    """유한체 위의 가중치 다항식환"""

    def __init__(self, field, names: Sequence[str], degrees: Optional[Sequence[int]] = None,
                 order: Optional[MonomialOrder] = None):
        names = tuple(names)
        degrees = tuple(degrees) if degrees is not None else (1,) * len(names)
        if len(names) != len(degrees):
            raise InputError("변수 이름과 차수 목록의 길이가 다릅니다")
        if len(set(names)) != len(names):
            raise InputError(f"변수 이름 중복: {names}")
        if any((not isinstance(d, int)) or d < 1 for d in degrees):
            raise InputError(f"변수 차수는 양의 정수여야 합니다: {degrees}")
        self.field = field
        self.names = names
        self.degrees = degrees
        self.order = order or MonomialOrder()
        self.nvars = len(names)
        self.key = self.order.mono_key(degrees)
        self._symbols = {name: Symbol(name) for name in names}
        self._mono_cache: Dict[int, List[Monomial]] = {}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.degrees == other.degrees
            and self.order == other.order
        )

    def __hash__(self) -> int:
        return hash((self.field, self.names, self.degrees, self.order))

    def __repr__(self) -> str:
        return f"{self.field}[{', '.join(self.names)}]"

    def term_key(self, shifts: Optional[Sequence[int]] = None) -> Callable[[Term], tuple]:
        return self.order.term_key(self.degrees, shifts)

    # 생성자
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: int) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.from_int(c)})

    def gen(self, i: int) -> "Poly":
        m = [0] * self.nvars
        m[i] = 1
        return Poly(self, {tuple(m): 1})

    def gens(self) -> List["Poly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def var(self, name: str) -> "Poly":
        return self.gen(self.names.index(name))

    def monomial(self, m: Monomial, c: int = 1) -> "Poly":
        return Poly(self, {tuple(m): c})

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomials_of_degree(self, t: int) -> List[Monomial]:
        """가중치 차수 t인 모든 단항식 (순서상 내림차순)"""
        if t in self._mono_cache:
            return self._mono_cache[t]
        out: List[Monomial] = []
        if t >= 0:
            def rec(i: int, rest: int, acc: List[int]):
                if i == self.nvars:
                    if rest == 0:
                        out.append(tuple(acc))
                    return
                d = self.degrees[i]
                for e in range(rest // d, -1, -1):
                    acc.append(e)
                    rec(i + 1, rest - e * d, acc)
                    acc.pop()
            rec(0, t, [])
        out.sort(key=self.key, reverse=True)
        self._mono_cache[t] = out
        return out

    def parse(self, text: str) -> "Poly":
        """
        표준 텍스트 형식 (예: "x^2*y + y^3") 을 파싱

        정수/유리수 계수는 mod p로 환원, 알 수 없는 기호는 ParseError
        """
        if not isinstance(text, str):
            if isinstance(text, int):
                return self.const(text)
            raise ParseError(f"다항식 텍스트가 아닙니다: {text!r}")
        try:
            expr = parse_expr(
                text,
                local_dict=dict(self._symbols),
                transformations=standard_transformations + (convert_xor,),
            )
        except Exception as e:
            raise ParseError(f"다항식 파싱 실패 '{text}': {e}") from e
        extra = expr.free_symbols - set(self._symbols.values())
        if extra:
            raise ParseError(f"'{text}' 에 환에 없는 변수: {sorted(str(s) for s in extra)}")
        symbols = [self._symbols[n] for n in self.names]
        sp = SymPoly(expr, *symbols)
        terms: Dict[Monomial, int] = {}
        p = self.field.p
        for monom, coeff in sp.terms():
            num, den = int(coeff.p), int(coeff.q)
            if den % p == 0:
                raise ParseError(f"'{text}' 의 계수 분모가 p={p} 로 나누어집니다")
            c = self.field.from_int(num * pow(den, -1, p))
            if c:
                terms[tuple(int(e) for e in monom)] = c
        return Poly(self, terms)

    def change_field(self, field) -> "PolyRing":
        return PolyRing(field, self.names, self.degrees, self.order)

    def extend(self, name: str, degree: int = 1) -> "PolyRing":
        return PolyRing(self.field, self.names + (name,), self.degrees + (degree,), self.order)


class Poly:
    """불변 다항식 (terms 는 생성 후 수정하지 않음)"""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, int]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    # 비교/해시
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == ({} if other % self.ring.field.p == 0 else
                                  {(0,) * self.ring.nvars: other % self.ring.field.p})
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    # 산술
    def _check(self, other: "Poly"):
        if other.ring != self.ring:
            raise RingMismatch(f"서로 다른 환의 다항식: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, int):
            return self.ring.const(other)
        self._check(other)
        return other

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = F.add(out.get(m, 0), c)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.ring.field
        return Poly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(self.ring.field.from_int(other))
        self._check(other)
        F = self.ring.field
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = F.add(out.get(m, 0), F.mul(c1, c2))
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: int) -> "Poly":
        F = self.ring.field
        return Poly(self.ring, {m: F.mul(c, v) for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c: int = 1) -> "Poly":
        F = self.ring.field
        return Poly(self.ring, {mono_mul(m, mono): F.mul(c, v) for m, v in self.terms.items()})

    # 차수/선도항
    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: self.ring.key(mc[0]), reverse=True)

    def lead(self) -> Tuple[Monomial, int]:
        m = max(self.terms, key=self.ring.key)
        return m, self.terms[m]

    def degree(self) -> int:
        """최고 가중치 차수 (0 다항식은 -1)"""
        if not self.terms:
            return -1
        return max(self.ring.mono_degree(m) for m in self.terms)

    def degrees(self) -> set:
        return {self.ring.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def min_plain_degree(self) -> int:
        """가중치 없이 센 최소 차수 (m^2 포함 여부 판정용)"""
        return min(sum(m) for m in self.terms) if self.terms else 0

    def evaluate(self, point: Sequence[int], field=None) -> int:
        """점 대입 (point의 좌표는 field의 원소, 계수는 소체 상수로 임베딩)"""
        F = field or self.ring.field
        total = 0
        for m, c in self.terms.items():
            v = F.from_int(c) if F.e > 1 else c
            for x, e in zip(point, m):
                for _ in range(e):
                    v = F.mul(v, x)
            total = F.add(total, v)
        return total

    def change_ring(self, ring: PolyRing) -> "Poly":
        if ring.names != self.ring.names:
            raise RingMismatch(f"변수가 다른 환으로 옮길 수 없습니다: {self.ring} → {ring}")
        return Poly(ring, {m: ring.field.from_int(c) if ring.field.e > self.ring.field.e else c
                           for m, c in self.terms.items()})

    # 텍스트
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


# ============================================================================
# 📋 벡터 변환과 나눗셈
# ============================================================================


def vector_to_terms(vec: Sequence[Poly]) -> Dict[Term, int]:
    out: Dict[Term, int] = {}
    for i, p in enumerate(vec):
        for m, c in p.terms.items():
            out[(i, m)] = c
    return out


def terms_to_vector(ring: PolyRing, terms: Dict[Term, int], rank: int) -> List[Poly]:
    buckets: List[Dict[Monomial, int]] = [{} for _ in range(rank)]
    for (i, m), c in terms.items():
        buckets[i][m] = c
    return [Poly(ring, b) for b in buckets]


def _as_vector(g) -> Tuple[List[Poly], bool]:
    if isinstance(g, Poly):
        return [g], True
    return list(g), False


def nf_divide(g, divisors: Sequence, order: Optional[MonomialOrder] = None):
    """
    다변수 나눗셈 g = Σ q_i·d_i + r

    Args:
        g: Poly 또는 Poly 벡터
        divisors: g와 같은 모양의 0이 아닌 원소들
        order: 단항식 순서 (None이면 환의 순서)

    Returns:
        (quotients, remainder): 몫 Poly 목록과 g와 같은 모양의 나머지
    """
    gv, scalar = _as_vector(g)
    if not gv:
        raise InputError("빈 벡터는 나눌 수 없습니다")
    ring = gv[0].ring
    dvs = [_as_vector(d)[0] for d in divisors]
    for d in dvs:
        if len(d) != len(gv):
            raise InputError("나누는 원소의 길이가 다릅니다")
        for p in d:
            if p.ring != ring:
                raise RingMismatch(f"서로 다른 환: {p.ring} vs {ring}")
    for p in gv:
        if p.ring != ring:
            raise RingMismatch(f"서로 다른 환: {p.ring} vs {ring}")
    order = order or ring.order
    key = order.term_key(ring.degrees)
    prepared = []
    for d in dvs:
        t = vector_to_terms(d)
        if not t:
            raise InputError("0으로 나눌 수 없습니다")
        ld = max(t, key=key)
        prepared.append((ld, t[ld], t))
    quotients: List[Dict] = [{} for _ in prepared]
    rem = reduce_terms(vector_to_terms(gv), prepared, key, ring.field, quotients=quotients)
    qs = [Poly(ring, q) for q in quotients]
    r = terms_to_vector(ring, rem, len(gv))
    return qs, (r[0] if scalar else r)


# ============================================================================
# 📋 다항식 행렬
# ============================================================================


class PolyMatrix:
    """다항식 행렬 (행 우선 불변 튜플). 0행/0열 행렬도 허용"""

    __slots__ = ("ring", "nrows", "ncols", "entries")

    def __init__(self, ring: PolyRing, nrows: int, ncols: int, entries: Sequence[Sequence[Poly]]):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.entries = tuple(tuple(row) for row in entries)
        if len(self.entries) != nrows or any(len(r) != ncols for r in self.entries):
            raise InputError(f"행렬 모양 불일치: {nrows}x{ncols}")

    @classmethod
    def zeros(cls, ring: PolyRing, nrows: int, ncols: int) -> "PolyMatrix":
        z = ring.zero()
        return cls(ring, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring: PolyRing, n: int, c: int = 1) -> "PolyMatrix":
        z, one = ring.zero(), ring.const(c)
        return cls(ring, n, n, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ring: PolyRing, columns: Sequence[Sequence[Poly]], nrows: int) -> "PolyMatrix":
        return cls(ring, nrows, len(columns), [[columns[j][i] for j in range(len(columns))] for i in range(nrows)])

    @classmethod
    def block(cls, ring: PolyRing, blocks: Sequence[Sequence["PolyMatrix"]]) -> "PolyMatrix":
        rows: List[List[Poly]] = []
        for brow in blocks:
            h = brow[0].nrows
            for i in range(h):
                row: List[Poly] = []
                for b in brow:
                    row.extend(b.entries[i])
                rows.append(row)
        ncols = sum(b.ncols for b in blocks[0]) if blocks else 0
        return cls(ring, len(rows), ncols, rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> Poly:
        return self.entries[ij[0]][ij[1]]

    def column(self, j: int) -> List[Poly]:
        return [self.entries[i][j] for i in range(self.nrows)]

    def columns(self) -> List[List[Poly]]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def map(self, fn: Callable[[Poly], Poly]) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.nrows, self.ncols, [[fn(p) for p in row] for row in self.entries])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.ring, self.nrows, self.ncols,
                          [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix(self.ring, self.nrows, self.ncols,
                          [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return self.map(lambda p: -p)

    def scale(self, c) -> "PolyMatrix":
        return self.map(lambda p: p * c)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise InputError(f"행렬 곱 차원 불일치: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        zero = self.ring.zero()
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, self.nrows, other.ncols, out)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.ncols, self.nrows,
                          [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.nrows != other.nrows:
            raise InputError("hstack 행 수 불일치")
        return PolyMatrix(self.ring, self.nrows, self.ncols + other.ncols,
                          [r1 + r2 for r1, r2 in zip(self.entries, other.entries)])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMatrix":
        rows, cols = list(rows), list(cols)
        return PolyMatrix(self.ring, len(rows), len(cols), [[self.entries[i][j] for j in cols] for i in rows])

    def constant_part(self) -> FMatrix:
        """𝔪로 환원한 행렬 (각 성분의 상수항)"""
        return FMatrix.from_columns(
            self.ring.field,
            [[self.entries[i][j].constant_term() for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def _same_shape(self, other: "PolyMatrix"):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("행렬 모양 불일치")

    def to_json(self) -> List[List[str]]:
        """열 목록 (각 열은 성분 텍스트 목록)"""
        return [[str(p) for p in col] for col in self.columns()]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.nrows}x{self.ncols}, {[[str(p) for p in r] for r in self.entries]})"


def all_monomials_upto(ring: PolyRing, t: int) -> List[Monomial]:
    return list(itertools.chain.from_iterable(ring.monomials_of_degree(s) for s in range(t + 1)))
