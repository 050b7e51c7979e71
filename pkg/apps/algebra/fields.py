"""
유한체 F_p / F_{p^e} 모듈
- 원소는 정수로 표현: F_p는 [0, p) 잉여, F_{p^e}는 생성원 θ의 거듭제곱 기저 계수를 p진법 자리수로 인코딩
- F_{p^e}는 사전식으로 가장 작은 monic 기약다항식으로 고정 (sympy galoistools로 기약성 판정)
- numpy 배열용 벡터 연산(vadd/vmul...)도 함께 제공 (exactalg에서 사용)
"""

import itertools
from functools import lru_cache
from typing import Iterator, List, Tuple

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from common.errors import InputError


class NotPrime(InputError):
    pass


class PrimeField:
    """F_p: 원소는 [0, p) 정수"""

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise NotPrime(f"p={p} 는 소수가 아닙니다")
        self.p = p
        self.e = 1
        self.q = p
        self.modulus: Tuple[int, ...] = (0, 1)

    # 스칼라 연산
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("0의 역원은 없습니다")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def coerce(self, x: int) -> int:
        return x % self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.p)

    # numpy 벡터 연산 (int64 배열)
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.p

    def vscale(self, s: int, a: np.ndarray) -> np.ndarray:
        return (s * a) % self.p

    def vmatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        if self.p < (1 << 20):
            return (a @ b) % self.p
        return (a.astype(object) @ b.astype(object) % self.p).astype(np.int64)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p, 1))

    def __repr__(self) -> str:
        return f"F_{self.p}"


class ExtensionField:
    """
    F_{p^e} (e ≥ 2), 덧셈/곱셈 테이블 기반

    원소 v = Σ c_k p^k 는 c_0 + c_1 θ + ... + c_{e-1} θ^{e-1} 을 의미.
    F_p의 원소 a (0 ≤ a < p)는 상수 a 그대로 임베딩됨.
    """

    def __init__(self, p: int, e: int):
        if not isprime(p):
            raise NotPrime(f"p={p} 는 소수가 아닙니다")
        if e < 2:
            raise InputError("확장 차수 e는 2 이상이어야 합니다")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = smallest_irreducible(p, e)
        self._build_tables()

    def _digits(self, v: int) -> List[int]:
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def _encode(self, digits: List[int]) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _poly_mul(self, a: List[int], b: List[int]) -> List[int]:
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # modulus = θ^e + m_{e-1} θ^{e-1} + ... + m_0 (낮은 차수부터 저장)
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in range(e):
                    prod[k - e + i] = (prod[k - e + i] - c * self.modulus[i]) % p
        return prod[:e]

    def _build_tables(self):
        q = self.q
        digits = [self._digits(v) for v in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._encode([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = self._encode(self._poly_mul(digits[a], digits[b]))
        neg = np.array([self._encode([(-x) % self.p for x in digits[a]]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self._add, self._mul, self._neg, self._inv = add, mul, neg, inv
        # 스칼라 경로는 파이썬 리스트가 더 빠름
        self._add_l = add.tolist()
        self._mul_l = mul.tolist()
        self._neg_l = neg.tolist()
        self._inv_l = inv.tolist()

    def add(self, a: int, b: int) -> int:
        return self._add_l[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add_l[a][self._neg_l[b]]

    def neg(self, a: int) -> int:
        return self._neg_l[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul_l[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0의 역원은 없습니다")
        return self._inv_l[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def coerce(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise InputError(f"{x} 는 {self!r} 의 원소 인코딩이 아닙니다")
        return x

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._add[a, b]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._add[a, self._neg[b]]

    def vscale(self, s: int, a: np.ndarray) -> np.ndarray:
        return self._mul[s, a]

    def vmatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = self._add[out, self._mul[a[:, k][:, None], b[k, :][None, :]]]
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtensionField) and (other.p, other.e) == (self.p, self.e)

    def __hash__(self) -> int:
        return hash(("F", self.p, self.e))

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.e}"


def smallest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """
    차수 e의 monic 기약다항식 중 사전식 최소인 것

    Returns:
        Tuple[int, ...]: 낮은 차수부터의 계수 (m_0, ..., m_{e-1}, 1)
    """
    for tail in itertools.product(range(p), repeat=e):
        dense = [1] + list(tail)  # 높은 차수부터 (sympy gf 형식)
        if gf_irreducible_p(dense, p, ZZ):
            return tuple(reversed(dense))
    raise InputError(f"F_{p}[t]에 차수 {e}의 기약다항식이 없습니다")


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def galois_field(p: int, e: int = 1):
    if e == 1:
        return prime_field(p)
    return ExtensionField(p, e)


def projective_points(field, c: int) -> Iterator[Tuple[int, ...]]:
    """P^{c-1}(field)의 정규화 대표원 (처음 0이 아닌 좌표 = 1)"""
    for lead in range(c):
        for tail in itertools.product(field.elements(), repeat=c - lead - 1):
            yield (0,) * lead + (1,) + tail
