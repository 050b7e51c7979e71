"""
유한체 위의 정확한 행렬 연산 모듈
- FMatrix: numpy int64 배열 기반의 불변 행렬 (rows × cols)
- RREF 피벗 규칙: 왼쪽 열부터, 각 열에서 위에서부터 처음 만나는 0 아닌 원소 (열 우선 스캔)
- kernel / solve / rank 모두 같은 RREF를 사용하므로 결과가 항상 동일
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from common.errors import InputError


class DimensionMismatch(InputError):
    pass


@dataclass(frozen=True, eq=False)
class FMatrix:
    field: object
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2:
            raise DimensionMismatch("FMatrix는 2차원 배열이어야 합니다")
        self.data.setflags(write=False)

    # ------------------------------------------------------------------
    # 생성
    # ------------------------------------------------------------------
    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "FMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, n: int) -> "FMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "FMatrix":
        if len(rows) == 0:
            return cls.zeros(field, 0, cols or 0)
        arr = np.array([[field.coerce(int(x)) for x in r] for r in rows], dtype=np.int64)
        return cls(field, arr.reshape(len(rows), -1 if cols is None else cols))

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence[int]], rows: int) -> "FMatrix":
        if len(columns) == 0:
            return cls.zeros(field, rows, 0)
        arr = np.array([[int(x) for x in c] for c in columns], dtype=np.int64).reshape(len(columns), rows)
        return cls(field, np.ascontiguousarray(arr.T))

    # ------------------------------------------------------------------
    # 기본 속성
    # ------------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def to_lists(self) -> List[List[int]]:
        return self.data.tolist()

    def __repr__(self) -> str:
        return f"FMatrix({self.field}, {self.to_lists()})"

    # ------------------------------------------------------------------
    # 산술
    # ------------------------------------------------------------------
    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"곱셈 차원 불일치: {self.shape} @ {other.shape}")
        return FMatrix(self.field, self.field.vmatmul(self.data, other.data))

    def __add__(self, other: "FMatrix") -> "FMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"덧셈 차원 불일치: {self.shape} + {other.shape}")
        return FMatrix(self.field, self.field.vadd(self.data, other.data))

    def __sub__(self, other: "FMatrix") -> "FMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"뺄셈 차원 불일치: {self.shape} - {other.shape}")
        return FMatrix(self.field, self.field.vsub(self.data, other.data))

    def scale(self, s: int) -> "FMatrix":
        return FMatrix(self.field, self.field.vscale(s, self.data))

    @property
    def T(self) -> "FMatrix":
        return FMatrix(self.field, np.ascontiguousarray(self.data.T))

    def hstack(self, other: "FMatrix") -> "FMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack 행 수 불일치")
        return FMatrix(self.field, np.hstack([self.data, other.data]))

    def vstack(self, other: "FMatrix") -> "FMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack 열 수 불일치")
        return FMatrix(self.field, np.vstack([self.data, other.data]))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FMatrix":
        return FMatrix(self.field, self.data[np.ix_(list(rows), list(cols))].reshape(len(rows), len(cols)))

    # ------------------------------------------------------------------
    # 소거
    # ------------------------------------------------------------------
    def rref(self) -> Tuple["FMatrix", List[int]]:
        """
        기약 행사다리꼴과 피벗 열 목록

        Returns:
            (R, pivots): R의 i번째 행의 선도 1은 pivots[i] 열에 위치
        """
        F = self.field
        A = self.data.copy()
        m, n = A.shape
        pivots: List[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            nz = np.nonzero(A[r:, c])[0]
            if len(nz) == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                A[[r, piv], :] = A[[piv, r], :]
            A[r, :] = F.vscale(F.inv(int(A[r, c])), A[r, :])
            for i in range(m):
                if i != r and A[i, c] != 0:
                    A[i, :] = F.vsub(A[i, :], F.vscale(int(A[i, c]), A[r, :]))
            pivots.append(c)
            r += 1
        return FMatrix(F, A), pivots

    def rank(self) -> int:
        return len(self.rref()[1])


def mat_kernel(A: FMatrix) -> FMatrix:
    """
    오른쪽 영공간의 기저 (열벡터)

    자유 열 f마다 v[f] = 1, v[pivot_i] = -R[i, f] 인 벡터를 자유 열 순서대로 배치.
    """
    F = A.field
    R, pivots = A.rref()
    free = [c for c in range(A.cols) if c not in set(pivots)]
    K = np.zeros((A.cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        K[f, k] = 1
        for i, pc in enumerate(pivots):
            K[pc, k] = F.neg(int(R.data[i, f]))
    return FMatrix(F, K)


def mat_solve(A: FMatrix, b: Sequence[int]) -> Optional[np.ndarray]:
    """
    A·x = b 의 해 (자유변수는 0으로 고정), 해가 없으면 None

    Args:
        A: 계수 행렬
        b: 길이 rows(A)의 벡터
    """
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != A.rows:
        raise DimensionMismatch(f"rows(A)={A.rows} 와 len(b)={b.shape[0]} 불일치")
    aug = FMatrix(A.field, np.hstack([A.data, b.reshape(-1, 1)]))
    R, pivots = aug.rref()
    if pivots and pivots[-1] == A.cols:
        return None
    x = np.zeros(A.cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R.data[i, -1]
    return x


def column_space_basis(A: FMatrix) -> FMatrix:
    """A의 피벗 열들 (열공간의 기저, 원래 열 순서 유지)"""
    _, pivots = A.rref()
    return A.submatrix(range(A.rows), pivots)


def extend_basis(span: FMatrix, candidates: FMatrix) -> List[int]:
    """
    span의 열공간에 candidates 열을 앞에서부터 하나씩 추가하며 독립인 것만 고름

    Returns:
        List[int]: 선택된 candidates 열 인덱스
    """
    # [span | candidates] 의 피벗 열 = 왼쪽부터 greedy하게 고른 독립 열
    _, pivots = span.hstack(candidates).rref()
    return [pc - span.cols for pc in pivots if pc >= span.cols]
