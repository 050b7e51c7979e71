"""
엑셀 내보내기
- resolve: Betti 표 (행 = 내부 차수, 열 = 호몰로지 인덱스)
- ext / support: Ext 차원 표와 χ_j 작용 행렬 (시트 하나에 세로로)
"""

import logging
import os
from typing import Dict, List

import pandas as pd

logger = logging.getLogger(__name__)


def betti_frame(P) -> pd.DataFrame:
    """graded Betti 수 β_{i,j} 를 행 j (차수), 열 i 로 배치"""
    graded = P.graded_betti()
    degrees = sorted({d for row in graded for d in row})
    data: Dict[str, List[int]] = {}
    for i, row in enumerate(graded):
        data[str(i)] = [row.count(d) for d in degrees]
    df = pd.DataFrame(data, index=degrees)
    df.index.name = "degree"
    return df


def ext_dims_frame(T) -> pd.DataFrame:
    return pd.DataFrame({"i": list(range(T.D + 1)), "dim": list(T.dims)})


def action_rows(T) -> List[Dict]:
    rows = []
    for (j, i), A in sorted(T.actions.items(), key=lambda x: (x[0][1], x[0][0])):
        for r, line in enumerate(A.to_lists()):
            rows.append({"operator": f"chi{j + 1}", "from": i, "to": i + 2, "row": r,
                         "entries": " ".join(str(x) for x in line)})
    return rows


def _prepare(path: str) -> None:
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)


def write_betti(path: str, P) -> str:
    _prepare(path)
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        betti_frame(P).to_excel(writer, sheet_name="betti")
    logger.info("Betti 표 저장: %s", path)
    return path


def write_ext(path: str, T) -> str:
    _prepare(path)
    actions = pd.DataFrame(action_rows(T), columns=["operator", "from", "to", "row", "entries"])
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        ext_dims_frame(T).to_excel(writer, sheet_name="ext_dims", index=False)
        actions.to_excel(writer, sheet_name="actions", index=False)
    logger.info("Ext 표 저장: %s (%s)", path, "/".join(T.pair))
    return path
