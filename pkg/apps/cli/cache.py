"""
분해 캐시
- (환 해시, 가군 해시, D) → JSON 파일 (생성원 차수 + 미분 행렬 텍스트)
- 더 깊은 분해가 저장돼 있으면 잘라서 돌려줌
- 쓰기는 common.io.write_json 으로 원자적 (임시 파일 → rename)
"""

import logging
import re
from pathlib import Path
from typing import Dict, Optional

from common.io import read_json, write_json

logger = logging.getLogger(__name__)

_FILE_RE = re.compile(r"^(?P<module>[0-9a-f]+)_D(?P<depth>\d+)\.json$")


class ResolutionCache:
    def __init__(self, root):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _dir(self, setup) -> Path:
        return self.root / setup.hash

    def path(self, setup, M, D: int) -> Path:
        return self._dir(setup) / f"{M.hash}_D{D}.json"

    def load(self, setup, M, D: int) -> Optional[Dict]:
        """깊이 D 이상으로 저장된 분해 데이터를 깊이 D 로 잘라 반환 (없으면 None)"""
        folder = self._dir(setup)
        if not folder.exists():
            self.misses += 1
            return None
        best = None
        for f in folder.iterdir():
            m = _FILE_RE.match(f.name)
            if not m or m.group("module") != M.hash:
                continue
            depth = int(m.group("depth"))
            if depth >= D and (best is None or depth < best[0]):
                best = (depth, f)
        if best is None:
            self.misses += 1
            return None
        try:
            data = read_json(best[1])
        except (OSError, ValueError) as e:
            logger.warning("캐시 파일 읽기 실패 %s: %s", best[1], e)
            self.misses += 1
            return None
        self.hits += 1
        logger.debug("캐시 적중: %s (D=%d → %d)", best[1].name, best[0], D)
        return truncate_data(data, D)

    def store(self, setup, M, D: int, data: Dict) -> None:
        path = self.path(setup, M, D)
        try:
            write_json(path, data)
        except OSError as e:
            logger.warning("캐시 저장 실패 %s: %s", path, e)


def truncate_data(data: Dict, D: int) -> Dict:
    if int(data["depth"]) == D:
        return data
    degrees = data["degrees"][:D + 1]
    return {
        "depth": D,
        "terminated": any(len(d) == 0 for d in degrees),
        "degrees": degrees,
        "diffs": data["diffs"][:D],
    }
