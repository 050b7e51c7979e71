import logging
import time
from pathlib import Path

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

def setup_logging(level: int | str = logging.INFO, log_dir: str | None = None):
	if isinstance(level, str):
		level = getattr(logging, level.upper(), logging.INFO)
	handlers = [logging.StreamHandler()]
	if log_dir:
		# 로그 파일명: forge_YYYYMMDD_HHMM.log
		path = Path(log_dir)
		path.mkdir(parents=True, exist_ok=True)
		log_file = path / f"forge_{time.strftime('%Y%m%d_%H%M')}.log"
		handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
	logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
	return logging.getLogger("support_forge")
