import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any

def canonical_json(obj: Any) -> str:
	return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"

def content_hash(obj: Any) -> str:
	"""canonical JSON의 SHA-256 앞 16자리"""
	text = json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
	return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

def write_json(path: Path, obj: Any):
	# 같은 폴더의 임시 파일에 쓴 뒤 os.replace
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
	try:
		with os.fdopen(fd, "w", encoding="utf-8") as f:
			f.write(canonical_json(obj))
		os.replace(tmp, path)
	except BaseException:
		if os.path.exists(tmp):
			os.remove(tmp)
		raise

def read_json(path: Path) -> Any:
	with open(path, "r", encoding="utf-8") as f:
		return json.load(f)
