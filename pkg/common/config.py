import os
import yaml
from pathlib import Path
from typing import Dict

PROJECT_ROOT = Path(__file__).resolve().parent.parent
BASE_CONFIG = PROJECT_ROOT / "config" / "base.yaml"
CACHE_ENV = "SUPPORT_FORGE_CACHE"

def load_yaml(path: str) -> Dict:
	with open(path, "r", encoding="utf-8") as f:
		return yaml.safe_load(f) or {}

def _merge(a: Dict, b: Dict) -> Dict:
	for k, v in b.items():
		if isinstance(v, dict) and isinstance(a.get(k), dict):
			a[k] = _merge(a[k], v)
		else:
			a[k] = v
	return a

def load_merged(base_path: str, override_path: str | None = None) -> Dict:
	base = load_yaml(base_path)
	if not override_path:
		return base
	return _merge(base, load_yaml(override_path))

def load_settings(*override_paths: str | None, overrides: Dict | None = None) -> Dict:
	"""
	config/base.yaml 위에 override 파일들을 차례로 병합한 설정 반환

	Args:
		override_paths: 추가 YAML 경로들 (None은 건너뜀)
		overrides: 마지막에 덮어쓸 dict (태스크 파일의 params 등)

	Returns:
		Dict: 병합된 설정. SUPPORT_FORGE_CACHE 환경변수가 있으면 cache.root를 덮어씀
	"""
	paths = [p for p in override_paths if p]
	settings = load_merged(str(BASE_CONFIG), paths[0] if paths else None)
	for path in paths[1:]:
		settings = _merge(settings, load_yaml(path))
	if overrides:
		settings = _merge(settings, overrides)
	env_root = os.environ.get(CACHE_ENV)
	if env_root:
		settings.setdefault("cache", {})["root"] = env_root
	return settings

def resolve_path(path: str) -> Path:
	p = Path(path)
	return p if p.is_absolute() else PROJECT_ROOT / p
