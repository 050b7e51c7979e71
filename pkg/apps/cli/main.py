"""
support-forge 명령행
- python -m apps.cli <command> --task task.json [--out report.json]
- 보고서는 canonical JSON (stdout 또는 --out), 로그는 stderr / --log-dir
- 종료 코드: 0 검증됨, 2 미검증, 3 입력 오류, 1 내부 오류
- 오라클 불일치 시 <out>.repro.json 에 최소 재현 태스크 저장
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence

from apps.cli import __version__
from apps.cli.cache import ResolutionCache
from apps.cli.tasks import COMMANDS, TaskFile, build_context, run_command
from apps.support.realize import VERIFIED
from common.config import load_settings, resolve_path
from common.errors import ForgeError, InputError
from common.io import canonical_json, write_json
from common.log import setup_logging

logger = logging.getLogger(__name__)

CLI_CONFIG = "config/cli.yaml"
REPRO_SUFFIX = ".repro.json"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="support-forge",
        description="Cohomological supports over graded complete intersections.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m apps.cli check-ring --task data/tasks/bad_ring.json
  python -m apps.cli support --task data/tasks/free.json
  python -m apps.cli realize --task data/tasks/ex_realize.json --out report.json --emit-points 2
""",
    )
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="명령 (생략하면 태스크 파일의 command)")
    ap.add_argument("--task", required=True, help="태스크 JSON 경로")
    ap.add_argument("--out", help="보고서 JSON 경로 (생략하면 stdout)")
    ap.add_argument("--no-cache", action="store_true", help="분해 캐시를 쓰지 않음")
    ap.add_argument("--emit-points", type=int, default=None, help="e ≤ 값인 F_{p^e} 유리점 나열")
    ap.add_argument("--excel", help="Betti / Ext 표를 저장할 .xlsx 경로")
    ap.add_argument("--config", help="추가 YAML 설정")
    ap.add_argument("--log-level", help="DEBUG / INFO / WARNING")
    ap.add_argument("--log-dir", help="로그 파일 폴더")
    ap.add_argument("--version", action="version", version=f"support-forge {__version__}")
    return ap


def _make_cache(settings: Dict, disabled: bool) -> Optional[ResolutionCache]:
    cfg = settings.get("cache", {})
    if disabled or not cfg.get("enabled", True):
        return None
    return ResolutionCache(resolve_path(cfg.get("root", "cache/resolutions")))


def repro_task(report: Dict, rows: List[Dict], module) -> Dict:
    """불일치 점 하나로 줄인 oracle 태스크"""
    bad = [r for r in rows if not r["agree"]]
    first = bad[0]
    return {
        "command": "oracle",
        "ring": report["ring"],
        "modules": {"M": module.to_json()},
        "params": dict(report["params"], e=first["e"]),
        "point": first["point"],
    }


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings(str(resolve_path(CLI_CONFIG)), args.config)
    log_cfg = settings.get("logging", {})
    setup_logging(args.log_level or log_cfg.get("level", "INFO"), args.log_dir or log_cfg.get("file"))

    task = TaskFile.load(args.task)
    command = args.command or task.command
    if command is None:
        raise InputError("명령이 인자에도 태스크 파일에도 없습니다")
    cache = _make_cache(settings, args.no_cache)
    ctx = build_context(task, settings, cache=cache, emit_points=args.emit_points, excel=args.excel)
    out = run_command(command, ctx)
    report = dict(out["report"], version=__version__)

    if args.out:
        write_json(args.out, report)
        logger.info("보고서 저장: %s", args.out)
    else:
        sys.stdout.write(canonical_json(report))

    rows = out["extra"].get("oracle_rows") or []
    if any(not r["agree"] for r in rows) and "module" in out["extra"]:
        path = (args.out or "support_forge") + REPRO_SUFFIX
        write_json(path, repro_task(report, rows, out["extra"]["module"]))
        logger.warning("오라클 불일치 재현 태스크 저장: %s", path)

    if cache is not None:
        logger.info("캐시 적중 %d / 미스 %d", cache.hits, cache.misses)
    return 0 if report["verdict"] == VERIFIED else 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except ForgeError as e:
        logger.error("%s: %s", type(e).__name__, e)
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return e.exit_code
    except Exception as e:
        logger.exception("내부 오류: %s", e)
        return 1


if __name__ == "__main__":
    exit(main())
