"""
태스크 파일 모듈
- 스키마 검증 → RingSetup / 가군 / 원뿔 이데알 구성
- run_command: 명령별 계산과 보고서 dict 생성 (verdict 포함)
- 보고서는 환/가군 해시와 유효 파라미터를 모두 담아 같은 입력이면 바이트 단위로 같음
"""

import logging
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Dict, List, Optional

from apps.algebra.groebner import ConeIdeal, ProjRelation, proj_compare
from apps.algebra.ring import RingSetup, ring_from_json
from apps.homology.complexes import ModulePresentation, minimal_resolution
from apps.homology.operators import central_koszul, eisenbud_operators, koszul_cone_detailed, lift_resolution
from apps.support.ext import ext_table, is_residue_field
from apps.support.oracle import hypersurface_oracle, oracle_report
from apps.support.realize import VERIFIED, UNVERIFIED, gorenstein_vanishing_check, realize, realize_pair
from apps.support.support import (
    Inconclusive,
    cone_sequence_check,
    is_perfect,
    rational_points,
    support_pair,
)
from common.errors import InputError
from common.io import read_json

logger = logging.getLogger(__name__)

COMMANDS = ("check-ring", "resolve", "ext", "support", "cone", "realize", "verify", "oracle")
TASK_KEYS = {"command", "ring", "modules", "params", "cone", "phi", "z", "point", "name"}
PARAM_KEYS = ("D", "w", "e", "order", "kernel_method")


@dataclass
class TaskFile:
    command: Optional[str]
    ring: Dict
    modules: Dict[str, Any]
    params: Dict[str, Any]
    raw: Dict = dc_field(repr=False, default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict) -> "TaskFile":
        if not isinstance(data, dict):
            raise InputError("태스크 파일의 최상위는 객체여야 합니다")
        unknown = set(data) - TASK_KEYS
        if unknown:
            raise InputError(f"알 수 없는 태스크 키: {sorted(unknown)}")
        if "ring" not in data:
            raise InputError("태스크 파일에 'ring' 이 없습니다")
        command = data.get("command")
        if command is not None and command not in COMMANDS:
            raise InputError(f"지원하지 않는 명령: {command}")
        params = dict(data.get("params", {}))
        bad = set(params) - set(PARAM_KEYS)
        if bad:
            raise InputError(f"알 수 없는 파라미터: {sorted(bad)}")
        modules = data.get("modules", {})
        if not isinstance(modules, dict):
            raise InputError("'modules' 는 이름 → 가군 명세 객체여야 합니다")
        return cls(command, data["ring"], dict(modules), params, data)

    @classmethod
    def load(cls, path) -> "TaskFile":
        path = Path(path)
        if not path.exists():
            raise InputError(f"태스크 파일이 없습니다: {path}")
        try:
            data = read_json(path)
        except ValueError as e:
            raise InputError(f"태스크 파일 JSON 오류 {path}: {e}") from e
        return cls.from_dict(data)


@dataclass
class TaskContext:
    """설정과 태스크를 합친 실행 문맥"""

    task: TaskFile
    setup: RingSetup
    params: Dict[str, Any]
    cache: Any = None
    emit_points: int = 0
    excel: Optional[str] = None
    _modules: Dict[str, ModulePresentation] = dc_field(default_factory=dict)

    def module(self, name: str, default: Optional[str] = None) -> Optional[ModulePresentation]:
        if name in self._modules:
            return self._modules[name]
        spec = self.task.modules.get(name, default)
        if spec is None:
            return None
        M = ModulePresentation.from_json(self.setup, spec)
        self._modules[name] = M
        return M

    def cone(self) -> ConeIdeal:
        texts = self.task.raw.get("cone")
        if texts is None:
            raise InputError("이 명령에는 'cone' (k[χ] 다항식 목록) 이 필요합니다")
        return ConeIdeal.parse(self.setup.chi_ring, texts)

    def phis(self) -> List:
        texts = self.task.raw.get("phi")
        if not texts:
            raise InputError("이 명령에는 'phi' (k[χ] 다항식 목록) 이 필요합니다")
        return [self.setup.chi_ring.parse(t) for t in texts]


def build_context(task: TaskFile, settings: Dict, cache=None, emit_points: Optional[int] = None,
                  excel: Optional[str] = None) -> TaskContext:
    params = dict(settings.get("params", {}))
    params.update(task.params)
    for k in ("D", "w", "e"):
        params[k] = int(params[k])
    chi_prefix = settings.get("chi", {}).get("prefix", "chi")
    setup = ring_from_json(task.ring, order=params.get("order"), kernel_method=params.get("kernel_method", "auto"),
                           chi_prefix=chi_prefix)
    if emit_points is None:
        emit_points = int(settings.get("report", {}).get("emit_points", 0))
    return TaskContext(task, setup, params, cache, emit_points, excel)


# ============================================================================
# 📋 명령
# ============================================================================


def _module_entry(M: ModulePresentation) -> Dict:
    return {"hash": M.hash, "presentation": M.to_json()}


def _points(ctx: TaskContext, ideal: ConeIdeal) -> Dict:
    return {str(e): [list(p) for p in rational_points(ideal, e)] for e in range(1, ctx.emit_points + 1)}


def cmd_check_ring(ctx: TaskContext) -> Dict:
    s = ctx.setup
    return {
        "result": {
            "c": s.c, "n": s.n, "dim": s.dim, "artinian": s.is_artinian,
            "gb_f": s.gb_f.to_json(), "chi_vars": list(s.chi_ring.names),
        },
        "verdict": VERIFIED,
    }


def cmd_resolve(ctx: TaskContext) -> Dict:
    M = ctx.module("M", "k")
    P = minimal_resolution(M, ctx.params["D"], cache=ctx.cache)
    ok = P.complex.check_d_squared()
    if ctx.excel:
        from apps.cli.excel import write_betti
        write_betti(ctx.excel, P)
    return {
        "result": {"betti": P.betti, "graded_betti": P.graded_betti(), "terminated": P.terminated,
                   "resolution": P.to_json()},
        "verdict": VERIFIED if ok else UNVERIFIED,
    }


def cmd_ext(ctx: TaskContext) -> Dict:
    M, N = ctx.module("M", "k"), ctx.module("N", "k")
    T = ext_table(M, N, ctx.params["D"], cache=ctx.cache)
    commutes = T.commutes()
    if ctx.excel:
        from apps.cli.excel import write_ext
        write_ext(ctx.excel, T)
    return {"result": {"table": T.to_json(), "commutes": commutes}, "verdict": VERIFIED if commutes else UNVERIFIED}


def cmd_support(ctx: TaskContext) -> Dict:
    M = ctx.module("M", "k")
    N = ctx.module("N", "k")
    p = ctx.params
    S = support_pair(M, N, p["D"], p["w"], cache=ctx.cache)
    result = S.to_json()
    agreement = True
    if is_residue_field(N):
        rows = oracle_report(M, S.ideal, p["e"], cache=ctx.cache)
        result["oracle_points_checked"] = rows
        agreement = all(r["agree"] for r in rows)
        result["agreement"] = agreement
    if ctx.emit_points:
        result["points"] = _points(ctx, S.ideal)
    if ctx.excel and S.presentation is not None and S.presentation.table is not None:
        from apps.cli.excel import write_ext
        write_ext(ctx.excel, S.presentation.table)
    return {"result": result, "verdict": VERIFIED if S.stabilized and agreement else UNVERIFIED}


def cmd_cone(ctx: TaskContext) -> Dict:
    M = ctx.module("M", "k")
    p = ctx.params
    phis = ctx.phis()
    out = koszul_cone_detailed(M, phis, cache=ctx.cache)
    before = support_pair(M, None, p["D"], p["w"], cache=ctx.cache)
    after = support_pair(out.module, None, p["D"], p["w"], cache=ctx.cache)
    expected = (before.ideal + ConeIdeal(ctx.setup.chi_ring, tuple(phis))).saturate()
    relation = proj_compare(after.ideal, expected)
    result = {
        "module": _module_entry(out.module),
        "certificate": out.certificate,
        "bounds": out.bounds,
        "support_before": before.to_json(),
        "support": after.to_json(),
        "expected": expected.to_json(),
        "relation": relation.value,
    }
    if "z" in ctx.task.raw:
        C = central_koszul(out.module, ctx.task.raw["z"], cache=ctx.cache)
        result["central_koszul_ranks"] = C.ranks()
    ok = relation == ProjRelation.EQUAL and before.stabilized and after.stabilized
    return {"result": result, "verdict": VERIFIED if ok else UNVERIFIED}


def cmd_realize(ctx: TaskContext) -> Dict:
    p = ctx.params
    X = ctx.cone()
    M = ctx.module("M", "k")
    N = ctx.module("N")
    if N is None:
        report = realize(X, M, D=p["D"], w=p["w"], e=p["e"], cache=ctx.cache)
    else:
        report = realize_pair(X, M, N, D=p["D"], w=p["w"], e=p["e"], cache=ctx.cache)
    result = report.to_json()
    if ctx.emit_points:
        result["points"] = _points(ctx, report.support.ideal)
    return {"result": result, "verdict": report.verdict, "oracle_rows": report.oracle, "module": report.module}


def cmd_verify(ctx: TaskContext) -> Dict:
    """가군 M 에 대한 검사 묶음: 연산자 항등식, χ 가환성, 완전성 이분법, Gorenstein 소멸, 원뿔 차원식"""
    M = ctx.module("M", "k")
    p = ctx.params
    checks: Dict[str, Any] = {}
    P = minimal_resolution(M, p["D"], cache=ctx.cache)
    ops = eisenbud_operators(lift_resolution(P))
    checks["operators"] = {"computed_to": ops.computed_to, "ok": True}
    T = ext_table(M, ModulePresentation.residue_field(ctx.setup), p["D"], cache=ctx.cache)
    checks["commutes"] = T.commutes()
    try:
        checks["perfect"] = {"value": is_perfect(M, p["D"], p["w"], cache=ctx.cache), "ok": True}
    except Inconclusive as e:
        checks["perfect"] = {"value": None, "ok": False, "message": str(e)}
    checks["vanishing"] = gorenstein_vanishing_check(M, p["D"], cache=ctx.cache)
    if ctx.task.raw.get("phi"):
        checks["cone_sequence"] = [cone_sequence_check(M, phi, p["D"], cache=ctx.cache) for phi in ctx.phis()]
    ok = checks["commutes"] and checks["perfect"]["ok"] and all(c["ok"] for c in checks.get("cone_sequence", []))
    return {"result": checks, "verdict": VERIFIED if ok else UNVERIFIED}


def cmd_oracle(ctx: TaskContext) -> Dict:
    M = ctx.module("M", "k")
    p = ctx.params
    point = ctx.task.raw.get("point")
    if point is not None:
        e = p["e"] if any(int(x) >= ctx.setup.p for x in point) else 1
        value = hypersurface_oracle(M, [int(x) for x in point], e, cache=ctx.cache)
        return {"result": {"point": list(point), "e": e, "in_support": value}, "verdict": VERIFIED}
    S = support_pair(M, None, p["D"], p["w"], cache=ctx.cache)
    rows = oracle_report(M, S.ideal, p["e"], cache=ctx.cache)
    agreement = all(r["agree"] for r in rows)
    return {
        "result": {"support": S.to_json(), "oracle_points_checked": rows, "agreement": agreement},
        "verdict": VERIFIED if agreement and S.stabilized else UNVERIFIED,
        "oracle_rows": rows,
        "module": M,
    }


HANDLERS = {
    "check-ring": cmd_check_ring,
    "resolve": cmd_resolve,
    "ext": cmd_ext,
    "support": cmd_support,
    "cone": cmd_cone,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def run_command(command: str, ctx: TaskContext) -> Dict:
    """
    명령 실행 후 보고서 본문 생성

    Returns:
        Dict: report (직렬화 대상) 와 내부용 extra (oracle_rows, module)
    """
    if command not in HANDLERS:
        raise InputError(f"지원하지 않는 명령: {command}")
    logger.info("명령 %s 실행 (환 %s)", command, ctx.setup.hash)
    out = HANDLERS[command](ctx)
    modules = {name: _module_entry(M) for name, M in sorted(ctx._modules.items())}
    report = {
        "command": command,
        "ring": ctx.setup.to_json(),
        "ring_hash": ctx.setup.hash,
        "modules": modules,
        "params": {k: ctx.params[k] for k in sorted(ctx.params)},
        "result": out["result"],
        "verdict": out["verdict"],
    }
    extra = {k: out[k] for k in ("oracle_rows", "module") if k in out}
    return {"report": report, "extra": extra}


