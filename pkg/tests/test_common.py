import logging

import pytest

from apps.algebra.ring import NotRegularSequence
from apps.homology.complexes import NotAChainMap
from apps.support.oracle import OracleDisagreement
from common.config import load_settings, resolve_path
from common.errors import ComputationError, InputError, VerificationError
from common.io import canonical_json, content_hash, read_json, write_json
from common.log import setup_logging


def test_base_settings(monkeypatch):
    monkeypatch.delenv("SUPPORT_FORGE_CACHE", raising=False)
    s = load_settings()
    assert s["params"] == {"D": 12, "w": 2, "e": 2, "order": "grevlex", "kernel_method": "auto"}
    assert s["cache"]["root"] == "cache/resolutions"
    assert s["chi"]["prefix"] == "chi"


def test_override_order(tmp_path, monkeypatch):
    monkeypatch.delenv("SUPPORT_FORGE_CACHE", raising=False)
    a = tmp_path / "a.yaml"
    b = tmp_path / "b.yaml"
    a.write_text("params:\n  D: 8\n  w: 1\n", encoding="utf-8")
    b.write_text("params:\n  D: 10\n", encoding="utf-8")
    s = load_settings(str(a), None, str(b), overrides={"params": {"e": 1}})
    assert (s["params"]["D"], s["params"]["w"], s["params"]["e"]) == (10, 1, 1)
    assert s["params"]["order"] == "grevlex"


def test_cache_root_from_environment(monkeypatch):
    monkeypatch.setenv("SUPPORT_FORGE_CACHE", "/tmp/forge-cache")
    assert load_settings(str(resolve_path("config/cli.yaml")))["cache"]["root"] == "/tmp/forge-cache"


def test_canonical_json_is_sorted():
    assert canonical_json({"b": 1, "a": [1, "χ"]}) == '{\n  "a": [\n    1,\n    "χ"\n  ],\n  "b": 1\n}\n'
    assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})
    assert len(content_hash([])) == 16


def test_write_json_round_trip(tmp_path):
    path = tmp_path / "deep" / "r.json"
    write_json(path, {"x": [1, 2]})
    assert read_json(path) == {"x": [1, 2]}
    assert [p.name for p in path.parent.iterdir()] == ["r.json"]


@pytest.mark.parametrize(
    "error, base, code",
    [
        (NotRegularSequence, InputError, 3),
        (NotAChainMap, ComputationError, 1),
        (OracleDisagreement, VerificationError, 2),
    ],
)
def test_exit_codes(error, base, code):
    assert issubclass(error, base)
    assert error.exit_code == code


def test_log_file(tmp_path):
    logger = setup_logging("DEBUG", str(tmp_path))
    logger.debug("hello")
    logging.shutdown()
    files = list(tmp_path.glob("forge_*.log"))
    assert len(files) == 1
