import pytest

from apps.algebra.groebner import ConeIdeal, ProjRelation, proj_compare
from apps.algebra.poly import PolyMatrix
from apps.homology.complexes import ModulePresentation, homology_bound, minimal_resolution, minimize, syzygy_module
from apps.homology.operators import central_koszul
from apps.support.realize import (
    UNVERIFIED,
    VERIFIED,
    gorenstein_vanishing_check,
    phi_list,
    realize,
    realize_pair,
)
from apps.support.support import is_perfect, support_pair

CONES = [
    ["0"],
    ["chi1"],
    ["chi2"],
    ["chi1 + chi2"],
    ["chi1*chi2"],
    ["chi1^2 + chi1*chi2 + chi2^2"],
    ["chi1", "chi2"],
]


def X(setup, *texts) -> ConeIdeal:
    return ConeIdeal.parse(setup.chi_ring, list(texts))


def mod_element(M: ModulePresentation, z: str) -> ModulePresentation:
    """M / zM"""
    Q = M.setup.q_ring
    zid = PolyMatrix.identity(Q, M.ngens).map(lambda p: p * Q.parse(z))
    return ModulePresentation(M.setup, M.degrees, M.relations.hstack(zid))


def test_phi_list_is_sorted_by_degree(flagship):
    phis = phi_list(X(flagship, "chi1*chi2", "chi1"))
    assert [str(p) for p in phis] == ["chi1"]
    assert phi_list(X(flagship, "0")) == []


@pytest.mark.slow
@pytest.mark.parametrize("texts", CONES)
def test_realize_cones(flagship, texts):
    report = realize(X(flagship, *texts), setup=flagship, e=2)
    assert len(report.oracle) == 8
    assert report.agreement
    assert report.relation == ProjRelation.EQUAL
    assert report.verdict == VERIFIED


@pytest.mark.slow
@pytest.mark.parametrize("texts", CONES)
def test_syzygies_of_realized_module_keep_the_cone(flagship, texts):
    report = realize(X(flagship, *texts), setup=flagship, e=1)
    M = report.module
    if M.ngens == 0:
        assert report.support.is_empty()
        return
    for n in (1, 2, 3):
        omega = syzygy_module(minimal_resolution(M, n + 3).complex, n)
        assert proj_compare(support_pair(omega).ideal, report.effective) == ProjRelation.EQUAL, n


@pytest.mark.slow
@pytest.mark.parametrize("gens", [["x", "y"], ["x"], ["x + y"], ["x*y"]])
def test_realize_own_support_is_idempotent(flagship, gens):
    M = ModulePresentation.cyclic(flagship, gens)
    S = support_pair(M)
    report = realize(S.ideal, M=M, e=1)
    assert report.warnings == []
    assert report.relation == ProjRelation.EQUAL
    assert proj_compare(report.support.ideal, S.ideal) == ProjRelation.EQUAL
    assert report.verdict == VERIFIED


@pytest.mark.slow
def test_regular_element_keeps_realized_support(r3):
    M = ModulePresentation.cyclic(r3, ["x", "y"])
    report = realize(X(r3, "chi1 + chi2"), M=M, e=1)
    MX = report.module
    C = central_koszul(MX, ["z"])
    assert 1 not in homology_bound(C, (1, 1)).nonzero
    quotient = support_pair(mod_element(MX, "z"))
    assert proj_compare(quotient.ideal, report.support.ideal) == ProjRelation.EQUAL
    assert proj_compare(quotient.ideal, X(r3, "chi1 + chi2")) == ProjRelation.EQUAL


def test_realize_diagonal_line(flagship):
    report = realize(X(flagship, "chi1 + chi2"), setup=flagship, e=1)
    assert report.support.contains_point((1, 1), flagship.field)
    assert not report.support.contains_point((1, 0), flagship.field)
    assert report.verdict == VERIFIED


def test_whole_space_gives_residue_field(flagship, k):
    report = realize(X(flagship, "0"), setup=flagship, e=1)
    assert report.module.hash == minimize(k).hash
    assert report.certificate == []


def test_empty_cone_gives_perfect_module(flagship):
    report = realize(ConeIdeal.irrelevant(flagship.chi_ring), setup=flagship, e=1)
    assert report.support.is_empty()
    assert is_perfect(report.module)
    assert report.verdict == VERIFIED


def test_clipped_target(flagship, r_mod_x):
    report = realize(X(flagship, "chi1"), M=r_mod_x, e=1)
    assert [w["type"] for w in report.warnings] == ["ClippedTarget"]
    assert report.effective.is_empty_in_proj()
    assert report.verdict == VERIFIED


def test_report_json(flagship):
    data = realize(X(flagship, "chi2"), setup=flagship, e=1).to_json()
    assert data["verdict"] == VERIFIED
    assert data["relation"] == "equal"
    assert data["params"] == {"D": 12, "w": 2, "e": 1}
    assert "base_N" not in data


def test_unverified_when_oracle_disagrees(flagship):
    report = realize(X(flagship, "chi2"), setup=flagship, e=1)
    report.oracle[0] = dict(report.oracle[0], agree=False)
    assert report.verdict == UNVERIFIED


# ============================================================================
# 📋 쌍 실현
# ============================================================================


@pytest.mark.slow
def test_pair_with_same_module(flagship, k):
    report = realize_pair(X(flagship, "chi1"), k, k, e=1)
    assert report.module_N is report.module
    assert sorted(report.pair_supports) == ["M,N_X", "M_X,N", "M_X,N_X"]
    assert report.verdict == VERIFIED


@pytest.mark.slow
def test_pair_with_cyclic_module(flagship, k, r_mod_x):
    report = realize_pair(X(flagship, "chi2"), k, r_mod_x, e=1)
    assert report.pair_equal
    assert report.vanishing["nonzero"] == []
    data = report.to_json()
    assert set(data["pair_supports"]) == {"M,N_X", "M_X,N", "M_X,N_X"}
    assert report.verdict == VERIFIED


# ============================================================================
# 📋 Gorenstein 소멸
# ============================================================================


def test_vanishing_over_artinian_ring(k):
    out = gorenstein_vanishing_check(k, D=8)
    assert out["dim_R"] == 0
    assert out["checked"] == [1, 8]
    assert out["nonzero"] == []


def test_vanishing_over_positive_dimension(r3):
    out = gorenstein_vanishing_check(ModulePresentation.cyclic(r3, ["x"]), D=6)
    assert out["checked"] == [2, 6]
    assert out["nonzero"] == []


def test_vanishing_of_zero_module(flagship):
    out = gorenstein_vanishing_check(ModulePresentation.zero(flagship), D=6)
    assert out["nonzero"] == []
