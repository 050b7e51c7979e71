import pytest

from apps.algebra.groebner import ConeIdeal, ProjRelation, proj_compare
from apps.algebra.ring import build_ci
from apps.homology.complexes import ModulePresentation, minimal_resolution, syzygy_module
from apps.homology.operators import koszul_cone
from apps.support.ext import NotFiniteLength, ext_table, is_residue_field
from apps.support.oracle import assert_agreement, oracle_report
from apps.support.support import (
    chi_presentation,
    cone_sequence_check,
    is_perfect,
    rational_points,
    support_of_koszul_pair,
    support_pair,
)
from common.errors import InputError


def V(ring, *texts) -> ConeIdeal:
    return ConeIdeal.parse(ring, list(texts))


def same_cone(S, ideal: ConeIdeal) -> bool:
    return proj_compare(S.ideal, ideal) == ProjRelation.EQUAL


# ============================================================================
# 📋 Ext 표
# ============================================================================


def test_ext_of_residue_field(k):
    T = ext_table(k, k, 8)
    assert T.dims == [i + 1 for i in range(9)]
    assert T.route == "residue"
    assert T.commutes()


def test_ext_of_cyclic_module(r_mod_x, k):
    T = ext_table(r_mod_x, k, 8)
    assert T.dims == [1] * 9
    for i in range(7):
        assert T.action(0, i).to_lists() == [[1]]
        assert T.action(1, i).is_zero()


def test_ext_of_free_module(free, k):
    T = ext_table(free, k, 6)
    assert T.dims == [1, 0, 0, 0, 0, 0, 0]
    assert T.eventually_zero() == 1


def test_hom_route(k, r_mod_x):
    T = ext_table(k, r_mod_x, 6)
    assert T.route == "hom"
    assert T.dim(0) == 1
    assert T.commutes()


def test_ext_depth_too_low(k):
    with pytest.raises(InputError):
        ext_table(k, k, 3)


def test_ext_over_extension_field_is_refused():
    R = build_ci(2, ["x", "y"], ["x^2", "y^2"], e=2)
    k = ModulePresentation.residue_field(R)
    with pytest.raises(InputError):
        ext_table(k, k, 6)


def test_ext_needs_finite_length(r3):
    with pytest.raises(NotFiniteLength):
        ext_table(ModulePresentation.residue_field(r3), ModulePresentation.free(r3), 6)


def test_is_residue_field(k, r_mod_x):
    assert is_residue_field(k)
    assert not is_residue_field(r_mod_x)


# ============================================================================
# 📋 k[χ]-표현
# ============================================================================


def test_chi_presentation_checks(k):
    pres = chi_presentation(ext_table(k, k, 12), w=2)
    assert pres.n0 == 6
    assert pres.checks["surjective"]
    assert pres.checks["annihilator_stable"]
    assert pres.checks["dims_match"]
    assert pres.stabilized


def test_chi_presentation_window_too_wide(k):
    with pytest.raises(InputError):
        chi_presentation(ext_table(k, k, 5), w=2)


def test_chi_presentation_of_perfect_module(free, k):
    pres = chi_presentation(ext_table(free, k, 12), w=2)
    assert pres.ngens == 0
    assert pres.annihilator().is_empty_in_proj()


# ============================================================================
# 📋 서포트
# ============================================================================


def test_support_examples(flagship, k, free, r_mod_x):
    chi = flagship.chi_ring
    assert same_cone(support_pair(k), V(chi))
    assert same_cone(support_pair(r_mod_x), V(chi, "chi2"))
    assert support_pair(free).is_empty()
    assert same_cone(support_pair(k, r_mod_x), V(chi, "chi2"))
    assert same_cone(support_pair(r_mod_x, r_mod_x), V(chi, "chi2"))


def test_support_of_diagonal_element(flagship):
    S = support_pair(ModulePresentation.cyclic(flagship, ["x + y"]))
    assert same_cone(S, V(flagship.chi_ring, "chi1 + chi2"))
    assert S.contains_point((1, 1), flagship.field)
    assert not S.contains_point((1, 0), flagship.field)


def test_direct_sum_is_union(flagship, r_mod_x):
    r_mod_y = ModulePresentation.cyclic(flagship, ["y"])
    S = support_pair(r_mod_x.direct_sum(r_mod_y))
    assert same_cone(S, V(flagship.chi_ring, "chi1*chi2"))
    assert_agreement(oracle_report(r_mod_x.direct_sum(r_mod_y), S.ideal, 2))


def test_twist_does_not_change_support(r_mod_x):
    S = support_pair(r_mod_x.twist(3))
    assert S.ideal.same_ideal(support_pair(r_mod_x).ideal)
    assert_agreement(oracle_report(r_mod_x.twist(3), S.ideal, 2))


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize(
    "gens, expected",
    [
        (["x", "y"], "0"),
        (["x"], "chi2"),
        (["x + y"], "chi1 + chi2"),
        (["x*y"], "chi1*chi2"),
    ],
)
def test_syzygy_does_not_change_support(flagship, gens, expected, n):
    M = ModulePresentation.cyclic(flagship, gens)
    omega = syzygy_module(minimal_resolution(M, n + 3).complex, n)
    S = support_pair(omega)
    assert same_cone(S, V(flagship.chi_ring, expected))
    assert S.ideal.same_ideal(support_pair(M).ideal)


def test_support_json(r_mod_x):
    data = support_pair(r_mod_x).to_json()
    assert data["stabilized"] is True
    assert data["empty"] is False
    assert data["saturated"] is True


@pytest.mark.parametrize(
    "name, perfect",
    [
        ("R", True),
        ("R+R(1)", True),
        ("k", False),
        ("R/(x)", False),
        ("R/(x+y)", False),
        ("R3/(z)", True),
        ("R3/(x)", False),
    ],
)
def test_perfection_matches_empty_support(flagship, r3, name, perfect):
    M = {
        "R": lambda: ModulePresentation.free(flagship),
        "R+R(1)": lambda: ModulePresentation.free(flagship, (0, 1)),
        "k": lambda: ModulePresentation.residue_field(flagship),
        "R/(x)": lambda: ModulePresentation.cyclic(flagship, ["x"]),
        "R/(x+y)": lambda: ModulePresentation.cyclic(flagship, ["x + y"]),
        "R3/(z)": lambda: ModulePresentation.cyclic(r3, ["z"]),
        "R3/(x)": lambda: ModulePresentation.cyclic(r3, ["x"]),
    }[name]()
    assert is_perfect(M) is perfect
    S = support_pair(M)
    assert S.is_empty() is perfect
    assert_agreement(oracle_report(M, S.ideal, 2))


def test_regular_element_does_not_change_support(r3):
    chi = r3.chi_ring
    a = support_pair(ModulePresentation.cyclic(r3, ["x"]))
    b = support_pair(ModulePresentation.cyclic(r3, ["x", "z"]))
    assert same_cone(a, V(chi, "chi2"))
    assert same_cone(b, V(chi, "chi2"))


@pytest.mark.slow
@pytest.mark.parametrize(
    "ideal, phi",
    [
        (None, "chi1"),
        (None, "chi2"),
        (None, "chi1 + chi2"),
        (None, "chi1^2"),
        (["x"], "chi1"),
        (["x"], "chi2"),
        (["x + y"], "chi1"),
        (["x + y"], "chi1 + chi2"),
    ],
)
def test_koszul_cone_cuts_support(flagship, ideal, phi):
    chi = flagship.chi_ring
    M = ModulePresentation.residue_field(flagship) if ideal is None else ModulePresentation.cyclic(flagship, ideal)
    MK, _ = koszul_cone(M, [chi.parse(phi)])
    expected = (support_pair(M).ideal + V(chi, phi)).saturate()
    S = support_pair(MK)
    assert same_cone(S, expected)
    assert_agreement(oracle_report(MK, S.ideal, 2))


def test_koszul_pair_support(flagship, k, chi):
    S = support_of_koszul_pair(k, k, [chi("chi2")])
    assert same_cone(S, V(flagship.chi_ring, "chi2"))


@pytest.mark.parametrize("ideal, phi", [(None, "chi1"), (["x"], "chi2"), (["x + y"], "chi1 + chi2")])
def test_cone_sequence(flagship, chi, ideal, phi):
    M = ModulePresentation.residue_field(flagship) if ideal is None else ModulePresentation.cyclic(flagship, ideal)
    out = cone_sequence_check(M, chi(phi), D=8)
    assert out["ok"], out["rows"]


def test_rational_points(flagship):
    chi = flagship.chi_ring
    assert rational_points(V(chi, "chi2"), 1) == [(1, 0)]
    assert len(rational_points(V(chi), 1)) == 3
    assert len(rational_points(V(chi), 2)) == 5
    assert rational_points(ConeIdeal.irrelevant(chi), 2) == []
