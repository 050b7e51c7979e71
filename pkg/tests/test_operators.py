import pytest

from apps.algebra.poly import PolyMatrix
from apps.algebra.ring import NonHomogeneous, build_ci
from apps.homology.complexes import NO_HOMOLOGY, ModulePresentation, homology_bound, minimal_resolution
from apps.homology.operators import (
    InsufficientDepth,
    central_koszul,
    eisenbud_operators,
    ext_operator_matrices,
    koszul_cone,
    koszul_cone_detailed,
    lift_resolution,
    operator_chain_map,
    operator_weight,
)
from common.errors import InputError


def _family(M, D=6):
    P = minimal_resolution(M, D)
    return P, eisenbud_operators(lift_resolution(P))


@pytest.mark.parametrize("ideal", [None, ["x"], ["x*y"], ["x", "y^2"]])
def test_lift_identity(flagship, ideal):
    M = ModulePresentation.residue_field(flagship) if ideal is None else ModulePresentation.cyclic(flagship, ideal)
    P, F = _family(M)
    for i in range(2, P.depth + 1):
        total = PolyMatrix.zeros(flagship.q_ring, P.d(i - 1).nrows, P.d(i).ncols)
        for j in range(flagship.c):
            total = total + F.t_tilde(j, i).map(lambda p, fj=flagship.f[j]: p * fj)
        assert total == P.d(i - 1) @ P.d(i)


def test_operators_of_cyclic_module(r_mod_x):
    _, F = _family(r_mod_x, 5)
    for i in range(2, 6):
        assert [[str(p) for p in row] for row in F.t_tilde(0, i).entries] == [["1"]]
        assert F.t_tilde(1, i).is_zero()


def test_operators_are_chain_maps(flagship, k):
    P, F = _family(k)
    for i in range(3, P.depth + 1):
        for j in range(flagship.c):
            lhs = P.d(i - 2) @ F.t(j, i)
            rhs = F.t(j, i - 1) @ P.d(i)
            assert flagship.normal_form(lhs - rhs).is_zero()


def test_operators_commute_on_ext(k):
    _, F = _family(k)
    for i in range(0, 3):
        a1, a2 = ext_operator_matrices(F, i)
        b1, b2 = ext_operator_matrices(F, i + 2)
        assert (b1 @ a2) == (b2 @ a1)


def test_zero_operator_chain_map(r_mod_x, chi):
    P, F = _family(r_mod_x, 5)
    u = operator_chain_map(P, F, chi("chi2"))
    assert u.degree == 2
    assert all(A.is_zero() for A in u.maps.values())


def test_operator_weight(flagship, chi):
    assert operator_weight(flagship, chi("chi1*chi2")) == 4
    weighted = build_ci(3, ["a", "b"], ["a^2", "b^3"])
    with pytest.raises(NonHomogeneous):
        operator_weight(weighted, weighted.chi_ring.parse("chi1 + chi2"))


def test_insufficient_depth(k, chi):
    P = minimal_resolution(k, 3)
    F = eisenbud_operators(lift_resolution(P))
    with pytest.raises(InsufficientDepth):
        operator_chain_map(P, F, chi("chi1^2"))


# ============================================================================
# 📋 Koszul 원뿔
# ============================================================================


def test_cone_of_chi1_on_residue_field(k, chi):
    result = koszul_cone_detailed(k, [chi("chi1")])
    s = result.bounds[0]["s"]
    assert s is None or s <= 2
    assert [step["op"] for step in result.certificate] == ["cone", "syzygy"]
    assert result.module.ngens > 0


def test_constant_operator_gives_zero_module(k, chi):
    module, cert = koszul_cone(k, [chi("1")])
    assert module.ngens == 0
    assert cert[-1] == {"op": "syzygy", "n": 0}


def test_zero_module_passes_through(flagship, chi):
    module, cert = koszul_cone(ModulePresentation.zero(flagship), [chi("chi1"), chi("chi2")])
    assert module.ngens == 0
    assert len(cert) == 4


@pytest.mark.parametrize("text, error", [("0", InputError), ("chi1 + chi1*chi2", NonHomogeneous)])
def test_bad_operators(k, chi, text, error):
    with pytest.raises(error):
        koszul_cone(k, [chi(text)])


def test_operator_from_another_ring(k, r3):
    with pytest.raises(InputError):
        koszul_cone(k, [r3.chi_ring.parse("chi1")])


# ============================================================================
# 📋 중심 원소 Koszul
# ============================================================================


def test_central_koszul_of_regular_element(r3):
    M = ModulePresentation.cyclic(r3, ["x"])
    C = central_koszul(M, ["z"])
    assert C.check_d_squared()
    assert 1 not in homology_bound(C, (1, 2)).nonzero


def test_central_koszul_of_nilpotent_element(r_mod_x):
    C = central_koszul(r_mod_x, ["y"])
    assert homology_bound(C, (1, 2)).s != NO_HOMOLOGY
