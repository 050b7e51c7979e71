import pytest

from apps.algebra.groebner import ConeIdeal
from apps.algebra.ring import build_ci
from apps.homology.complexes import ModulePresentation
from apps.support import oracle
from apps.support.oracle import (
    OracleDisagreement,
    assert_agreement,
    hypersurface_oracle,
    hypersurface_setup,
    module_over_hypersurface,
    oracle_points,
    oracle_report,
)
from apps.support.support import support_pair
from common.errors import InputError


def test_oracle_points(flagship):
    points = oracle_points(flagship, 2)
    assert len(points) == 8
    assert sorted(pt for e, pt in points if e == 1) == [(0, 1), (1, 0), (1, 1)]


def test_cyclic_module_oracle(r_mod_x):
    assert hypersurface_oracle(r_mod_x, (1, 0)) is True
    assert hypersurface_oracle(r_mod_x, (0, 1)) is False


@pytest.mark.parametrize("alpha, e", [((1, 0), 1), ((0, 1), 1), ((1, 1), 1), ((1, 2), 2), ((1, 3), 2)])
def test_free_and_residue_field(free, k, alpha, e):
    assert hypersurface_oracle(free, alpha, e) is False
    assert hypersurface_oracle(k, alpha, e) is True


def test_zero_module_is_never_supported(flagship):
    assert hypersurface_oracle(ModulePresentation.zero(flagship), (1, 1)) is False


def test_hypersurface_setup(flagship):
    hs = hypersurface_setup(flagship, (1, 1))
    assert hs.c == 1
    assert [str(f) for f in hs.f] == ["x^2 + y^2"]
    assert hypersurface_setup(flagship, (1, 1)) is hs


def test_hypersurface_memo_is_shared_and_bounded(fresh_memo, monkeypatch):
    a = build_ci(2, ["x", "y"], ["x^2", "y^2"])
    b = build_ci(2, ["x", "y"], ["x^2", "y^2"])
    assert a is not b
    assert hypersurface_setup(a, (1, 1)) is hypersurface_setup(b, (1, 1))

    monkeypatch.setattr(oracle, "_HYPERSURFACE_LIMIT", 2)
    for alpha in [(1, 0), (0, 1), (1, 1)]:
        hypersurface_setup(a, alpha)
    assert len(oracle._hypersurfaces) <= 2
    assert hypersurface_setup(a, (1, 1)) is hypersurface_setup(b, (1, 1))


@pytest.mark.parametrize("alpha", [(0, 0), (1, 0, 1)])
def test_bad_points(flagship, alpha):
    with pytest.raises(InputError):
        hypersurface_setup(flagship, alpha)


def test_unequal_f_degrees_are_refused():
    R = build_ci(3, ["a", "b"], ["a^2", "b^3"])
    with pytest.raises(InputError):
        hypersurface_setup(R, (1, 1))


def test_module_over_hypersurface(flagship, r_mod_x):
    hs = hypersurface_setup(flagship, (1, 0))
    Ma = module_over_hypersurface(r_mod_x, hs)
    assert Ma.ngens == r_mod_x.ngens
    assert Ma.setup is hs


@pytest.mark.parametrize("ideal", [["x"], ["x + y"], ["x*y"]])
def test_oracle_agrees_with_support(flagship, ideal):
    M = ModulePresentation.cyclic(flagship, ideal)
    rows = oracle_report(M, support_pair(M).ideal, 2)
    assert len(rows) == 8
    assert_agreement(rows)


def test_disagreement_is_reported(flagship, r_mod_x):
    wrong = ConeIdeal.parse(flagship.chi_ring, ["chi1"])
    rows = oracle_report(r_mod_x, wrong, 1)
    with pytest.raises(OracleDisagreement) as info:
        assert_agreement(rows)
    assert {tuple(r["point"]) for r in info.value.rows} == {(0, 1), (1, 0)}
    assert info.value.exit_code == 2
