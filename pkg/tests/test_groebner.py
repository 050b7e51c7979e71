import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from apps.algebra.exactalg import FMatrix, mat_solve
from apps.algebra.fields import prime_field
from apps.algebra.groebner import (
    ConeIdeal,
    ProjRelation,
    buchberger,
    colon_and_saturate,
    ideal_member,
    krull_dimension,
    proj_compare,
    radical_member,
    saturate,
    syzygies,
)
from apps.algebra.poly import PolyRing

F2 = prime_field(2)
Q2 = PolyRing(F2, ["x", "y"])
Q3 = PolyRing(F2, ["x", "y", "z"])
CHI = PolyRing(F2, ["chi1", "chi2"], [2, 2])

CONES = [
    ["0"],
    ["chi1"],
    ["chi2"],
    ["chi1 + chi2"],
    ["chi1*chi2"],
    ["chi1^2 + chi1*chi2 + chi2^2"],
    ["chi1", "chi2"],
]


def P(ring, *texts):
    return [ring.parse(t) for t in texts]


def gb_text(gens, ring):
    return sorted(str(p) for p in buchberger(gens, ring=ring).polys())


@pytest.mark.parametrize(
    "ring, gens, expected",
    [
        (CHI, ["chi1^2", "chi1*chi2"], ["chi1*chi2", "chi1^2"]),
        (Q2, ["x^2", "y^2", "x^2 + y^2"], ["x^2", "y^2"]),
        (Q2, ["x*y + y^2", "y^2"], ["x*y", "y^2"]),
    ],
)
def test_reduced_basis_examples(ring, gens, expected):
    assert gb_text(P(ring, *gens), ring) == sorted(expected)


def test_membership_examples():
    B = buchberger(P(Q2, "x^2", "y^2"), ring=Q2)
    assert ideal_member(Q2.parse("x^2 + y^2"), B)
    assert not ideal_member(Q2.parse("x*y"), B)
    assert ideal_member(Q2.zero(), B)


@pytest.mark.parametrize(
    "g, gens, expected",
    [
        ("chi1", ["chi1^2"], True),
        ("chi2", ["chi1"], False),
        ("chi1 + chi2", ["(chi1 + chi2)^3", "chi1*chi2*(chi1 + chi2)"], True),
    ],
)
def test_radical_membership(g, gens, expected):
    assert radical_member(CHI.parse(g), P(CHI, *gens), ring=CHI) is expected


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["chi1*chi2"], ["chi1*chi2"]),
        (["chi1^2", "chi1*chi2"], ["chi1"]),
        (["1"], ["1"]),
    ],
)
def test_saturation_examples(gens, expected):
    G, _ = saturate(P(CHI, *gens), CHI.gens(), CHI)
    assert sorted(str(p) for p in G.polys()) == expected


def test_koszul_syzygies():
    syz = syzygies(P(Q2, "x", "y"), ring=Q2, rank=1)
    assert [[str(p) for p in v] for v in syz] == [["y", "x"]]
    syz = syzygies(P(Q2, "x^2", "y^2"), ring=Q2, rank=1)
    assert [[str(p) for p in v] for v in syz] == [["y^2", "x^2"]]
    syz = syzygies(P(Q2, "x", "x"), ring=Q2, rank=1)
    assert any([str(p) for p in v] == ["1", "1"] for v in syz)


def test_syzygies_annihilate_generators():
    gens = [P(Q3, "x*y", "z^2"), P(Q3, "y^2", "x*z"), P(Q3, "x*z", "0")]
    for v in syzygies(gens, ring=Q3, rank=2):
        for comp in range(2):
            total = Q3.zero()
            for a, g in zip(v, gens):
                total = total + a * g[comp]
            assert total.is_zero()


@pytest.mark.parametrize(
    "ring, gens, expected",
    [(Q2, ["x^2", "y^2"], 0), (Q3, ["x^2", "y^2"], 1), (CHI, [], 2), (Q2, ["1"], -1)],
)
def test_krull_dimension(ring, gens, expected):
    assert krull_dimension(P(ring, *gens), ring=ring) == expected


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (["chi2"], ["chi2^2", "chi1*chi2"], ProjRelation.EQUAL),
        (["chi1", "chi2"], ["0"], ProjRelation.SUBSET),
        (["chi1"], ["chi2"], ProjRelation.INCOMPARABLE),
        (["chi1*chi2"], ["chi1"], ProjRelation.SUPERSET),
    ],
)
def test_proj_compare_examples(x, y, expected):
    assert proj_compare(ConeIdeal.parse(CHI, x), ConeIdeal.parse(CHI, y)) == expected


def test_irrelevant_ideal_is_empty_in_proj():
    assert ConeIdeal.irrelevant(CHI).is_empty_in_proj()
    assert not ConeIdeal.parse(CHI, ["chi1"]).is_empty_in_proj()


@pytest.mark.parametrize("texts", CONES)
def test_saturation_idempotent_on_cones(texts):
    once = ConeIdeal.parse(CHI, texts).saturate()
    twice = ConeIdeal(CHI, once.gens).saturate()
    assert once.same_ideal(twice)


def test_proj_compare_reflexive_and_antisymmetric():
    cones = [ConeIdeal.parse(CHI, t) for t in CONES]
    for X in cones:
        assert proj_compare(X, X) == ProjRelation.EQUAL
    for X, Y in itertools.combinations(cones, 2):
        xy, yx = proj_compare(X, Y), proj_compare(Y, X)
        # 7 개 원뿔은 모두 Proj 에서 서로 다른 닫힌집합
        assert xy != ProjRelation.EQUAL
        flipped = {ProjRelation.SUBSET: ProjRelation.SUPERSET, ProjRelation.SUPERSET: ProjRelation.SUBSET}
        assert yx == flipped.get(xy, xy)


# ============================================================================
# 📋 무작위 비교
# ============================================================================


def _brute_member(ring, gens, g, t):
    """차수 t 단항식 기저 위에서 g ∈ span{m·gen} 인지 선형대수로 판정"""
    basis = ring.monomials_of_degree(t)
    index = {m: i for i, m in enumerate(basis)}
    cols = []
    for gen in gens:
        d = gen.degree()
        if d > t:
            continue
        for m in ring.monomials_of_degree(t - d):
            prod = gen.mul_monomial(m)
            vec = [0] * len(basis)
            for mono, c in prod.terms.items():
                vec[index[mono]] = c
            cols.append(vec)
    target = [0] * len(basis)
    for mono, c in g.terms.items():
        target[index[mono]] = c
    if not cols:
        return not any(target)
    A = FMatrix.from_columns(ring.field, cols, len(basis))
    return mat_solve(A, target) is not None


def _homogeneous(ring, degree, coeffs):
    monos = ring.monomials_of_degree(degree)
    g = ring.zero()
    for m, c in zip(monos, coeffs):
        if c:
            g = g + ring.monomial(m, c)
    return g


instances = st.tuples(
    st.integers(1, 3),
    st.lists(st.tuples(st.integers(1, 3), st.lists(st.integers(0, 1), min_size=10, max_size=10)),
             min_size=1, max_size=3),
    st.integers(1, 6),
    st.lists(st.integers(0, 1), min_size=28, max_size=28),
)


@settings(max_examples=50, deadline=None)
@given(instances)
def test_membership_agrees_with_linear_algebra(instance):
    nvars, gen_specs, t, target_coeffs = instance
    ring = PolyRing(F2, ["x", "y", "z"][:nvars])
    gens = [g for g in (_homogeneous(ring, d, cs) for d, cs in gen_specs) if not g.is_zero()]
    if not gens:
        return
    B = buchberger(gens, ring=ring)
    g = _homogeneous(ring, t, target_coeffs)
    assert B.contains(g) == _brute_member(ring, gens, g, t)
    for gen in gens:
        assert ideal_member(gen, B)


def _sympy_basis(ring, polys):
    symbols = sympy.symbols(list(ring.names))
    exprs = [sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(ring.names, symbols))) for p in polys]
    G = sympy.groebner(exprs, *symbols, modulus=ring.field.p, order="grevlex")
    return {sympy.Poly(e, *symbols, modulus=ring.field.p) for e in G.exprs}, symbols


@pytest.mark.parametrize(
    "gens",
    [
        ["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"],
        ["x^3 + y^2*z", "x*y*z", "y^3 + z^3"],
        ["x*y + y^2", "y^2", "x*z + z^2"],
    ],
)
def test_reduced_basis_matches_sympy(gens):
    ring = Q3
    ours = buchberger(P(ring, *gens), ring=ring).polys()
    expected, symbols = _sympy_basis(ring, P(ring, *gens))
    got = {sympy.Poly(sympy.sympify(str(p).replace("^", "**")), *symbols, modulus=2) for p in ours}
    assert got == expected


def test_buchberger_idempotent_on_reduced_basis():
    B = buchberger(P(Q3, "x^2 + y*z", "y^2 + x*z", "z^2 + x*y"), ring=Q3)
    again = buchberger(B.polys(), ring=Q3)
    assert again.same_as(B)


@pytest.mark.parametrize(
    "texts, expected",
    [
        (["chi1*chi2"], ["chi1*chi2"]),
        (["chi1^2", "chi1*chi2"], ["chi1"]),
    ],
)
def test_colon_and_saturate(texts, expected):
    out = colon_and_saturate(ConeIdeal.parse(CHI, texts), ConeIdeal.irrelevant(CHI))
    assert out.same_ideal(ConeIdeal.parse(CHI, expected))
    assert out.saturated
