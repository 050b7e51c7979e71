import pytest
from hypothesis import given, strategies as st

from apps.algebra.fields import NotPrime, galois_field, prime_field, projective_points, smallest_irreducible


def test_prime_field_arithmetic():
    F = prime_field(5)
    assert F.add(3, 4) == 2
    assert F.mul(3, 4) == 2
    assert F.inv(3) == 2
    assert F.div(1, 4) == 4
    assert F.neg(0) == 0


@pytest.mark.parametrize("p", [1, 4, 9, 15])
def test_prime_field_rejects_composites(p):
    with pytest.raises(NotPrime):
        prime_field(p)


def test_f4_uses_smallest_irreducible():
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    F4 = galois_field(2, 2)
    # θ^2 = θ + 1
    assert F4.mul(2, 2) == 3
    assert F4.add(2, 3) == 1
    assert F4.mul(F4.inv(2), 2) == 1


def test_prime_field_embeds_as_constants():
    F4 = galois_field(2, 2)
    for a in range(2):
        for b in range(2):
            assert F4.mul(a, b) == (a * b) % 2
            assert F4.add(a, b) == (a + b) % 2


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_distributive(a, b, c):
    F = galois_field(3, 2)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("p, e, c, count", [(2, 1, 2, 3), (2, 2, 2, 5), (3, 1, 3, 13), (2, 1, 1, 1)])
def test_projective_point_counts(p, e, c, count):
    pts = list(projective_points(galois_field(p, e), c))
    assert len(pts) == count
    assert all(pt[next(i for i, x in enumerate(pt) if x)] == 1 for pt in pts)
    assert len(set(pts)) == count
