from fractions import Fraction
import cmath

import pytest
from hypothesis import given, settings, strategies as st

from molphase.cyclotomic import Cyclotomic, cyclotomic_polynomial, dirichlet_kernel, totient
from molphase.rotation import character

small = st.lists(st.integers(-5, 5), min_size=1, max_size=12)


def test_cyclotomic_polynomials():
    assert list(cyclotomic_polynomial(12)) == [1, 0, -1, 0, 1]
    assert list(cyclotomic_polynomial(5)) == [1, 1, 1, 1, 1]
    assert [totient(n) for n in (1, 4, 12, 60)] == [1, 2, 4, 16]


def test_root_of_unity_identities():
    z = Cyclotomic.root(12)
    assert z ** 12 == 1
    assert z ** 6 == -1
    assert (z ** 3) * (z ** 3) == -1
    s5 = Cyclotomic.sqrt5()
    assert s5 * s5 == 5
    assert s5.galois(2) == -s5


@settings(max_examples=40, deadline=None)
@given(small, small)
def test_field_operations_match_complex(a, b):
    x, y = Cyclotomic(12, a), Cyclotomic(12, b)
    assert abs(complex(x + y) - (complex(x) + complex(y))) < 1e-9
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-8
    assert abs(complex(x.conjugate()) - complex(x).conjugate()) < 1e-9
    if not x.is_zero():
        assert x * x.inverse() == 1
        assert abs(complex(y / x) - complex(y) / complex(x)) < 1e-6 * (1 + abs(complex(y) / complex(x)))


def test_mixed_orders_coerce():
    a = Cyclotomic.root(3)
    b = Cyclotomic.root(4)
    prod = a * b
    assert prod.n % 12 == 0
    assert abs(complex(prod) - cmath.exp(2j * cmath.pi * (1 / 3 + 1 / 4))) < 1e-12
    assert (Cyclotomic.rational(Fraction(1, 3)) * 3) == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.rational(0, 5).inverse()
    with pytest.raises(ValueError):
        Cyclotomic.root(6).galois(3)


@pytest.mark.parametrize("l", [0, 1, 4, 9])
@pytest.mark.parametrize("n,j", [(1, 0), (2, 1), (3, 1), (5, 2), (8, 3)])
def test_dirichlet_kernel_is_rotation_character(l, n, j):
    exact = dirichlet_kernel(l, n, j)
    assert exact.is_rational() or n > 2
    assert abs(complex(exact) - character(l, 2 * cmath.pi * j / n)) < 1e-10
