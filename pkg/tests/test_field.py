import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facred.errors import CrtModuliNotCoprime, InvalidParameters
from facred.field import FieldElem, PrimeBasis, crt_reconstruct, select_primes
from facred.util import is_prime


def test_select_primes_small_window():
    basis = select_primes(4, 1)
    assert basis.product >= 16
    assert basis.primes == (5, 7)  # sieve + greedy product check


def test_select_primes_n16():
    basis = select_primes(16, 1)
    assert basis.primes == (5, 7, 11)
    assert basis.product >= 256


def test_select_primes_rejects_bad_params():
    with pytest.raises(InvalidParameters):
        select_primes(16, 0)
    with pytest.raises(InvalidParameters):
        select_primes(1, 1)


def test_select_primes_product_and_primality():
    for n, c in [(2, 1), (8, 2), (100, 1), (1000, 3), (128, 2)]:
        basis = select_primes(n, c)
        assert basis.product >= n ** (2 * c)
        assert all(is_prime(p) for p in basis.primes)
        assert len(set(basis.primes)) == len(basis.primes)


def test_select_primes_min_prime_floor():
    basis = select_primes(128, 2, min_prime=50)
    assert min(basis.primes) >= 50


def test_crt_examples():
    assert crt_reconstruct([FieldElem(2, 3), FieldElem(3, 5)]) == 8
    assert crt_reconstruct([FieldElem(0, 3), FieldElem(0, 5), FieldElem(0, 7)]) == 0
    assert crt_reconstruct([FieldElem(1, 2), FieldElem(1, 3), FieldElem(1, 5)]) == 1


def test_crt_non_coprime():
    with pytest.raises(CrtModuliNotCoprime):
        crt_reconstruct([FieldElem(1, 4), FieldElem(0, 6)])


def test_crt_roundtrip_exhaustive():
    # every x below the product reconstructs from its residues
    primes = (3, 5, 7, 11)
    prod = 3 * 5 * 7 * 11
    assert prod <= 10**4
    for x in range(prod):
        assert crt_reconstruct([FieldElem(x % p, p) for p in primes]) == x


@given(st.integers(min_value=0, max_value=2 * 3 * 5 * 7 * 11 * 13 - 1))
@settings(max_examples=200)
def test_crt_roundtrip_property(x):
    primes = (2, 3, 5, 7, 11, 13)
    assert crt_reconstruct([FieldElem(x % p, p) for p in primes]) == x


def test_field_elem_bounds():
    with pytest.raises(InvalidParameters):
        FieldElem(5, 5)
    with pytest.raises(InvalidParameters):
        FieldElem(-1, 5)


def test_basis_is_immutable():
    basis = select_primes(16, 1)
    assert isinstance(basis, PrimeBasis)
    with pytest.raises(Exception):
        basis.c = 3
