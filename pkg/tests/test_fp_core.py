import pytest
from hypothesis import given, strategies as st

from rangesum.fp_core import (
    MixedModulusError, PrimeModulus, Residue, inverse, is_prime, jacobi_int, legendre,
    legendre_int, legendre_table, lift, reduce,
)
from oracles import legendre_by_squares

SMALL_PRIMES = [p for p in range(3, 102) if all(p % q for q in range(2, p))]


def test_reduce_examples():
    assert reduce(7, 5).value == 2
    assert reduce(-1, 13).value == 12
    assert reduce(0, 11).value == 0


def test_legendre_examples():
    assert legendre(reduce(0, 7)) == 0
    assert legendre(reduce(1, 13)) == 1
    assert legendre(reduce(2, 5)) == -1  # squares mod 5 are {1, 4}


def test_lift_examples():
    assert lift(reduce(3, 7)) == 3
    assert lift(reduce(-1, 7)) == 6
    assert lift(reduce(14, 7)) == 0


def test_inverse_examples():
    assert inverse(reduce(2, 7)).value == 4
    assert inverse(reduce(1, 13)).value == 1
    assert inverse(reduce(3, 7)).value == 5
    with pytest.raises(ZeroDivisionError):
        inverse(reduce(0, 7))


@pytest.mark.parametrize("bad", [1, 2, 4, 9, 91, 561, 1 << 31])
def test_modulus_rejects(bad):
    with pytest.raises(ValueError):
        PrimeModulus(bad)


def test_primality_against_trial_division():
    for n in range(2, 5000):
        assert is_prime(n) == all(n % d for d in range(2, int(n ** 0.5) + 1))
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_prime(n)
    assert is_prime(2147483647)


def test_mixed_modulus_is_an_error():
    with pytest.raises(MixedModulusError):
        reduce(1, 5) + reduce(1, 7)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_legendre_routes_agree_and_multiplicative(p):
    table = legendre_table(p)
    for a in range(p):
        expected = legendre_by_squares(a, p)
        assert legendre_int(a, p) == expected
        assert jacobi_int(a, p) == expected
        assert table[a] == expected
    for a in range(1, p):
        for b in range(1, p):
            assert legendre_int(a, p) * legendre_int(b, p) == legendre_int(a * b, p)
    assert sum(legendre_int(a, p) for a in range(p)) == 0


@pytest.mark.parametrize("p", [3, 5, 13, 101])
def test_reduce_lift_bijection(p):
    assert [lift(reduce(n, p)) for n in range(p)] == list(range(p))
    assert {reduce(n, p) for n in range(-3 * p, 3 * p)} == {reduce(n, p) for n in range(p)}


@given(st.integers(-10**12, 10**12), st.integers(-10**12, 10**12),
       st.sampled_from(SMALL_PRIMES))
def test_residue_arithmetic_matches_integers(a, b, p):
    x, y = reduce(a, p), reduce(b, p)
    assert (x + y).value == (a + b) % p
    assert (x - y).value == (a - b) % p
    assert (x * y).value == (a * b) % p
    if b % p:
        assert (x / y * y) == x


def test_residue_invariant():
    m = PrimeModulus(7)
    with pytest.raises(ValueError):
        Residue(7, m)
    assert m(-3) == Residue(4, m)
