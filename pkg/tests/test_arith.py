from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pix.arith import (
    MR_BOUND,
    Modulus,
    Place,
    SearchCeilingExceeded,
    format_rational,
    is_prime,
    is_square_local,
    legendre,
    parse_rational,
    prime_in_progression,
    primes_up_to,
    rational_square_class,
    sqrt_mod_prime,
    sqrt_unit_padic,
    squarefree_part,
    val,
)

nonzero_rationals = st.fractions(min_value=-10**6, max_value=10**6).filter(lambda x: x != 0)
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13, 97])


def test_val_examples():
    assert val(8, 2) == 3
    assert val(Fraction(10, 9), 3) == -2
    assert val(Fraction(-3, 4), 5) == 0
    with pytest.raises(ValueError, match="valuation of zero"):
        val(0, 5)


@given(nonzero_rationals, nonzero_rationals, small_primes)
def test_val_is_a_valuation(x, y, p):
    assert val(x * y, p) == val(x, p) + val(y, p)
    if x + y:
        assert val(x + y, p) >= min(val(x, p), val(y, p))
        if val(x, p) != val(y, p):
            assert val(x + y, p) == min(val(x, p), val(y, p))


def test_legendre_examples():
    assert legendre(1, 3) == 1
    assert legendre(2, 3) == -1
    assert legendre(4, 17) == 1
    assert legendre(34, 17) == 0
    for bad in (2, 9, 15):
        with pytest.raises(ValueError):
            legendre(1, bad)


@pytest.mark.parametrize("p", [p for p in primes_up_to(97) if p > 2])
def test_legendre_against_residue_table(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(-p, 2 * p):
        expect = 0 if a % p == 0 else (1 if a % p in squares else -1)
        assert legendre(a, p) == expect
    for a in range(1, p):
        for b in range(1, p, 7):
            assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


def test_is_square_local_examples():
    assert is_square_local(9, Place.real())
    assert not is_square_local(-9, Place.real())
    assert is_square_local(17, Place(2))
    assert not is_square_local(3, Place(3))
    assert not is_square_local(5, Place(2))
    assert is_square_local(Fraction(4, 25), Place(5))


def _brute_square(x: Fraction, p: int) -> bool:
    # x = p^v u; square iff v even and u is a square mod p^k for k large enough
    v = val(x, p)
    if v % 2:
        return False
    u = x / Fraction(p) ** v
    k = 3 if p == 2 else 1
    mod = p**k
    un = u.numerator * pow(u.denominator, -1, mod) % mod
    return any(y * y % mod == un for y in range(mod))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_is_square_local_brute(p):
    for num in range(-60, 61):
        for den in (1, 2, 3, 4, 9, 25):
            if num == 0:
                continue
            x = Fraction(num, den)
            assert is_square_local(x, Place(p)) == _brute_square(x, p), x


def test_place_validation_and_json():
    with pytest.raises(ValueError):
        Place(4)
    assert Place.from_json(Place(7).to_json()) == Place(7)
    assert Place.from_json("real").is_real


def test_prime_in_progression_examples():
    assert prime_in_progression(1, Modulus.of(4)) == 5
    assert prime_in_progression(2, Modulus.of(3)) == 2
    assert prime_in_progression(1, Modulus.of(8)) == 17
    assert prime_in_progression(1, Modulus.of(4), exclusions={5}) == 13
    assert prime_in_progression(1, Modulus.of(1)) == 2


def test_prime_in_progression_ceiling(monkeypatch):
    with pytest.raises(SearchCeilingExceeded):
        prime_in_progression(1, Modulus.of(120120), ceiling=100)
    monkeypatch.setenv("PIX_SEARCH_CEILING", "1000")
    with pytest.raises(SearchCeilingExceeded):
        prime_in_progression(1, Modulus.of(120120))


def test_is_prime_against_sympy():
    for n in list(range(-5, 5000)) + [2**61 - 1, 2**31 - 1, 3215031751, 341550071728321, 3825123056546413051]:
        assert is_prime(n) == sympy.isprime(n), n
    big = next(n for n in range(MR_BOUND, MR_BOUND + 1000) if all(n % q for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)))
    with pytest.raises(ValueError):
        is_prime(big)


def test_square_roots():
    for p in (3, 5, 13, 17, 97, 120121):
        for a in range(1, 60):
            r = sqrt_mod_prime(a, p)
            if legendre(a, p) == 1:
                assert r * r % p == a % p
            elif a % p:
                assert r is None
    r = sqrt_unit_padic(17, 2, 10)
    assert r * r % 2**10 == 17
    r = sqrt_unit_padic(2, 7, 5)
    assert r * r % 7**5 == 2
    assert sqrt_unit_padic(3, 7, 3) is None


def test_square_classes():
    assert squarefree_part(72) == 2
    assert squarefree_part(-27) == -3
    assert rational_square_class(Fraction(-8, 9)) == -2
    assert rational_square_class(Fraction(3, 2)) == 6


@settings(max_examples=200)
@given(st.fractions(max_denominator=10**6))
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_parse_rejects_decimals():
    with pytest.raises(ValueError):
        parse_rational("0.5")
