import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_gf_mul
from dssfade.gf import (
    FieldElement,
    FieldParams,
    add,
    field,
    from_bits,
    is_irreducible,
    mul,
    smallest_irreducible,
    to_bits,
)


def test_default_polynomials():
    assert smallest_irreducible(2) == 0b111
    assert smallest_irreducible(4) == 0b10011
    assert smallest_irreducible(6) == 0b1000011
    assert smallest_irreducible(8) == 0x11B


def test_irreducibility_check():
    assert not is_irreducible(0b101)  # x^2 + 1 = (x + 1)^2
    assert not is_irreducible(0b10101)  # (x^2 + x + 1)^2
    assert is_irreducible(0b1011)
    for m in range(1, 17):
        assert is_irreducible(smallest_irreducible(m))


def test_bad_params():
    with pytest.raises(ValueError):
        FieldParams(0)
    with pytest.raises(ValueError):
        FieldParams(17)
    with pytest.raises(ValueError, match="reducible"):
        FieldParams(2, 0b101)
    with pytest.raises(ValueError, match="degree"):
        FieldParams(3, 0b111)


def test_add_examples():
    f = field(2)
    assert add(f(0b10), f(0b11)) == f(0b01)
    for a in f.elements():
        assert a + a == f(0)
        assert a + f(0) == a


def test_mul_examples():
    f = field(2)
    assert mul(f(0b10), f(0b10)) == f(0b11)
    for a in f.elements():
        assert a * f(1) == a


def test_field_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        field(2)(1) + field(3)(1)
    with pytest.raises(ValueError):
        field(2)(4)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 7, 8])
def test_multiplicative_group_order(m):
    f = field(m)
    for a in range(1, f.q):
        assert f.pow_int(a, f.q - 1) == 1


@pytest.mark.parametrize("m", [2, 4, 6])
def test_mul_matches_naive_oracle(m):
    f = field(m)
    table = f.mul_table()
    expected = np.array([[naive_gf_mul(a, b, f.poly, m) for b in range(f.q)] for a in range(f.q)])
    assert np.array_equal(table, expected)
    for a, b in itertools.product(range(f.q), repeat=2):
        assert f.mul_int(a, b) == table[a, b]


@pytest.mark.parametrize("m", [2, 4, 6])
def test_field_axioms_exhaustive(m):
    f = field(m)
    q = f.q
    M = f.mul_table()
    e = np.arange(q)
    # commutativity
    assert np.array_equal(M, M.T)
    # associativity over all q^3 triples: (a*b)*c == a*(b*c)
    assert np.array_equal(M[M[:, :, None], e[None, None, :]], M[e[:, None, None], M[None, :, :]])
    # distributivity: a*(b^c) == a*b ^ a*c
    bc = e[:, None] ^ e[None, :]
    lhs = M[e[:, None, None], bc[None, :, :]]
    rhs = M[:, :, None] ^ M[:, None, :]
    assert np.array_equal(lhs, rhs)
    # additive structure is XOR: associative, identity 0, self-inverse
    assert np.array_equal((e[:, None, None] ^ e[None, :, None]) ^ e, e[:, None, None] ^ (e[None, :, None] ^ e))
    # inverses: every nonzero row contains exactly one 1
    assert all(np.count_nonzero(M[a] == 1) == 1 for a in range(1, q))
    assert np.all(M[0] == 0)
    for a in range(1, q):
        x = f(a)
        assert x * x.inverse() == f(1)


def test_bits_round_trip_exhaustive():
    f = field(4)
    seen = set()
    for bits in itertools.product((0, 1), repeat=4):
        a = from_bits(bits, f)
        assert to_bits(a) == bits
        seen.add(a.value)
    assert len(seen) == 16
    assert from_bits([0, 0, 0, 0], f) == f(0)
    assert from_bits([1, 0, 0, 0], f).value == 1  # bit i is the x^i coefficient


@pytest.mark.parametrize("m", range(1, 9))
def test_from_bits_injective(m):
    f = field(m)
    vals = {from_bits(b, f).value for b in itertools.product((0, 1), repeat=m)}
    assert len(vals) == f.q


def test_from_bits_bad_length():
    with pytest.raises(ValueError):
        from_bits([0, 1, 1], field(2))


def test_mul_row_matches_scalar():
    f = field(12)
    rng = np.random.default_rng(0)
    for a in rng.integers(0, f.q, 5):
        row = f.mul_row(int(a))
        for b in rng.integers(0, f.q, 50):
            assert row[b] == f.mul_int(int(a), int(b))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 16).flatmap(lambda m: st.tuples(st.just(m), *(st.integers(0, (1 << m) - 1),) * 3)))
def test_axioms_random_large_fields(args):
    m, a, b, c = args
    f = field(m)
    A, B, C = f(a), f(b), f(c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A
    assert A * B == f(naive_gf_mul(a, b, f.poly, m))
    if a:
        assert A * A.inverse() == f(1)
        assert (A * B) / A == B
