"""GF(2^k) arithmetic and the trace map."""

import pytest

from f2lab.gf2k import _smallest_irreducible, gf_mul, make_field, trace


def test_canonical_moduli():
    assert _smallest_irreducible(1) == 0b10       # x
    assert _smallest_irreducible(2) == 0b111      # x^2 + x + 1
    assert _smallest_irreducible(3) == 0b1011     # x^3 + x + 1
    assert _smallest_irreducible(4) == 0b10011    # x^4 + x + 1


def test_make_field_range():
    with pytest.raises(ValueError):
        make_field(0)
    with pytest.raises(ValueError):
        make_field(65)


def test_gf4_multiplication_table():
    f = make_field(2)
    w = f.basis(1)
    assert (w * w).bits == 0b11          # x^2 = x + 1
    assert gf_mul(w, f.one()) == w
    assert gf_mul(w, f.zero()).bits == 0


def test_field_mismatch_rejected():
    a = make_field(2).one()
    b = make_field(3).one()
    with pytest.raises(ValueError):
        gf_mul(a, b)


def test_trace_small_values():
    f4 = make_field(2)
    assert trace(f4.zero()) == 0
    assert trace(f4.one()) == 0           # 1 + 1
    assert trace(f4.basis(1)) == 1        # w + w^2 = 1
    f8 = make_field(3)
    assert trace(f8.one()) == 1           # three copies of 1


@pytest.mark.parametrize("k", range(1, 9))
def test_trace_linear_and_frobenius(k):
    f = make_field(k)
    els = list(f.elements())
    for a in els:
        assert trace(a * a) == trace(a)
    step = max(1, len(els) // 32)
    for a in els[::step]:
        for b in els[::step]:
            assert trace(a + b) == trace(a) ^ trace(b)


@pytest.mark.parametrize("k", range(1, 17))
def test_trace_balance(k):
    f = make_field(k)
    assert sum(f.trace_bits(a) for a in range(1 << k)) == 1 << (k - 1)


@pytest.mark.parametrize("k", range(1, 9))
def test_trace_nondegenerate(k):
    f = make_field(k)
    els = list(f.elements())
    for a in els:
        if a.bits:
            assert any(trace(a * b) for b in els)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_field_axioms_exhaustive(k):
    f = make_field(k)
    els = list(f.elements())
    for a in els:
        assert (a * f.one()) == a
        for b in els:
            assert a * b == b * a
            for c in els:
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


def test_pow_matches_repeated_mul():
    f = make_field(5)
    a = f.element(0b10110)
    acc = f.one()
    for e in range(10):
        assert a ** e == acc
        acc = acc * a
