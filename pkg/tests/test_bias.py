"""Bias and correlation: exact routes agree, closed forms hit exactly."""

import pytest

from f2lab.bias import (BiasEstimate, DyadicRational as D, bias_bruteforce,
                        bias_exact, bias_mc, corr_class_max, corr_exact)
from f2lab.errors import CapacityError
from f2lab.f2linalg import BitMatrix, BitVec, mat_rank
from f2lab.prng import Prng
from f2lab.tensors import (DenseTensor, Polynomial, RankDecomposition,
                           RankOneTerm, explicit_form_tensor, first_block_slices,
                           matmul_tensor, random_tensor, trace_tensor)

rng = Prng(31337)


class TestDyadicRational:
    def test_reduction_and_parse(self):
        assert str(D.from_ratio(4, 6)) == "1/2^4"
        assert D.from_ratio(0, 9) == D.zero()
        assert D.parse("29/2^7") == D.from_ratio(29, 7)
        with pytest.raises(ValueError):
            D(2, 1)   # not reduced
        with pytest.raises(ValueError):
            D(-1, 0)

    def test_arithmetic(self):
        assert D.from_ratio(7, 4) + D.from_ratio(1, 4) == D.from_ratio(1, 1)
        assert D.one() - D.from_ratio(1, 2) == D.from_ratio(3, 2)
        assert D.from_ratio(7, 4) * D.from_ratio(2, 3) == D.from_ratio(7, 6)
        assert D.from_ratio(3, 2) ** 3 == D.from_ratio(27, 6)
        with pytest.raises(ValueError):
            D.zero() - D.one()

    def test_ordering_exact(self):
        assert D.from_ratio(7, 4) > D.from_ratio(27, 6)   # 28/64 > 27/64
        assert D.from_ratio(1, 2) <= D.from_ratio(2, 3)
        assert D.from_ratio(7, 4).to_float() == 0.4375

    def test_integers_allowed(self):
        assert (D.one() + D.one()).to_float() == 2.0


def test_bias_zero_tensor():
    z = DenseTensor.zeros(3, 2)
    assert bias_exact(z) == D.one()
    assert bias_bruteforce(z) == D.one()


def test_bias_d1():
    assert bias_exact(DenseTensor(1, 3, 0)) == D.one()
    assert bias_exact(DenseTensor(1, 3, 0b101)) == D.zero()
    assert bias_bruteforce(DenseTensor(1, 3, 0b101)) == D.zero()


@pytest.mark.parametrize("k", range(1, 9))
def test_trace_bias_both_routes(k):
    want = D.from_ratio((1 << (k + 1)) - 1, 2 * k)
    t = trace_tensor(k)
    assert bias_exact(t) == want
    assert bias_bruteforce(t) == want


def test_matmul2_bias_both_routes():
    m2 = matmul_tensor(2)
    assert bias_exact(m2) == D.from_ratio(29, 7)
    assert bias_bruteforce(m2) == D.from_ratio(29, 7)


def test_rank_one_nonzero_bias():
    u = BitVec.from01("11")
    t = RankDecomposition(3, 2, (RankOneTerm((u, u, u)),))
    from f2lab.tensors import tensor_from_decomp
    assert bias_bruteforce(tensor_from_decomp(t)) == D.from_ratio(3, 2)


@pytest.mark.parametrize("d,k", [(d, k) for d in (2, 3, 4) for k in (1, 2, 3, 4)])
def test_explicit_form_bias(d, k):
    want = D.one() - (D.one() - D.half_pow(k)) ** (d - 1)
    assert bias_exact(explicit_form_tensor(d, k)) == want


def test_exact_equals_bruteforce_sweep():
    for _ in range(600):
        d = 1 + rng.below(4)
        k = 1 + rng.below(3)
        if k * d > 12:
            continue
        t = random_tensor(d, k, rng.u64())
        assert bias_exact(t) == bias_bruteforce(t)


def test_bilinear_bias_is_rank_law():
    for _ in range(300):
        k = 2 + rng.below(5)
        t = random_tensor(2, k, rng.u64())
        r = mat_rank(BitMatrix.from_row_ints(first_block_slices(t), k))
        assert bias_exact(t) == D.half_pow(r)


def test_trilinear_bias_floor():
    for _ in range(400):
        k = 2 + rng.below(5)
        t = random_tensor(3, k, rng.u64())
        assert bias_exact(t) >= D.from_ratio((1 << (k + 1)) - 1, 2 * k)


def test_bias_capacity_guards():
    with pytest.raises(CapacityError):
        bias_bruteforce(DenseTensor.zeros(2, 16))
    with pytest.raises(CapacityError):
        bias_exact(DenseTensor.zeros(4, 16))


def test_bias_mc_zero_tensor_and_reproducibility():
    est = bias_mc(DenseTensor.zeros(3, 2), 200, 0.95, seed=4)
    assert est.point == 1.0
    assert bias_mc(trace_tensor(3), 500, 0.9, seed=8) == bias_mc(
        trace_tensor(3), 500, 0.9, seed=8)


def test_bias_mc_tracks_exact_value():
    import math
    t4 = trace_tensor(4)
    est = bias_mc(t4, 100_000, 0.95, seed=11)
    assert abs(est.point - bias_exact(t4).to_float()) <= est.ci_halfwidth
    assert est.ci_halfwidth == pytest.approx(
        math.sqrt(math.log(2 / 0.05) / (2 * 100_000)))


def test_bias_mc_coverage():
    # statistical acceptance of the interval: on a high-bias target the
    # nominal level genuinely holds for the +-1 estimator
    t = DenseTensor(4, 1, 1)        # f = x1 x2 x3 x4, bias 7/8
    exact = bias_exact(t).to_float()
    hits = 0
    for rep in range(100):
        est = bias_mc(t, 2_000, 0.95, seed=1000 + rep)
        if abs(est.point - exact) <= est.ci_halfwidth:
            hits += 1
    assert hits >= 95


def test_bias_mc_worker_sharding_determinism(monkeypatch):
    t = trace_tensor(3)
    a = bias_mc(t, 999, 0.9, seed=5, threads=3)
    b = bias_mc(t, 999, 0.9, seed=5, threads=3)
    c = bias_mc(t, 999, 0.9, seed=5, threads=1)
    assert a == b
    assert a.samples == c.samples  # same contract, different schedule


def test_corr_exact_cases():
    tr2 = trace_tensor(2)
    assert corr_exact(tr2, Polynomial(6, ())) == D.from_ratio(7, 4)
    monos = []
    for i in range(2):
        for j in range(2):
            for l in range(2):
                if tr2.entry((i, j, l)):
                    monos.append((i, 2 + j, 4 + l))
    assert corr_exact(tr2, Polynomial.reduce(6, monos)) == D.one()
    z = DenseTensor.zeros(3, 2)
    assert corr_exact(z, Polynomial(6, ((0,),))) == D.zero()


def test_corr_exact_symmetry_under_difference():
    # bias(f - g) = bias(g - f): over F2 the difference is the same
    # function, so swapping the roles must not change anything
    t = random_tensor(2, 2, 17)
    p = Polynomial.reduce(4, [(0,), (1, 3)])
    v1 = corr_exact(t, p)
    zero = DenseTensor.zeros(2, 2)
    f_monos = []
    for i in range(2):
        for j in range(2):
            if t.entry((i, j)):
                f_monos.append((i, 2 + j))
    swapped = Polynomial.reduce(4, f_monos + list(p.monomials))
    assert corr_exact(zero, swapped) == v1


def test_corr_exact_validates_variables():
    with pytest.raises(ValueError):
        corr_exact(trace_tensor(2), Polynomial(5, ()))


def test_corr_class_max_contains_self():
    t = random_tensor(2, 2, 5)
    val, _ = corr_class_max(t, 4)
    assert val == D.one()
    val, wit = corr_class_max(DenseTensor.zeros(2, 2), 0)
    assert val == D.one() and wit.monomials == ()


def test_corr_class_max_identity_affine():
    # both diagonal entries set: f = x1 y1 + x2 y2; every affine
    # polynomial sits at correlation exactly 1/4
    ident = DenseTensor(2, 2, 0b1001)
    val, wit = corr_class_max(ident, 1)
    assert val == D.from_ratio(1, 2)
    assert wit.degree() <= 1
    assert corr_exact(ident, wit) == val


def test_corr_class_max_guard_reports_size():
    with pytest.raises(CapacityError) as ei:
        corr_class_max(random_tensor(2, 4, 1), 4)
    assert "2^" in str(ei.value)
