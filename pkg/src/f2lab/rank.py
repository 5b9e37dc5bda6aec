"""Tensor rank for small instances and rank lower bounds.

Three bound routes live here:

* the exact meet-in-the-middle search (`rank_exact`), usable as ground
  truth at toy sizes;
* the bias ladder (`rank_lb_bias`): any tensor whose form has bias b
  has rank at least the first t with (1 - 2^(1-d))^t <= b, by exact
  rational comparison;
* the kernel/dual-code certificate (`code_certificate`): for a d=3
  decomposition, the first-block vectors define a matrix whose kernel K
  and dual code K-perp reconstruct the bias as
  (|K|/2^t) * sum_{v in K-perp} 2^-rank(M_v); the certificate records
  the dual dimension and its minimum weight, the quantities a
  rate-distance bound converts into a rank lower bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

from ._bitops import budget_bytes
from .bias import DyadicRational, bias_exact
from .errors import CapacityError
from .f2linalg import (BitMatrix, BitVec, dual_space, kernel, mat_rank,
                       min_weight, rank_of_row_ints, span_rank_histogram)
from .numerics import mrrw_constant
from .tensors import DenseTensor, RankDecomposition, RankOneTerm, first_block_slices

RANK_COUNT_MAX_N = 16


@dataclass(frozen=True)
class RankBoundCertificate:
    """A checked tensor-rank lower bound and the data that witnesses it."""

    method: str                      # "bias" or "code"
    lower_bound: int
    bias_used: DyadicRational | None = None
    kernel_dim: int | None = None
    dual_dim: int | None = None
    dual_min_weight: int | None = None
    reconstructed_bias: DyadicRational | None = None

    def to_json(self) -> str:
        payload = {"method": self.method, "lower_bound": self.lower_bound}
        if self.bias_used is not None:
            payload["bias_used"] = str(self.bias_used)
        if self.kernel_dim is not None:
            payload["kernel_dim"] = self.kernel_dim
            payload["dual_dim"] = self.dual_dim
            payload["dual_min_weight"] = self.dual_min_weight
            payload["reconstructed_bias"] = str(self.reconstructed_bias)
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class RankDistribution:
    """counts[r] = number of n x n matrices over F2 of rank r."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if sum(self.counts) != 1 << (self.n * self.n):
            raise ValueError("counts do not cover all matrices")

    def prob(self, r: int) -> DyadicRational:
        return DyadicRational.from_ratio(self.counts[r], self.n * self.n)


# ---------------------------------------------------------------------------
# Exact rank search.
# ---------------------------------------------------------------------------


def _base_terms(d: int, k: int) -> tuple[list[int], list[tuple[int, ...]]]:
    """All rank-one tensors with nonzero factor vectors, as packed bits.

    Zero factors never help a minimal decomposition, so they are
    excluded from the search base.
    """
    vecs = list(range(1, 1 << k))
    bits_out: list[int] = []
    vecs_out: list[tuple[int, ...]] = []

    def rec(level: int, acc: int, chosen: tuple[int, ...]):
        if level == d:
            bits_out.append(acc)
            vecs_out.append(chosen)
            return
        for v in vecs:
            nxt = 0
            rest = acc
            while rest:
                low = rest & -rest
                nxt |= v << ((low.bit_length() - 1) * k)
                rest ^= low
            rec(level + 1, nxt, chosen + (v,))

    rec(0, 1, ())
    return bits_out, vecs_out


def _mitm_budget_entries(budget: int | None) -> int:
    return max(1 << 12, budget_bytes(budget) // 64)


def _check_search_size(nbase: int, half: int, budget: int | None):
    entries = comb(nbase, half) if half <= nbase else 0
    cap = _mitm_budget_entries(budget)
    if entries > cap:
        raise CapacityError(
            f"meet-in-the-middle table of C({nbase},{half}) = {entries} "
            f"entries exceeds the {cap}-entry budget",
            required=entries, budget=cap)


def rank_exact(t: DenseTensor, t_max: int, *, budget: int | None = None) -> int | None:
    """Exact tensor rank if it is <= t_max, else None.

    d=2 delegates to matrix rank (never guards); d=1 is 0/1.  Otherwise
    a meet-in-the-middle search over sums of rank-one tensors with
    canonical packed-bits hashing; the table budget guards the search.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if t.bits == 0:
        return 0
    if t.d == 1:
        return 1 if t_max >= 1 else None
    if t.d == 2:
        r = mat_rank(BitMatrix.from_row_ints(first_block_slices(t), t.k))
        return r if r <= t_max else None
    base_bits, _ = _base_terms(t.d, t.k)
    _check_search_size(len(base_bits), (t_max + 1) // 2, budget)
    # sums of exactly m distinct base terms, for m up to ceil(t_max/2)
    sums: list[set[int]] = [{0}]
    for m in range(1, (t_max + 1) // 2 + 1):
        layer: set[int] = set()
        for combo in combinations(base_bits, m):
            acc = 0
            for b in combo:
                acc ^= b
            layer.add(acc)
        sums.append(layer)
    for tt in range(1, t_max + 1):
        a = (tt + 1) // 2
        b = tt - a
        probe = sums[b]
        target = t.bits
        if any((target ^ v) in probe for v in sums[a]):
            return tt
    return None


def decompositions(t: DenseTensor, length: int, *,
                   budget: int | None = None) -> Iterator[RankDecomposition]:
    """All decompositions of `t` into `length` distinct rank-one terms.

    Direct enumeration of term combinations; guarded by the same budget
    as the rank search.
    """
    if t.d < 2:
        raise ValueError("decomposition search needs d >= 2")
    base_bits, base_vecs = _base_terms(t.d, t.k)
    total = comb(len(base_bits), length)
    cap = _mitm_budget_entries(budget)
    if total > cap:
        raise CapacityError(
            f"enumerating C({len(base_bits)},{length}) = {total} combinations "
            f"exceeds the {cap}-entry budget", required=total, budget=cap)
    for idxs in combinations(range(len(base_bits)), length):
        acc = 0
        for i in idxs:
            acc ^= base_bits[i]
        if acc == t.bits:
            terms = tuple(
                RankOneTerm(tuple(BitVec(t.k, v) for v in base_vecs[i]))
                for i in idxs)
            yield RankDecomposition(t.d, t.k, terms)


def rank_lb_bias(bias: DyadicRational, d: int) -> int:
    """Rank lower bound from bias: 1 + max{t : (1 - 2^(1-d))^t > bias}.

    Exact rational ladder, no floating logarithms; any tensor of this
    bias has rank at least the returned value.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if bias.numerator == 0 or bias > DyadicRational.one():
        raise ValueError("bias must lie in (0, 1]")
    if bias == DyadicRational.one():
        return 0
    c = DyadicRational.from_ratio((1 << (d - 1)) - 1, d - 1)  # 1 - 2^(1-d)
    power = DyadicRational.one()
    t = 0
    while power > bias:
        t += 1
        power = power * c
    return t


def code_certificate(decomp: RankDecomposition, *,
                     budget: int | None = None) -> RankBoundCertificate:
    """Kernel/dual-code certificate for a d=3 decomposition.

    Builds the k x t matrix A of first-block vectors, K = ker(A) and its
    dual, enumerates the dual code reconstructing the bias exactly, and
    records the dual minimum weight.  When the tensor has no zero
    first-block contraction, dim K = t - k is asserted.
    """
    if decomp.d != 3:
        raise ValueError("code certificates are for 3-dimensional decompositions")
    k, t = decomp.k, decomp.t
    if k > 24:
        raise CapacityError("dual-code enumeration needs k <= 24", required=1 << k)
    a_cols = [term.vectors[0] for term in decomp.terms]
    a_rows = [0] * k
    for i, col in enumerate(a_cols):
        for r in range(k):
            if (col.bits >> r) & 1:
                a_rows[r] |= 1 << i
    a = BitMatrix.from_row_ints(a_rows, t)
    ker = kernel(a)
    dual = dual_space(ker)
    dmw = min_weight(dual)

    # M_v = sum over set coordinates of v of y_i (x) z_i
    def pair_matrix(sel_bits: int) -> BitMatrix:
        rows = [0] * k
        s = sel_bits
        while s:
            low = s & -s
            i = low.bit_length() - 1
            s ^= low
            y = decomp.terms[i].vectors[1].bits
            z = decomp.terms[i].vectors[2].bits
            for r in range(k):
                if (y >> r) & 1:
                    rows[r] ^= z
        return BitMatrix.from_row_ints(rows, k)

    if dual.dim == 0:
        counts = [1]  # only v = 0, the zero matrix
    else:
        gens = [pair_matrix(v.bits) for v in dual.basis]
        counts = span_rank_histogram(gens, budget=budget)
    top = len(counts) - 1
    num = 0
    for r, c in enumerate(counts):
        num += c << (top - r)
    # (|K| / 2^t) * sum_v 2^-rank(M_v)
    reconstructed = DyadicRational.from_ratio(num, top + t - ker.dim)
    tensor = _decomp_tensor(decomp)
    direct = bias_exact(tensor, budget=budget)
    assert reconstructed == direct, "code-certificate bias identity violated"
    # nondegenerate in the first block: no x != 0 kills the whole form,
    # i.e. the k first-index slices are linearly independent
    if rank_of_row_ints(first_block_slices(tensor)) == k:
        assert ker.dim == t - k, "kernel dimension should be t - k"
    return RankBoundCertificate(
        method="code",
        lower_bound=rank_lb_bias(direct, 3),
        kernel_dim=ker.dim,
        dual_dim=dual.dim,
        dual_min_weight=dmw,
        reconstructed_bias=reconstructed)


def _decomp_tensor(decomp: RankDecomposition) -> DenseTensor:
    from .tensors import tensor_from_decomp
    return tensor_from_decomp(decomp)


def mrrw_rank_lb(k: int) -> float:
    """Asymptotic rank lower bound c* k for minimal-bias 3-tensors.

    c* = 1/rho* with rho* the fixed point of the rate-distance curve
    rho = h2(1/2 - sqrt(rho(1-rho))); applies when a tensor's
    certificate shows dual_dim = k and dual_min_weight >= k for a
    family of growing k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    _, inv = mrrw_constant(1e-9)
    return inv * k


def rank_count(n: int) -> RankDistribution:
    """Exact rank counts of n x n matrices by the subspace product formula."""
    if not 1 <= n <= RANK_COUNT_MAX_N:
        raise CapacityError(f"rank_count needs 1 <= n <= {RANK_COUNT_MAX_N}")
    counts = []
    for r in range(n + 1):
        surj = 1
        for i in range(r):
            surj *= (1 << n) - (1 << i)
        denom = 1
        for i in range(r):
            denom *= (1 << r) - (1 << i)
        counts.append(surj * surj // denom)
    return RankDistribution(n, tuple(counts))


def corank_bound_margin(n: int) -> list[tuple[int, DyadicRational, DyadicRational, float]]:
    """Per-rank comparison of the exact rank probability against the
    2^-(n-r)^2 corank bound.

    Report-only: the bound is violated by a bounded constant factor at
    small n (e.g. 9/16 > 1/2 at n=2, r=1), so callers must not assert
    it; downstream consequences are asserted on their own.
    """
    dist = rank_count(n)
    rows = []
    for r in range(n + 1):
        exact = dist.prob(r)
        bound = DyadicRational.half_pow((n - r) ** 2)
        ratio = exact.to_float() / bound.to_float()
        rows.append((r, exact, bound, ratio))
    return rows


def matmul_bias_exact(n: int) -> DyadicRational:
    """Bias of the n x n matrix product tensor via the rank distribution.

    sum_r counts[r] 2^(-n r) / 2^(n^2), exactly; cross-checked against
    the generic tensor path for n <= 2.
    """
    dist = rank_count(n)
    num = 0
    for r, c in enumerate(dist.counts):
        num += c << (n * (n - r))
    value = DyadicRational.from_ratio(num, n * n + n * n)
    if n <= 2:
        from .tensors import matmul_tensor
        assert value == bias_exact(matmul_tensor(n))
    return value
