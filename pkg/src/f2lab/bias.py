"""Exact and Monte-Carlo bias/correlation of multilinear forms.

Every exact probability here is a dyadic rational held as an integer
numerator over a power-of-two denominator, so equality with closed
forms is literal, not approximate.

Two independent exact routes are kept deliberately separate:

* `bias_bruteforce` walks every input assignment, counting ones of the
  form block by block (the last block is materialized as a literal
  truth table and popcounted).  It knows nothing about ranks.
* `bias_exact` enumerates only the first d-2 blocks; each residual
  bilinear form contributes 2^-rank, computed by the bit-sliced batched
  rank kernel.  All contributions are nonnegative probabilities, so the
  absolute value in the definition never needs a sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ._bitops import (budget_bytes, gray_flips, linear_form_table, ones,
                      var_mask, worker_count)
from .errors import CapacityError
from .f2linalg import BitMatrix, BitVec, mat_rank, span_rank_histogram, _batched_rank_histogram
from .prng import Prng
from .tensors import DenseTensor, Polynomial, first_block_slices

BRUTEFORCE_MAX_BITS = 30  # full-table enumerations up to 2^30 inputs
CORR_MAX_VARS = 26


@dataclass(frozen=True, order=False)
class DyadicRational:
    """Exact nonnegative value numerator / 2^exponent, kept reduced."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.numerator < 0 or self.exponent < 0:
            raise ValueError("numerator and exponent must be nonnegative")
        if self.numerator == 0:
            if self.exponent != 0:
                raise ValueError("zero must carry exponent 0")
        elif self.numerator % 2 == 0 and self.exponent != 0:
            raise ValueError("numerator must be odd (reduced form)")

    @classmethod
    def from_ratio(cls, numerator: int, exponent: int) -> "DyadicRational":
        if numerator < 0:
            raise ValueError("negative value")
        if numerator == 0:
            return cls(0, 0)
        while numerator % 2 == 0 and exponent > 0:
            numerator //= 2
            exponent -= 1
        if exponent < 0:
            raise ValueError("value exceeds dyadic range")
        return cls(numerator, exponent)

    @classmethod
    def zero(cls) -> "DyadicRational":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "DyadicRational":
        return cls(1, 0)

    @classmethod
    def half_pow(cls, e: int) -> "DyadicRational":
        """2^-e."""
        return cls(1, e)

    @classmethod
    def parse(cls, s: str) -> "DyadicRational":
        num, _, rest = s.partition("/")
        if not rest.startswith("2^"):
            raise ValueError(f"not a dyadic literal: {s!r}")
        return cls.from_ratio(int(num), int(rest[2:]))

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent),
                other.numerator << (e - other.exponent), e)

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._aligned(other)
        return DyadicRational.from_ratio(a + b, e)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._aligned(other)
        if a < b:
            raise ValueError("dyadic values here are nonnegative")
        return DyadicRational.from_ratio(a - b, e)

    def __mul__(self, other: "DyadicRational") -> "DyadicRational":
        return DyadicRational.from_ratio(self.numerator * other.numerator,
                                         self.exponent + other.exponent)

    def __pow__(self, e: int) -> "DyadicRational":
        if e < 0:
            raise ValueError("negative power")
        return DyadicRational.from_ratio(self.numerator ** e, self.exponent * e)

    def _cmp(self, other: "DyadicRational") -> int:
        a, b, _ = self._aligned(other)
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def to_float(self) -> float:
        num = self.numerator
        e = self.exponent
        if num.bit_length() > 60:
            shift = num.bit_length() - 60
            num >>= shift
            e -= shift
        return math.ldexp(num, -e)

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"


def dyadic_mean(values: Iterable[DyadicRational], log2_count: int) -> DyadicRational:
    """Exact mean of 2^log2_count values."""
    total = DyadicRational.zero()
    n = 0
    for v in values:
        total = total + v
        n += 1
    if n != 1 << log2_count:
        raise ValueError("value count is not 2^log2_count")
    return DyadicRational.from_ratio(total.numerator, total.exponent + log2_count)


@dataclass(frozen=True)
class BiasEstimate:
    """Monte-Carlo estimate of E(-1)^f with a Hoeffding interval.

    Cannot resolve biases much below 1/sqrt(samples); exact routes exist
    for that.
    """

    point: float
    ci_halfwidth: float
    samples: int
    confidence: float
    seed: int


def _hoeffding_halfwidth(samples: int, confidence: float) -> float:
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0,1)")
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * samples))


# ---------------------------------------------------------------------------
# Exact bias: first d-2 blocks enumerated, residual matrices ranked in bulk.
# ---------------------------------------------------------------------------


def _histogram_to_mean(counts: Sequence[int], log2_batch: int) -> DyadicRational:
    """sum_r counts[r] 2^-r divided by 2^log2_batch, exactly."""
    top = len(counts) - 1
    num = 0
    for r, c in enumerate(counts):
        num += c << (top - r)
    return DyadicRational.from_ratio(num, top + log2_batch)


def _tail_matrix_planes(t: DenseTensor, prefix_bits: int) -> list[list[int]]:
    """Truth tables over the 2^prefix_bits prefixes of M(prefix)[i][j].

    Block r (0-based, r <= d-3) occupies bits [(d-3-r)k, (d-2-r)k) of the
    prefix index, so the first block is slowest, matching the flat
    layout of the tensor itself.
    """
    k, d = t.k, t.d
    m = prefix_bits

    def table(bits: int, dims: int) -> int:
        # truth table of the dims-linear form of `bits` over k*dims inputs,
        # first block at the high bits of the input index
        if dims == 1:
            return linear_form_table(bits, k)
        step = k ** (dims - 1)
        mask = ones(step)
        slices = [(bits >> (i * step)) & mask for i in range(k)]
        width = 1 << (k * (dims - 1))
        out = 0
        for x in range(1 << k):
            acc = 0
            xb = x
            while xb:
                low = xb & -xb
                acc ^= slices[low.bit_length() - 1]
                xb ^= low
            out |= table(acc, dims - 1) << (x * width)
        return out

    planes = [[0] * k for _ in range(k)]
    kk = k * k
    for i in range(k):
        for j in range(k):
            sub = 0
            pos = i * k + j
            for p in range(k ** (d - 2)):
                sub |= ((t.bits >> (p * kk + pos)) & 1) << p
            planes[i][j] = table(sub, d - 2)
    return planes


def bias_exact(t: DenseTensor, *, budget: int | None = None) -> DyadicRational:
    """|E (-1)^f_T| exactly.

    d=1 is 1 or 0 directly; d=2 is 2^-rank; for d >= 3 the first d-2
    blocks are enumerated and each residual bilinear form contributes
    2^-rank via the batched kernel.
    """
    k, d = t.k, t.d
    if d == 1:
        return DyadicRational.one() if t.bits == 0 else DyadicRational.zero()
    if d == 2:
        rows = first_block_slices(t)
        return DyadicRational.half_pow(mat_rank(BitMatrix.from_row_ints(rows, k)))
    prefix_bits = k * (d - 2)
    if prefix_bits > BRUTEFORCE_MAX_BITS:
        raise CapacityError(
            f"bias_exact needs 2^{prefix_bits} residual matrices "
            f"(guard 2^{BRUTEFORCE_MAX_BITS})",
            required=1 << prefix_bits, budget=1 << BRUTEFORCE_MAX_BITS)
    if d == 3:
        slices = first_block_slices(t)
        gens = [BitMatrix.from_row_ints(
                    [(s >> (i * k)) & ones(k) for i in range(k)], k)
                for s in slices]
        counts = span_rank_histogram(gens, budget=budget)
    else:
        plane_bytes = (k * k << prefix_bits) >> 3
        if plane_bytes > budget_bytes(budget):
            raise CapacityError(
                f"residual-matrix planes need {plane_bytes} bytes",
                required=plane_bytes, budget=budget_bytes(budget))
        planes = _tail_matrix_planes(t, prefix_bits)
        counts = _batched_rank_histogram(planes, k, k, 1 << prefix_bits)
    return _histogram_to_mean(counts, prefix_bits)


# ---------------------------------------------------------------------------
# Literal brute force and correlation (streaming truth tables).
# ---------------------------------------------------------------------------


def _stream_ones(t: DenseTensor,
                 prefix_chunk: Callable[[int], int] | None = None) -> int:
    """Count inputs where the form (xor'ed with an optional polynomial
    chunk) evaluates to 1, visiting every assignment.

    Blocks 1..d-1 are enumerated outermost-first in Gray order; the last
    block is materialized as a 2^k-bit truth table per prefix and
    popcounted.  `prefix_chunk(prefix_value)` supplies the extra table
    to xor in; prefix_value packs block j (0-based, j < d-1) at bits
    [(d-2-j)k, (d-1-j)k).
    """
    k, d = t.k, t.d
    vm = [var_mask(i, k) for i in range(k)]

    if d == 1:
        tbl = linear_form_table(t.bits, k)
        if prefix_chunk is not None:
            tbl ^= prefix_chunk(0)
        return tbl.bit_count()

    def base_case(matrix_bits: int, prefix_val: int) -> int:
        # matrix_bits: k x k residual over the last two blocks
        row_tables = []
        for i in range(k):
            row = (matrix_bits >> (i * k)) & ones(k)
            rt = 0
            rb = row
            while rb:
                low = rb & -rb
                rt ^= vm[low.bit_length() - 1]
                rb ^= low
            row_tables.append(rt)
        cnt = 0
        tbl = 0
        if prefix_chunk is None:
            for flip in gray_flips(k):
                tbl ^= row_tables[flip]
                cnt += tbl.bit_count()
        else:
            val = prefix_val
            cnt += prefix_chunk(val).bit_count()
            for flip in gray_flips(k):
                tbl ^= row_tables[flip]
                val ^= 1 << flip
                cnt += (tbl ^ prefix_chunk(val)).bit_count()
        return cnt

    def walk(bits: int, dims: int, prefix_val: int, shift: int) -> int:
        if dims == 2:
            return base_case(bits, prefix_val)
        step = t.k ** (dims - 1)
        mask = ones(step)
        slices = [(bits >> (i * step)) & mask for i in range(k)]
        cnt = walk(0, dims - 1, prefix_val, shift - k)
        cur = 0
        val = prefix_val
        for flip in gray_flips(k):
            cur ^= slices[flip]
            val ^= 1 << (shift + flip)
            cnt += walk(cur, dims - 1, val, shift - k)
        return cnt

    return walk(t.bits, d, 0, k * (d - 2))


def bias_bruteforce(t: DenseTensor, *, budget: int | None = None) -> DyadicRational:
    """Bias by literal enumeration of all 2^(kd) inputs.

    Independent of the rank identity used by `bias_exact`; the only
    structure exploited is the block layout of the enumeration order.
    """
    n = t.k * t.d
    if n > BRUTEFORCE_MAX_BITS:
        raise CapacityError(
            f"bias_bruteforce over 2^{n} inputs (guard 2^{BRUTEFORCE_MAX_BITS})",
            required=1 << n, budget=1 << BRUTEFORCE_MAX_BITS)
    ones_count = _stream_ones(t)
    return DyadicRational.from_ratio(abs((1 << n) - 2 * ones_count), n)


def bias_mc(t: DenseTensor, samples: int, confidence: float, seed: int,
            *, threads: int | None = None) -> BiasEstimate:
    """Signed Monte-Carlo estimate of E(-1)^f_T with a Hoeffding CI.

    Samples are sharded over `threads` substreams of (seed, worker);
    the result depends only on (seed, worker count).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    from .tensors import evaluate  # local import keeps module load light
    w = worker_count(threads)
    root = Prng(seed)
    acc = 0
    done = 0
    for widx in range(w):
        shard = samples // w + (1 if widx < samples % w else 0)
        rng = root.split(widx)
        k, d = t.k, t.d
        for _ in range(shard):
            xs = [BitVec(k, rng.bits(k)) for _ in range(d)]
            acc += 1 - 2 * evaluate(t, xs)
        done += shard
    assert done == samples
    return BiasEstimate(point=acc / samples,
                        ci_halfwidth=_hoeffding_halfwidth(samples, confidence),
                        samples=samples, confidence=confidence, seed=seed)


# ---------------------------------------------------------------------------
# Correlation with explicit polynomials.
# ---------------------------------------------------------------------------


def _poly_chunk_fn(poly: Polynomial, d: int, k: int) -> Callable[[int], int]:
    """Per-prefix truth-table chunks of `poly` over the last block.

    Variable v (0-based) = block j0 = v // k, coordinate i0 = v % k.
    Inside the joint enumeration, block j0 < d-1 lives at prefix bit
    (d-2-j0)k + i0 and block d-1 is the tabulated axis.
    """
    tables = []
    for mono in poly.monomials:
        need = 0
        low = ones(1 << k)
        for v in mono:
            j0, i0 = divmod(v, k)
            if j0 == d - 1:
                low &= var_mask(i0, k)
            else:
                need |= 1 << ((d - 2 - j0) * k + i0)
        tables.append((need, low))

    def chunk(prefix_val: int) -> int:
        out = 0
        for need, low in tables:
            if prefix_val & need == need:
                out ^= low
        return out

    return chunk


def corr_exact(t: DenseTensor, poly: Polynomial, *,
               budget: int | None = None) -> DyadicRational:
    """Corr(f_T, P) = bias(f_T - P), by full enumeration of all inputs."""
    n = t.k * t.d
    if poly.n != n:
        raise ValueError(f"polynomial has {poly.n} variables, form has {n}")
    if n > CORR_MAX_VARS:
        raise CapacityError(f"corr_exact over 2^{n} inputs (guard 2^{CORR_MAX_VARS})",
                            required=1 << n, budget=1 << CORR_MAX_VARS)
    ones_count = _stream_ones(t, _poly_chunk_fn(poly, t.d, t.k))
    return DyadicRational.from_ratio(abs((1 << n) - 2 * ones_count), n)


def _monomials_upto(n: int, degree: int) -> list[tuple[int, ...]]:
    from itertools import combinations
    out: list[tuple[int, ...]] = []
    for deg in range(degree + 1):
        out.extend(combinations(range(n), deg))
    return out


def _full_table(t: DenseTensor) -> int:
    """Whole truth table of f_T, input indices packed block-major with
    the first block at the high bits.  Small n only (the caller guards)."""
    k = t.k
    vm_cache = [var_mask(i, k) for i in range(k)]
    if t.d == 1:
        return linear_form_table(t.bits, k)

    out = 0
    width = 1 << k

    def walk(bits: int, dims: int, base: int):
        nonlocal out
        if dims == 2:
            row_tables = []
            for i in range(k):
                row = (bits >> (i * k)) & ones(k)
                rt = 0
                rb = row
                while rb:
                    low = rb & -rb
                    rt ^= vm_cache[low.bit_length() - 1]
                    rb ^= low
                row_tables.append(rt)
            tbl = 0
            val = 0
            # ascending order of the (d-1)th block value
            for x in range(1 << k):
                delta = val ^ x
                while delta:
                    lowb = delta & -delta
                    tbl ^= row_tables[lowb.bit_length() - 1]
                    delta ^= lowb
                val = x
                out |= tbl << (base + x * width)
            return
        step = t.k ** (dims - 1)
        mask = ones(step)
        slices = [(bits >> (i * step)) & mask for i in range(k)]
        sub = 1 << (k * (dims - 1))
        cur = 0
        val = 0
        for x in range(1 << k):
            delta = val ^ x
            while delta:
                lowb = delta & -delta
                cur ^= slices[lowb.bit_length() - 1]
                delta ^= lowb
            val = x
            walk(cur, dims - 1, base + x * sub)

    walk(t.bits, t.d, 0)
    return out


def corr_class_max(t: DenseTensor, degree: int, *,
                   budget: int | None = None) -> tuple[DyadicRational, Polynomial]:
    """Exact max correlation over all multilinear polynomials of degree
    <= `degree`, with one maximizer.

    Enumerates the whole class; the class has 2^(#monomials) members and
    the guard message reports that size.
    """
    n = t.k * t.d
    monos = _monomials_upto(n, min(degree, n))
    class_bits = len(monos)
    limit = max(16, (8 * budget_bytes(budget)).bit_length() - 1)
    if class_bits > min(limit, 24):
        raise CapacityError(
            f"degree-{degree} class over {n} variables has 2^{class_bits} "
            f"polynomials; enumeration budget is 2^{min(limit, 24)}",
            required=class_bits, budget=min(limit, 24))
    ftab = _full_table(t)
    size = 1 << n
    mono_tables = []
    for mono in monos:
        mt = ones(size)
        for v in mono:
            j0, i0 = divmod(v, t.k)
            bitpos = (t.d - 1 - j0) * t.k + i0
            mt &= var_mask(bitpos, n)
        mono_tables.append(mt)

    best_num = abs(size - 2 * (ftab.bit_count()))
    best_set = 0
    cur = ftab
    subset = 0
    for flip in gray_flips(class_bits):
        cur ^= mono_tables[flip]
        subset ^= 1 << flip
        num = abs(size - 2 * cur.bit_count())
        if num > best_num:
            best_num = num
            best_set = subset
    witness = Polynomial.reduce(
        n, [monos[i] for i in range(class_bits) if (best_set >> i) & 1])
    return DyadicRational.from_ratio(best_num, n), witness
