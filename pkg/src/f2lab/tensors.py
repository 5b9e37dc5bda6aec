"""Dense tensors over F2, rank-one decompositions, the explicit
constructions, and the on-disk formats.

A d-dimensional tensor of side k is one packed int of k^d bits; the
entry at (i_1..i_d) (0-based) sits at flat index
i_1*k^(d-1) + ... + i_d, so the first index is slowest.  Slicing along
the first index is a contiguous bit range, which is what the bias and
rank machinery leans on.

File formats:
  F2T1  tensor   header `F2T1` / `d=<d> k=<k>` / lowercase hex payload,
        flat bit b at bit (b mod 8) of byte (b div 8).
  F2D1  decomposition  `F2D1 d=<d> k=<k> t=<t>` then one line per term,
        d whitespace-separated 0/1 strings, char j = coordinate j+1.
  F2P1  polynomial  `F2P1 n=<n>` then one monomial per line as sorted
        1-based variable indices; `#` alone is the constant-1 monomial.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

from ._bitops import budget_bytes, ones
from .errors import CapacityError, FormatError
from .f2linalg import BitVec
from .gf2k import make_field
from .prng import Prng

TRACE_TENSOR_MAX_K = 24
MATMUL_TENSOR_MAX_N = 4


@dataclass(frozen=True)
class DenseTensor:
    """T : [k]^d -> F2 as k^d packed bits."""

    d: int
    k: int
    bits: int

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ValueError("d and k must be >= 1")
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError("bits outside k^d entries")

    @property
    def size(self) -> int:
        return self.k ** self.d

    @classmethod
    def zeros(cls, d: int, k: int) -> "DenseTensor":
        return cls(d, k, 0)

    def flat(self, idx: Sequence[int]) -> int:
        if len(idx) != self.d:
            raise ValueError("index arity != d")
        f = 0
        for i in idx:
            if not 0 <= i < self.k:
                raise IndexError("index out of range")
            f = f * self.k + i
        return f

    def entry(self, idx: Sequence[int]) -> int:
        return (self.bits >> self.flat(idx)) & 1

    def nnz(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "DenseTensor") -> "DenseTensor":
        if (self.d, self.k) != (other.d, other.k):
            raise ValueError("shape mismatch")
        return DenseTensor(self.d, self.k, self.bits ^ other.bits)


@dataclass(frozen=True)
class RankOneTerm:
    """u_1 (x) ... (x) u_d, entries prod_j u_j(i_j)."""

    vectors: tuple[BitVec, ...]

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("a term needs at least one vector")
        k = self.vectors[0].length
        for v in self.vectors:
            if v.length != k:
                raise ValueError("vectors of differing length")

    @property
    def d(self) -> int:
        return len(self.vectors)

    @property
    def k(self) -> int:
        return self.vectors[0].length

    def tensor_bits(self) -> int:
        """Packed bits of the outer product."""
        k = self.k
        acc = 1  # the empty product
        for v in self.vectors:
            nxt = 0
            rest = acc
            while rest:
                low = rest & -rest
                p = low.bit_length() - 1
                rest ^= low
                nxt |= v.bits << (p * k)
            acc = nxt
        return acc


@dataclass(frozen=True)
class RankDecomposition:
    """A list of rank-one terms; its length upper-bounds the rank."""

    d: int
    k: int
    terms: tuple[RankOneTerm, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.d != self.d or t.k != self.k:
                raise ValueError("term shape mismatch")

    @property
    def t(self) -> int:
        return len(self.terms)


def tensor_from_decomp(decomp: RankDecomposition) -> DenseTensor:
    bits = 0
    for term in decomp.terms:
        bits ^= term.tensor_bits()
    return DenseTensor(decomp.d, decomp.k, bits)


def first_block_slices(t: DenseTensor) -> list[int]:
    """Subtensor bits T(i, ., ..., .) for i in [k] (each k^(d-1) bits)."""
    step = t.k ** (t.d - 1)
    mask = ones(step)
    return [(t.bits >> (i * step)) & mask for i in range(t.k)]


def contract(t: DenseTensor, block: int, x: BitVec) -> DenseTensor:
    """Substitute x into block `block` (1-based); returns a (d-1)-tensor.

    evaluate(contract(T, j, x), rest) = evaluate(T, ..., x at j, ...).
    """
    if not 1 <= block <= t.d:
        raise ValueError("block index out of range")
    if x.length != t.k:
        raise ValueError("vector length != k")
    if t.d == 1:
        raise ValueError("cannot contract a 1-dimensional tensor")
    k = t.k
    j0 = block - 1
    stride = k ** (t.d - 1 - j0)  # flat distance between consecutive values of this index
    chunk = ones(stride)
    inner = 0
    xb = x.bits
    for c in range(k):
        if (xb >> c) & 1:
            # gather every run where index j0 equals c
            for a in range(k ** j0):
                seg = (t.bits >> (a * stride * k + c * stride)) & chunk
                inner ^= seg << (a * stride)
    return DenseTensor(t.d - 1, k, inner)


def evaluate(t: DenseTensor, xs: Sequence[BitVec]) -> int:
    """f_T(x_1..x_d) over F2."""
    if len(xs) != t.d:
        raise ValueError(f"need {t.d} block vectors")
    k = t.k
    cur = t.bits
    size = t.size
    for x in xs[:-1]:
        if x.length != k:
            raise ValueError("vector length != k")
        step = size // k
        mask = ones(step)
        nxt = 0
        xb = x.bits
        while xb:
            low = xb & -xb
            i = low.bit_length() - 1
            xb ^= low
            nxt ^= (cur >> (i * step)) & mask
        cur = nxt
        size = step
    last = xs[-1]
    if last.length != k:
        raise ValueError("vector length != k")
    return (cur & last.bits).bit_count() & 1


def trace_tensor(k: int) -> DenseTensor:
    """T(i,j,l) = Trace(b_i b_j b_l) in GF(2^k), polynomial basis."""
    if not 1 <= k <= TRACE_TENSOR_MAX_K:
        raise CapacityError(f"trace_tensor needs 1 <= k <= {TRACE_TENSOR_MAX_K}",
                            required=k ** 3)
    field = make_field(k)
    bits = 0
    flat = 0
    # flat = (i*k + j)*k + l walks l fastest, matching the layout
    for i in range(k):
        bi = 1 << i
        for j in range(k):
            bij = field.mul_bits(bi, 1 << j)
            for l in range(k):
                if field.trace_bits(field.mul_bits(bij, 1 << l)):
                    bits |= 1 << flat
                flat += 1
    return DenseTensor(3, k, bits)


def matmul_tensor(n: int) -> DenseTensor:
    """The n x n matrix product tensor: entries at X_ij Y_jl Z_il."""
    if not 1 <= n <= MATMUL_TENSOR_MAX_N:
        raise CapacityError(f"matmul_tensor needs 1 <= n <= {MATMUL_TENSOR_MAX_N}",
                            required=n ** 6)
    k = n * n
    bits = 0
    for i in range(n):
        for j in range(n):
            for l in range(n):
                a = i * n + j
                b = j * n + l
                c = i * n + l
                bits |= 1 << ((a * k + b) * k + c)
    return DenseTensor(3, k, bits)


def explicit_form_tensor(d: int, k: int, *, budget: int | None = None) -> DenseTensor:
    """Tensor of <x_1 * x_2 ... x_{d-1}, x_d>, products in GF(2^k).

    T(i_1..i_d) is coordinate i_d of the field product b_{i_1}...b_{i_{d-1}},
    multiplied left to right (the form is symmetric in the first d-1
    blocks, so the order only pins the file bytes).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    size = k ** d
    if size > 8 * budget_bytes(budget):
        raise CapacityError(f"explicit_form_tensor({d},{k}) needs {size} bits",
                            required=size, budget=8 * budget_bytes(budget))
    field = make_field(k)
    bits = 0
    # enumerate products over the first d-1 indices, then write k entries
    idx = [0] * (d - 1)
    while True:
        prod = 1
        for i in idx:
            prod = field.mul_bits(prod, 1 << i)
        base = 0
        for i in idx:
            base = (base + i) * k
        bits |= prod << base
        # odometer over the first d-1 indices, last fastest
        pos = d - 2
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < k:
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return DenseTensor(d, k, bits)


def random_tensor(d: int, k: int, seed: int, *, budget: int | None = None) -> DenseTensor:
    """Uniform tensor, deterministic for a fixed seed."""
    size = k ** d
    if size > 8 * budget_bytes(budget):
        raise CapacityError(f"random_tensor({d},{k}) needs {size} bits",
                            required=size, budget=8 * budget_bytes(budget))
    return DenseTensor(d, k, Prng(seed).bits(size))


def random_rank_decomp(d: int, k: int, t: int, seed: int) -> RankDecomposition:
    """t terms of d independent uniform vectors each; seed-deterministic."""
    rng = Prng(seed)
    terms = tuple(
        RankOneTerm(tuple(BitVec.random(k, rng) for _ in range(d)))
        for _ in range(t))
    return RankDecomposition(d, k, terms)


@dataclass(frozen=True)
class Polynomial:
    """Multilinear polynomial over F2 as a tuple of monomials.

    Each monomial is a sorted tuple of 0-based variable indices; the
    empty tuple is the constant 1.  Always reduced: x^2 = x inside a
    monomial, duplicate monomials cancelled mod 2.
    """

    n: int
    monomials: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for m in self.monomials:
            if any(not 0 <= v < self.n for v in m):
                raise ValueError("variable index out of range")
            if tuple(sorted(set(m))) != m:
                raise ValueError("monomial not sorted/reduced")
            if m in seen:
                raise ValueError("duplicate monomial")
            seen.add(m)

    @classmethod
    def reduce(cls, n: int, raw: Sequence[Sequence[int]]) -> "Polynomial":
        acc: set[tuple[int, ...]] = set()
        for m in raw:
            key = tuple(sorted(set(m)))
            acc.symmetric_difference_update({key})
        return cls(n, tuple(sorted(acc)))

    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def evaluate(self, assignment_bits: int) -> int:
        val = 0
        for m in self.monomials:
            if all((assignment_bits >> v) & 1 for v in m):
                val ^= 1
        return val


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def _payload_bytes(t: DenseTensor) -> bytes:
    return t.bits.to_bytes((t.size + 7) // 8, "little")


def write_tensor(fp, t: DenseTensor) -> None:
    fp.write(f"F2T1\nd={t.d} k={t.k}\n{_payload_bytes(t).hex()}\n")


def read_tensor(fp, *, budget: int | None = None) -> DenseTensor:
    lines = fp.read().splitlines()
    if len(lines) < 3 or lines[0].strip() != "F2T1":
        raise FormatError("missing F2T1 header")
    try:
        fields = dict(part.split("=", 1) for part in lines[1].split())
        d = int(fields["d"])
        k = int(fields["k"])
    except (ValueError, KeyError) as exc:
        raise FormatError(f"bad F2T1 shape line: {lines[1]!r}") from exc
    if d < 1 or k < 1:
        raise FormatError("d and k must be positive")
    if k.bit_length() * d > 64 or k ** d > 8 * budget_bytes(budget):
        raise FormatError(f"tensor shape d={d} k={k} overflows the budget")
    size = k ** d
    try:
        payload = bytes.fromhex(lines[2].strip())
    except ValueError as exc:
        raise FormatError("payload is not hex") from exc
    if len(payload) != (size + 7) // 8:
        raise FormatError(f"payload holds {len(payload)} bytes, "
                          f"expected {(size + 7) // 8}")
    bits = int.from_bytes(payload, "little")
    if bits >> size:
        raise FormatError("padding bits beyond k^d are set")
    return DenseTensor(d, k, bits)


def write_decomp(fp, decomp: RankDecomposition) -> None:
    fp.write(f"F2D1 d={decomp.d} k={decomp.k} t={decomp.t}\n")
    for term in decomp.terms:
        fp.write(" ".join(v.to01() for v in term.vectors) + "\n")


def read_decomp(fp) -> RankDecomposition:
    lines = fp.read().splitlines()
    if not lines:
        raise FormatError("empty decomposition file")
    head = lines[0].split()
    if not head or head[0] != "F2D1":
        raise FormatError("missing F2D1 header")
    try:
        fields = dict(part.split("=", 1) for part in head[1:])
        d = int(fields["d"])
        k = int(fields["k"])
        t = int(fields["t"])
    except (ValueError, KeyError) as exc:
        raise FormatError(f"bad F2D1 header: {lines[0]!r}") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != t:
        raise FormatError(f"expected {t} term lines, found {len(body)}")
    terms = []
    for ln in body:
        parts = ln.split()
        if len(parts) != d:
            raise FormatError(f"term line has {len(parts)} vectors, expected {d}")
        vecs = []
        for p in parts:
            if len(p) != k:
                raise FormatError(f"vector {p!r} is not length {k}")
            try:
                vecs.append(BitVec.from01(p))
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
        terms.append(RankOneTerm(tuple(vecs)))
    return RankDecomposition(d, k, tuple(terms))


def write_poly(fp, poly: Polynomial) -> None:
    fp.write(f"F2P1 n={poly.n}\n")
    for m in poly.monomials:
        fp.write("#\n" if not m else " ".join(str(v + 1) for v in m) + "\n")


def read_poly(fp) -> Polynomial:
    lines = fp.read().splitlines()
    if not lines:
        raise FormatError("empty polynomial file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "F2P1" or not head[1].startswith("n="):
        raise FormatError("missing F2P1 header")
    try:
        n = int(head[1][2:])
    except ValueError as exc:
        raise FormatError("bad variable count") from exc
    if n < 0:
        raise FormatError("negative variable count")
    raw = []
    for ln in lines[1:]:
        ln = ln.strip()
        if not ln:
            continue
        if ln == "#":
            raw.append(())
            continue
        try:
            idxs = [int(tok) - 1 for tok in ln.split()]
        except ValueError as exc:
            raise FormatError(f"bad monomial line {ln!r}") from exc
        if any(not 0 <= v < n for v in idxs):
            raise FormatError(f"variable out of range in {ln!r}")
        raw.append(idxs)
    return Polynomial.reduce(n, raw)


def tensor_to_string(t: DenseTensor) -> str:
    buf = io.StringIO()
    write_tensor(buf, t)
    return buf.getvalue()


def tensor_from_string(s: str) -> DenseTensor:
    return read_tensor(io.StringIO(s))
