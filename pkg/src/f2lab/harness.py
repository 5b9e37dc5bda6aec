"""Named, reproducible verification experiments.

Every experiment returns a VerificationReport.  Exact statements
(identities, closed forms, finite bounds) are hard assertions; purely
asymptotic statements are displayed next to the measurement but never
asserted (`holds = "report-only"`), so a failing suite always means a
checkable statement broke.  Reports include the measured/bound gap so a
tightness regression is visible even while everything still passes.
"""

from __future__ import annotations

import math
import time
from itertools import product
from math import comb
from typing import Callable, Sequence

from .bias import (DyadicRational, bias_bruteforce, bias_exact, bias_mc,
                   corr_exact, dyadic_mean)
from .errors import CapacityError
from .f2linalg import (BitMatrix, BitVec, Subspace, echelonize,
                       rank_of_row_ints)
from .numerics import f_dk_bound, inequality_checks, profile_max_check
from .prng import Prng
from .rank import (corank_bound_margin, matmul_bias_exact, rank_count,
                   rank_lb_bias)
from .report import REPORT_ONLY, VerificationReport, fmt_float
from .tensors import (DenseTensor, Polynomial, RankDecomposition, RankOneTerm,
                      explicit_form_tensor, matmul_tensor, random_rank_decomp,
                      random_tensor, trace_tensor)

MOMENT_TENSOR_BITS_LIMIT = 16      # 2^(k^d) tensors enumerated
TUPLE_BITS_LIMIT = 24              # 2^(k t d) vector tuples enumerated
ASSIGN_BITS_LIMIT = 22             # 2^(k d) assignments per instance
PREIMAGE_K_LIMIT = 16

D = DyadicRational


def _report(name: str, params: Sequence[tuple[str, str]], start: float,
            measured: Sequence[tuple[str, str]], bound: tuple[str, str],
            holds, method: str, samples: int | None = None,
            seed: int | None = None) -> VerificationReport:
    return VerificationReport(
        name=name, params=tuple(params), measured=tuple(measured),
        bound=bound, holds=holds, method=method, samples=samples, seed=seed,
        elapsed_ms=(time.perf_counter() - start) * 1e3)


def _rank_one_bits(vectors: Sequence[int], d: int, k: int) -> int:
    acc = 1
    for v in vectors:
        nxt = 0
        rest = acc
        while rest:
            low = rest & -rest
            nxt |= v << ((low.bit_length() - 1) * k)
            rest ^= low
        acc = nxt
    return acc


def _all_vector_tuples(count: int, k: int):
    """Iterate all (2^k)^count tuples of packed vectors."""
    return product(range(1 << k), repeat=count)


# ---------------------------------------------------------------------------
# Moment identity and vanishing-sum probabilities.
# ---------------------------------------------------------------------------


def verify_moment_identity(d: int, k: int, t: int) -> VerificationReport:
    """E over all tensors of bias^t equals Pr[sum of t random rank-one
    tensors is zero]; both sides by full enumeration, compared exactly."""
    start = time.perf_counter()
    cells = k ** d
    if cells > MOMENT_TENSOR_BITS_LIMIT:
        raise CapacityError(f"2^{cells} tensors exceed the 2^{MOMENT_TENSOR_BITS_LIMIT} guard",
                            required=cells, budget=MOMENT_TENSOR_BITS_LIMIT)
    if k * t * d > TUPLE_BITS_LIMIT:
        raise CapacityError(f"2^{k*t*d} tuples exceed the 2^{TUPLE_BITS_LIMIT} guard",
                            required=k * t * d, budget=TUPLE_BITS_LIMIT)
    lhs = dyadic_mean(
        (bias_exact(DenseTensor(d, k, bits)) ** t for bits in range(1 << cells)),
        cells)
    zero_count = 0
    for tup in _all_vector_tuples(t * d, k):
        acc = 0
        for i in range(t):
            acc ^= _rank_one_bits(tup[i * d:(i + 1) * d], d, k)
        if acc == 0:
            zero_count += 1
    rhs = D.from_ratio(zero_count, k * t * d)
    holds = lhs == rhs
    return _report(
        "moment-identity", [("d", str(d)), ("k", str(k)), ("t", str(t))], start,
        [("moment", str(lhs)), ("vanish_prob", str(rhs))],
        ("equality", str(rhs)), holds, "exhaustive")


def verify_sum_zero(d: int, k: int, t: int, eps: float = 0.5) -> VerificationReport:
    """Exact Pr[sum of t random rank-one d-tensors = 0] against its
    bounds.

    The in-proof bound ((d + 2^(t/k^(d-2)))/2^k)^t is always asserted;
    the headline 2^(-(1-eps/2)kt) is asserted only when its
    preconditions d < 2^(eps k/5), t < eps k^(d-1)/5 hold, and is
    otherwise displayed report-only.
    """
    start = time.perf_counter()
    if d < 2:
        raise ValueError("d must be >= 2")
    if k * t * d > TUPLE_BITS_LIMIT:
        raise CapacityError(f"2^{k*t*d} tuples exceed the 2^{TUPLE_BITS_LIMIT} guard",
                            required=k * t * d, budget=TUPLE_BITS_LIMIT)
    zero_count = 0
    for tup in _all_vector_tuples(t * d, k):
        acc = 0
        for i in range(t):
            acc ^= _rank_one_bits(tup[i * d:(i + 1) * d], d, k)
        if acc == 0:
            zero_count += 1
    exact = D.from_ratio(zero_count, k * t * d)
    proof_bound = ((d + 2.0 ** (t / k ** (d - 2))) / 2.0 ** k) ** t
    headline = 2.0 ** (-(1.0 - eps / 2.0) * k * t)
    applies = d < 2.0 ** (eps * k / 5.0) and t < eps * (k ** (d - 1)) / 5.0
    proof_ok = exact.to_float() <= proof_bound + 1e-12
    headline_ok = (not applies) or exact.to_float() <= headline + 1e-12
    return _report(
        "sum-zero",
        [("d", str(d)), ("k", str(k)), ("t", str(t)), ("eps", fmt_float(eps))],
        start,
        [("exact", str(exact)),
         ("headline", fmt_float(headline)),
         ("headline_asserted", "yes" if applies else "no")],
        ("proof_bound", fmt_float(proof_bound)),
        proof_ok and headline_ok, "exhaustive")


# ---------------------------------------------------------------------------
# Rank-one tensors against subspaces.
# ---------------------------------------------------------------------------


def _random_subspace(ambient: int, dim: int, rng: Prng) -> Subspace:
    """Echelonized random vectors, rejecting draws of the wrong dimension."""
    if not 0 <= dim <= ambient:
        raise ValueError("dim out of range")
    while True:
        vs = [BitVec.random(ambient, rng) for _ in range(dim)]
        s = echelonize(vs, ambient)
        if s.dim == dim:
            return s


def _membership_prob(s: Subspace, d: int, k: int) -> D:
    hits = 0
    for tup in _all_vector_tuples(d, k):
        if s.contains_bits(_rank_one_bits(tup, d, k)):
            hits += 1
    return D.from_ratio(hits, k * d)


def verify_subspace_membership(d: int, k: int, subspace_dims: Sequence[int],
                               trials: int, seed: int) -> VerificationReport:
    """Exact Pr[random rank-one tensor lies in U] for random subspaces U,
    against the refined bound f_{d,k}(dim U) and its relaxation."""
    start = time.perf_counter()
    if k * d > ASSIGN_BITS_LIMIT:
        raise CapacityError(f"2^{k*d} tuples exceed the 2^{ASSIGN_BITS_LIMIT} guard")
    ambient = k ** d
    rng = Prng(seed)
    checked = 0
    worst_gap = math.inf
    holds = True
    for u in subspace_dims:
        for _ in range(trials):
            s = _random_subspace(ambient, u, rng)
            pr = _membership_prob(s, d, k).to_float()
            refined = f_dk_bound(d, k, float(u))
            relaxed = d * 2.0 ** -k + 2.0 ** (u / k ** (d - 1)) / 2.0 ** k
            if pr > refined + 1e-12 or refined > relaxed + 1e-12:
                holds = False
            worst_gap = min(worst_gap, refined - pr)
            checked += 1
    return _report(
        "subspace-membership",
        [("d", str(d)), ("k", str(k)),
         ("dims", ",".join(map(str, subspace_dims))), ("trials", str(trials))],
        start,
        [("subspaces", str(checked)), ("min_gap_to_refined", fmt_float(worst_gap))],
        ("refined<=relaxed", "f_dk <= d/2^k + 2^(u/k^(d-1))/2^k"),
        holds, "exhaustive", samples=checked, seed=seed)


def verify_span_dimension(d: int, k: int, t: int) -> VerificationReport:
    """Exact distribution of dim span(T_1..T_t) for independent rank-one
    tensors, against the binomial-style bound for every r."""
    start = time.perf_counter()
    if k * t * d > TUPLE_BITS_LIMIT:
        raise CapacityError(f"2^{k*t*d} tuples exceed the 2^{TUPLE_BITS_LIMIT} guard")
    counts = [0] * (t + 1)
    for tup in _all_vector_tuples(t * d, k):
        rows = [_rank_one_bits(tup[i * d:(i + 1) * d], d, k) for i in range(t)]
        counts[rank_of_row_ints(rows)] += 1
    total = k * t * d
    dist = [D.from_ratio(c, total) for c in counts]
    assert sum(counts) == 1 << total
    base = (d + 2.0 ** (t / k ** (d - 1))) / 2.0 ** k
    holds = True
    worst_ratio = 0.0
    for r, pr in enumerate(dist):
        bound = comb(t, r) * base ** (t - r)
        val = pr.to_float()
        if val > bound + 1e-12:
            holds = False
        if bound > 0:
            worst_ratio = max(worst_ratio, val / bound)
    return _report(
        "span-dimension", [("d", str(d)), ("k", str(k)), ("t", str(t))], start,
        [("distribution", " ".join(str(p) for p in dist)),
         ("worst_ratio_to_bound", fmt_float(worst_ratio))],
        ("bound", "C(t,r) ((d + 2^(t/k^(d-1)))/2^k)^(t-r)"),
        holds, "exhaustive")


# ---------------------------------------------------------------------------
# Bias distribution of random forms.
# ---------------------------------------------------------------------------


def verify_bias_tail(d: int, k: int, eps: float, samples: int,
                     seed: int) -> VerificationReport:
    """Empirical Pr[bias >= 2^(-(1-eps)k)] over random tensors.

    The tail bound 2^(-eps^2 k^d / 20) is proof-internal and asymptotic,
    so it is displayed but never asserted.  For d = 2 the exact tail is
    available from the matrix rank distribution and the sampler must
    agree with it within 3 Hoeffding standard errors; that cross-check
    is the asserted part.
    """
    start = time.perf_counter()
    if samples < 1:
        raise ValueError("samples must be >= 1")
    threshold = 2.0 ** (-(1.0 - eps) * k)
    rng = Prng(seed)
    hits = 0
    for _ in range(samples):
        t = DenseTensor(d, k, rng.bits(k ** d))
        if bias_exact(t).to_float() >= threshold - 1e-15:
            hits += 1
    empirical = hits / samples
    displayed = 2.0 ** (-(eps * eps) * (k ** d) / 20.0)
    measured = [("empirical", fmt_float(empirical))]
    if d == 2:
        dist = rank_count(k)
        p_exact = D.zero()
        for r in range(k + 1):
            if 2.0 ** -r >= threshold - 1e-15:
                p_exact = p_exact + dist.prob(r)
        se3 = 3.0 / (2.0 * math.sqrt(samples))
        holds: bool | str = abs(empirical - p_exact.to_float()) <= se3
        measured += [("exact_tail", str(p_exact)), ("allowed_dev", fmt_float(se3))]
    else:
        holds = REPORT_ONLY
    return _report(
        "bias-tail",
        [("d", str(d)), ("k", str(k)), ("eps", fmt_float(eps))], start,
        measured,
        ("asymptotic_tail_2^(-eps^2 k^d/20)", fmt_float(displayed)),
        holds, "monte-carlo", samples=samples, seed=seed)


def verify_low_rank_bias_floor(d: int, k: int, t: int, trials: int,
                               seed: int) -> VerificationReport:
    """bias >= (1 - 2^(1-d))^t for tensors given with t rank-one terms,
    by exact rational comparison on random decompositions."""
    start = time.perf_counter()
    if d < 2:
        raise ValueError("d must be >= 2")
    floor = D.from_ratio((1 << (d - 1)) - 1, d - 1) ** t
    rng = Prng(seed)
    holds = True
    min_bias = D.one()
    for _ in range(trials):
        decomp = random_rank_decomp(d, k, t, rng.u64())
        from .tensors import tensor_from_decomp
        b = bias_exact(tensor_from_decomp(decomp))
        if b < floor:
            holds = False
        if b < min_bias:
            min_bias = b
    return _report(
        "low-rank-bias-floor",
        [("d", str(d)), ("k", str(k)), ("t", str(t)), ("trials", str(trials))],
        start,
        [("min_bias", str(min_bias))],
        ("floor", str(floor)), holds, "exhaustive", samples=trials, seed=seed)


def verify_joint_vanishing(d: int, k: int, t: int, trials: int,
                           seed: int) -> VerificationReport:
    """Pr[all of t rank-one forms vanish] >= (1 - 2^-d)^t, with the
    probability computed exactly per random tuple."""
    start = time.perf_counter()
    if k * d > ASSIGN_BITS_LIMIT:
        raise CapacityError(f"2^{k*d} assignments exceed the 2^{ASSIGN_BITS_LIMIT} guard")
    floor = D.from_ratio((1 << d) - 1, d) ** t
    rng = Prng(seed)
    holds = True
    min_pr = D.one()
    for _ in range(trials):
        forms = [[rng.bits(k) for _ in range(d)] for _ in range(t)]
        good = 0
        for assign in product(range(1 << k), repeat=d):
            if all(any((u & x).bit_count() & 1 == 0 for u, x in zip(form, assign))
                   for form in forms):
                good += 1
        pr = D.from_ratio(good, k * d)
        if pr < floor:
            holds = False
        if pr < min_pr:
            min_pr = pr
    return _report(
        "joint-vanishing",
        [("d", str(d)), ("k", str(k)), ("t", str(t)), ("trials", str(trials))],
        start,
        [("min_prob", str(min_pr))],
        ("floor", str(floor)), holds, "exhaustive", samples=trials, seed=seed)


def verify_expected_bias(d: int, k: int, t: int, samples: int | None = None,
                         seed: int | None = None) -> VerificationReport:
    """Mean bias of a random t-term decomposition against its closed
    form 1 - (1-2^-k)^d + (1-2^-k)^d (1-2^(1-d))^t.

    Exhaustive mode (small spaces) asserts exact equality; Monte-Carlo
    mode asserts Hoeffding-CI coverage.  Both assert the closed form is
    below the relaxed d 2^-k + (1-2^(1-d))^t.
    """
    start = time.perf_counter()
    if d < 2:
        raise ValueError("d must be >= 2")
    q = D.one() - D.half_pow(k)
    closed = (D.one() - q ** d) + q ** d * (D.from_ratio((1 << (d - 1)) - 1, d - 1) ** t)
    relaxed = D.from_ratio(d, k) + D.from_ratio((1 << (d - 1)) - 1, d - 1) ** t
    relaxed_ok = closed <= relaxed
    from .tensors import tensor_from_decomp
    nbits = k * t * d
    if nbits <= TUPLE_BITS_LIMIT:
        def all_biases():
            for tup in _all_vector_tuples(t * d, k):
                terms = tuple(
                    RankOneTerm(tuple(BitVec(k, v) for v in tup[i * d:(i + 1) * d]))
                    for i in range(t))
                yield bias_exact(tensor_from_decomp(RankDecomposition(d, k, terms)))
        mean = dyadic_mean(all_biases(), nbits)
        holds = mean == closed and relaxed_ok
        return _report(
            "expected-bias",
            [("d", str(d)), ("k", str(k)), ("t", str(t)), ("mode", "exhaustive")],
            start,
            [("mean", str(mean)), ("closed_form", str(closed)),
             ("relaxed", str(relaxed))],
            ("equality", str(closed)), holds, "exhaustive")
    if samples is None or seed is None:
        raise CapacityError(
            f"2^{nbits} decompositions exceed the exhaustive guard; "
            "pass samples and seed for Monte-Carlo mode")
    rng = Prng(seed)
    acc = 0.0
    for _ in range(samples):
        decomp = random_rank_decomp(d, k, t, rng.u64())
        acc += bias_exact(tensor_from_decomp(decomp)).to_float()
    mean_f = acc / samples
    hw = math.sqrt(math.log(2.0 / 0.01) / (2.0 * samples))  # 99% band
    holds = abs(mean_f - closed.to_float()) <= hw and relaxed_ok
    return _report(
        "expected-bias",
        [("d", str(d)), ("k", str(k)), ("t", str(t)), ("mode", "monte-carlo")],
        start,
        [("mean", fmt_float(mean_f)), ("closed_form", str(closed)),
         ("ci_halfwidth", fmt_float(hw))],
        ("coverage", str(closed)), holds, "monte-carlo", samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# The explicit tensors.
# ---------------------------------------------------------------------------


def verify_bias_trace(k: int) -> VerificationReport:
    """Bias of the field-trace tensor equals 2 2^-k - 2^-2k exactly,
    via the rank fast path and (capacity permitting) literal brute force."""
    start = time.perf_counter()
    formula = D.from_ratio((1 << (k + 1)) - 1, 2 * k)
    t = trace_tensor(k)
    fast = bias_exact(t)
    routes = ["fast"]
    holds = fast == formula
    if 3 * k <= 30:
        brute = bias_bruteforce(t)
        routes.append("brute")
        holds = holds and brute == formula
    return _report(
        "bias-trace", [("k", str(k)), ("routes", "+".join(routes))], start,
        [("bias", str(fast))],
        ("formula", str(formula)), holds, "exhaustive")


def verify_bias_matmul(n: int) -> VerificationReport:
    """Matrix-product tensor bias: rank-distribution formula, cross-checked
    by tensor routes at n <= 2, against the n 2^(-3n^2/4) bound; the rank
    lower bound implied by the ladder is displayed next to the asymptotic
    1.8 n^2."""
    start = time.perf_counter()
    value = matmul_bias_exact(n)
    routes = ["rank-distribution"]
    cross_ok = True
    if n <= 2:
        mt = matmul_tensor(n)
        cross_ok = bias_exact(mt) == value and bias_bruteforce(mt) == value
        routes += ["fast", "brute"]
    bound_ok = value.to_float() <= n * 2.0 ** (-3.0 * n * n / 4.0) + 1e-15
    if n == 1:
        # the bound only kicks in at n >= 2 (at n=1 the exact bias 3/4
        # exceeds it); only the route cross-check is asserted
        holds: bool | str = REPORT_ONLY if cross_ok else False
    else:
        holds = cross_ok and bound_ok
    ladder = rank_lb_bias(value, 3)
    return _report(
        "bias-matmul", [("n", str(n)), ("routes", "+".join(routes))], start,
        [("bias", str(value)), ("ladder_rank_lb", str(ladder)),
         ("asymptotic_1.8n^2", fmt_float(1.8 * n * n))],
        ("bound_n*2^(-3n^2/4)", fmt_float(n * 2.0 ** (-3.0 * n * n / 4.0))),
        holds, "closed-form")


def _lifted_form(d: int, k: int, rng: Prng) -> Polynomial:
    """Random degree-(d-1) multilinear form as a sum over i of a random
    (d-1)-linear form on the blocks other than i."""
    monos: list[tuple[int, ...]] = []
    for skip in range(d):
        blocks = [j for j in range(d) if j != skip]
        sub = rng.bits(k ** (d - 1))
        for flat in range(k ** (d - 1)):
            if (sub >> flat) & 1:
                idx = []
                rest = flat
                for j in reversed(blocks):
                    idx.append(j * k + rest % k)
                    rest //= k
                monos.append(tuple(sorted(idx)))
    return Polynomial.reduce(k * d, monos)


def verify_explicit_form(d: int, k: int, g_samples: int,
                         seed: int) -> VerificationReport:
    """The product-then-project form: bias equals 1 - (1-2^-k)^(d-1)
    exactly, and its correlation with random degree-(d-1) multilinear
    forms never exceeds (d-1) 2^-k."""
    start = time.perf_counter()
    t = explicit_form_tensor(d, k)
    formula = D.one() - (D.one() - D.half_pow(k)) ** (d - 1)
    holds = bias_exact(t) == formula
    cap = D.from_ratio(d - 1, k)
    worst = D.zero()
    rng = Prng(seed)
    for _ in range(g_samples):
        g = _lifted_form(d, k, rng)
        c = corr_exact(t, g)
        if c > cap:
            holds = False
        if c > worst:
            worst = c
    return _report(
        "explicit-form",
        [("d", str(d)), ("k", str(k)), ("g_samples", str(g_samples))], start,
        [("bias", str(formula)), ("max_correlation_seen", str(worst))],
        ("correlation_cap", str(cap)), holds, "exhaustive",
        samples=g_samples or None, seed=seed if g_samples else None)


def verify_linear_preimage(k: int, trials: int, seed: int) -> VerificationReport:
    """For linear maps h, no fiber beats the kernel:
    #{x : h(x) = a} <= #{x : h(x) = 0}, counted by full enumeration."""
    start = time.perf_counter()
    if k > PREIMAGE_K_LIMIT:
        raise CapacityError(f"preimage counting needs k <= {PREIMAGE_K_LIMIT}")
    rng = Prng(seed)
    holds = True
    for _ in range(trials):
        h = BitMatrix.random(k, k, rng)
        a = rng.bits(k)
        fiber = 0
        kernel_size = 0
        for x in range(1 << k):
            hx = 0
            for i in range(k):
                hx |= ((h.rows[i].bits & x).bit_count() & 1) << i
            if hx == a:
                fiber += 1
            if hx == 0:
                kernel_size += 1
        if fiber > kernel_size:
            holds = False
    return _report(
        "linear-preimage", [("k", str(k)), ("trials", str(trials))], start,
        [("trials", str(trials))],
        ("fiber<=kernel", "#h^-1(a) <= #h^-1(0)"),
        holds, "exhaustive", samples=trials, seed=seed)


def verify_corank_margin(n: int) -> VerificationReport:
    """Exact Pr[rank = r] against the 2^-(n-r)^2 corank bound.

    Report-only by design: the bound is violated by a bounded factor at
    small n (ratio 1.125 at n=2, r=1), and only its downstream
    consequence (the matrix-product bias bound) is asserted, in
    `verify_bias_matmul`.
    """
    start = time.perf_counter()
    rows = corank_bound_margin(n)
    worst = max(r[3] for r in rows)
    cells = " ".join(f"r={r}:{fmt_float(ratio)}" for r, _, _, ratio in rows)
    return _report(
        "corank-margin", [("n", str(n))], start,
        [("ratios", cells), ("worst_ratio", fmt_float(worst))],
        ("corank_bound", "2^(-(n-r)^2), not asserted"),
        REPORT_ONLY, "closed-form")


def verify_mc_bias(d: int, k: int, samples: int, confidence: float,
                   seed: int) -> VerificationReport:
    """Monte-Carlo bias estimate of a random tensor is consistent with
    the exact value.

    Asserted at a 3.5-sigma band (sigma = 1/sqrt(samples), the worst
    case for a +-1 mean), so a single run is a stable regression check;
    the reported Hoeffding half-width is the interval callers get.
    """
    start = time.perf_counter()
    t = random_tensor(d, k, seed ^ 0x5EED)
    exact = bias_exact(t).to_float()
    est = bias_mc(t, samples, confidence, seed)
    allowed = max(est.ci_halfwidth, 3.5 / math.sqrt(samples))
    holds = abs(est.point - exact) <= allowed
    return _report(
        "mc-bias",
        [("d", str(d)), ("k", str(k)), ("confidence", fmt_float(confidence))],
        start,
        [("point", fmt_float(est.point)), ("exact", fmt_float(exact)),
         ("ci_halfwidth", fmt_float(est.ci_halfwidth))],
        ("allowed_dev", fmt_float(allowed)),
        holds, "monte-carlo", samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# Suite driver.
# ---------------------------------------------------------------------------


def _quick_plan() -> list[Callable[[], VerificationReport]]:
    dims = {
        (2, 2): range(0, 5), (2, 3): range(0, 10),
        (3, 2): range(0, 9), (3, 3): range(0, 28),
    }
    plan: list[Callable[[], VerificationReport]] = [
        lambda: verify_moment_identity(2, 1, 1),
        lambda: verify_moment_identity(2, 1, 2),
        lambda: verify_moment_identity(2, 2, 1),
        lambda: verify_moment_identity(2, 2, 2),
        lambda: verify_moment_identity(3, 1, 2),
        lambda: verify_sum_zero(2, 1, 1),
        lambda: verify_sum_zero(2, 2, 2),
        lambda: verify_sum_zero(2, 4, 2),
        lambda: verify_sum_zero(3, 2, 2),
        lambda: verify_span_dimension(2, 2, 2),
        lambda: verify_span_dimension(2, 2, 3),
        lambda: verify_span_dimension(3, 2, 2),
        lambda: verify_bias_tail(2, 8, 0.25, 10_000, seed=301),
        lambda: verify_joint_vanishing(3, 2, 3, trials=100, seed=302),
        lambda: verify_joint_vanishing(2, 3, 4, trials=100, seed=303),
        lambda: verify_expected_bias(2, 1, 1),
        lambda: verify_expected_bias(2, 1, 2),
        lambda: verify_expected_bias(2, 2, 1),
        lambda: verify_expected_bias(3, 2, 1),
        lambda: verify_explicit_form(3, 2, g_samples=200, seed=304),
        lambda: verify_explicit_form(4, 2, g_samples=100, seed=305),
        lambda: verify_explicit_form(3, 3, g_samples=100, seed=306),
        lambda: verify_linear_preimage(4, trials=150, seed=307),
        lambda: verify_linear_preimage(6, trials=100, seed=308),
        lambda: verify_corank_margin(2),
        lambda: verify_corank_margin(3),
        lambda: verify_corank_margin(4),
        lambda: verify_mc_bias(3, 4, samples=20_000, confidence=0.99, seed=309),
        lambda: profile_max_check(2, 2.0, random_trials=2_000, seed=310),
        lambda: profile_max_check(5, 13.7, random_trials=2_000, seed=311),
        lambda: inequality_checks(trials=20_000, seed=312),
    ]
    for (d, k), us in dims.items():
        plan.append(lambda d=d, k=k, us=us: verify_subspace_membership(
            d, k, list(us), trials=2, seed=1000 + d * 10 + k))
    for d, k, t in [(2, 2, 2), (2, 3, 3), (3, 2, 3), (3, 3, 4)]:
        plan.append(lambda d=d, k=k, t=t: verify_low_rank_bias_floor(
            d, k, t, trials=150, seed=400 + d + k + t))
    for k in range(2, 21):
        plan.append(lambda k=k: verify_bias_trace(k))
    for n in range(1, 5):
        plan.append(lambda n=n: verify_bias_matmul(n))
    return plan


def _full_plan() -> list[Callable[[], VerificationReport]]:
    plan = _quick_plan()
    plan += [
        lambda: verify_sum_zero(3, 2, 3),
        lambda: verify_sum_zero(2, 3, 3),
        lambda: verify_moment_identity(2, 2, 3),
        lambda: verify_span_dimension(2, 3, 2),
        lambda: verify_span_dimension(2, 2, 4),
        lambda: verify_bias_tail(2, 8, 0.25, 40_000, seed=501),
        lambda: verify_bias_tail(2, 10, 0.2, 10_000, seed=502),
        lambda: verify_bias_tail(3, 3, 0.3, 2_000, seed=503),
        lambda: verify_expected_bias(3, 2, 2),
        lambda: verify_expected_bias(2, 3, 5, samples=4_000, seed=504),
        lambda: verify_explicit_form(3, 2, g_samples=400, seed=505),
        lambda: verify_explicit_form(4, 2, g_samples=300, seed=506),
        lambda: verify_explicit_form(3, 3, g_samples=300, seed=507),
        lambda: verify_explicit_form(2, 6, g_samples=200, seed=508),
        lambda: verify_linear_preimage(8, trials=200, seed=509),
        lambda: verify_mc_bias(2, 8, samples=200_000, confidence=0.99, seed=510),
        lambda: inequality_checks(trials=100_000, seed=511),
    ]
    for k in range(1, 7):
        for i in range(4):
            plan.append(lambda k=k, i=i: profile_max_check(
                k, (i + 0.37) * k * k / 4.0, random_trials=5_000, seed=600 + 10 * k + i))
    for d, k, t in [(2, 2, 5), (2, 3, 5), (3, 2, 5), (3, 3, 5)]:
        plan.append(lambda d=d, k=k, t=t: verify_low_rank_bias_floor(
            d, k, t, trials=400, seed=700 + d + k + t))
    return plan


PROFILES = {"quick": _quick_plan, "full": _full_plan}


def run_all(profile: str) -> list[VerificationReport]:
    """Run every experiment in the named profile; reports sorted by name.

    The caller decides what a failure means; `all(r.ok() for r in ...)`
    is the suite verdict.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    reports = [fn() for fn in PROFILES[profile]()]
    reports.sort(key=lambda r: (r.name, r.params))
    return reports
