"""Headline computations: r-weighted prime counts, progression discrepancies,
the averaged discrepancy over moduli q <= (log X)^A, its four-way divisor-range
decomposition, and the truncated product for the shifted-prime asymptotic.

All counts and main terms are exact (integers and Fractions); floating point
enters only in the final constant product and in reporting.  Prime-range work
is chunked with a fixed chunk size so that thread count never changes results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .errors import PreconditionError
from .sieve import (
    Params,
    chi_divisor_sums,
    chi_range_sums,
    iter_prime_segments,
    prime_array,
)

# Fixed work-partition size for parallel reductions; independent of the
# thread count so that partial results merge identically.
REDUCTION_CHUNK = 1 << 16


@dataclass(frozen=True)
class DiscrepancyRow:
    """One progression: its r-weighted prime count against the main term."""

    q: int
    a: int
    weighted_count: int
    main_term: Fraction
    discrepancy: Fraction


@dataclass(frozen=True)
class DecompositionResult:
    """The four divisor-range sums plus the exact averaged discrepancy."""

    S1: Fraction
    S2: Fraction
    S3: Fraction
    S4: Fraction
    lhs: Fraction
    params: Params

    @property
    def total(self) -> Fraction:
        return self.S1 + self.S2 + self.S3 + self.S4


@dataclass(frozen=True)
class LinnikConstant:
    """Truncated shifted-prime constant with its truncation point and tail."""

    value: float
    prime_bound: int
    tail_bound: float


def theta0() -> float:
    """The error-saving exponent 1/2 - e*log(2)/4 = 0.0289..."""
    return 0.5 - 0.25 * math.e * math.log(2.0)


def _map_ordered(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _chunks(length):
    return [(i, min(i + REDUCTION_CHUNK, length)) for i in range(0, length, REDUCTION_CHUNK)]


def sum_r_shifted_primes(X: int, threads: int = 1) -> int:
    """Exact sum of r(p - 1) over primes p <= X.

    Evaluated from the bulk chi divisor-sum table (r(n) = 4 sum chi(d)),
    reduced chunk by chunk; integer addition makes the merge order moot.
    """
    if X < 2:
        raise PreconditionError(f"sum_r_shifted_primes requires X >= 2, got {X}")
    vals = chi_divisor_sums(X)[prime_array(X) - 1]
    partials = _map_ordered(
        lambda span: int(vals[span[0] : span[1]].sum()), _chunks(len(vals)), threads
    )
    return 4 * sum(partials)


def linnik_constant(tolerance: float) -> LinnikConstant:
    """pi times the product of (1 + chi(p)/(p(p-1))) over odd primes p <= B.

    B is the least bound making the comparison tail sum over all integers,
    1/B, no larger than the requested tolerance; that bound dominates the
    prime tail of the log of the product.
    """
    if not tolerance > 0:
        raise PreconditionError(f"tolerance must be positive, got {tolerance}")
    bound = max(3, math.ceil(1.0 / tolerance))
    acc = 1.0
    for seg in iter_prime_segments(bound):
        seg = seg[seg > 2]
        if seg.size == 0:
            continue
        p = seg.astype(np.float64)
        factors = 1.0 + np.where(seg % 4 == 1, 1.0, -1.0) / (p * (p - 1.0))
        acc *= float(np.prod(factors))
    return LinnikConstant(math.pi * acc, bound, 1.0 / bound)


def discrepancy(X: int, q: int, a: int) -> DiscrepancyRow:
    """Exact r-weighted count over p = a (q), its main term, and their gap."""
    if X < 2:
        raise PreconditionError(f"discrepancy requires X >= 2, got {X}")
    if q < 1 or a < 1:
        raise PreconditionError("discrepancy requires q >= 1 and a >= 1")
    if math.gcd(a, q) != 1:
        raise PreconditionError(f"gcd(a, q) must be 1, got gcd({a}, {q}) > 1")
    primes = prime_array(X)
    vals = chi_divisor_sums(X)[primes - 1]
    weighted = 4 * int(vals[primes % q == a % q].sum())
    main = Fraction(4 * int(vals.sum()), arith.euler_phi(q))
    return DiscrepancyRow(q, a, weighted, main, weighted - main)


def _moduli(params: Params) -> list[int]:
    qs = []
    q = 1
    while q <= params.Q:
        if math.gcd(q, params.a) == 1:
            qs.append(q)
        q += 1
    return qs


def bv_sum(params: Params, threads: int = 1) -> Fraction:
    """Sum over q <= Q with (q, a) = 1 of |weighted count - main term|.

    Single pass: the per-prime weights are materialized once and every
    modulus reuses them through its own accumulator.
    """
    primes = prime_array(params.X)
    vals = chi_divisor_sums(params.X)[primes - 1]
    total = 4 * int(vals.sum())
    a = params.a

    def term(q):
        weighted = 4 * int(vals[primes % q == a % q].sum())
        return abs(Fraction(weighted) - Fraction(total, arith.euler_phi(q)))

    return sum(_map_ordered(term, _moduli(params), threads), Fraction(0))


def split_r_by_ranges(p: int, params: Params) -> tuple[int, int, int]:
    """chi sums over divisors of p - 1 in the ranges cut at D and X/D.

    Four times the combined total recovers r(p - 1) whenever the two cut
    points do not cross (D < X/D), which holds for every nonnegative
    exponent choice except D = sqrt(X) exactly.
    """
    if p > params.X:
        raise PreconditionError(f"p = {p} exceeds X = {params.X}")
    if p < 2 or arith.factorize_trial(p) != [(p, 1)]:
        raise PreconditionError(f"p = {p} is not prime")
    D = params.D
    upper = params.X / D
    low = mid = high = 0
    for d in arith.divisors(p - 1):
        c = arith.chi(d)
        if d <= D:
            low += c
        if D < d < upper:
            mid += c
        if d >= upper:
            high += c
    return low, mid, high


def decompose(params: Params, threads: int = 1) -> DecompositionResult:
    """The four divisor-range sums S1..S4 by direct summation, plus the lhs.

    S1 and S2 compare progression-restricted inner sums with their
    1/phi(q)-scaled totals over the low (d <= D) and high (d >= X/D)
    divisor ranges; S3 carries 1/phi(q) outside an absolute value taken
    per prime over the middle range; S4 is the progression-restricted
    middle-range sum with no main term subtracted.
    """
    if params.D < 2:
        raise PreconditionError(
            f"degenerate-D: D = {params.D:.6g} < 2 leaves the range d <= D empty; "
            "override the exponent to explore this X"
        )
    X, a = params.X, params.a
    low, mid, high = chi_range_sums(X, params.D)
    primes = prime_array(X)
    vl = low[primes - 1].astype(np.int64)
    vm = mid[primes - 1].astype(np.int64)
    vh = high[primes - 1].astype(np.int64)
    vr = chi_divisor_sums(X)[primes - 1]
    t_low = int(vl.sum())
    t_high = int(vh.sum())
    t_mid_abs = int(np.abs(vm).sum())
    t_r = 4 * int(vr.sum())

    def terms(q):
        phi = arith.euler_phi(q)
        mask = primes % q == a % q
        s1 = abs(Fraction(int(vl[mask].sum())) - Fraction(t_low, phi))
        s2 = abs(Fraction(int(vh[mask].sum())) - Fraction(t_high, phi))
        s3 = Fraction(t_mid_abs, phi)
        s4 = abs(int(vm[mask].sum()))
        lhs_q = abs(Fraction(4 * int(vr[mask].sum())) - Fraction(t_r, phi))
        return s1, s2, s3, s4, lhs_q

    parts = _map_ordered(terms, _moduli(params), threads)
    S = [sum(col, Fraction(0)) for col in zip(*parts)] if parts else [Fraction(0)] * 5
    return DecompositionResult(S[0], S[1], S[2], S[3], S[4], params)
