"""Empirical checkers for the quantitative lemmas.

Each checker computes its left-hand side exactly (or with compensated
floating summation past the exact-arithmetic cutoff) and can be wrapped in
a LemmaReport that evaluates the right-hand-side envelope with implied
constant 1.  The implied constants are non-effective, so the interesting
output is always the ratio, never a pass/fail on the constant.

Sums of rationals switch from Fraction accumulation to math.fsum once the
term count exceeds EXACT_SUM_TERM_LIMIT; below it, results are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Union

import numpy as np

from . import arith
from .arith import Residue
from .errors import PreconditionError
from .sieve import (
    Params,
    divisors_of,
    f_enveloping,
    factor_table_cached,
    omega_table,
    prime_array,
    totient_table,
    DEFAULT_SEGMENT_LENGTH,
)

Real = Union[int, float, Fraction]

EXACT_SUM_TERM_LIMIT = 20_000

# Denominator cap below which an alpha passed as float is treated as the
# exact rational it represents (covers 1/2 .. 7/4 in quarter steps).
EXACT_ALPHA_DENOMINATOR = 64


@dataclass(frozen=True)
class LemmaReport:
    """A checker's exact lhs against its envelope, constant taken as 1."""

    lemma_id: str
    inputs: dict
    lhs: Real
    envelope: float
    ratio: float


class BrunTitchmarshResult(NamedTuple):
    count: int
    bound: float
    holds: bool


def gamma_alpha(alpha: float) -> float:
    """Exponent alpha - alpha*log(alpha) from the Omega-restricted bounds."""
    return alpha - alpha * math.log(alpha)


def _loglog(x: float) -> float:
    return math.log(math.log(x))


def _sum_fractions(terms: list[Fraction]) -> Union[Fraction, float]:
    if len(terms) <= EXACT_SUM_TERM_LIMIT:
        return sum(terms, Fraction(0))
    return math.fsum(float(t) for t in terms)


def hooley1_lhs(
    X: int, omega: float = 1.0, cache_dir: Optional[str] = None
) -> int:
    """Sum over p <= X of |sum of chi over divisors of p-1 in the middle window|.

    The window is sqrt(X)(log X)^-omega < d < sqrt(X)(log X)^omega, open on
    both sides.  Exact integer.
    """
    if X < 16:
        raise PreconditionError(f"hooley1_lhs requires X >= 16, got {X}")
    if not omega > 0:
        raise PreconditionError(f"omega must be positive, got {omega}")
    log_x = math.log(X)
    lo = math.sqrt(X) * log_x**-omega
    hi = math.sqrt(X) * log_x**omega
    table = (
        factor_table_cached(1, X + 1, cache_dir)
        if X + 1 <= DEFAULT_SEGMENT_LENGTH
        else None
    )
    total = 0
    for p in prime_array(X):
        inner = 0
        for d in divisors_of(int(p) - 1, table):
            if lo < d < hi:
                inner += arith.chi(d)
        total += abs(inner)
    return total


def brun_titchmarsh_check(X: int, q: int, a: int) -> BrunTitchmarshResult:
    """pi(X; q, a) against the explicit bound 2X/(phi(q) log(2X/q))."""
    if not 1 <= q < X:
        raise PreconditionError(f"brun_titchmarsh_check requires 1 <= q < X, got q={q}, X={X}")
    if gcd(a, q) != 1:
        raise PreconditionError(f"gcd(a, q) must be 1, got gcd({a}, {q}) > 1")
    primes = prime_array(X)
    count = int(np.count_nonzero(primes % q == a % q))
    bound = 2.0 * X / (arith.euler_phi(q) * math.log(2.0 * X / q))
    return BrunTitchmarshResult(count, bound, count < bound)


def count_N(n: int, r: int) -> int:
    """Number of prime pairs (p1, p2) with p1 + r*p2 = n; requires r < n/2."""
    if r < 1:
        raise PreconditionError(f"count_N requires r >= 1, got {r}")
    if 2 * r >= n:
        raise PreconditionError(f"count_N requires r < n/2, got r={r}, n={n}")
    prime_set = set(int(p) for p in prime_array(n))
    count = 0
    for p2 in prime_array((n - 2) // r):
        if n - r * int(p2) in prime_set:
            count += 1
    return count


def f_progression_sum(y: int, k: int, a: int, params: Params) -> int:
    """Exact sum of the enveloping-sieve value over n < y with n = a (k)."""
    if y > params.X:
        raise PreconditionError(f"y = {y} exceeds X = {params.X}")
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    start = a % k
    if start == 0:
        start = k
    return sum(f_enveloping(n, params) for n in range(start, y, k))


def estimate_B(params: Params, y: int) -> Fraction:
    """Density proxy (1/y) * sum over n < y of the enveloping-sieve value.

    A stand-in for the lemma's implicit progression density; reported
    against the envelope (loglog X)^2 / log X.
    """
    if not 2 <= y <= params.X:
        raise PreconditionError(f"estimate_B requires 2 <= y <= X, got y={y}")
    return Fraction(sum(f_enveloping(n, params) for n in range(1, y)), y)


def _omega_values(limit: int):
    """Omega lookup for 1..limit, bulk when the table fits, direct otherwise."""
    if limit <= 1 << 22:
        table = omega_table(limit)
        return lambda n: int(table[n])
    return arith.omega_big


def omega_power_sum(y: int, alpha: Real) -> Union[Fraction, float]:
    """Sum over n <= y of alpha^Omega(n); alpha confined to [1/2, 7/4].

    Exact when alpha is (a float spelling of) a small-denominator rational
    and the range is inside the exact-arithmetic cutoff.
    """
    if y < 1:
        raise PreconditionError(f"omega_power_sum requires y >= 1, got {y}")
    alpha_frac = Fraction(alpha)
    if not Fraction(1, 2) <= alpha_frac <= Fraction(7, 4):
        raise PreconditionError(f"alpha must lie in [1/2, 7/4], got {alpha}")
    om = _omega_values(y)
    if alpha_frac.denominator <= EXACT_ALPHA_DENOMINATOR and y <= EXACT_SUM_TERM_LIMIT:
        return sum((alpha_frac ** om(n) for n in range(1, y + 1)), Fraction(0))
    af = float(alpha_frac)
    return math.fsum(af ** om(n) for n in range(1, y + 1))


def hooley13_sum(y: int, alpha: float, omega: float = 1.0) -> Union[Fraction, float]:
    """Sum of 1/n over the middle window with Omega(n) <= alpha*loglog y.

    Window: sqrt(y)(log y)^-omega < n < sqrt(y)(log y)^omega, open.
    """
    if y < 16:
        raise PreconditionError(f"hooley13_sum requires y >= 16 (> e^e), got {y}")
    if not 0.5 <= alpha < 1:
        raise PreconditionError(f"alpha must lie in [1/2, 1), got {alpha}")
    if not omega > 0:
        raise PreconditionError(f"omega must be positive, got {omega}")
    log_y = math.log(y)
    lo = math.sqrt(y) * log_y**-omega
    hi = math.sqrt(y) * log_y**omega
    threshold = alpha * math.log(log_y)
    first = int(lo) + 1  # least integer strictly above lo (lo > 0)
    om = _omega_values(int(hi)) if hi >= first else arith.omega_big
    terms = [
        Fraction(1, n)
        for n in range(max(first, 1), math.ceil(hi))
        if lo < n < hi and om(n) <= threshold
    ]
    return _sum_fractions(terms)


def hooley13q_sum(y: int, alpha: float, q: int) -> Union[Fraction, float]:
    """Sum of 1/n over n <= y, q | n, with Omega(n) > alpha*loglog y - 1."""
    if y < 16:
        raise PreconditionError(f"hooley13q_sum requires y >= 16, got {y}")
    if not 1 < alpha <= 1.5:
        raise PreconditionError(f"alpha must lie in (1, 3/2], got {alpha}")
    if q < 1:
        raise PreconditionError(f"q must be positive, got {q}")
    threshold = alpha * _loglog(y) - 1.0
    om = _omega_values(y)
    terms = [
        Fraction(1, n) for n in range(q, y + 1, q) if om(n) > threshold
    ]
    return _sum_fractions(terms)


def hooley14_partial(
    r: int, s: int, n: int, y: Real, L: int
) -> Union[Fraction, float]:
    """Partial sum over y <= l <= L, (l, ns) = 1, of chi(l)/phi(r*s*l).

    The full sum converges only conditionally; callers bracket it with
    cutoffs L and L + 4 (one character period).  An empty range gives 0.
    """
    if min(r, s, n) < 1:
        raise PreconditionError("hooley14_partial requires r, s, n >= 1")
    if gcd(r * s, n) != 1:
        raise PreconditionError(f"gcd(rs, n) must be 1, got rs={r * s}, n={n}")
    ns = n * s
    terms = []
    for l in range(max(math.ceil(y), 1), L + 1):
        if l % 2 and gcd(l, ns) == 1:
            terms.append(Fraction(arith.chi(l), arith.euler_phi(r * s * l)))
    return _sum_fractions(terms)


def hooley15_sums(
    u: Real,
    u_prime: Real,
    omega: float,
    n: int,
    which: int,
    params: Params,
) -> Union[Fraction, float]:
    """One of three double sums over h <= u, u/h < d < u(log X)^omega / h.

    which = 1 sums the divisor-sum envelope R_n(h, d, u'/h); which = 2 sums
    sigma_-1(d)/(hd) * sigma_-1(n, u'/h); which = 3 sums (h/u)(1/(hd)).
    The u/h and u'/h thresholds are exact rationals; only the (log X)^omega
    stretch factor is floating point.
    """
    if not 1 < u < params.X:
        raise PreconditionError(f"hooley15_sums requires 1 < u < X, got u={u}")
    if u_prime < u:
        raise PreconditionError("hooley15_sums requires u' >= u")
    if not omega > 0:
        raise PreconditionError(f"omega must be positive, got {omega}")
    if not 1 <= n <= params.X:
        raise PreconditionError(f"n must lie in [1, X], got {n}")
    if which not in (1, 2, 3):
        raise PreconditionError(f"which must be 1, 2, or 3, got {which}")
    u_exact = Fraction(u)
    up_exact = Fraction(u_prime)
    stretch = math.log(params.X) ** omega
    float_terms: list[float] = []
    frac_terms: list[Fraction] = []
    h = 1
    while h <= u_exact:
        d_lo = u_exact / h
        d_hi = float(u_exact) * stretch / h
        y_h = up_exact / h
        d = int(d_lo) + 1
        while d < d_hi:
            if d > d_lo:
                if which == 1:
                    float_terms.append(arith.r_envelope(n, h, d, y_h))
                elif which == 2:
                    frac_terms.append(
                        arith.sigma_minus1(d) / (h * d) * arith.sigma_minus1(n, y_h)
                    )
                else:
                    frac_terms.append(Fraction(h) / u_exact / (h * d))
            d += 1
        h += 1
    if which == 1:
        return math.fsum(float_terms)
    return _sum_fractions(frac_terms)


def murty_sum(X: int) -> Union[Fraction, float]:
    """Sum over n <= X of 1/phi(n); exact below the term cutoff."""
    if X < 2:
        raise PreconditionError(f"murty_sum requires X >= 2, got {X}")
    phi = totient_table(X)
    if X <= EXACT_SUM_TERM_LIMIT:
        return sum((Fraction(1, int(phi[n])) for n in range(1, X + 1)), Fraction(0))
    return math.fsum(1.0 / float(phi[n]) for n in range(1, X + 1))


def _epq_scan(p: int, q: int, params: Params) -> tuple[int, int]:
    if q < 1:
        raise PreconditionError(f"q must be positive, got {q}")
    if p > params.X:
        raise PreconditionError(f"p = {p} exceeds X = {params.X}")
    if p < 2 or arith.factorize_trial(p) != [(p, 1)]:
        raise PreconditionError(f"p = {p} is not prime")
    D = params.D
    upper = params.X / D
    if D >= upper:
        return 0, 0
    count = signed = 0
    # Any qualifying d divides p - 1, so scanning divisors is exhaustive.
    for d in arith.divisors(p - 1):
        if not D < d < upper or gcd(d, q) != 1:
            continue
        l = arith.crt_l(Residue(1 % d, d), Residue(params.a % q, q))
        if l is None or gcd(l.value, d * q) != 1:
            continue
        if p % (d * q) == l.value:
            count += 1
            signed += arith.chi(d)
    return count, signed


def e_pq(p: int, q: int, params: Params) -> int:
    """Count of d in (D, X/D), (d, q) = 1, with p = l(d, q) mod dq and
    (l(d, q), dq) = 1, where l lifts 1 mod d and a mod q."""
    return _epq_scan(p, q, params)[0]


def f_pq(p: int, q: int, params: Params) -> int:
    """Same range and congruence conditions as e_pq, weighted by chi(d)."""
    return _epq_scan(p, q, params)[1]


# --- envelope shapes and reporting --------------------------------------

THETA0 = 0.5 - 0.25 * math.e * math.log(2.0)


def _report(lemma_id, inputs, lhs, envelope) -> LemmaReport:
    # Sign-indefinite sums keep their sign in lhs; the ratio is a magnitude.
    return LemmaReport(lemma_id, dict(inputs), lhs, envelope, abs(float(lhs)) / envelope)


def report(lemma_id: str, params: Optional[Params] = None, **inputs) -> LemmaReport:
    """Run one checker and wrap lhs, constant-1 envelope, and their ratio."""
    if lemma_id == "hooley1":
        inputs.setdefault("omega", 1.0)
        X, omega = inputs["X"], inputs["omega"]
        lhs = hooley1_lhs(X, omega, inputs.get("cache_dir"))
        inputs.pop("cache_dir", None)
        env = X * _loglog(X) ** 5 / math.log(X) ** (1.0 + THETA0)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "brun_titchmarsh":
        X, q, a = inputs["X"], inputs["q"], inputs["a"]
        res = brun_titchmarsh_check(X, q, a)
        return _report(lemma_id, inputs, res.count, res.bound)
    if lemma_id == "count_n":
        n, r = inputs["n"], inputs["r"]
        lhs = count_N(n, r)
        env = n**2 / (arith.euler_phi(n * r) * math.log(n / r) ** 2)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "f_progression":
        y, k, a = inputs["y"], inputs["k"], inputs["a"]
        lhs = f_progression_sum(y, k, a, params)
        X = params.X
        env = _loglog(X) ** 2 / math.log(X) * y / arith.euler_phi(k)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "estimate_b":
        y = inputs["y"]
        lhs = estimate_B(params, y)
        X = params.X
        env = _loglog(X) ** 2 / math.log(X)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "omega_power":
        y, alpha = inputs["y"], inputs["alpha"]
        lhs = omega_power_sum(y, alpha)
        env = y * math.log(2.0 * y) ** (float(alpha) - 1.0)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "hooley13":
        inputs.setdefault("omega", 1.0)
        y, alpha, omega = inputs["y"], inputs["alpha"], inputs["omega"]
        lhs = hooley13_sum(y, alpha, omega)
        env = math.log(y) ** (gamma_alpha(alpha) - 1.0) * _loglog(y)
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "hooley13q":
        y, alpha, q = inputs["y"], inputs["alpha"], inputs["q"]
        lhs = hooley13q_sum(y, alpha, q)
        env = (
            float(alpha) ** arith.omega_big(q)
            / q
            * math.log(y) ** gamma_alpha(alpha)
            * _loglog(y)
        )
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "hooley14":
        r, s, n, y, L = (inputs[k] for k in ("r", "s", "n", "y", "L"))
        lhs = hooley14_partial(r, s, n, y, L)
        X = params.X
        ll = _loglog(X)
        env = (
            ll * arith.r_envelope(n, r, s, y)
            + ll * float(arith.sigma_minus1(s)) / (r * s) * float(arith.sigma_minus1(n, y))
            + ll**2 / (r * s * float(y))
        )
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "hooley15":
        u, up, omega, n, which = (
            inputs[k] for k in ("u", "u_prime", "omega", "n", "which")
        )
        lhs = hooley15_sums(u, up, omega, n, which, params)
        env = _loglog(params.X) ** {1: 4, 2: 3, 3: 1}[which]
        return _report(lemma_id, inputs, lhs, env)
    if lemma_id == "murty":
        X = inputs["X"]
        lhs = murty_sum(X)
        return _report(lemma_id, inputs, lhs, math.log(X))
    raise PreconditionError(f"unknown lemma id: {lemma_id}")
