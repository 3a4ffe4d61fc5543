"""Exact elementary number-theoretic primitives.

Everything here is a pure function of its arguments and uses integer or
rational arithmetic internally; floating point appears only where a value
is genuinely transcendental (r_envelope's logarithm).  Real-valued
thresholds such as y are compared against exact integers directly, which
Python does without rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import NamedTuple, Optional, Union

from .errors import PreconditionError

Real = Union[int, float, Fraction]


class Residue(NamedTuple):
    """A residue class value mod modulus, with 0 <= value < modulus."""

    value: int
    modulus: int


def chi(n: int) -> int:
    """Non-principal character mod 4: +1 on 1 (4), -1 on 3 (4), 0 on evens."""
    if n < 1:
        raise PreconditionError(f"chi requires n >= 1, got {n}")
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


def factorize_trial(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] by trial division, primes ascending."""
    if n < 1:
        raise PreconditionError(f"factorize_trial requires n >= 1, got {n}")
    out = []
    for d in (2, 3):
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
    d = 5
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 2 if d % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    """All divisors of n, ascending, found by scanning d <= sqrt(n)."""
    if n < 1:
        raise PreconditionError(f"divisors requires n >= 1, got {n}")
    small = []
    large = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    large.reverse()
    return small + large


def euler_phi(n: int) -> int:
    """Euler's totient, multiplicative over the prime factorization."""
    if n < 1:
        raise PreconditionError(f"euler_phi requires n >= 1, got {n}")
    out = 1
    for p, e in factorize_trial(n):
        out *= (p - 1) * p ** (e - 1)
    return out


def moebius(n: int) -> int:
    """Moebius function: 0 unless squarefree, else (-1)^(number of primes)."""
    if n < 1:
        raise PreconditionError(f"moebius requires n >= 1, got {n}")
    out = 1
    for _, e in factorize_trial(n):
        if e > 1:
            return 0
        out = -out
    return out


def omega_big(n: int) -> int:
    """Number of prime factors counted with multiplicity; omega_big(1) = 0."""
    if n < 1:
        raise PreconditionError(f"omega_big requires n >= 1, got {n}")
    return sum(e for _, e in factorize_trial(n))


def crt_l(a1: Residue, a2: Residue) -> Optional[Residue]:
    """Simultaneous lift of a1 and a2 to the modulus lcm(d, q).

    Returns the unique residue l mod lcm(d, q) with l = a1 (d) and
    l = a2 (q), or None when a1 and a2 disagree mod gcd(d, q).  The
    degenerate d = q = 1 case yields 0 mod 1.
    """
    v1, d = a1
    v2, q = a2
    if d < 1 or q < 1:
        raise PreconditionError("crt_l requires positive moduli")
    if not (0 <= v1 < d and 0 <= v2 < q):
        raise PreconditionError("crt_l requires reduced residues")
    g = gcd(d, q)
    if (v1 - v2) % g != 0:
        return None
    lcm = d // g * q
    # l = v1 + d*t with d*t = v2 - v1 (q); solve t mod q/g.
    qg = q // g
    t = ((v2 - v1) // g * pow(d // g, -1, qg)) % qg if qg > 1 else 0
    return Residue((v1 + d * t) % lcm, lcm)


def sigma_minus1(n: int, y: Optional[Real] = None) -> Fraction:
    """Sum of 1/d over divisors d of n, restricted to d > y when y is given."""
    if n < 1:
        raise PreconditionError(f"sigma_minus1 requires n >= 1, got {n}")
    total = Fraction(0)
    for d in divisors(n):
        if y is None or d > y:
            total += Fraction(1, d)
    return total


def tau_trunc(n: int, y: Real) -> int:
    """Number of divisors of n that do not exceed y."""
    if n < 1:
        raise PreconditionError(f"tau_trunc requires n >= 1, got {n}")
    return sum(1 for d in divisors(n) if d <= y)


@lru_cache(maxsize=None)
def tau_k(n: int, k: int) -> int:
    """Ordered k-tuples of positive integers with product n.

    Computed by the divisor convolution tau_k = tau_(k-1) * 1, memoized on
    (n, k); callers here only need k <= 4 on small n.
    """
    if n < 1 or k < 1:
        raise PreconditionError("tau_k requires n >= 1 and k >= 1")
    if k == 1:
        return 1
    if n == 1:
        return 1
    return sum(tau_k(d, k - 1) for d in divisors(n))


def r_envelope(n: int, r: int, s: int, y: Real) -> float:
    """Divisor-sum envelope (log 2y)/y * tau_2(s)/(r s) * tau(n, y)."""
    if n < 1 or r < 1 or s < 1:
        raise PreconditionError("r_envelope requires n, r, s >= 1")
    yf = float(y)
    if yf <= 0:
        raise PreconditionError("r_envelope requires y > 0")
    return math.log(2.0 * yf) / yf * (tau_k(s, 2) / (r * s)) * tau_trunc(n, y)
