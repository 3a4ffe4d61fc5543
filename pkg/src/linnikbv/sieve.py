"""Segmented bulk sieving engine.

Provides primes, smallest-prime-factor (SPF) tables over ranges, and the
per-integer functions built on them: the two-squares representation count
r(n), the rough-number indicator h, and the enveloping-sieve value f.
Bulk tables are numpy arrays; per-n evaluators return plain Python ints.

Memory policy: SPF tables are built one segment at a time and a single
table never exceeds the segment budget (default 2**22 entries).  The
squarefree-prime product P is never formed; only its prime support below
the smoothness bound Y is stored.
"""

from __future__ import annotations

import math
import os
import struct
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional

import numpy as np

from . import arith
from .errors import ConfigurationError, PreconditionError

DEFAULT_SEGMENT_LENGTH = 1 << 22

# Largest limit for which whole-range working arrays (chi divisor sums,
# totient and Omega tables) may be materialized in one piece.
BULK_TABLE_LIMIT = 1 << 24

CACHE_MAGIC = b"LNKSIEVE"
CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<8sIQQ")  # magic, version, lo, hi


def _check_segment_length(segment_length: int) -> int:
    if segment_length is None:
        return DEFAULT_SEGMENT_LENGTH
    if segment_length < 1:
        raise ConfigurationError(
            f"segment length must be positive, got {segment_length}"
        )
    return segment_length


def _simple_prime_array(limit: int) -> np.ndarray:
    """Primes <= limit by a one-shot sieve; used for base primes only."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def iter_prime_segments(
    limit: int, segment_length: Optional[int] = None
) -> Iterator[np.ndarray]:
    """Yield ascending numpy arrays that together hold all primes <= limit."""
    segment_length = _check_segment_length(segment_length)
    if limit < 2:
        return
    root = isqrt(limit)
    base = _simple_prime_array(root)
    yield base[base <= limit]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_length, limit + 1)
        mask = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, (lo + p - 1) // p * p)
            if start < hi:
                mask[start - lo :: p] = False
        seg = lo + np.flatnonzero(mask)
        if seg.size:
            yield seg.astype(np.int64)
        lo = hi


def primes_up_to(limit: int, segment_length: Optional[int] = None) -> list[int]:
    """Exactly the primes <= limit, ascending."""
    if limit < 0:
        raise PreconditionError(f"primes_up_to requires limit >= 0, got {limit}")
    out: list[int] = []
    for seg in iter_prime_segments(limit, segment_length):
        out.extend(int(p) for p in seg)
    return out


@lru_cache(maxsize=8)
def prime_array(limit: int) -> np.ndarray:
    """Cached read-only array of primes <= limit."""
    segs = list(iter_prime_segments(limit))
    arr = np.concatenate(segs) if segs else np.empty(0, dtype=np.int64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest prime factors for the range [lo, hi).

    spf[n - lo] is the least prime dividing n, n itself when n is prime,
    and the sentinel 1 for the unit n = 1.
    """

    lo: int
    hi: int
    spf: np.ndarray


def factor_table(
    lo: int, hi: int, segment_length: Optional[int] = None
) -> FactorTable:
    """SPF table for [lo, hi); (hi - lo) must fit the segment budget."""
    segment_length = _check_segment_length(segment_length)
    if not 1 <= lo < hi:
        raise PreconditionError(f"factor_table requires 1 <= lo < hi, got [{lo}, {hi})")
    if hi - lo > segment_length:
        raise ConfigurationError(
            f"range [{lo}, {hi}) exceeds the segment budget of {segment_length} entries"
        )
    if hi > 1 << 32:
        raise ConfigurationError("SPF entries are 32-bit; hi must not exceed 2**32")
    spf = np.zeros(hi - lo, dtype=np.uint32)
    for p in _simple_prime_array(isqrt(hi - 1)):
        p = int(p)
        start = max(p * p, (lo + p - 1) // p * p)
        if start >= hi:
            continue
        view = spf[start - lo :: p]
        view[view == 0] = p
    # Untouched entries are primes, plus the unit 1 which is its own sentinel.
    left = np.flatnonzero(spf == 0)
    spf[left] = (left + lo).astype(np.uint32)
    spf.flags.writeable = False  # tables are immutable and safe to share
    return FactorTable(lo, hi, spf)


def factorize(
    n: int, table: Optional[FactorTable] = None, fallback: bool = True
) -> list[tuple[int, int]]:
    """Complete prime factorization [(p, e), ...] with primes ascending.

    Uses the SPF table while the running cofactor stays inside its range
    and falls back to direct division otherwise; with fallback disabled an
    out-of-range cofactor is a precondition violation.
    """
    if n < 1:
        raise PreconditionError(f"factorize requires n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    m = n
    while m > 1:
        if table is not None and table.lo <= m < table.hi:
            p = int(table.spf[m - table.lo])
        elif table is None or fallback:
            # Remaining cofactor has no factor below any prime already taken,
            # so its trial factorization extends the list in order.
            out.extend(arith.factorize_trial(m))
            return out
        else:
            raise PreconditionError(
                f"{m} is outside the factor table range [{table.lo}, {table.hi}) "
                "and fallback is disabled"
            )
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def divisors_of(n: int, table: Optional[FactorTable] = None) -> list[int]:
    """Sorted divisors of n, expanded from its factorization."""
    divs = [1]
    for p, e in factorize(n, table):
        pk = 1
        ext = []
        for _ in range(e):
            pk *= p
            ext.extend(d * pk for d in divs)
        divs.extend(ext)
    divs.sort()
    return divs


def r_two_squares(n: int, table: Optional[FactorTable] = None) -> int:
    """Representations n = x^2 + y^2 counting signs and order, via factorization.

    Zero as soon as a prime 3 mod 4 divides n to an odd power, otherwise
    4 times the product of (e + 1) over primes 1 mod 4.
    """
    if n < 1:
        raise PreconditionError(f"r_two_squares requires n >= 1, got {n}")
    out = 4
    for p, e in factorize(n, table):
        rem = p % 4
        if rem == 3:
            if e % 2:
                return 0
        elif rem == 1:
            out *= e + 1
    return out


def r_via_identity(n: int) -> int:
    """r(n) as 4 * sum of chi over the divisors of n.

    Divisors come from direct trial enumeration, keeping this path
    independent of the factorization machinery behind r_two_squares.
    """
    if n < 1:
        raise PreconditionError(f"r_via_identity requires n >= 1, got {n}")
    return 4 * sum(arith.chi(d) for d in arith.divisors(n))


@dataclass(frozen=True)
class Params:
    """Global parameters: the range bound X, moduli exponent A, residue a.

    Derived quantities are recomputed at construction and never mutated:
    Q = (log X)^A, D = sqrt(X)/(log X)^(A+14), Y = X^(1/(loglog X)^2), and
    primes_y lists the primes up to Y.  The exponent A+14 in D may be
    overridden for desk-scale exploration; outputs flag the override.
    """

    X: int
    A: float
    a: int = 1
    override_exponent: Optional[float] = None
    Q: float = field(init=False, repr=False, compare=False)
    D: float = field(init=False, repr=False, compare=False)
    Y: float = field(init=False, repr=False, compare=False)
    primes_y: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.X < 16:
            raise PreconditionError(
                f"X must be at least 16 so that loglog X is positive, got {self.X}"
            )
        if self.A < 0:
            raise PreconditionError(f"A must be nonnegative, got {self.A}")
        if self.a < 1:
            raise PreconditionError(f"a must be a positive integer, got {self.a}")
        log_x = math.log(self.X)
        exponent = self.A + 14.0 if self.override_exponent is None else float(self.override_exponent)
        object.__setattr__(self, "Q", log_x**self.A)
        object.__setattr__(self, "D", math.sqrt(self.X) / log_x**exponent)
        object.__setattr__(self, "Y", self.X ** (1.0 / math.log(log_x) ** 2))
        object.__setattr__(self, "primes_y", tuple(primes_up_to(int(self.Y))))
        object.__setattr__(self, "_prime_set_y", frozenset(self.primes_y))

    @property
    def exponent(self) -> float:
        return self.A + 14.0 if self.override_exponent is None else float(self.override_exponent)


def h_indicator(n: int, params: Params) -> int:
    """1 when n has no prime factor <= Y, else 0.

    Tests divisibility by the primes below Y directly; the product P of
    those primes is never formed.
    """
    if n < 1:
        raise PreconditionError(f"h_indicator requires n >= 1, got {n}")
    for p in params.primes_y:
        if n % p == 0:
            return 0
    return 1


def f_enveloping(n: int, params: Params) -> int:
    """Enveloping-sieve value g(n) + h(n), always 0 or 1 and 1 on primes.

    g is the indicator of primes not exceeding Y; any such prime divides P,
    so g and h are never 1 together.
    """
    if n < 1:
        raise PreconditionError(f"f_enveloping requires n >= 1, got {n}")
    g = 1 if n in params._prime_set_y else 0
    return g + h_indicator(n, params)


def _check_bulk_limit(limit: int) -> None:
    if limit > BULK_TABLE_LIMIT:
        raise ConfigurationError(
            f"whole-range table for limit {limit} exceeds the bulk cap of "
            f"{BULK_TABLE_LIMIT}; this toolkit targets desk-scale ranges"
        )


@lru_cache(maxsize=4)
def chi_divisor_sums(limit: int) -> np.ndarray:
    """Array b with b[n] = sum of chi(d) over divisors d of n, 0 <= n <= limit.

    Even divisors contribute nothing, so only odd d are sieved.  By the
    two-squares identity, r(n) = 4 * b[n].
    """
    _check_bulk_limit(limit)
    b = np.zeros(limit + 1, dtype=np.int32)
    for d in range(1, limit + 1, 4):
        b[d::d] += 1
    for d in range(3, limit + 1, 4):
        b[d::d] -= 1
    b.flags.writeable = False
    return b


def chi_range_sums(limit: int, D: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-n chi sums over divisors split at D and limit/D.

    Returns (low, mid, high) with low[n] summing chi(d) over d | n, d <= D,
    mid over D < d < limit/D, and high over d >= limit/D.  Membership is
    tested independently per displayed inequality, so the low and high
    ranges can only both contain a d when D >= limit/D.
    """
    _check_bulk_limit(limit)
    upper = limit / D
    low = np.zeros(limit + 1, dtype=np.int32)
    mid = np.zeros(limit + 1, dtype=np.int32)
    high = np.zeros(limit + 1, dtype=np.int32)
    for d in range(1, limit + 1, 2):
        c = 1 if d % 4 == 1 else -1
        if d <= D:
            low[d::d] += c
        if D < d < upper:
            mid[d::d] += c
        if d >= upper:
            high[d::d] += c
    return low, mid, high


@lru_cache(maxsize=4)
def totient_table(limit: int) -> np.ndarray:
    """Euler phi for 0..limit as an int64 array (phi[0] = 0)."""
    _check_bulk_limit(limit)
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    phi.flags.writeable = False
    return phi


@lru_cache(maxsize=4)
def omega_table(limit: int) -> np.ndarray:
    """Omega (prime factors with multiplicity) for 0..limit as uint8."""
    _check_bulk_limit(limit)
    om = np.zeros(limit + 1, dtype=np.uint8)
    for seg in iter_prime_segments(limit):
        for p in seg:
            pk = int(p)
            while pk <= limit:
                om[pk::pk] += 1
                pk *= int(p)
    om.flags.writeable = False
    return om


def write_factor_table(table: FactorTable, path) -> None:
    """Serialize an SPF table: magic, version, range, little-endian u32 entries."""
    header = _CACHE_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.lo, table.hi)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(table.spf.astype("<u4").tobytes())
    os.replace(tmp, path)


def read_factor_table(
    path, lo: Optional[int] = None, hi: Optional[int] = None
) -> Optional[FactorTable]:
    """Load a cached SPF table, or None when the file is absent or invalid.

    Validation covers the magic bytes, the format version, range sanity,
    the payload length, and (when given) the expected [lo, hi).
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError:
        return None
    if len(data) < _CACHE_HEADER.size:
        return None
    magic, version, flo, fhi = _CACHE_HEADER.unpack_from(data)
    if magic != CACHE_MAGIC or version != CACHE_VERSION or not 1 <= flo < fhi:
        return None
    if lo is not None and (flo, fhi) != (lo, hi):
        return None
    if len(data) != _CACHE_HEADER.size + 4 * (fhi - flo):
        return None
    spf = np.frombuffer(data, dtype="<u4", offset=_CACHE_HEADER.size)
    return FactorTable(int(flo), int(fhi), spf)


def factor_table_cached(
    lo: int,
    hi: int,
    cache_dir: Optional[str] = None,
    segment_length: Optional[int] = None,
) -> FactorTable:
    """factor_table with an optional binary cache; results are identical."""
    if cache_dir is None:
        return factor_table(lo, hi, segment_length)
    path = os.path.join(cache_dir, f"spf-{lo}-{hi}.bin")
    cached = read_factor_table(path, lo, hi)
    if cached is not None:
        return cached
    table = factor_table(lo, hi, segment_length)
    try:
        os.makedirs(cache_dir, exist_ok=True)
        write_factor_table(table, path)
    except OSError as exc:
        print(f"warning: could not write sieve cache {path}: {exc}", file=sys.stderr)
    return table
