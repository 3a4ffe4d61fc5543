import math
from math import isqrt

import numpy as np
import pytest

from linnikbv import sieve
from linnikbv.errors import ConfigurationError, PreconditionError
from linnikbv.sieve import FactorTable, Params

import oracles


def bytearray_sieve(limit):
    """Independent one-shot sieve used as the prime oracle."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [n for n, f in enumerate(flags) if f]


def test_primes_examples():
    assert sieve.primes_up_to(10) == [2, 3, 5, 7]
    assert sieve.primes_up_to(1) == []
    assert len(sieve.primes_up_to(10**6)) == 78498


def test_primes_match_oracle():
    assert sieve.primes_up_to(10**4) == bytearray_sieve(10**4)
    assert sieve.primes_up_to(10**6) == bytearray_sieve(10**6)


def test_primes_segmentation_irrelevant():
    expected = sieve.primes_up_to(10**4)
    for seg in (64, 1000, 10**6):
        assert sieve.primes_up_to(10**4, segment_length=seg) == expected


def test_zero_segment_length_rejected():
    with pytest.raises(ConfigurationError):
        sieve.primes_up_to(100, segment_length=0)


def test_factor_table_examples():
    assert sieve.factor_table(2, 10).spf.tolist() == [2, 3, 2, 5, 2, 7, 2, 3]
    assert sieve.factor_table(1, 2).spf.tolist() == [1]
    assert sieve.factor_table(97, 98).spf.tolist() == [97]


def test_factor_table_matches_trial_division():
    table = sieve.factor_table(1, 3000)
    for n in range(1, 3000):
        assert int(table.spf[n - 1]) == oracles.spf(n)


def test_factor_table_budget_enforced():
    with pytest.raises(ConfigurationError):
        sieve.factor_table(1, 1000, segment_length=100)


def test_factor_table_segment_consistency():
    N = 10**5
    whole = sieve.factor_table(2, N)
    for k in (17, 1000, 65536):
        left = sieve.factor_table(2, k)
        right = sieve.factor_table(k, N)
        assert np.array_equal(np.concatenate([left.spf, right.spf]), whole.spf)


def test_factorize_examples():
    assert sieve.factorize(12) == [(2, 2), (3, 1)]
    assert sieve.factorize(1) == []
    assert sieve.factorize(97) == [(97, 1)]


def test_factorize_with_table_and_fallback():
    table = sieve.factor_table(50, 100)
    assert sieve.factorize(75, table) == [(3, 1), (5, 2)]
    assert sieve.factorize(64, table) == [(2, 6)]
    with pytest.raises(PreconditionError):
        sieve.factorize(75, table, fallback=False)


def test_factorize_matches_oracle():
    table = sieve.factor_table(1, 2001)
    for n in range(1, 2001):
        assert sieve.factorize(n, table) == oracles.factorize(n)


def test_factorization_invariants_sampled():
    import random

    rng = random.Random(99)
    table = sieve.factor_table(1, 10**5)
    for _ in range(2000):
        n = rng.randrange(1, 10**5)
        fac = sieve.factorize(n, table)
        primes = [p for p, _ in fac]
        assert primes == sorted(primes) and len(set(primes)) == len(primes)
        assert all(e >= 1 for _, e in fac)
        product = 1
        for p, e in fac:
            product *= p**e
        assert product == n


def test_primes_equal_single_factor_fixed_points():
    N = 10**5
    table = sieve.factor_table(1, N + 1)
    from_factorization = [
        n for n in range(2, N + 1) if sieve.factorize(n, table) == [(n, 1)]
    ]
    assert from_factorization == sieve.primes_up_to(N)


def test_r_two_squares_examples():
    assert sieve.r_two_squares(1) == 4
    assert sieve.r_two_squares(3) == 0
    assert sieve.r_two_squares(25) == 12


def test_r_via_identity_examples():
    assert sieve.r_via_identity(2) == 4
    assert sieve.r_via_identity(9) == 4
    assert sieve.r_via_identity(1) == 4


def test_r_triple_agreement_small():
    table = sieve.factor_table(1, 2001)
    lattice = oracles.r_lattice_bulk(2000)
    for n in range(1, 2001):
        assert sieve.r_two_squares(n, table) == sieve.r_via_identity(n) == lattice[n]


def test_gauss_circle_small():
    N = 500
    table = sieve.factor_table(1, N + 1)
    total = sum(sieve.r_two_squares(n, table) for n in range(1, N + 1))
    assert total == oracles.disk_lattice_count(N)


def test_params_derived_quantities():
    p = Params(10**4, 1.0, 1)
    log_x = math.log(10**4)
    assert p.Q == log_x
    assert p.D == math.sqrt(10**4) / log_x**15.0
    assert p.Y == (10**4) ** (1.0 / math.log(log_x) ** 2)
    assert p.primes_y == (2, 3, 5)
    assert Params(10**6, 0.0).primes_y == (2, 3, 5, 7)


def test_params_override_exponent():
    p = Params(10**4, 1.0, 1, override_exponent=0.0)
    assert p.D == 100.0
    assert p.exponent == 0.0


def test_params_preconditions():
    with pytest.raises(PreconditionError):
        Params(15, 1.0)
    with pytest.raises(PreconditionError):
        Params(100, -0.5)
    with pytest.raises(PreconditionError):
        Params(100, 1.0, 0)


def test_h_indicator_examples():
    big = Params(10**6, 0.0)  # Y ~ 7.4, prime support {2, 3, 5, 7}
    assert sieve.h_indicator(1, big) == 1
    assert sieve.h_indicator(14, big) == 0
    assert sieve.h_indicator(11, big) == 1


def test_f_enveloping_examples():
    big = Params(10**6, 0.0)
    assert sieve.f_enveloping(5, big) == 1
    assert sieve.f_enveloping(11, big) == 1
    assert sieve.f_enveloping(15, big) == 0


def test_f_enveloping_matches_oracle():
    params = Params(10**4, 0.0)
    support = set(params.primes_y)
    for n in range(1, 500):
        assert sieve.f_enveloping(n, params) == oracles.f_value(n, support)


def test_f_enveloping_is_majorant_small():
    params = Params(2 * 10**4, 1.0)
    prime_set = set(sieve.primes_up_to(2 * 10**4))
    for n in range(1, 2 * 10**4 + 1):
        f = sieve.f_enveloping(n, params)
        assert f in (0, 1)
        if n in prime_set:
            assert f == 1


def test_chi_divisor_sums_match_identity():
    b = sieve.chi_divisor_sums(2000)
    for n in range(1, 2001):
        assert 4 * int(b[n]) == sieve.r_via_identity(n)


def test_chi_range_sums_match_split():
    X, D = 2000, 9.7
    low, mid, high = sieve.chi_range_sums(X, D)
    for n in range(1, X + 1, 37):
        l = m = h = 0
        for d in oracles.divisors(n):
            c = oracles.chi(d)
            if d <= D:
                l += c
            if D < d < X / D:
                m += c
            if d >= X / D:
                h += c
        assert (int(low[n]), int(mid[n]), int(high[n])) == (l, m, h)


def test_totient_and_omega_tables():
    phi = sieve.totient_table(2000)
    om = sieve.omega_table(2000)
    for n in range(1, 2001):
        assert int(om[n]) == oracles.omega(n)
    for n in range(1, 301):
        assert int(phi[n]) == oracles.phi(n)


def test_cache_roundtrip(tmp_path):
    table = sieve.factor_table(10, 500)
    path = tmp_path / "seg.bin"
    sieve.write_factor_table(table, path)
    loaded = sieve.read_factor_table(path)
    assert loaded.lo == 10 and loaded.hi == 500
    assert np.array_equal(loaded.spf, table.spf)
    assert sieve.read_factor_table(path, 10, 500) is not None
    assert sieve.read_factor_table(path, 11, 500) is None  # range mismatch


def test_cache_rejects_corruption(tmp_path):
    table = sieve.factor_table(1, 100)
    path = tmp_path / "seg.bin"
    sieve.write_factor_table(table, path)
    raw = bytearray(path.read_bytes())

    bad_magic = tmp_path / "magic.bin"
    bad_magic.write_bytes(b"XXXXXXXX" + bytes(raw[8:]))
    assert sieve.read_factor_table(bad_magic) is None

    bad_version = tmp_path / "version.bin"
    bad_version.write_bytes(bytes(raw[:8]) + b"\x63\x00\x00\x00" + bytes(raw[12:]))
    assert sieve.read_factor_table(bad_version) is None

    truncated = tmp_path / "short.bin"
    truncated.write_bytes(bytes(raw[:-5]))
    assert sieve.read_factor_table(truncated) is None

    assert sieve.read_factor_table(tmp_path / "absent.bin") is None


def test_cache_header_layout(tmp_path):
    table = sieve.factor_table(3, 7)
    path = tmp_path / "seg.bin"
    sieve.write_factor_table(table, path)
    raw = path.read_bytes()
    assert raw[:8] == b"LNKSIEVE"
    assert int.from_bytes(raw[8:12], "little") == 1
    assert int.from_bytes(raw[12:20], "little") == 3
    assert int.from_bytes(raw[20:28], "little") == 7
    assert len(raw) == 28 + 4 * 4
    assert list(raw[28:]) and np.frombuffer(raw, "<u4", offset=28).tolist() == [3, 2, 5, 2]


def test_concurrent_table_construction_is_consistent():
    from concurrent.futures import ThreadPoolExecutor

    bounds = [(1 + 5000 * i, 1 + 5000 * (i + 1)) for i in range(8)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        tables = list(pool.map(lambda b: sieve.factor_table(*b), bounds))
    whole = sieve.factor_table(1, bounds[-1][1])
    joined = np.concatenate([t.spf for t in tables])
    assert np.array_equal(joined, whole.spf)


def test_factor_table_cached(tmp_path):
    fresh = sieve.factor_table_cached(2, 800, cache_dir=str(tmp_path))
    assert (tmp_path / "spf-2-800.bin").exists()
    again = sieve.factor_table_cached(2, 800, cache_dir=str(tmp_path))
    assert np.array_equal(fresh.spf, again.spf)
    plain = sieve.factor_table(2, 800)
    assert np.array_equal(again.spf, plain.spf)
