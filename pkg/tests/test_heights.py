import math
import random
from fractions import Fraction as F

import mpmath
import pytest

import _oracles as oracle
from heightlab.errors import DomainError, PrecisionExhausted
from heightlab.families import laguerre_poly
from heightlab.intervals import hi, lo
from heightlab.heights import (
    HeightValue,
    archimedean_split,
    combination_degree,
    dobrowolski_voutier,
    height_additive,
    height_multiplicative,
    log_embedding,
    log_mahler_additive,
    mahler_from_poly,
    norm_of_combination,
    orbit_log_mahler,
)
from heightlab.perms import GroupTag
from heightlab.poly import IntPoly
from heightlab.roots import find_roots
from heightlab.snfun import center, s_n_bruteforce

AN, SN = GroupTag.ALTERNATING, GroupTag.SYMMETRIC
GOLDEN = IntPoly([-1, -1, 1])

# [DERIVED] frozen from _oracles.additive_height (mpmath.polyroots + itertools over A_n)
L4_ADDITIVE_0123 = "1.99932996044810128178035512219"
L8_ADDITIVE_0TO7 = "3.48285485221434681352064492726"


@pytest.fixture(autouse=True)
def wide_mp():
    with mpmath.workdps(60):
        yield


def close(hv: HeightValue, expected, tol) -> bool:
    return abs(hv.value - mpmath.mpf(expected)) <= tol + hv.error_radius


def test_mahler_examples():
    hv = mahler_from_poly(GOLDEN, find_roots(GOLDEN, 100))
    assert close(hv, mpmath.log((1 + mpmath.sqrt(5)) / 2), 1e-25)
    q = IntPoly([-1, 0, 0, 0, 1])
    assert close(mahler_from_poly(q, find_roots(q, 100)), 0, 1e-25)
    lin = IntPoly([-3, 2])
    assert close(mahler_from_poly(lin, find_roots(lin, 100)), mpmath.log(3), 1e-25)


@pytest.mark.parametrize("coeffs", [[24, 24, 12, 4, 1], [7, 1, 0, 3], [-1, -1, 0, 0, 0, 1], [-3, 0, 2]])
def test_mahler_matches_polyroots(coeffs):
    p = IntPoly(coeffs)
    hv = mahler_from_poly(p, find_roots(p, 100))
    assert close(hv, oracle.log_mahler(coeffs, 50), 1e-25)


def test_mahler_tolerance_refines():
    cs = find_roots(GOLDEN, 40)
    hv = mahler_from_poly(GOLDEN, cs, tol=mpmath.mpf("1e-40"))
    assert hv.error_radius <= mpmath.mpf("1e-40")
    with pytest.raises(PrecisionExhausted):
        mahler_from_poly(GOLDEN, cs, tol=mpmath.mpf("1e-3000"))


def test_log_embedding():
    # entries are certified intervals
    x = log_embedding(find_roots(GOLDEN, 100))
    with mpmath.workdps(200):
        logphi = mpmath.log((1 + mpmath.sqrt(5)) / 2)
        assert lo(x.entries[0]) <= -logphi <= hi(x.entries[0])
        assert lo(x.entries[1]) <= logphi <= hi(x.entries[1])
    zero = log_embedding(find_roots(IntPoly([-1, 0, 0, 0, 1]), 100))
    assert all(lo(v) <= 0 <= hi(v) for v in zero.entries)
    lag = log_embedding(find_roots(laguerre_poly(4), 100))
    total = mpmath.fsum(lo(v) for v in lag.entries)
    assert abs(total - mpmath.log(24)) < 1e-25
    with pytest.raises(DomainError):
        log_embedding(find_roots(IntPoly([0, -1, 0, 1]), 100))


def test_multiplicative_height():
    cs = find_roots(GOLDEN, 100)
    assert close(height_multiplicative(cs, [0, 0], SN), 0, 1e-25)
    assert close(height_multiplicative(cs, [1, 1], SN), 0, 1e-25)
    # alpha = phi / (-1/phi) = -phi^2, conjugate -1/phi^2: h = log phi
    hv = height_multiplicative(cs, [1, -1], SN)
    assert close(hv, mpmath.log((1 + mpmath.sqrt(5)) / 2), 1e-25)


def test_multiplicative_height_needs_unit():
    cs = find_roots(laguerre_poly(4), 100)
    with pytest.raises(DomainError, match="thm12_bound"):
        height_multiplicative(cs, [1, 2, 3, 4], AN)
    with pytest.raises(DomainError):
        height_multiplicative(find_roots(GOLDEN, 100), [1, 2, 3], SN)


def test_additive_height_pinned():
    cs = find_roots(laguerre_poly(4), 100)
    assert close(height_additive(cs, [0, 0, 0, 0], AN), 0, 1e-25)
    assert close(height_additive(cs, [0, 1, 2, 3], AN), L4_ADDITIVE_0123, 1e-25)
    p = laguerre_poly(4)
    assert close(height_additive(cs, [1, 0, 0, 0], AN), mahler_from_poly(p, cs).value / 4, 1e-25)


def test_additive_height_laguerre8_pinned():
    cs = find_roots(laguerre_poly(8), 100)
    assert close(height_additive(cs, list(range(8)), AN), L8_ADDITIVE_0TO7, 1e-25)


@pytest.mark.parametrize("a", [[2, -1, 0, 5], [1, 1, 0, 0], [3, 0, 0, 7]])
def test_additive_height_matches_oracle(a):
    coeffs = [24, 24, 12, 4, 1]
    cs = find_roots(IntPoly(coeffs), 100)
    assert close(height_additive(cs, a, AN), oracle.additive_height(coeffs, a), 1e-25)
    assert close(height_additive(cs, a, SN), oracle.additive_height(coeffs, a, even_only=False), 1e-25)


def test_additive_needs_monic():
    cs = find_roots(IntPoly([-3, 0, 2]), 100)
    with pytest.raises(DomainError):
        height_additive(cs, [1, 0], SN)


def test_norm_of_combination():
    cs = find_roots(laguerre_poly(4), 100)
    hv = norm_of_combination(cs, [1, 2, 3, 4], AN, "multiplicative")
    assert close(hv, mpmath.mpf(5) / 2 * mpmath.log(24), 1e-25)
    assert close(norm_of_combination(cs, [0, 0, 0, 0], AN, "multiplicative"), 0, 1e-25)
    # alpha = trace = -4 in every conjugate
    assert close(norm_of_combination(cs, [1, 1, 1, 1], AN, "additive"), mpmath.log(4), 1e-25)
    with pytest.raises(DomainError):
        norm_of_combination(cs, [1, 2, 3, 4], AN, "sideways")


def test_norm_matches_oracle():
    coeffs = [24, 24, 12, 4, 1]
    cs = find_roots(IntPoly(coeffs), 100)
    for a in ([1, 1, 2, 3], [2, 2, 2, 5], [0, -3, 1, 4]):
        hv = norm_of_combination(cs, a, AN, "multiplicative")
        assert close(hv, oracle.mean_log_abs_conjugate(coeffs, a), 1e-25)


def test_archimedean_split_identity():
    cs = find_roots(laguerre_poly(5), 100)
    s = archimedean_split(cs, [1, 2, 0, -1, 3], AN)
    assert abs(s.log_plus.value - s.log_norm.value - s.log_minus.value) < 1e-25
    assert close(s.log_norm, mpmath.mpf(5) / 5 * mpmath.log(120), 1e-25)


def test_orbit_log_mahler_vs_s_n():
    x = (F(2), F(-1, 2), F(-1, 2), F(-1, 2), F(-1, 2))
    a = [0, 1, 2, 3, 4]
    n = 5
    assert orbit_log_mahler(x, a) == F(n * math.factorial(n), 4) * s_n_bruteforce(x, center(a))
    assert orbit_log_mahler((0, 0, 0, 0), [1, 2, 3, 4]) == 0


def test_combination_degree():
    assert combination_degree([0, 1, 2, 3, 4], AN) == 60
    assert combination_degree([1, 1, 2, 3, 4], AN) == 60
    assert combination_degree([1, 1, 1, 2, 3], AN) == 20
    assert combination_degree([1, 1, 2, 3], SN) == 12


def test_log_mahler_additive_is_degree_times_height():
    cs = find_roots(laguerre_poly(4), 100)
    h = height_additive(cs, [0, 1, 2, 3], AN)
    m = log_mahler_additive(cs, [0, 1, 2, 3], AN)
    assert abs(m.value - 12 * h.value) < 1e-25


def test_dobrowolski_voutier():
    def ref(d):
        return (math.log(math.log(d)) / math.log(d)) ** 3 / 4

    assert abs(float(dobrowolski_voutier(100)) - 0.0091174485) < 1e-9
    assert math.isclose(float(dobrowolski_voutier(100)), ref(100), rel_tol=1e-12)
    assert math.isclose(float(dobrowolski_voutier(16)), ref(16), rel_tol=1e-12)
    assert dobrowolski_voutier(3) > 0
    with pytest.raises(DomainError):
        dobrowolski_voutier(2)
    enclosure = dobrowolski_voutier(100, mpmath.iv)
    assert enclosure.a <= ref(100) <= enclosure.b


def test_height_json():
    hv = height_additive(find_roots(laguerre_poly(4), 100), [0, 1, 2, 3], AN)
    data = hv.to_json()
    assert set(data) == {"value", "error_radius", "precision_bits"}
    assert abs(mpmath.mpf(data["value"]) - mpmath.mpf(L4_ADDITIVE_0123)) < 1e-20


def test_random_synthetic_orbit_identity():
    rng = random.Random(5)
    for _ in range(10):
        n = rng.choice((4, 5))
        x = oracle.centered([rng.randint(-6, 6) for _ in range(n)])
        a = [rng.randint(-3, 3) for _ in range(n)]
        direct = F(1, 2) * sum(abs(sum(a[j] * x[s[j]] for j in range(n))) for s in oracle.group(n))
        assert orbit_log_mahler(x, a) == direct
