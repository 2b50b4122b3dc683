import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from heightlab.errors import DomainError
from heightlab.perms import GroupTag
from heightlab.snfun import (
    CenteredVector,
    arrange_for_lemma46,
    c_n,
    center,
    l1_norm,
    lemma46_lower_bound,
    s_n_bruteforce,
    s_n_closed_zy,
    s_n_closed_zz,
    sandwich_check,
    stabilizer_average,
    z_vector,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_centered_vector_rejects_nonzero_sum():
    with pytest.raises(DomainError):
        CenteredVector((F(1), F(1)))


def test_l1_norm_examples():
    assert l1_norm(z_vector(4, 2)) == 1
    assert l1_norm((0, 0, 0)) == 0
    assert l1_norm((3, -1, -1, -1)) == F(3, 2)


def test_center_examples():
    assert center([1, 2, 3]).entries == (-1, 0, 1)
    assert center([5, 5, 5]).entries == (0, 0, 0)
    assert center([0, 1, 2, 4]).entries == (F(-7, 4), F(-3, 4), F(1, 4), F(9, 4))


def test_z_vector_examples():
    assert z_vector(4, 2).entries == (1, 1, -1, -1)
    assert z_vector(3, 1).entries == (F(3, 2), F(-3, 4), F(-3, 4))
    for n in range(2, 9):
        for h in range(1, n):
            assert l1_norm(z_vector(n, h)) == 1


def test_s_n_examples():
    assert s_n_bruteforce((0, 0, 0, 0), z_vector(4, 2)) == 0
    assert s_n_bruteforce(z_vector(4, 2), z_vector(4, 2)) == F(1, 3)
    assert s_n_closed_zz(4, 2, 2) == F(1, 3)
    assert s_n_closed_zy(4, 2, (0, 0, 0, 0)) == 0


def test_s_n_closed_zy_pinned():
    y = (-1, 0, 0, 1)
    expected = oracle.s_n(oracle.z(4, 2), y)
    assert s_n_closed_zy(4, 2, y) == expected == s_n_bruteforce(z_vector(4, 2), y)


@given(st.integers(3, 6).flatmap(lambda n: st.tuples(st.lists(fractions, min_size=n, max_size=n), st.lists(fractions, min_size=n, max_size=n))))
@settings(max_examples=25, deadline=None)
def test_bruteforce_matches_itertools(pair):
    x, y = (oracle.centered(v) for v in pair)
    assert s_n_bruteforce(x, y) == oracle.s_n(x, y)


@given(st.integers(3, 6).flatmap(lambda n: st.lists(fractions, min_size=n, max_size=n)), st.data())
@settings(max_examples=25, deadline=None)
def test_symmetric_variant(raw, data):
    y = oracle.centered(raw)
    x = oracle.centered(data.draw(st.lists(fractions, min_size=len(raw), max_size=len(raw))))
    assert s_n_bruteforce(x, y, GroupTag.SYMMETRIC) == oracle.s_n(x, y, even_only=False)
    # a repeated entry in y makes the odd coset a relabeling of the even one
    y_rep = oracle.centered([raw[0]] + list(raw[:-1]))
    assert s_n_bruteforce(x, y_rep, GroupTag.SYMMETRIC) == s_n_bruteforce(x, y_rep)


def test_s_n_symmetric_in_arguments():
    rng = random.Random(3)
    for _ in range(20):
        x = oracle.centered([rng.randint(-9, 9) for _ in range(5)])
        y = oracle.centered([rng.randint(-9, 9) for _ in range(5)])
        assert s_n_bruteforce(x, y) == s_n_bruteforce(y, x)


def test_closed_zz_matches_subset_oracle():
    for n in range(2, 30):
        for h in range(1, n):
            for k in range(1, n):
                assert s_n_closed_zz(n, h, k) == oracle.s_zz_subsets(n, h, k)


def test_c_n_small_exhaustive():
    assert c_n(4).value == min(oracle.s_n(oracle.z(4, h), oracle.z(4, k)) for h in range(1, 4) for k in range(1, 4))
    for n in range(2, 60):
        value, _ = oracle.c_n_subsets(n)
        assert c_n(n).value == value


def test_c_n_prefilter_agrees_with_exhaustive():
    for n in (201, 240):
        assert c_n(n).value == c_n(n, exhaustive=True).value


def test_c_n_json():
    data = c_n(10).to_json()
    assert set(data) == {"n", "c_n", "ratio", "argmin"}
    assert F(data["c_n"]) == c_n(10).value


def test_sandwich_examples():
    for n, h in ((5, 2), (6, 1), (7, 3)):
        z = z_vector(n, h)
        assert sandwich_check(z, z).holds
    spike = (F(3), F(-3), 0, 0, 0, 0)
    assert sandwich_check(spike, oracle.centered([1, 2, 3, 4, 5, 9])).holds
    with pytest.raises(DomainError):
        sandwich_check((0, 0, 0), (1, 0, -1))


def test_stabilizer_average_fixed_point():
    for n in range(4, 8):
        for h in range(1, n):
            assert stabilizer_average(z_vector(n, h), h) == z_vector(n, h)


def test_stabilizer_average_projects_to_z():
    x = (F(2), F(-1, 2), F(-3, 4), F(-3, 4))
    x = tuple(v / l1_norm(x) for v in x)
    assert stabilizer_average(x, 1) == z_vector(4, 1)
    rng = random.Random(11)
    for _ in range(10):
        pos = [F(rng.randint(0, 9)) for _ in range(2)]
        neg = [F(-rng.randint(1, 9)) for _ in range(3)]
        shift = (sum(pos) + sum(neg)) / 5
        raw = [v - shift for v in pos + neg]
        if any(v < 0 for v in raw[:2]) or any(v >= 0 for v in raw[2:]):
            continue
        x = [v / l1_norm(raw) for v in raw]
        assert stabilizer_average(x, 2) == z_vector(5, 2)


def test_stabilizer_average_guards():
    with pytest.raises(DomainError):
        stabilizer_average(z_vector(3, 1), 1)
    with pytest.raises(DomainError):
        stabilizer_average(z_vector(5, 2).scaled(2), 2)


def test_lemma46_examples():
    y = center([1, 2, 3, 4, 5])
    assert lemma46_lower_bound(y, "strict") == F(3, 4)
    assert l1_norm(y) == F(6, 5)
    y6, case = arrange_for_lemma46([1, 2, 3, 4, 5, 5])
    assert case == "tied"
    assert l1_norm(y6) >= lemma46_lower_bound(y6, case) == F(3, 5)
    with pytest.raises(DomainError):
        lemma46_lower_bound(center([1, 1, 2, 3, 4]), "strict")
    with pytest.raises(DomainError):
        arrange_for_lemma46([1, 1, 2, 2, 3])
