import itertools
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from fcrystals.coweight import (Coweight, CoweightError, GSpCoweight, decomposable_wrt,
                                dominance_leq, integral_points_of_hull, is_minuscule,
                                is_minuscule_weight_r, kappa_levi, levi_leq,
                                minimal_dominant_above, newton_partition, newton_vectors,
                                omega, simple_coroot_combination, weyl_orbit)

from oracles import brute_minimum_above, prefix_leq


def test_dominance_examples():
    assert dominance_leq(["1/2", "1/2"], [1, 0])
    assert dominance_leq([2, 1, 0], [2, 1, 0])
    assert not dominance_leq([2, 0, 0], [1, 1, 0])


def test_dominance_rejects_non_dominant():
    with pytest.raises(CoweightError):
        dominance_leq([0, 1], [1, 0])


def test_minuscule_weight_r_examples():
    assert is_minuscule_weight_r(["1/2", "1/2"], 1)
    assert is_minuscule_weight_r([1, 0], 1)
    assert not is_minuscule_weight_r(["3/2", "1/2"], 2)


def test_minuscule_weight_r_matches_dominance_below_omega():
    for n in range(1, 5):
        for r in range(n + 1):
            for nu in newton_vectors(n, n, -1, 2, total=r):
                assert is_minuscule_weight_r(nu, r) == dominance_leq(nu, omega(r, n))


def test_kappa_levi_examples():
    assert kappa_levi([1, 0, 1, 0], (2, 2)) == (1, 1)
    assert kappa_levi(omega(2, 4), (4,)) == (2,)
    assert kappa_levi([1, 1, 0, 0], (2, 2)) == (2, 0)


def test_minimal_dominant_above_examples():
    assert minimal_dominant_above(["1/2", "1/2"], (2,)) == Coweight([1, 0])
    assert minimal_dominant_above([2, 1, 1], (1, 2)) == Coweight([2, 1, 1])
    # brute-force minimum over |mu_i| <= 3
    assert minimal_dominant_above(["2/3"] * 3 + [0], (3, 1)) == Coweight([1, 1, 0, 0])
    with pytest.raises(CoweightError, match="not a Newton vector"):
        minimal_dominant_above(["1/2", 0])


def test_decomposable_examples():
    assert decomposable_wrt([1, 0, 0], ["1/2", "1/2", 0], (2, 1))
    assert not decomposable_wrt([1, 1, -1], ["1/2", "1/2", 0], (2, 1))
    assert decomposable_wrt([1, 1, 0], [1, 1, 0])


def test_minimal_dominant_above_exhaustive():
    """[nu~] is the minimum of {mu : nu <= mu} on |mu_i| <= 3, n <= 4."""
    count = 0
    for n in range(1, 5):
        for nu in newton_vectors(n, 4, -1, 2):
            if nu.total.denominator != 1:
                continue
            got = minimal_dominant_above(nu)
            assert tuple(got) == brute_minimum_above(nu, 3)
            count += 1
    assert count > 50


def test_kappa_image_of_omega_orbit():
    """kappa_levi over the W-orbit of omega_s is {(s_i) : 0 <= s_i <= m_i, sum = s}."""
    for n in range(1, 7):
        for P in _compositions(n):
            for s in range(n + 1):
                got = {kappa_levi(x, P) for x in weyl_orbit(omega(s, n))}
                want = {t for t in itertools.product(*[range(m + 1) for m in P]) if sum(t) == s}
                assert got == want


def _compositions(n):
    if n == 0:
        return [()]
    return [(k,) + rest for k in range(1, n + 1) for rest in _compositions(n - k)]


def _dominant(rng, n, lo=-3, hi=3, den=1):
    return Coweight(sorted((Fr(rng.randint(lo * den, hi * den), den) for _ in range(n)),
                           reverse=True))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_dominance_is_a_partial_order(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    total = rng.randint(-3, 3)
    pool = [v for v in (_dominant(rng, n) for _ in range(40)) if v.total == total] or [omega(0, n)]
    a, b, c = (rng.choice(pool) for _ in range(3))
    assert dominance_leq(a, a)
    if dominance_leq(a, b) and dominance_leq(b, a):
        assert a == b
    if dominance_leq(a, b) and dominance_leq(b, c):
        assert dominance_leq(a, c)
    assert dominance_leq(a, b) == prefix_leq(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_levi_dominance_characterisation(seed):
    """nu <= mu with equal block sums iff mu - nu is a nonnegative
    combination of the simple coroots inside the Levi."""
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    P = rng.choice(_compositions(n))
    nu = _dominant(rng, n, den=rng.randint(1, 3))
    mu = Coweight([x + rng.randint(0, 1) - rng.randint(0, 1) for x in nu]).dominant()
    if mu.total != nu.total:
        return
    lhs = dominance_leq(nu, mu) and kappa_levi(nu, P) == kappa_levi(mu, P)
    c = simple_coroot_combination([a - b for a, b in zip(mu, nu)])
    bounds = set(itertools.accumulate(P))
    rhs = all(x >= 0 for x in c) and all(c[k - 1] == 0 for k in bounds if k < n)
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_levi_dominant_implies_dominant(seed):
    """If nu is dominant on each block and nu <=^M mu with mu dominant then nu
    is dominant and nu <= mu."""
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    P = rng.choice(_compositions(n))
    mu = _dominant(rng, n)
    pieces, off = [], 0
    for m in P:
        block = list(mu[off:off + m])
        # move mass inside the block keeping it dominant in M
        for _ in range(3):
            i, j = rng.randrange(m), rng.randrange(m)
            if i < j and block[i] - block[j] >= 1:
                block[i] -= Fr(1, 2)
                block[j] += Fr(1, 2)
        pieces.extend(sorted(block, reverse=True))
        off += m
    nu = Coweight(pieces)
    assert _m_leq(nu, mu, P)
    assert nu.is_dominant()
    assert dominance_leq(nu, mu) and levi_leq(nu, mu, P)


def _m_leq(nu, mu, P):
    off = 0
    for m in P:
        if not prefix_leq(nu[off:off + m], mu[off:off + m]):
            return False
        off += m
    return True


def test_integral_points_of_hull():
    pts = integral_points_of_hull([1, 0, 0])
    assert set(map(tuple, pts)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    pts = integral_points_of_hull([2, 0])
    assert set(map(tuple, pts)) == {(2, 0), (1, 1), (0, 2)}


def test_gsp_coweight():
    x = GSpCoweight([1, "1/2", "1/2", 0])
    assert x.d == 1
    with pytest.raises(CoweightError):
        GSpCoweight([1, 1, 1, 0])


def test_is_minuscule_and_partition():
    assert is_minuscule([2, 2, 1])
    assert not is_minuscule([2, 0])
    assert newton_partition(["3/2", "3/2", 1]) == (2, 1)
