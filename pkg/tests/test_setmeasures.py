import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from setcx.bitstrings import make_rng, random_bitstring
from setcx.errors import DomainError
from setcx.infodist import DistanceMatrix, calibrate, distance_matrix
from setcx.setmeasures import (
    Kernel,
    avg_distance,
    conditional_complexity,
    decomposition,
    lambda_avg,
    mutual_info_direct,
    mutual_info_estimate,
    norm_factor,
    phi,
    pi_general,
    psi,
    theta,
    theta_pair,
)
from setcx.stringset import StringSet


def brute(C, D, kern, norm="xi"):
    """Loop over i > j straight from the definition."""
    n = len(C)
    f = 1 / (n - 1) if norm == "xi" else 2 / (n * (n - 1))
    total = 0.0
    for i in range(n):
        for j in range(i):
            total += max(C[i], C[j]) * kern(D[i][j])
    return f * total


def sym(n, rng, lo=0.0, hi=1.0):
    m = rng.uniform(lo, hi, (n, n))
    m = np.tril(m, -1)
    return m + m.T


@st.composite
def instances(draw, min_n=2, max_n=10):
    n = draw(st.integers(min_n, max_n))
    C = draw(arrays(float, n, elements=st.floats(1, 1000)))
    tri = draw(arrays(float, n * (n - 1) // 2, elements=st.floats(0, 1)))
    D = np.zeros((n, n))
    D[np.tril_indices(n, -1)] = tri
    return C, D + D.T


# ---- theta ---------------------------------------------------------------

def test_theta_examples():
    assert theta([37.0]) == 37.0
    assert theta([3.0, 4.0] * 2) == 2 * theta([3.0, 4.0])
    assert theta([12.0] * 25) == 300.0
    with pytest.raises(DomainError):
        theta([])


def test_theta_of_stringset_is_sum_of_sizes():
    S = StringSet([random_bitstring(100, s) for s in range(4)])
    assert theta(S) == float(S.sizes.sum())


# ---- lambda, phi ---------------------------------------------------------

def test_lambda_examples():
    C = [5.0, 9.0, 2.0]
    assert lambda_avg(C, np.zeros((3, 3))) == 0.0
    ones = DistanceMatrix.uniform(3, 1.0)
    assert lambda_avg(C, ones, "pairs_mean") == pytest.approx(np.mean([9, 5, 9]))
    assert lambda_avg([10.0, 20.0], DistanceMatrix.uniform(2, 0.5), "xi") == 10.0


def test_phi_examples():
    C = [5.0, 9.0, 2.0]
    assert phi(C, DistanceMatrix.uniform(3, 1.0)) == 0.0
    assert phi(C, np.zeros((3, 3)), "xi") == pytest.approx(0.5 * (9 + 5 + 9))
    assert phi([10.0, 20.0], DistanceMatrix.uniform(2, 0.25)) == 15.0


def test_size_mismatch_rejected():
    with pytest.raises(DomainError):
        lambda_avg([1.0, 2.0, 3.0], np.zeros((2, 2)))
    with pytest.raises(DomainError):
        psi([1.0], np.zeros((1, 1)))
    with pytest.raises(DomainError):
        norm_factor(2, "mean")


@settings(max_examples=200)
@given(instances(), st.sampled_from(["xi", "pairs_mean"]))
def test_measures_match_brute_force(inst, norm):
    C, D = inst
    assert lambda_avg(C, D, norm) == pytest.approx(brute(C, D, lambda d: d, norm), rel=1e-12, abs=1e-12)
    assert phi(C, D, norm) == pytest.approx(brute(C, D, lambda d: 1 - d, norm), rel=1e-12, abs=1e-12)
    assert psi(C, D, "d1d", norm).psi == pytest.approx(
        brute(C, D, lambda d: d * (1 - d), norm), rel=1e-12, abs=1e-12)


@settings(max_examples=200)
@given(instances(), st.sampled_from(["xi", "pairs_mean"]))
def test_phi_plus_lambda_is_theta_pair(inst, norm):
    C, D = inst
    tp = theta_pair(C, norm)
    assert phi(C, D, norm) + lambda_avg(C, D, norm) == pytest.approx(tp, rel=1e-12)
    assert psi(C, D, norm=norm).theta_pair == tp


# ---- psi -----------------------------------------------------------------

def test_psi_zero_laws():
    C = [3.0, 8.0, 5.0, 4.0]
    assert psi(C, np.zeros((4, 4))).psi == 0.0
    assert psi(C, DistanceMatrix.uniform(4, 1.0)).psi == 0.0


@pytest.mark.parametrize("N", [2, 3, 5, 25])
def test_psi_uniform_half(N):
    c = 7.0
    got = psi([c] * N, DistanceMatrix.uniform(N, 0.5)).psi
    assert got == pytest.approx(brute([c] * N, np.full((N, N), 0.5), lambda d: d * (1 - d)))
    assert got == pytest.approx(0.25 * (N / 2) * c)


@settings(max_examples=100)
@given(instances(min_n=2, max_n=8))
def test_uniform_spacing_law(inst):
    C, _ = inst
    n = len(C)
    grid = np.round(np.arange(0, 1.0001, 0.05), 2)
    vals = []
    for d in grid:
        rep = psi(C, DistanceMatrix.uniform(n, d))
        assert rep.psi == pytest.approx(d * (1 - d) * rep.theta_pair, rel=1e-12, abs=1e-12)
        vals.append(rep.psi)
    assert grid[int(np.argmax(vals))] == 0.5


def test_psi_nonnegative_and_order_invariant_exactly():
    r = make_rng(4)
    for _ in range(50):
        n = int(r.integers(2, 12))
        C = r.uniform(1, 500, n)
        D = sym(n, r)
        base = psi(C, D)
        assert base.psi >= 0
        perm = r.permutation(n)
        moved = psi(C[perm], D[np.ix_(perm, perm)])
        assert (moved.psi, moved.lambda_, moved.phi, moved.theta, moved.delta_sq) == \
               (base.psi, base.lambda_, base.phi, base.theta, base.delta_sq)


def test_stringset_reordering_is_exact():
    strings = [random_bitstring(300, s) for s in range(7)]
    strings.append(strings[2])
    a = psi(StringSet(strings), distance_matrix(StringSet(strings)))
    r = make_rng(1)
    perm = r.permutation(len(strings))
    shuffled = [strings[i] for i in perm]
    b = psi(StringSet(shuffled), distance_matrix(StringSet(shuffled)))
    assert (a.psi, a.lambda_, a.phi, a.theta_pair) == (b.psi, b.lambda_, b.phi, b.theta_pair)


def test_duplicate_members_add_no_pair_term():
    r = make_rng(12)
    n = 6
    C = r.uniform(10, 100, n)
    D = sym(n, r)
    k = 2
    C2 = np.append(C, C[k])
    D2 = np.zeros((n + 1, n + 1))
    D2[:n, :n] = D
    D2[n, :n] = D[k]
    D2[:n, n] = D[k]
    D2[n, k] = D2[k, n] = 0.0
    rep = psi(C2, D2, per_pair=True)
    copy_term = [t for i, j, _, _, t in rep.per_pair if (i, j) == (k, n)]
    assert copy_term == [0.0]
    unnorm = psi(C, D).psi * (n - 1) + sum(
        max(C[k], C[j]) * D[k, j] * (1 - D[k, j]) for j in range(n) if j != k)
    assert rep.psi * n == pytest.approx(unnorm)


def test_log_kernels_use_continuous_extension():
    for name in ("dlnd", "1dln1d"):
        k = Kernel(name)
        assert k(0.0) == 0.0 and k(1.0) == 0.0
        assert np.isfinite(k(np.linspace(0, 1, 11))).all()
    assert Kernel("dlnd")(0.5) == pytest.approx(0.5 * math.log(0.5))


def test_named_d1d_equals_single_term_polynomial():
    d = np.linspace(0, 1, 21)
    assert np.allclose(Kernel("d1d")(d), Kernel.polynomial([(1, 1, 1)])(d))


# ---- generalized kernel --------------------------------------------------

def test_pi_general_examples():
    r = make_rng(2)
    C = r.uniform(1, 50, 6)
    D = sym(6, r)
    base = psi(C, D).psi
    assert pi_general(C, D, [(1, 1, 1.0)]) == pytest.approx(base)
    assert pi_general(C, D, [(1, 1, 2.0)]) == pytest.approx(2 * base)
    U = DistanceMatrix.uniform(6, 0.5)
    assert pi_general(C, U, [(2, 1, 1.0)]) == pytest.approx(0.5 * pi_general(C, U, [(1, 1, 1.0)]))


def test_pi_general_rejects_nonvanishing_terms():
    with pytest.raises(DomainError):
        pi_general([1.0, 2.0], np.zeros((2, 2)), [(0, 1, 1.0)])
    with pytest.raises(DomainError):
        pi_general([1.0, 2.0], np.zeros((2, 2)), [(1, 0, 1.0)])


@settings(max_examples=100)
@given(instances(), st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4),
                                       st.floats(-3, 3)), min_size=1, max_size=4))
def test_pi_general_matches_binomial_expansion(inst, coeffs):
    C, D = inst

    def expanded(d):
        # d^a (1-d)^b = sum_n binom(b, n) (-1)^n d^(n+a)
        return sum(c * sum(math.comb(b, m) * (-1) ** m * d ** (m + a) for m in range(b + 1))
                   for a, b, c in coeffs)

    assert pi_general(C, D, coeffs) == pytest.approx(brute(C, D, expanded), rel=1e-9, abs=1e-9)


# ---- decomposition -------------------------------------------------------

def test_decomposition_examples():
    assert decomposition([4.0, 9.0, 1.0], np.zeros((3, 3))) == (0.0, 0.0, 0.0)
    lam, dsq, p = decomposition([1.0, 1.0], DistanceMatrix.uniform(2, 0.3))
    assert lam == pytest.approx(0.3)
    assert dsq == pytest.approx(0.0, abs=1e-15)
    assert p == pytest.approx(0.21)


@settings(max_examples=300)
@given(instances(), st.sampled_from(["xi", "pairs_mean"]))
def test_decomposition_identity(inst, norm):
    C, D = inst
    lam, dsq, p = decomposition(C, D, norm)
    assert abs(p - (lam * (1 - lam) - dsq)) < 1e-10 * max(1.0, abs(p), lam * lam)
    assert p == psi(C, D, norm=norm).psi


# ---- distances and pair statistics ---------------------------------------

def test_avg_distance_examples():
    assert avg_distance(DistanceMatrix.uniform(5, 0.4)) == pytest.approx(0.4)
    D = np.array([[0, 0, 0.5], [0, 0, 1], [0.5, 1, 0]])
    assert avg_distance(D) == pytest.approx(0.5)
    x = random_bitstring(500, 3)
    S = StringSet([x, x, x])
    assert avg_distance(distance_matrix(S, cal=calibrate(S, rng=0))) == 0.0


def test_conditional_complexity_examples():
    assert conditional_complexity(100, 250, 0.0) == 0.0
    assert conditional_complexity(100, 250, 1.0) == 250.0
    assert conditional_complexity(100, 250, 0.4) == pytest.approx(100.0)
    with pytest.raises(DomainError):
        conditional_complexity(1, 2, 1.5)


def test_mutual_info_examples():
    assert mutual_info_estimate(100, 250, 1.0) == 0.0
    assert mutual_info_estimate(100, 250, 0.0) == 250.0


def test_mutual_info_two_routes_agree_for_a_copy(random_1000):
    x = random_1000
    S = StringSet([x, x])
    d = distance_matrix(S, cal=calibrate(StringSet([x] * 5), rng=2)).values[0, 1]
    via_distance = mutual_info_estimate(x, x, d)
    via_sizes = mutual_info_direct(x, x)
    assert abs(via_distance - via_sizes) <= 0.15 * via_distance


def test_report_csv_fields():
    rep = psi([1.0, 2.0, 3.0], DistanceMatrix.uniform(3, 0.5), norm="pairs-mean")
    head, row = rep.to_csv().strip().split("\n")
    assert head == "n,norm,theta,theta_pair,lambda,phi,psi,delta_sq"
    assert row.split(",")[:2] == ["3", "pairs_mean"]
    with pytest.raises(DomainError):
        rep.per_pair_csv()
    rep = psi([1.0, 2.0, 3.0], DistanceMatrix.uniform(3, 0.5), per_pair=True)
    assert rep.per_pair_csv().count("\n") == 4


def test_length_normalized_weights():
    S = StringSet([random_bitstring(200, 1), random_bitstring(400, 2)])
    c = S.complexities(length_normalized=True)
    assert np.allclose(c, S.sizes / np.array([200, 400]))
