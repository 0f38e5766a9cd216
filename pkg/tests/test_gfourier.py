from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vmlab.f2core import F2Matrix
from vmlab.gfourier import (
    GraphDist,
    HypothesisViolation,
    claim34_bound,
    claim34_polynomial,
    claim34_tensor_check,
    coupled_final_distribution,
    delta_distribution_bruteforce,
    delta_distribution_exact,
    delta_distribution_from_m,
    delta_distribution_mc,
    delta_edge_probability_independent_w,
    edge_probability_independent_w,
    fourier_census_bound,
    fourier_transform,
    fourier_tv_bound,
    fwht,
    inverse_fourier_transform,
    lemma31_bound,
    tv_estimate,
    tv_to_uniform,
)
from vmlab.graph import Graph
from vmlab.lcdelta import LCInstance, build_m, sample_delta_codes, sequential_delta
from vmlab.quadpoly import CapExceeded

from conftest import random_graph


def _random_dist(rng, s):
    w = rng.random(1 << comb(s, 2)) ** 3
    return GraphDist(s, w / w.sum())


def _instance_with_gw(gw: Graph, s: int) -> LCInstance:
    labels = [f"w{i}" for i in range(gw.n)] + [f"u{i}" for i in range(s)]
    g = Graph.from_edges([(f"w{i}", f"w{j}") for i, j in gw.edges()], labels)
    return LCInstance(g, labels[gw.n:], labels[:gw.n])


def test_fwht_matches_definition(rng):
    a = rng.random(16)
    want = [sum(a[h] * (-1) ** bin(h & f).count("1") for h in range(16)) for f in range(16)]
    np.testing.assert_allclose(fwht(a), want, atol=1e-12)


def test_uniform_and_point_mass_spectra():
    u = fourier_transform(GraphDist.uniform(3))
    assert u[0] == pytest.approx(1.0) and np.allclose(u.coeffs[1:], 0)
    pm = fourier_transform(GraphDist.point_mass(3))
    assert np.allclose(pm.coeffs, 1.0)


def test_tv_examples():
    assert tv_to_uniform(GraphDist.uniform(3)) == 0
    assert fourier_tv_bound(GraphDist.uniform(3)) == pytest.approx(0, abs=1e-15)
    pm = GraphDist.point_mass(2)
    assert tv_to_uniform(pm) == 0.5
    assert fourier_tv_bound(pm) == 0.5


@pytest.mark.parametrize("s", [2, 3, 4])
def test_roundtrip_and_tv_inequality(rng, s):
    for _ in range(20):
        d = _random_dist(rng, s)
        np.testing.assert_allclose(inverse_fourier_transform(fourier_transform(d)), d.probs, atol=1e-12)
        assert tv_to_uniform(d) <= fourier_tv_bound(d) + 1e-12


def test_distribution_validation():
    with pytest.raises(ValueError):
        GraphDist(2, np.array([0.5, 0.4]))
    with pytest.raises(ValueError):
        GraphDist(3, np.array([1.0, 0.0]))


def test_empty_w_is_point_mass():
    inst = LCInstance(Graph.empty(["a", "b", "c"]), ["a", "b", "c"], [])
    d = delta_distribution_exact(inst, 0.3)
    assert d.probs[0] == 1.0


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_deterministic_p_gives_point_mass(p):
    gw = Graph.from_edges([(0, 1)], 3)
    d = delta_distribution_exact(_instance_with_gw(gw, 3), p)
    assert d.probs.max() == pytest.approx(1.0)


@pytest.mark.parametrize("s,r", [(2, 3), (3, 3), (3, 4), (4, 2), (2, 7)])
def test_exact_law_matches_bruteforce(rng, s, r):
    for p in (0.2, 0.5, 0.7):
        gw = random_graph(rng, r, 0.5)
        m = build_m(LCInstance(gw, [], gw.labels))
        got = delta_distribution_from_m(s, m, p).probs
        want = delta_distribution_bruteforce(s, m, p).probs
        np.testing.assert_allclose(got, want, atol=1e-13)


def test_bruteforce_law_matches_simulation_frequencies(rng):
    # brute force over X vs. running the complementations on every X
    s, r, p = 2, 3, 0.3
    gw = Graph.from_edges([(0, 1), (1, 2)], r)
    inst0 = _instance_with_gw(gw, s)
    law = np.zeros(2)
    for code in range(1 << (s * r)):
        x = [(code >> b) & 1 for b in range(s * r)]
        edges = [(f"w{j}", f"u{i}") for i in range(s) for j in range(r) if x[i * r + j]]
        g = Graph.from_edges(list(inst0.g.edges()) + edges, inst0.g.labels)
        d = sequential_delta(inst0.with_graph(g))
        law[d.edge_bitmask()] += p ** sum(x) * (1 - p) ** (s * r - sum(x))
    np.testing.assert_allclose(delta_distribution_exact(inst0, p).probs, law, atol=1e-14)


@pytest.mark.parametrize("p", [0.2, 0.3, 0.5])
@pytest.mark.parametrize("r", [1, 2, 5, 12])
def test_independent_w_delta_marginal(p, r):
    d = delta_distribution_exact(_instance_with_gw(Graph.empty(r), 2), p)
    assert d.edge_marginal(0) == pytest.approx(delta_edge_probability_independent_w(p, r), abs=1e-12)


@pytest.mark.parametrize("p", [0.2, 0.3, 0.5])
@pytest.mark.parametrize("r", [1, 2, 5, 12])
def test_independent_w_final_edge_probability(p, r):
    d = delta_distribution_exact(_instance_with_gw(Graph.empty(r), 2), p)
    final = coupled_final_distribution(d, p)
    assert final.edge_marginal(0) == pytest.approx(edge_probability_independent_w(p, r), abs=1e-12)


def test_final_edge_probability_hand_value():
    # p = 0.2, r = 2: 1/2 (1 - 0.6 * 0.92^2) = 0.24608
    assert edge_probability_independent_w(0.2, 2) == pytest.approx(0.24608, abs=1e-12)


def test_mc_matches_exact_in_distribution():
    s, r, p, n = 2, 4, 0.3, 200_000
    mc = delta_distribution_mc((s, r), p, n, seed=4, conditioned_gw=Graph.empty(r))
    exact = delta_edge_probability_independent_w(p, r)
    sigma = np.sqrt(exact * (1 - exact) / n)
    assert abs(mc.edge_marginal(0) - exact) <= 3 * sigma


def test_mc_reproducible_and_r0():
    a = delta_distribution_mc((3, 5), 0.4, 2000, seed=8)
    b = delta_distribution_mc((3, 5), 0.4, 2000, seed=8)
    np.testing.assert_array_equal(a.probs, b.probs)
    z = delta_distribution_mc((3, 0), 0.4, 50, seed=1)
    assert z.probs[0] == 1.0


def test_claim34_bound_examples():
    assert claim34_bound(0, 5, 0.3) == pytest.approx((1 - 2 * 0.09) ** -1)
    edge = Graph.from_edges([(0, 1)], 3)
    assert claim34_bound(edge, 6, 0.5) == pytest.approx(0.5)
    assert claim34_bound(edge, 6, 0.5, floor=True) == pytest.approx(0.25)


@pytest.mark.parametrize("s,r", [(2, 4), (3, 4), (3, 6)])
def test_exact_spectrum_respects_claim34(rng, s, r):
    for p in (0.2, 0.5, 0.8):
        q = min(p, 1 - p)
        gw = random_graph(rng, r, 0.5)
        d = delta_distribution_exact(_instance_with_gw(gw, s), p)
        spec = fourier_transform(d)
        for code in range(1, d.probs.size):
            f = Graph.from_edge_bitmask(code, s)
            assert abs(spec[code]) <= claim34_bound(f, r, q, floor=True) + 1e-12


def test_tensor_check_simplest_case():
    inst = _instance_with_gw(Graph.empty(1), 2)
    for p in (0.1, 0.5, 0.9):
        tc = claim34_tensor_check(inst, p, None, 1)
        assert tc.passed
        assert tc.polynomial_value == pytest.approx(1 - 2 * p * p, abs=1e-15)
    assert claim34_tensor_check(inst, 0.3, None, 0).fourier_value == pytest.approx(1.0)


def test_tensor_check_random(rng):
    for _ in range(10):
        s, r = 3, int(rng.integers(1, 6))
        gw = random_graph(rng, r, 0.5)
        inst = _instance_with_gw(gw, s)
        for code in range(8):
            assert claim34_tensor_check(inst, 0.3, None, code).passed


def test_polynomial_variable_layout():
    m = F2Matrix.identity(2)
    f = claim34_polynomial(2, m, 1)
    # X_{0j} X_{1j} for j = 0, 1 with index i*r + j
    assert f.pairs() == [(0, 2), (1, 3)]


def test_lemma31_bound_examples():
    assert lemma31_bound(3, 72, 0.5) == pytest.approx(0.125)
    v = lemma31_bound(3, 71, 0.5)
    assert isinstance(v, HypothesisViolation) and not v
    vals = [lemma31_bound(1, r, 0.4) for r in range(40, 200, 20)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_coupled_examples(rng):
    u = coupled_final_distribution(GraphDist.uniform(3), 0.2)
    np.testing.assert_allclose(u.probs, GraphDist.uniform(3).probs, atol=1e-15)
    pm = coupled_final_distribution(GraphDist.point_mass(3), 0.2)
    np.testing.assert_allclose(pm.probs, GraphDist.gnp(3, 0.2).probs, atol=1e-15)
    for _ in range(10):
        d = _random_dist(rng, 3)
        assert tv_to_uniform(coupled_final_distribution(d, 0.3)) <= tv_to_uniform(d) + 1e-12


def test_tv_estimate_fields():
    codes = sample_delta_codes(2, 10, 0.5, 5000, np.random.default_rng(0))
    est = tv_estimate(GraphDist.from_codes(2, codes))
    assert est.samples == 5000 and est.stderr >= 0 and est.bias_bound > 0


def test_census_fourier_bound_is_finite():
    assert fourier_census_bound(3, 72, 0.5) < 1


def test_caps():
    with pytest.raises(CapExceeded):
        delta_distribution_from_m(3, F2Matrix.identity(13), 0.5)


@given(st.integers(2, 3), st.integers(1, 4), st.floats(0.05, 0.95), st.integers(0, 2**32 - 1))
def test_exact_law_is_a_distribution(s, r, p, seed):
    gw = random_graph(np.random.default_rng(seed), r, 0.5)
    d = delta_distribution_exact(_instance_with_gw(gw, s), p)
    assert abs(d.probs.sum() - 1) < 1e-12 and (d.probs >= 0).all()
