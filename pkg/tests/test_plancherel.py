"""Tests for Plancherel densities, group convolution, inversion checks,
and twisted-convolution projections."""

import numpy as np
import pytest

from nilharm import (
    GridFunction,
    build_case,
    density,
    density_of,
    fock,
    general_inversion_probe,
    group_convolution,
    heisenberg_inversion_check,
    projection_check,
)
from nilharm.numerics import QuadratureSpec, as_rng, laguerre
from nilharm.plancherel import _laguerre_slices


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def test_density_heisenberg_power():
    # no compact Cartan: theta = 1 and the pfaffian is |lam|^n
    for n in (1, 2, 3):
        alg = build_case("VII", n=n)
        d = density(alg, (), [1.7])
        assert d.theta == 1.0
        assert abs(d.pfaffian - 1.7**n) < 1e-12
        assert abs(d.value - 1.7**n) < 1e-12
        assert d.square_integrable


def test_density_caseI_weight():
    # pfaffian r^2 and theta 4 r^2 combine to the 4 r^4 inversion weight
    alg = build_case("I", n=1)
    rng = as_rng(0)
    for _ in range(5):
        x = rng.standard_normal(3)
        r = np.linalg.norm(x)
        d = density_of(alg, x)
        assert abs(d.pfaffian - r**2) < 1e-12 * r**2
        assert abs(d.theta - 4 * r**2) < 1e-12 * r**2
        assert abs(d.value - 4 * r**4) < 1e-11 * r**4


def test_density_caseV_product_formulas():
    # pfaffian = prod |theta_j| over the torus weights, theta = the
    # squared Vandermonde of the angles
    alg = build_case("V", n=3)
    ang = np.array([1.0, 0.2, -1.2])
    d = density(alg, (ang,), [])
    pf = abs(np.prod(ang))
    th = np.prod([(ang[i] - ang[j]) ** 2 for i in range(3) for j in range(i + 1, 3)])
    assert abs(d.pfaffian - pf) < 1e-12
    assert abs(d.theta - th) < 1e-10


def test_density_degenerate_case_is_zero():
    alg = build_case("II", n=1)
    rng = as_rng(1)
    for _ in range(5):
        d = density_of(alg, rng.standard_normal(alg.dim_g))
        assert d.value == 0.0
        assert not d.square_integrable


def test_density_free_odd_case_has_no_chamber():
    # so(3) has no implemented torus factor: the density is still defined
    # (pfaffian vanishes on the odd-dimensional V) but chamber data is not
    from nilharm.forms import Functional

    alg = build_case("VI", n=3)
    rng = as_rng(2)
    for _ in range(5):
        x = rng.standard_normal(alg.dim_g)
        d = density_of(alg, x)
        assert d.value == 0.0
        assert d.theta == 1.0
        assert not d.square_integrable
        with pytest.raises(NotImplementedError):
            Functional(alg, x).chamber


def test_density_argument_validation():
    algV = build_case("V", n=3)
    with pytest.raises(ValueError):
        density(algV, (np.array([1.0, 0.2, -1.2]),), [0.7])
    algVII = build_case("VII", n=1)
    with pytest.raises(ValueError):
        density(algVII, [1.0], [1.0])


# ---------------------------------------------------------------------------
# group convolution
# ---------------------------------------------------------------------------

def _gauss(a):
    return lambda p: np.exp(-a * np.sum(p**2, axis=1))


def test_group_convolution_matches_group_law_sum():
    # re-evaluate the quadrature sum through the group operations
    alg = build_case("VII", n=1)
    f = _gauss(0.7)

    def g(p):
        return np.exp(-0.5 * np.sum(p**2, axis=1)) * (1 + 0.3 * p[:, 0])

    spec = QuadratureSpec.cube(12, 4.0, 3)
    conv = group_convolution(alg, f, g, spec)
    probes = np.array([[0.2, -0.1, 0.3], [0.0, 0.4, -0.2]])
    ys, w = spec.grid()
    fy = f(ys) * w
    direct = []
    for row in probes:
        x = (row[:1], row[1:])
        acc = 0.0
        for s in range(len(ys)):
            yinv = alg.group_inverse((ys[s, :1], ys[s, 1:]))
            zz, vv = alg.group_mult(yinv, x)
            acc += fy[s] * g(np.concatenate([zz, vv])[None, :])[0]
        direct.append(acc)
    assert np.max(np.abs(conv(probes) - np.array(direct))) < 1e-12


def test_group_convolution_delta_approximation():
    # convolving with a unit-mass near-delta reproduces f up to eps^2
    alg = build_case("VII", n=1)
    eps = 0.15
    norm = (np.pi * eps**2) ** (-1.5)

    def delta(p):
        return norm * np.exp(-np.sum(p**2, axis=1) / eps**2)

    f = _gauss(0.7)
    conv = group_convolution(alg, delta, f, QuadratureSpec.cube(20, 1.0, 3))
    probes = np.array([[0.2, -0.1, 0.3], [0.0, 0.4, -0.2]])
    assert np.max(np.abs(conv(probes) - f(probes))) < 1.5 * eps**2


def test_group_convolution_associative():
    alg = build_case("VII", n=1)
    f, h = _gauss(0.7), _gauss(0.6)

    def g(p):
        return np.exp(-0.5 * np.sum(p**2, axis=1)) * (1 + 0.3 * p[:, 0])

    spec = QuadratureSpec.cube(14, 5.0, 3)
    fg = group_convolution(alg, f, g, spec)
    gh = group_convolution(alg, g, h, spec)
    probe = np.array([[0.2, -0.1, 0.3]])
    left = group_convolution(alg, lambda p: fg(p), h, spec)(probe)
    right = group_convolution(alg, f, lambda p: gh(p), spec)(probe)
    # values are O(27); the deviation is quadrature domain truncation
    assert np.abs(left - right) < 0.05


def test_group_convolution_dimension_check():
    alg = build_case("VII", n=1)
    with pytest.raises(ValueError):
        group_convolution(alg, _gauss(1.0), _gauss(1.0), QuadratureSpec.cube(8, 3.0, 2))


def test_grid_function_integral():
    gf = GridFunction.from_callable(_gauss(0.7), QuadratureSpec.cube(40, 6.0, 3))
    assert abs(gf.integral() - (np.pi / 0.7) ** 1.5) < 1e-9


# ---------------------------------------------------------------------------
# Laguerre slices feeding the Heisenberg inversion
# ---------------------------------------------------------------------------

def test_laguerre_slices_closed_form_at_origin():
    # int e^{-p t} L_j(q t) dt = (p - q)^j / p^{j+1} with t = |w|^2
    lam, b, J = 1.3, 0.8, 6
    S = _laguerre_slices(lam, b, ((0.0, (0.0, 0.0)),), J, 140)
    p, q = b + lam / 4.0, b - lam / 4.0
    for j in range(J + 1):
        want = np.pi * q**j / p ** (j + 1)
        assert abs(S[j, 0] - want) < 1e-12


def test_laguerre_slices_are_twisted_convolutions():
    # the measured slice equals the lam-twisted convolution at
    # frequency -lam (the phase sign convention of the inversion)
    lam, b, J = 1.3, 0.8, 4
    v = (0.4, -0.3)
    S = _laguerre_slices(lam, b, ((0.0, v),), J, 140)
    half = np.linalg.norm(v) + np.sqrt((37.0 + 2.0 * J) / (b + lam / 4.0))
    spec = QuadratureSpec.cube(140, half, 2)

    def fg(w):
        return np.exp(-b * np.sum(np.abs(w) ** 2, axis=1))

    for j in (0, 2):
        def phij(w, j=j):
            x = lam * np.sum(np.abs(w) ** 2, axis=1) / 2.0
            return laguerre(j, 0.0, x) * np.exp(-x / 2.0)

        conv = fock.twisted_convolution(fg, phij, -lam, spec)
        got = conv(np.array([[v[0] + 1j * v[1]]]))[0]
        assert abs(got - S[j, 0]) < 1e-12


# ---------------------------------------------------------------------------
# inversion checks
# ---------------------------------------------------------------------------

def test_heisenberg_inversion_reduced_budget():
    rep = heisenberg_inversion_check(J=10, lam_nodes=48, vnodes=120)
    assert rep.max_rel_error < 1e-5
    assert rep.passed(tol=1e-3)
    assert abs(rep.fitted_c / rep.classical_c - 1.0) < 1e-3
    # tail completion beats the raw truncated series by orders
    assert max(rep.raw_rel_errors) > 100 * rep.max_rel_error


def test_heisenberg_inversion_raw_error_decreases_with_J():
    r6 = heisenberg_inversion_check(J=6, lam_nodes=48, vnodes=120)
    r10 = heisenberg_inversion_check(J=10, lam_nodes=48, vnodes=120)
    assert max(r10.raw_rel_errors) < max(r6.raw_rel_errors)


def test_heisenberg_inversion_rejects_bad_widths():
    with pytest.raises(ValueError):
        heisenberg_inversion_check(widths=(0.0, 1.0))


def test_projection_cross_terms_vanish():
    rep = projection_check(1.1, 0, 2)
    assert rep.orthogonal(tol=1e-10)


def test_projection_diagonal_reproduces():
    r00 = projection_check(1.1, 0, 0)
    r11 = projection_check(1.1, 1, 1)
    assert r11.projector(tol=1e-10)
    # c' does not depend on the index
    assert abs(r11.cprime / r00.cprime - 1.0) < 1e-10
    # and scales like lam^{-n}
    r2 = projection_check(2.2, 0, 0)
    assert abs(r00.cprime / r2.cprime - 2.0) < 1e-10
    with pytest.raises(ValueError):
        projection_check(-1.0, 0, 0)


def test_general_inversion_probe_consistent():
    rep = general_inversion_probe(J=12, lam_max=10.0, lam_nodes=16, samples=800, seed=3)
    assert rep.consistent(nsigma=3.0)
    assert rep.spread < 0.02 * abs(rep.ratios[0])


def test_general_inversion_probe_error_shrinks_with_samples():
    lo = general_inversion_probe(J=8, lam_max=10.0, lam_nodes=8, samples=400, seed=5)
    hi = general_inversion_probe(J=8, lam_max=10.0, lam_nodes=8, samples=1600, seed=5)
    ratio = lo.combined_sigma / hi.combined_sigma
    assert 1.5 < ratio < 3.0
