"""Skew forms, Pfaffians, the classifier, and the weight tables."""

import numpy as np
import pytest

from nilharm.algebra import build_case, sample_k_actions
from nilharm.forms import (
    Functional,
    classify,
    pfaffian_abs,
    pfaffian_via_weights,
    skew_form,
    weight_table,
)
from nilharm.numerics import as_rng


def test_pfaffian_2x2_and_4x4():
    a = np.array([[0.0, 3.0], [-3.0, 0.0]])
    assert abs(pfaffian_abs(a) - 3.0) < 1e-14
    # 4x4: |Pf| = |a f - b e + c d| for the upper-triangle (a,b,c,d,e,f)
    rng = as_rng(0)
    for _ in range(20):
        a, b, c, d, e, f = rng.standard_normal(6)
        m = np.array([
            [0, a, b, c],
            [-a, 0, d, e],
            [-b, -d, 0, f],
            [-c, -e, -f, 0],
        ])
        ref = abs(a * f - b * e + c * d)
        assert abs(pfaffian_abs(m) - ref) < 1e-12 * max(1.0, ref)


def test_pfaffian_squares_to_determinant():
    rng = as_rng(1)
    for n in (2, 4, 6, 8):
        a = rng.standard_normal((n, n))
        m = a - a.T
        det = np.linalg.det(m)
        assert abs(pfaffian_abs(m) ** 2 - det) < 1e-10 * max(1.0, abs(det))


def test_pfaffian_odd_dimension_vanishes():
    rng = as_rng(2)
    a = rng.standard_normal((5, 5))
    m = a - a.T
    assert pfaffian_abs(m) == 0.0


def test_skew_form_matches_bracket_pairing():
    alg = build_case("V", n=3)
    rng = as_rng(3)
    x = rng.standard_normal(alg.dim_g)
    m = skew_form(alg, x)
    u = rng.standard_normal(alg.dim_v)
    v = rng.standard_normal(alg.dim_v)
    assert abs(float(u @ m @ v) - float(alg.bracket(v, u) @ x)) < 1e-12


def test_classifier_exceptions_degenerate():
    rng = as_rng(4)
    for case, params in [("II", {"n": 1}), ("II", {"n": 2}), ("VI", {"n": 3}), ("VI", {"n": 5})]:
        alg = build_case(case, **params)
        for _ in range(10):
            x = rng.standard_normal(alg.dim_g)
            verdict = classify(alg, x)
            assert not verdict.square_integrable
            assert verdict.kernel_dim >= 1
            assert verdict.pfaffian == 0.0
            assert verdict.verdict == "Degenerate"


def test_classifier_generic_square_integrable():
    rng = as_rng(5)
    for case, params in [
        ("I", {"n": 1}), ("III", {"k1": 1, "k2": 1}), ("IV", {"n": 1}),
        ("V", {"n": 3}), ("VI", {"n": 2}), ("VII", {"n": 3}),
        ("VIII", {"k": 1, "n": 1}), ("IX", {"n": 3}), ("X", {"m": 3, "k": 1, "n": 0}),
    ]:
        alg = build_case(case, **params)
        for _ in range(5):
            x = rng.standard_normal(alg.dim_g)
            verdict = classify(alg, x)
            assert verdict.square_integrable, f"{case} {params}"
            assert verdict.verdict == "SquareIntegrable"


def test_zero_functional_degenerate():
    alg = build_case("I", n=1)
    assert not classify(alg, np.zeros(alg.dim_g)).square_integrable


@pytest.mark.parametrize("case,params", [
    ("I", {"n": 2}), ("V", {"n": 3}), ("VII", {"n": 3}), ("IX", {"n": 3}),
])
def test_weight_formula_matches_numeric(case, params):
    alg = build_case(case, **params)
    rng = as_rng(6)
    for _ in range(20):
        x = rng.standard_normal(alg.dim_g)
        numeric = classify(alg, x).pfaffian
        weights = pfaffian_via_weights(alg, x)
        assert abs(numeric - weights) < 1e-9 * max(numeric, weights)


def test_weight_table_multiplicities():
    # total multiplicity sums to dim_v over C (pairs +-i*value)
    for case, params in [("I", {"n": 2}), ("V", {"n": 3}), ("VII", {"n": 3}), ("IX", {"n": 3})]:
        alg = build_case(case, **params)
        rng = as_rng(7)
        x = rng.standard_normal(alg.dim_g)
        table = weight_table(alg, x)
        assert sum(mult for _, mult in table) == alg.dim_v


def test_weight_table_unavailable_raises():
    alg = build_case("III", k1=1, k2=1)
    with pytest.raises(NotImplementedError):
        weight_table(alg, np.ones(alg.dim_g))


def test_case_vii_pfaffian_power_law():
    alg = build_case("VII", n=3)
    assert abs(classify(alg, np.array([2.0])).pfaffian - 8.0) < 1e-12
    assert abs(classify(alg, np.array([-0.5])).pfaffian - 0.125) < 1e-12


def test_functional_polar_data():
    alg = build_case("V", n=3)
    rng = as_rng(8)
    x = rng.standard_normal(alg.dim_g)
    fn = Functional(alg, x)
    assert abs(fn.norm - np.linalg.norm(x)) < 1e-13
    assert np.allclose(fn.y * fn.norm, x)
    angles, zc, regular = fn.chamber
    assert regular
    ang = angles[0]
    assert np.all(np.diff(ang) <= 1e-12)  # dominant order
    with pytest.raises(ValueError):
        Functional(alg, np.ones(3))


def test_pfaffian_ad_invariant_spot():
    rng = as_rng(9)
    for case, params in [("I", {"n": 2}), ("IX", {"n": 3}), ("VIII", {"k": 1, "n": 1})]:
        alg = build_case(case, **params)
        x = rng.standard_normal(alg.dim_g)
        base = classify(alg, x).pfaffian
        for k in sample_k_actions(alg, rng=rng, count=10):
            moved = classify(alg, k.apply_functional(x)).pfaffian
            assert abs(moved - base) < 1e-9 * base
