import math

import numpy as np
import pytest

from derdisc.entropy import (
    DegenerateSeries,
    EntropySeries,
    SeriesBlowup,
    closed_form_entropy,
    closed_form_poly_entropy,
    compare_report,
    estimate_entropy,
    estimate_entropy_support,
    estimate_poly_entropy,
    ext_distance,
    iterate_series,
    log_ext_distance,
)
from derdisc.homotopy import ProjComplex, module_complex, cohomology_dims
from derdisc.presentation import ParameterError
from derdisc.twist import FunctorEngine, parse_word

from conftest import lam

_SERIES = {}


def series(sig, word, n):
    key = (sig, word, n)
    if key not in _SERIES:
        _SERIES[key] = iterate_series(lam(*sig), word, n)
    return _SERIES[key]


def test_ext_distance_examples(alg312):
    d = alg312.dim
    assert ext_distance({0: d}, 0.37) == d
    assert ext_distance({-2: d}, 0.5) == pytest.approx(d * math.exp(1.0), rel=1e-15)
    assert ext_distance({-1: 2, 0: 3, 4: 1}, 0.0) == 6
    assert log_ext_distance({-300: 1, 0: 5}, 10.0) == pytest.approx(3000.0)


def test_log_ext_distance_rejects_zero_object():
    with pytest.raises(DegenerateSeries):
        log_ext_distance({}, 1.0)


def test_shift_series_bookkeeping(alg312):
    s = series((3, 1, 2), "S^1", 3)
    assert [v for _, v in s.samples] == [{0: 11}, {-1: 11}, {-2: 11}, {-3: 11}]


@pytest.mark.parametrize("k, t", [(1, 0.7), (2, -0.3), (-3, 1.0)])
def test_shift_entropy_is_exact(k, t):
    s = series((2, 1, 1), f"S^{k}", 12)
    h, res = estimate_entropy(s, t)
    assert abs(h - k * t) < 1e-9 and res < 1e-9
    assert estimate_entropy_support(s, t) == pytest.approx(k * t, abs=1e-12)
    assert abs(estimate_poly_entropy(s, t, k * t)) < 1e-9


def test_entropy_of_twist_X():
    s = series((3, 1, 2), "X^1", 64)
    h, _ = estimate_entropy(s, 1.0)
    assert h == pytest.approx(2 / 3, abs=0.05)
    h, _ = estimate_entropy(s, -1.0)
    assert h == pytest.approx(0.0, abs=0.05)
    assert estimate_entropy_support(s, 1.0) == pytest.approx(2 / 3, abs=0.05)


def test_support_endpoints_of_Y_series():
    s = series((3, 1, 2), "Y^1", 24)
    for n, v in s.samples[1:]:
        assert (min(v), max(v)) == (0, 2 * n)


def test_support_endpoints_of_X_series():
    s = series((3, 1, 2), "X^1", 24)
    for n, v in s.samples[1:]:
        assert max(v) == 0
        assert -2 * math.ceil(n / 3) <= min(v) <= -2 * (n // 3)


@pytest.mark.parametrize("sig, word", [((3, 1, 2), "X^1"), ((3, 1, 2), "Y^1"), ((2, 2, 2), "X^1")])
def test_dimension_bound(sig, word):
    p, q, r = sig
    assert series(sig, word, 48).max_dim() <= 2 * (p + q) ** 2


@pytest.mark.parametrize("sig, word", [((3, 1, 2), "X^1"), ((3, 1, 2), "Y^1"), ((4, 1, 3), "Y^1")])
def test_support_count_grows_linearly(sig, word):
    s = series(sig, word, 48)
    counts = np.array([len(v) for _, v in s.samples[1:]], dtype=float)
    ns = np.arange(1, len(counts) + 1, dtype=float)
    ratio = counts / ns
    assert ratio[len(ratio) // 2 :].min() > 0.1
    assert ratio.max() <= 4


def test_gap_bound_for_indecomposable_summand(alg312):
    # T_Y^n(P_{p-r}) is indecomposable; its cohomology cannot skip more than gldim degrees at a time
    p, q, r = alg312.signature
    gl = max(len(module_complex(alg312, "S", i).terms) - 1 for i in range(1, p - r + 1))
    eng = FunctorEngine(alg312)
    c = ProjComplex.stalk(alg312, p - r)
    for n in range(1, 16):
        c = eng.step("TY", c)
        h = cohomology_dims(c)
        width = max(h) - min(h)
        assert len(h) >= width / gl


def test_closed_form_examples():
    assert closed_form_entropy(3, 1, 2, 1, 0, 0, 1) == pytest.approx(2 / 3)
    assert closed_form_entropy(3, 1, 2, 0, 1, 0, -1) == pytest.approx(2)
    for t in (-1.5, 0.0, 2.0):
        assert closed_form_entropy(2, 2, 2, 1, 0, 0, t) == pytest.approx(t / 2)
    assert closed_form_entropy(3, 1, 2, 1, 1, 1, 1) == pytest.approx(1 + 2 / 3)
    with pytest.raises(ParameterError):
        closed_form_entropy(2, 2, 2, 1, 1, 0, 1)
    with pytest.raises(ParameterError):
        closed_form_entropy(0, 1, 1, 1, 0, 0, 1)


def test_closed_form_poly_examples():
    assert closed_form_poly_entropy(3, 1, 2, 1, 0, 0, 0) == 1
    assert closed_form_poly_entropy(3, 1, 2, 1, 0, 0, 0.5) == 0
    # X^3 Y^-1 is the shift S^2, so l(r+q) = k(r-p) gives zero
    assert closed_form_poly_entropy(3, 1, 2, 3, -1, 0, 0) == 0
    assert closed_form_poly_entropy(3, 1, 2, 1, -3, 0, 0) == 1
    assert closed_form_poly_entropy(2, 2, 2, 1, 0, 0, 0) == 0


def test_poly_entropy_separates_shift_like_words():
    alg = lam(3, 1, 2)
    shift_like = iterate_series(alg, "X^3 Y^-1", 60)
    assert abs(estimate_poly_entropy(shift_like, 0.0, 0.0)) < 1e-9
    generic = iterate_series(alg, "X^1 Y^-3", 60)
    assert estimate_poly_entropy(generic, 0.0, 0.0) > 0.8


def test_poly_entropy_examples():
    s = series((3, 1, 2), "X^1", 128)
    for t in (-1.0, 1.0):
        h = closed_form_entropy(3, 1, 2, 1, 0, 0, t)
        assert abs(estimate_poly_entropy(s, t, h)) < 0.1
    assert estimate_poly_entropy(s, 0.0, 0.0) > 0.6
    s = series((2, 2, 2), "X^1", 128)
    assert abs(estimate_poly_entropy(s, 1.0, 0.5)) < 0.1


def test_poly_ratio_method_is_offset_dominated():
    s = series((2, 1, 1), "S^1", 16)
    # log(dim Lambda)/log n does not vanish at desk-scale n
    assert estimate_poly_entropy(s, 0.5, 0.5, method="ratio") == pytest.approx(
        np.mean(math.log(9) / np.log(np.arange(8, 17))), rel=1e-9
    )


def test_estimator_errors():
    s = series((2, 1, 1), "S^1", 3)
    with pytest.raises(DegenerateSeries):
        estimate_entropy(s, 1.0)
    with pytest.raises(DegenerateSeries):
        estimate_poly_entropy(series((2, 1, 1), "S^1", 9), 1.0, 1.0)
    with pytest.raises(ValueError):
        iterate_series(lam(2, 1, 1), "S^1", 0)


def test_blowup_is_flagged(alg312):
    with pytest.raises(SeriesBlowup):
        iterate_series(alg312, "X^1", 6, growth_bound=1)


def test_compare_report_examples():
    reps = compare_report(lam(3, 1, 2), "X^1", [-1, 1], 64, series=series((3, 1, 2), "X^1", 64))
    assert len(reps) == 2 and all(r.passed for r in reps)
    (rep,) = compare_report(lam(2, 1, 1), "S^2", [0.7], 16, poly_tol=0.1)
    assert rep.fitted_h == pytest.approx(1.4) and rep.closed_h == pytest.approx(1.4)
    assert abs(rep.fitted_poly) < 1e-9 and rep.passed
    (rep,) = compare_report(lam(3, 1, 2), "X^1 Y^1 S^0", [1.0], 48)
    assert rep.closed_h == pytest.approx(2 / 3)
    assert rep.passed
    assert set(rep.to_dict()) >= {"t", "fitted_h", "closed_h", "fitted_poly", "closed_poly", "pass"}


@pytest.mark.parametrize("sig, word", [((3, 1, 2), "X^1"), ((3, 1, 2), "Y^1"), ((2, 2, 2), "X^1"), ((2, 1, 1), "S^3")])
def test_estimators_agree(sig, word):
    s = series(sig, word, 64)
    for t in (-1.0, -0.5, 0.5, 1.0):
        h, res = estimate_entropy(s, t)
        # residual-scaled band, with a floor for exactly linear series
        assert abs(h - estimate_entropy_support(s, t)) <= max(2 * res, 1e-9)


def test_series_csv_long_format():
    s = series((3, 1, 2), "S^1", 3)
    lines = s.to_csv().splitlines()
    assert lines[0] == "n,degree,dim"
    assert lines[1:] == ["0,0,11", "1,-1,11", "2,-2,11", "3,-3,11"]


def test_period():
    assert EntropySeries((3, 1, 2), parse_word("X^1")).period() == 3
    assert EntropySeries((4, 1, 2), parse_word("X^1 Y^1")).period() == 6
    assert EntropySeries((2, 2, 2), parse_word("S^1")).period() == 1
