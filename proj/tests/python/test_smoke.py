import math

import pytest

import todacft


def test_upsilon_normalization_and_zero():
    g = 1.0
    q = g + 2.0 / g
    assert abs(todacft.upsilon(q / 2, g) - 1.0) < 1e-13
    assert todacft.upsilon(0.0, g) == 0.0


def test_l_function_matches_gamma_ratio():
    assert todacft.l_func(0.8) == pytest.approx(math.gamma(0.8) / math.gamma(0.2), rel=1e-13)


def test_dozz_is_symmetric():
    a = todacft.dozz(1.6, 1.3, 1.9, 1.4)
    b = todacft.dozz(1.9, 1.6, 1.3, 1.4)
    assert a["finite"]
    assert a["value"] == pytest.approx(b["value"], rel=1e-12)


def test_fateev_litvinov_mu_scaling():
    q = 1.1 + 2.0 / 1.1
    a0 = (q - 0.45, q - 0.55)
    f1 = todacft.fateev_litvinov(a0, 2.5, a0, 1.1, 1.0)
    f2 = todacft.fateev_litvinov(a0, 2.5, a0, 1.1, 2.0)
    assert f1["finite"] and f2["finite"]
    assert f1["sign"] == f2["sign"]


def test_hypergeometric_reduction():
    z = 0.5 + 0.2j
    assert abs(todacft.hyper_3f2((0.37, 1.3, 2.1), (1.3, 2.1), z) - (1 - z) ** -0.37) < 1e-12
    assert abs(todacft.block("H0", (0.37, 1.3, 2.1), (1.3, 2.1), z) - (1 - z) ** -0.37) < 1e-12


def test_suite_report():
    assert "upsilon" in todacft.suite_names()
    report = todacft.run_suite("upsilon")
    assert report["pass"]
    assert report["failures"] == 0


def test_errors_are_translated():
    with pytest.raises(todacft.TodaError, match="MomentViolation"):
        todacft.mc_liouville_dozz((2.5, 1.0, 1.0), 1.4)


def test_small_liouville_run_is_deterministic():
    a = todacft.mc_liouville_dozz((1.6, 1.6, 1.6), 1.4, budget=300, n=200, seed=4)
    b = todacft.mc_liouville_dozz((1.6, 1.6, 1.6), 1.4, budget=300, n=200, seed=4)
    assert a == b
    assert a["std_error"] > 0
