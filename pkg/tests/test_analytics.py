import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lsmimo_secrecy import analytics as an
from lsmimo_secrecy import channel_mc as mc
from lsmimo_secrecy.config import base_config

from conftest import bisect

# Frozen from a standalone evaluation of the closed forms (numpy, separate script)
# and cross-checked below by bisection / large-power / Monte-Carlo oracles.
L_BASE = -3.6761383470778695
R_SEC_BASE_P1 = 1774682.3862787231
P_MIN_BASE = 0.5048679615188583
P_MIN_BASE_RMIN0 = 0.08114339710742277
EE_BASE_PMIN = 1492733.4310994945
EE_BASE_PMAX = 198389.36933784466
SAT_BASE = 2121808.9382459032
SAT_HARSH_NT20 = 624295.5441909181
SAT_HARSH_NT64 = 2302367.449303556


# ---------------------------------------------------------------- CDF

def test_cdf_at_zero():
    assert an.eavesdropper_gain_cdf(0.0, 1.0, 1.0, 3) == 0.0


@pytest.mark.parametrize("n_r, expected", [(1, 0.5), (2, 0.25), (3, 0.125)])
def test_cdf_at_exponential_median(n_r, expected):
    p, alpha = 2.0, 1.3
    x = p * alpha**2 * math.log(2.0)
    assert an.eavesdropper_gain_cdf(x, p, alpha, n_r) == pytest.approx(expected, rel=1e-14)


def test_cdf_rejects_negative():
    with pytest.raises(ValueError):
        an.eavesdropper_gain_cdf(-1e-3, 1.0, 1.0, 1)


@given(
    st.lists(st.floats(0, 1e3, allow_nan=False), min_size=2, max_size=20),
    st.floats(0.01, 100),
    st.floats(0.1, 3),
    st.integers(1, 16),
)
def test_cdf_bounded_and_nondecreasing(xs, p, alpha, n_r):
    xs = np.sort(np.asarray(xs))
    f = an.eavesdropper_gain_cdf(xs, p, alpha, n_r)
    assert np.all((f >= 0) & (f <= 1))
    assert np.all(np.diff(f) >= 0)


def test_cdf_against_order_statistic_simulation():
    # direct max of N_r independent exponentials (no beamforming involved)
    rng = np.random.default_rng(5)
    p, alpha, n_r = 1.5, 1.2, 3
    draws = (p * alpha**2 * rng.exponential(size=(200_000, n_r))).max(axis=1)
    for x in (0.5, 2.0, 5.0, 10.0):
        emp = np.mean(draws <= x)
        assert abs(emp - an.eavesdropper_gain_cdf(x, p, alpha, n_r)) < 4e-3


# ---------------------------------------------------------------- outage / capacity

def test_outage_log_term(base):
    assert an.outage_log_term(base) == pytest.approx(L_BASE, rel=1e-14)
    assert an.outage_log_term(base) < 0


@pytest.mark.parametrize("eps", [1 - 1e-12, 1e-12, 0.5])
@pytest.mark.parametrize("n_r", [1, 2, 7])
def test_outage_log_term_against_high_precision(eps, n_r):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    cfg = base_config(eps_max=eps, n_r=n_r, alpha=1.3)
    e = mpmath.mpf(eps)
    exact = mpmath.mpf(1.3) ** 2 * mpmath.log(1 - (1 - e) ** (mpmath.mpf(1) / n_r))
    assert an.outage_log_term(cfg) == pytest.approx(float(exact), rel=1e-12)


def test_outage_is_one_at_zero_threshold(base):
    r = base.bandwidth_hz * math.log2(base.rho * 1.0 * base.n_t)
    assert an.secrecy_outage_probability(r, 1.0, base) == 1.0


def test_outage_is_one_above_threshold(base):
    assert an.secrecy_outage_probability(10 * SAT_BASE, 1.0, base) == 1.0


def test_outage_at_zero_rate_links_positive_secrecy(base):
    for p in (0.1, 1.0, 10.0):
        total = an.secrecy_outage_probability(0.0, p, base) + an.positive_secrecy_probability(p, base)
        assert total == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("eps0", [0.01, 0.05, 0.2])
@pytest.mark.parametrize("p", [0.1, 1.0, 10.0])
def test_outage_capacity_roundtrip(base, eps0, p):
    r = an.secrecy_outage_capacity(p, eps0, base)
    assert an.secrecy_outage_probability(r, p, base) == pytest.approx(eps0, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    p=st.floats(0.01, 100),
    eps0=st.floats(0.001, 0.9),
    alpha=st.floats(0.2, 3.0),
    n_t=st.integers(1, 512),
    n_r=st.integers(1, 8),
    rho=st.floats(0.05, 1.0),
)
def test_roundtrip_property(p, eps0, alpha, n_t, n_r, rho):
    cfg = base_config(alpha=alpha, n_t=n_t, n_r=n_r, rho=rho)
    r = an.secrecy_outage_capacity(p, eps0, cfg)
    assert an.secrecy_outage_probability(r, p, cfg) == pytest.approx(eps0, rel=1e-9)


def test_secrecy_capacity_base_point(base):
    assert an.secrecy_outage_capacity(1.0, 0.05, base) == pytest.approx(R_SEC_BASE_P1, rel=1e-13)


def test_secrecy_capacity_no_eavesdropper_limit(base):
    asym = an.asymptotic_legitimate_capacity(1.0, base.rho, base.n_t, base.bandwidth_hz)
    near = an.secrecy_outage_capacity(1.0, 1 - 1e-15, base)
    assert near < asym
    assert near == pytest.approx(asym, rel=1e-6)


def test_secrecy_capacity_against_monte_carlo_quantile(base):
    # C_s asymptote minus the empirical 95% quantile of C_e over 1e6 draws
    emp = mc.empirical_secrecy_capacity(base, 1.0, 0.05, n_samples=1_000_000, seed=11)
    assert emp == pytest.approx(R_SEC_BASE_P1, rel=2e-3)


def test_secrecy_capacity_may_be_negative():
    cfg = base_config(n_t=1, rho=0.3)
    assert an.secrecy_outage_capacity(0.1, 0.05, cfg) < 0


# ---------------------------------------------------------------- positive secrecy

def test_positive_secrecy_zero_margin(base):
    p = 1.0 / (base.rho * base.n_t)
    assert an.positive_secrecy_probability(p, base) == 0.0
    assert an.positive_secrecy_probability(0.5 * p, base) == 0.0


def test_positive_secrecy_large_array_limit():
    assert an.positive_secrecy_probability(1.0, base_config(n_t=100_000)) == pytest.approx(1.0, abs=1e-12)


def test_positive_secrecy_against_monte_carlo():
    cfg = base_config(alpha=3.0)
    # a non-degenerate probability needs a strong eavesdropper
    emp = mc.empirical_positive_secrecy(cfg, 1.0, n_samples=100_000, seed=2)
    assert abs(emp.value - an.positive_secrecy_probability(1.0, cfg)) < 0.01
    emp_base = mc.empirical_positive_secrecy(base_config(), 1.0, n_samples=100_000, seed=2)
    assert abs(emp_base.value - an.positive_secrecy_probability(1.0, base_config())) < 0.01


# ---------------------------------------------------------------- large-array asymptote

def test_asymptotic_capacity_values():
    assert an.asymptotic_legitimate_capacity(1.0 / 16, 1.0, 16, 1.0) == 0.0
    assert an.asymptotic_legitimate_capacity(1.0, 1.0, 1024, 1.0) == 10.0


def test_asymptotic_capacity_matches_simulation():
    cfg = base_config(n_t=1024)
    (pt,) = mc.lemma1_convergence(cfg, [1024], p_watt=1.0, n_samples=4000, seed=4)
    assert pt.rel_error < 0.02


# ---------------------------------------------------------------- QoS power floor

def test_min_power_base(base):
    mp = an.min_power_for_qos(base)
    assert mp.feasible
    assert mp.p_min_watt == pytest.approx(P_MIN_BASE, rel=1e-13)


def test_min_power_matches_bisection(base):
    root = bisect(lambda p: an.secrecy_outage_capacity(p, base.eps_max, base) - base.r_min_bps, 1e-3, 10.0)
    assert an.min_power_for_qos(base).p_min_watt == pytest.approx(root, rel=1e-12)


def test_min_power_zero_rate():
    cfg = base_config(r_min_bps=0.0)
    root = bisect(lambda p: an.secrecy_outage_capacity(p, cfg.eps_max, cfg), 1e-4, 10.0)
    assert an.min_power_for_qos(cfg).p_min_watt == pytest.approx(P_MIN_BASE_RMIN0, rel=1e-13)
    assert root == pytest.approx(P_MIN_BASE_RMIN0, rel=1e-12)


def test_min_power_saturated():
    mp = an.min_power_for_qos(base_config(alpha=1.4, eps_max=0.01))
    assert not mp.feasible
    assert mp.reason == "saturation_below_rmin"
    assert mp.saturation_bps == pytest.approx(SAT_HARSH_NT20, rel=1e-13)


def test_min_power_above_cap():
    mp = an.min_power_for_qos(base_config(p_max_watt=0.4))
    assert not mp.feasible
    assert mp.reason == "pmin_exceeds_pmax"
    assert mp.unclipped_p_min_watt == pytest.approx(P_MIN_BASE, rel=1e-13)


# ---------------------------------------------------------------- saturation

@pytest.mark.parametrize(
    "overrides, expected",
    [({}, SAT_BASE), ({"alpha": 1.4, "eps_max": 0.01}, SAT_HARSH_NT20),
     ({"alpha": 1.4, "eps_max": 0.01, "n_t": 64}, SAT_HARSH_NT64)],
)
def test_saturation_capacity(overrides, expected):
    cfg = base_config(**overrides)
    assert an.saturation_capacity(cfg) == pytest.approx(expected, rel=1e-13)
    # large-power oracle, four significant digits
    assert an.secrecy_outage_capacity(1e6, cfg.eps_max, cfg) == pytest.approx(expected, rel=5e-5)


def test_saturation_is_approached_from_below(base):
    ps = np.logspace(-1, 6, 200)
    r = an.secrecy_outage_capacity(ps, base.eps_max, base)
    assert np.all(r < an.saturation_capacity(base))
    assert np.all(np.diff(r) > 0)


# ---------------------------------------------------------------- energy efficiency

def test_energy_efficiency_points(base):
    assert an.energy_efficiency(P_MIN_BASE, base).ee_bpj == pytest.approx(EE_BASE_PMIN, rel=1e-12)
    fixed = an.energy_efficiency(10.0, base)
    assert fixed.ee_bpj == pytest.approx(EE_BASE_PMAX, rel=1e-12)
    assert EE_BASE_PMIN - EE_BASE_PMAX == pytest.approx(1.294e6, rel=1e-3)


def test_energy_efficiency_clamps_negative_rate():
    cfg = base_config(r_min_bps=0.0)
    at_zero = an.energy_efficiency(P_MIN_BASE_RMIN0, cfg)
    assert abs(at_zero.r_sec_bps) < 1e-6
    below = an.energy_efficiency(0.5 * P_MIN_BASE_RMIN0, cfg)
    assert below.r_sec_bps < 0
    assert below.r_sec_clamped_bps == 0.0
    assert below.ee_bpj == 0.0


@given(st.floats(1e-3, 1e3))
def test_secrecy_point_invariants(p):
    pt = an.energy_efficiency(p, base_config())
    assert pt.ee_bpj >= 0
    assert pt.r_sec_clamped_bps == max(pt.r_sec_bps, 0.0)
    assert (pt.ee_bpj == 0) == (pt.r_sec_bps <= 0)
    assert 0 <= pt.p_positive <= 1


# ---------------------------------------------------------------- monotonicity

def _r(cfg, p=1.0, eps=None):
    return an.secrecy_outage_capacity(p, cfg.eps_max if eps is None else eps, cfg)


@pytest.mark.parametrize(
    "field, grid, sign",
    [
        ("n_t", [4, 8, 16, 32, 64, 128, 256], +1),
        ("rho", [0.1, 0.3, 0.5, 0.7, 0.9, 1.0], +1),
        ("eps_max", [0.001, 0.01, 0.05, 0.1, 0.3, 0.6], +1),
        ("alpha", [0.2, 0.5, 1.0, 1.5, 2.0], -1),
        ("n_r", [1, 2, 3, 4, 8, 16], -1),
    ],
)
def test_secrecy_capacity_monotone_in_parameters(field, grid, sign):
    r = np.array([_r(base_config(**{field: v})) for v in grid])
    assert np.all(sign * np.diff(r) > 0)


def test_secrecy_capacity_increasing_in_power(base):
    r = an.secrecy_outage_capacity(np.linspace(0.01, 50, 1000), base.eps_max, base)
    assert np.all(np.diff(r) > 0)


def test_outage_monotone_in_antenna_counts(base):
    r = 1.0e6
    by_nr = [an.secrecy_outage_probability(r, 1.0, base.replace(n_r=k)) for k in (1, 2, 3, 4, 8)]
    by_nt = [an.secrecy_outage_probability(r, 1.0, base.replace(n_t=k)) for k in (8, 16, 32, 64)]
    assert np.all(np.diff(by_nr) > 0)
    assert np.all(np.diff(by_nt) < 0)


def test_positive_secrecy_monotone(base):
    by_nt = [an.positive_secrecy_probability(0.5, base.replace(n_t=k, alpha=2.0)) for k in (2, 4, 8, 16)]
    by_alpha = [an.positive_secrecy_probability(0.5, base.replace(n_t=8, alpha=a)) for a in (1.0, 1.5, 2.0, 3.0)]
    by_nr = [an.positive_secrecy_probability(0.5, base.replace(n_t=8, alpha=2.0, n_r=k)) for k in (1, 2, 4)]
    assert np.all(np.diff(by_nt) >= 0)
    assert np.all(np.diff(by_alpha) <= 0)
    assert np.all(np.diff(by_nr) <= 0)
