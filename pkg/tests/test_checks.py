import math

from riskbandits import checks as checklib
from riskbandits.criteria import CVaRCriterion, MeanCriterion
from riskbandits.dist import Gaussian, PiecewiseLinearCDF, PointMass, Uniform

from conftest import bad1_arm_wide


class InfiniteLowerTail(Gaussian):
    """Stub with a divergent lower first moment (heavy-tail stand-in)."""

    def lower_tail(self):
        return -math.inf

    def cdf_integral_below(self, v):
        return math.inf


def test_c1_fails_on_divergent_tail():
    crit = CVaRCriterion(0.1)
    res = checklib.condition_c1(crit, [InfiniteLowerTail(0.0, 1.0)])
    assert not res.passed


def test_c1_passes_on_catalog():
    res = checklib.condition_c1(CVaRCriterion(0.1), [Gaussian(0, 1), Uniform(-1, 1)])
    assert res.passed


def test_c2_kind_based():
    assert checklib.condition_c2([Gaussian(0, 1), PointMass(3.0), bad1_arm_wide()]).passed


def test_c3_over_mixture_grid():
    assert checklib.condition_c3([Gaussian(0, 1), Gaussian(0.2, 1)], 0.1).passed
    flat = PiecewiseLinearCDF.from_pairs([(0, 0), (1, 0.1), (2, 0.1), (3, 1.0)])
    res = checklib.condition_c3([flat], 0.1)
    assert not res.passed and "flat stretch" in res.detail


def test_c4_with_supplied_constants():
    res = checklib.condition_c4([Gaussian(0, 1)], 0.1, b_alpha=12.0, m_alpha=0.05)
    assert res.passed
    too_tight = checklib.condition_c4([Gaussian(0, 1)], 0.1, b_alpha=1.0, m_alpha=0.05)
    assert not too_tight.passed


def test_c5_breakpoint_detection():
    # percentile of a point mass lands on its jump: not differentiable there
    res = checklib.condition_c5([PointMass(1.0)], 0.3)
    assert not res.passed
    assert checklib.condition_c5([Gaussian(0, 1), Gaussian(0.3, 1.2)], 0.3).passed


def test_modulus_check_detects_bogus_certificate():
    from riskbandits.criteria import StabilityCertificate

    crit = MeanCriterion()
    arms = [Gaussian(0, 1), Gaussian(2.0, 1)]
    bogus = StabilityCertificate(a=1.0, b=1e-6, q=1.0)
    res = checklib.modulus_check(crit, arms, bogus, n_pairs=50, seed=3)
    assert not res.passed


def test_dkw_grid_check_trivial_and_failing():
    good = checklib.dkw_grid_check(Gaussian(0, 1), [(25, 0.2)], reps=2000, seed=5)
    assert good.passed
    # an impossible slack factor turns a healthy empirical rate into a failure
    bad = checklib.dkw_grid_check(Gaussian(0, 1), [(25, 0.2)], reps=2000, seed=5, slack=0.1)
    assert not bad.passed


def test_galois_check_runs_on_catalog():
    res = checklib.galois_check([Gaussian(0, 1), bad1_arm_wide()], n_points=50, seed=1)
    assert res.passed
