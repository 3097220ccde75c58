import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special, stats

from fracsim.green import (
    AccuracyWarning,
    QuadratureConfig,
    SlowDecayWarning,
    convolve_initial,
    gaussian_green,
    green_pdf,
    levy_cdf,
    levy_pdf,
    levy_tail_constant,
    scaled_cdf,
    scaled_green,
)


def scipy_stable(alpha):
    law = stats.levy_stable(alpha, 0.0)
    law.dist.parameterization = "S1"
    return law


def test_gaussian_examples():
    assert gaussian_green(0.0, 1.0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-15)
    assert gaussian_green(2.0, 1.0) == pytest.approx(math.exp(-1) / (2 * math.sqrt(math.pi)), rel=1e-15)
    x = np.linspace(-30, 30, 60001)
    assert integrate.trapezoid(gaussian_green(x, 2.0), x) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        gaussian_green(0.0, 0.0)


def test_levy_pdf_gaussian_endpoint():
    x = np.linspace(-8, 8, 33)
    assert np.max(np.abs(levy_pdf(2.0, x) - gaussian_green(x, 1.0))) < 1e-8


def test_levy_pdf_cauchy():
    x = np.linspace(-10, 10, 41)
    assert np.max(np.abs(levy_pdf(1.0, x) - 1 / (math.pi * (1 + x * x)))) < 1e-8


@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_levy_pdf_at_origin(alpha):
    # f(0) = Gamma(1 + 1/alpha) / pi
    assert levy_pdf(alpha, 0.0) == pytest.approx(math.gamma(1 + 1 / alpha) / math.pi, rel=1e-10)


@pytest.mark.parametrize("alpha", [0.8, 1.3, 1.5, 1.9])
def test_levy_pdf_against_scipy(alpha):
    x = np.array([-3.0, -0.4, 0.25, 1.0, 5.0])
    assert np.max(np.abs(levy_pdf(alpha, x) - scipy_stable(alpha).pdf(x))) < 1e-6


@pytest.mark.parametrize("alpha", [1.0, 1.5, 1.99])
def test_levy_pdf_normalization(alpha):
    x = np.linspace(-40, 40, 8001)
    inside = integrate.trapezoid(levy_pdf(alpha, x), x)
    tails = 2 * levy_tail_constant(alpha) * 40.0 ** (-alpha) / alpha
    assert inside + tails == pytest.approx(1.0, abs=1e-4)


def test_levy_tail_ratio_trend():
    alpha = 1.5
    c = levy_tail_constant(alpha)
    ratios = [levy_pdf(alpha, x) / (c * x ** (-1 - alpha)) for x in (10.0, 20.0, 40.0)]
    gaps = [abs(r - 1) for r in ratios]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.02


def test_levy_pdf_positive_and_even():
    x = np.linspace(0.0, 50.0, 51)
    f = levy_pdf(1.5, x)
    assert np.all(f > 0)
    assert np.allclose(levy_pdf(1.5, -x), f, rtol=0, atol=1e-15)
    assert np.all(np.diff(f) < 0)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.9])
def test_levy_cdf_against_scipy(alpha):
    x = np.array([-20.0, -2.0, -0.3, 0.0, 0.7, 3.0, 50.0])
    assert np.max(np.abs(levy_cdf(alpha, x) - scipy_stable(alpha).cdf(x))) < 1e-6


def test_levy_cdf_tail_and_symmetry():
    assert levy_cdf(1.5, 0.0) == 0.5
    far = levy_cdf(1.5, 1e4)
    assert 1 - far == pytest.approx(levy_tail_constant(1.5) * 1e4**-1.5 / 1.5, rel=1e-3)
    x = np.linspace(-500, 500, 11)
    assert np.allclose(levy_cdf(1.5, x) + levy_cdf(1.5, -x), 1.0, atol=1e-14)


def test_scaled_green_value():
    # t = 2, alpha = 3/2: 2**(-2/3) Gamma(5/3) / pi
    assert scaled_green(1.5, 0.0, 2.0) == pytest.approx(0.1810209, abs=5e-8)


@pytest.mark.parametrize("lam", [0.5, 3.0])
def test_scaled_green_self_similarity(lam):
    alpha, t = 1.5, 0.7
    x = np.linspace(-4, 4, 17)
    lhs = scaled_green(alpha, lam ** (1 / alpha) * x, lam * t)
    rhs = lam ** (-1 / alpha) * scaled_green(alpha, x, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_scaled_cdf_matches_levy_cdf():
    assert scaled_cdf(1.5, 2.0, 8.0) == pytest.approx(levy_cdf(1.5, 2.0 / 8.0 ** (2 / 3)), abs=1e-15)


def test_green_pdf_beta_one_is_scaled_green():
    x = np.linspace(-3, 3, 13)
    assert np.max(np.abs(green_pdf(1.5, 1.0, x, 0.5) - scaled_green(1.5, x, 0.5))) < 1e-6


def subordinated_gaussian(x, t):
    # beta = 1/2, alpha = 2: mixture of heat kernels over the M-Wright law exp(-s^2/4t)/sqrt(pi t)
    f = lambda s: gaussian_green(x, s) * math.exp(-s * s / (4 * t)) / math.sqrt(math.pi * t)
    val, _ = integrate.quad(f, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return val


def test_green_pdf_time_fractional_at_origin():
    with pytest.warns(SlowDecayWarning):
        v = green_pdf(2.0, 0.5, 0.0, 1.0)
    assert v == pytest.approx(0.40802446954913, abs=1e-8)
    assert v == pytest.approx(subordinated_gaussian(0.0, 1.0), abs=1e-8)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.5])
def test_green_pdf_time_fractional_off_origin(x):
    assert green_pdf(2.0, 0.5, x, 1.0) == pytest.approx(subordinated_gaussian(x, 1.0), abs=1e-7)


def test_green_pdf_erfcx_oracle():
    # same quantity through the closed form E_{1/2}(-y) = erfcx(y) and an independent quadrature
    t, x = 2.0, 0.8
    val, _ = integrate.quad(lambda k: special.erfcx(k * k * math.sqrt(t)), 0, np.inf, weight="cos", wvar=x)
    assert green_pdf(2.0, 0.5, x, t) == pytest.approx(val / math.pi, abs=1e-7)


def test_green_pdf_domain():
    with pytest.raises(ValueError):
        green_pdf(1.5, 1.2, 0.0, 1.0)
    with pytest.raises(ValueError):
        green_pdf(0.8, 0.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        green_pdf(1.5, 0.5, 0.0, -1.0)


def test_quadrature_config_domain():
    with pytest.raises(ValueError):
        QuadratureConfig(k_max=-1)
    with pytest.raises(ValueError):
        QuadratureConfig(panels=2)


def test_convolve_spike():
    x = np.linspace(-5, 5, 501)
    h = x[1] - x[0]
    phi0 = np.zeros_like(x)
    phi0[250] = 1.0 / h
    u = convolve_initial(1.5, 0.2, x, phi0)
    assert np.max(np.abs(u - scaled_green(1.5, x, 0.2))) < 1e-12


def test_convolve_gaussian_variance():
    # heat equation u_t = u_xx adds 2t to the variance
    sigma2, t = 0.3, 0.25
    x = np.linspace(-10, 10, 2001)
    phi0 = np.exp(-x * x / (2 * sigma2)) / math.sqrt(2 * math.pi * sigma2)
    u = convolve_initial(2.0, t, x, phi0)
    exact = stats.norm(scale=math.sqrt(sigma2 + 2 * t)).pdf(x)
    assert np.max(np.abs(u - exact)) < 1e-6


def test_convolve_mass():
    x = np.linspace(-60, 60, 4001)
    phi0 = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    u = convolve_initial(1.5, 0.5, x, phi0)
    h = x[1] - x[0]
    lost = 2 * levy_tail_constant(1.5) * 60.0 ** -1.5 / 1.5 * 0.5  # kernel mass escaping the window, leading order
    assert h * u.sum() == pytest.approx(1.0 - lost, abs=1e-4)


def test_convolve_coarse_grid_warns():
    x = np.linspace(-5, 5, 11)
    with pytest.warns(AccuracyWarning):
        convolve_initial(1.5, 1e-3, x, np.exp(-x * x))


def test_convolve_rejects_bad_input():
    x = np.linspace(-1, 1, 5)
    with pytest.raises(ValueError):
        convolve_initial(1.5, 0.1, x, -np.ones(5))
    with pytest.raises(ValueError):
        convolve_initial(1.5, 0.1, np.array([0.0, 0.1, 0.3]), np.ones(3))


def stable_survival_series(alpha, x, terms=25):
    # convergent for large x: P(X > x) = (1/pi) sum_k (-1)^(k+1) Gamma(alpha k) / k! sin(k pi alpha / 2) x^(-alpha k)
    return sum(
        (-1) ** (k + 1) * math.gamma(alpha * k) / math.factorial(k) * math.sin(k * math.pi * alpha / 2) * x ** (-alpha * k)
        for k in range(1, terms)
    ) / math.pi


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.9])
@pytest.mark.parametrize("x", [30.0, 120.0, 399.0, 1500.0])
def test_levy_cdf_far_tail(alpha, x):
    assert 1 - levy_cdf(alpha, x) == pytest.approx(stable_survival_series(alpha, x), abs=1e-8)
