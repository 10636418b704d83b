#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdsim/estimators.hpp"
#include "qdsim/fit.hpp"
#include "qdsim/rng.hpp"
#include "qdsim/spectrum.hpp"
#include "qdsim/units.hpp"

using namespace qdsim;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

std::vector<double> eval_on(FitModel m, const std::vector<double>& t,
                            const std::vector<double>& p) {
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = eval_model(m, t[i], p);
    return y;
}

} // namespace

TEST_CASE("exact data is recovered by every decay model") {
    const std::vector<double> t = linspace(0.0, 300.0, 60);

    struct Case {
        FitModel m;
        std::vector<double> p;
    };
    const std::vector<Case> cases = {
        {FitModel::Exponential, {0.8, 73.0, 0.1}},
        {FitModel::Gaussian, {0.9, 78.0, 0.05}},
        {FitModel::Stretched, {0.85, 90.0, 1.3, 0.02}},
        {FitModel::Recovery, {0.95, 47.0}},
        {FitModel::ExpFringe, {-0.45, 64.0, 0.13, 0.0, 0.5}},
        {FitModel::GaussFringe, {0.9, 78.0, 0.02, 0.3, 0.0}},
        {FitModel::Sinusoid, {0.5, 120.0, 0.4, 0.5}},
    };
    for (const auto& c : cases) {
        const std::vector<double> y = eval_on(c.m, t, c.p);
        const FitResult fr = fit_decay(t, y, c.m, c.p); // exact init
        REQUIRE(fr.converged);
        for (std::size_t i = 0; i < c.p.size(); ++i)
            CHECK(fr.params[i] == doctest::Approx(c.p[i]).epsilon(1e-6));
        CHECK(fr.residual_norm < 1e-8);
    }
}

TEST_CASE("gaussian envelope is recovered from data-driven starts") {
    const std::vector<double> t = linspace(0.0, 250.0, 80);
    const std::vector<double> y = eval_on(FitModel::Gaussian, t, {0.9, 78.0, 0.03});
    const FitResult fr = fit_decay(t, y, FitModel::Gaussian);
    REQUIRE(fr.converged);
    CHECK(fr.param("t") == doctest::Approx(78.0).epsilon(1e-4));
    CHECK(fr.param("a") == doctest::Approx(0.9).epsilon(1e-4));
}

TEST_CASE("noisy gaussian fit stays within its error bars") {
    const std::vector<double> t = linspace(0.0, 250.0, 120);
    Rng rng = Rng::stream(5, 1, 0, 0);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = eval_model(FitModel::Gaussian, t[i], {0.9, 78.0, 0.0}) + 0.01 * rng.gauss();
    const FitResult fr = fit_decay(t, y, FitModel::Gaussian);
    REQUIRE(fr.converged);
    CHECK(fr.param("t") == doctest::Approx(78.0).epsilon(0.03));
    CHECK(std::abs(fr.param("t") - 78.0) < 5.0 * fr.error("t"));
    CHECK(fr.error("t") > 0.0);
}

TEST_CASE("a pure exponential fitted as stretched gives alpha of one") {
    const std::vector<double> t = linspace(0.05, 12.0, 48);
    Rng rng = Rng::stream(6, 1, 0, 0);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = std::exp(-t[i] / 2.93) + 0.005 * rng.gauss();
    const FitResult fr = fit_decay(t, y, FitModel::Stretched);
    REQUIRE(fr.converged);
    CHECK(fr.param("alpha") == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fr.param("t") == doctest::Approx(2.93).epsilon(0.05));
}

TEST_CASE("power law regression recovers the exponent") {
    const std::vector<double> n = {1.0, 2.0, 4.0, 8.0, 16.0, 20.0};
    std::vector<double> t2(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) t2[i] = 2.93 * std::pow(n[i], 0.673);
    const PowerLawFit pl = fit_powerlaw(n, t2);
    CHECK(pl.gamma == doctest::Approx(0.673).epsilon(1e-9));
    CHECK(pl.amplitude == doctest::Approx(2.93).epsilon(1e-9));
    CHECK(pl.gamma_err == doctest::Approx(0.0).epsilon(1e-6));

    // two points define the line exactly
    const PowerLawFit two = fit_powerlaw({1.0, 8.0}, {2.93, 2.93 * std::pow(8.0, 0.673)});
    CHECK(two.gamma == doctest::Approx(0.673).epsilon(1e-9));
}

TEST_CASE("fit input validation") {
    const std::vector<double> t = linspace(0.0, 10.0, 4);
    const std::vector<double> y = {1.0, 0.8, 0.6, 0.5};
    CHECK_THROWS_AS(fit_decay(t, y, FitModel::Exponential), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay({0, 1, 2, 3, 4, 5}, {1, 2, 3}, FitModel::Exponential),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        fit_decay({0, 1, 2, 3, 4, 5}, {1, 0.9, NAN, 0.7, 0.6, 0.5}, FitModel::Exponential),
        std::invalid_argument);
    CHECK_THROWS_AS(fit_powerlaw({1.0}, {2.9}), std::invalid_argument);
    CHECK_THROWS_AS(fit_powerlaw({1.0, 2.0}, {-1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_powerlaw({3.0, 3.0}, {1.0, 2.0}), std::invalid_argument);
    const FitResult fr = fit_decay(linspace(0, 100, 20),
                                   eval_on(FitModel::Gaussian, linspace(0, 100, 20),
                                           {1.0, 50.0, 0.0}),
                                   FitModel::Gaussian);
    CHECK_THROWS_AS(fr.param("bogus"), std::invalid_argument);
}

TEST_CASE("spectral width round-trips the envelope width") {
    // visibility exp(-(tau/T2*)^2) has spectral std sqrt(2)/(2 pi T2*) = sigma exactly
    for (double sigma : {0.355, 2.9, 52.0}) {
        const double t2_ns = us_to_ns(t2star_from_sigma_us(sigma));
        const double span = std::min(4.0 * t2_ns, 2500.0);
        const std::vector<double> tau = linspace(0.0, span, 200);
        std::vector<double> vis(tau.size());
        for (std::size_t i = 0; i < tau.size(); ++i)
            vis[i] = std::exp(-(tau[i] / t2_ns) * (tau[i] / t2_ns));
        const SpectrumPeak peak = fft_sigma(tau, vis);
        REQUIRE(peak.peak_fit.converged);
        CHECK(peak.sigma_oh_mhz == doctest::Approx(sigma).epsilon(0.05));
        CHECK(std::abs(peak.f_center_mhz) < 0.5 * sigma);
    }
}

TEST_CASE("serrodyne modulation moves the peak without broadening it") {
    const double t2_ns = 608.0;
    const std::vector<double> tau = linspace(0.0, 1500.0, 151);
    std::vector<double> vis(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i)
        vis[i] = std::exp(-(tau[i] / t2_ns) * (tau[i] / t2_ns)) *
                 std::cos(phase_rad(20.0, tau[i]));
    const SpectrumPeak peak = fft_sigma(tau, vis);
    REQUIRE(peak.peak_fit.converged);
    CHECK(peak.f_center_mhz == doctest::Approx(20.0).epsilon(0.01));
    CHECK(peak.sigma_oh_mhz ==
          doctest::Approx(sigma_from_t2star_us(ns_to_us(t2_ns))).epsilon(0.05));
}

TEST_CASE("spectrum rejects bad grids") {
    CHECK_THROWS_AS(fft_sigma({0, 1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fft_sigma({0, 1, 2, 3, 4.5, 5, 6, 7}, {1, 1, 1, 1, 1, 1, 1, 1}),
                    std::invalid_argument);
}

TEST_CASE("bath size estimate matches the worked values") {
    const SpeciesRegistry reg = default_gaas_registry();
    const BathEstimate full = estimate_bath(3.9, reg, 0.355, false);
    CHECK(full.n_nuclei == doctest::Approx(191556.08143422345).epsilon(1e-9));
    const BathEstimate site = estimate_bath(3.9, reg, 0.355, true);
    CHECK(site.n_nuclei == doctest::Approx(95778.04071711173).epsilon(1e-9));
    // both conventions within a factor of two of 1.4e5
    CHECK(full.n_nuclei < 2.0 * 1.4e5);
    CHECK(full.n_nuclei > 0.5 * 1.4e5);
    CHECK(site.n_nuclei < 2.0 * 1.4e5);
    CHECK(site.n_nuclei > 0.5 * 1.4e5);
}

TEST_CASE("single-nucleus coupling and macrostate count") {
    const SpeciesRegistry reg = default_gaas_registry();
    const BathEstimate est = estimate_bath(3.9, reg, 0.355, false);
    // the coupling evaluated at the round bath size
    CHECK(1.0 / (std::sqrt(2.5 * 1.4e5) * M_PI * 3.9e-3) ==
          doctest::Approx(0.13795946391301567).epsilon(1e-12));
    CHECK(est.a_c_mhz > 0.1);
    CHECK(est.a_c_mhz < 0.2);
    CHECK(macrostates(0.355, 0.138) == doctest::Approx(2.572463768115942).epsilon(1e-12));
    CHECK(est.macrostates == doctest::Approx(0.355 / est.a_c_mhz).epsilon(1e-12));
    CHECK_THROWS_AS(estimate_bath(-1.0, reg, 0.355, false), std::invalid_argument);
    CHECK_THROWS_AS(macrostates(0.355, 0.0), std::invalid_argument);
}

TEST_CASE("rabi quality metrics at the calibration point") {
    const RabiMetrics m = rabi_metrics(73.0, 130.0);
    CHECK(m.q == doctest::Approx(18.98).epsilon(1e-12));
    CHECK(m.f_pi == doctest::Approx(0.9743384324497855).epsilon(1e-12));
    CHECK(quality_factor(73.0, 130.0) == m.q);
    CHECK(pi_fidelity(m.q) == m.f_pi);
    CHECK_THROWS_AS(pi_fidelity(0.0), std::invalid_argument);
    CHECK_THROWS_AS(quality_factor(-1.0, 130.0), std::invalid_argument);
}

TEST_CASE("pumping fidelity from contrast ratios") {
    CHECK(osp_fidelity(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(osp_fidelity(0.0199, 1.0) == doctest::Approx(std::sqrt(1.0 - 0.0199)));
    CHECK_THROWS_AS(osp_fidelity(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(osp_fidelity(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("two-sided visibility normalization") {
    const std::vector<double> down = {0.5, 0.8, 0.9, 0.7};
    const std::vector<double> up = {0.5, 0.4, 0.1, 0.5};
    const std::vector<double> c = visibility(down, up);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[2] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(0.5));
    // degenerate case: no positive peak difference
    const std::vector<double> flat = visibility({0.5, 0.5}, {0.5, 0.5});
    CHECK(flat[0] == 0.0);
    CHECK(flat[1] == 0.0);
}
