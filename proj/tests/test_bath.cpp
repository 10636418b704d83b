#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdsim/bath.hpp"
#include "qdsim/units.hpp"

using namespace qdsim;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments sample_moments(const std::vector<double>& v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size() - 1);
    return m;
}

} // namespace

TEST_CASE("bath validation names the offending field") {
    BathModel b;
    CHECK_NOTHROW(b.validate());
    b.sigma_static_mhz = -1.0;
    CHECK_THROWS_WITH_AS(b.validate(), doctest::Contains("bath.sigma_static"),
                         std::invalid_argument);
    b = BathModel{};
    b.tau_corr_us = 0.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("quasi-static draws have the declared width") {
    Rng rng = Rng::stream(7, 1, 2, 3);
    std::vector<double> draws(100000);
    for (auto& d : draws) d = sample_detuning(52.0, rng);
    const Moments m = sample_moments(draws);
    CHECK(m.mean == doctest::Approx(0.0).epsilon(1.0));
    CHECK(std::abs(m.mean) < 5.0 * 52.0 / std::sqrt(1e5));
    CHECK(std::sqrt(m.var) == doctest::Approx(52.0).epsilon(0.02));
}

TEST_CASE("one ou step has the exact conditional moments") {
    BathModel b;
    b.sigma_dyn_mhz = 0.367;
    b.tau_corr_us = 10.0;
    const double d0 = 0.8, dt = 4.0;
    Rng rng = Rng::stream(11, 2, 0, 0);
    std::vector<double> ends(200000);
    for (auto& e : ends) e = ou_step(d0, b, dt, rng);
    const Moments m = sample_moments(ends);
    const double mean_exact = d0 * std::exp(-dt / 10.0);
    const double var_exact = 0.367 * 0.367 * (1.0 - std::exp(-2.0 * dt / 10.0));
    CHECK(m.mean == doctest::Approx(mean_exact).epsilon(0.01));
    CHECK(m.var == doctest::Approx(var_exact).epsilon(0.02));
}

TEST_CASE("long ou evolution forgets the start and reaches the stationary width") {
    BathModel b;
    b.sigma_dyn_mhz = 0.367;
    b.tau_corr_us = 10.0;
    Rng rng = Rng::stream(13, 2, 0, 0);
    std::vector<double> ends(200000);
    for (auto& e : ends) e = ou_step(25.0, b, 200.0, rng);
    const Moments m = sample_moments(ends);
    CHECK(std::abs(m.mean) < 0.01);
    CHECK(std::sqrt(m.var) == doctest::Approx(0.367).epsilon(0.01));
}

TEST_CASE("joint delay sample matches the exact moments") {
    // delta0=1, sigma=0.367, tau=10, dt=3.7; moments computed independently in
    // extended precision
    BathModel b;
    b.sigma_dyn_mhz = 0.367;
    b.tau_corr_us = 10.0;
    Rng rng = Rng::stream(17, 3, 0, 0);
    const int n = 500000;
    std::vector<double> ends(n), ints(n);
    for (int i = 0; i < n; ++i) {
        const OuDelay d = ou_delay(1.0, b, 3.7, rng);
        ends[i] = d.delta_end_mhz;
        ints[i] = d.integral_mhz_us;
    }
    const Moments me = sample_moments(ends);
    const Moments mi = sample_moments(ints);
    CHECK(me.mean == doctest::Approx(0.6907343306373547).epsilon(0.005));
    CHECK(me.var == doctest::Approx(0.07042700383238741).epsilon(0.01));
    CHECK(mi.mean == doctest::Approx(3.092656693626453).epsilon(0.002));
    CHECK(mi.var == doctest::Approx(0.3478128869246092).epsilon(0.01));
    double cov = 0.0;
    for (int i = 0; i < n; ++i) cov += (ends[i] - me.mean) * (ints[i] - mi.mean);
    cov /= n - 1;
    CHECK(cov == doctest::Approx(0.12882363649183276).epsilon(0.02));
}

TEST_CASE("short-window integral variance survives the cancellation-prone regime") {
    // dt=0.05 (a=0.005) exercises the series branch; reference value from a
    // 50-digit evaluation of the closed form
    BathModel b;
    b.sigma_dyn_mhz = 0.367;
    b.tau_corr_us = 10.0;
    Rng rng = Rng::stream(19, 3, 0, 0);
    const int n = 400000;
    std::vector<double> ints(n);
    for (int i = 0; i < n; ++i) ints[i] = ou_delay(1.0, b, 0.05, rng).integral_mhz_us;
    const Moments m = sample_moments(ints);
    CHECK(m.mean == doctest::Approx(1.0 * (1.0 - std::exp(-0.005)) * 10.0).epsilon(1e-4));
    CHECK(m.var == doctest::Approx(1.1182091056444759e-06).epsilon(0.02));
}

TEST_CASE("delay with the dynamic bath off is a pure drift") {
    BathModel b;
    b.sigma_dyn_mhz = 0.0;
    Rng rng = Rng::stream(23, 3, 0, 0);
    const OuDelay d = ou_delay(2.5, b, 1.7, rng);
    CHECK(d.delta_end_mhz == 2.5);
    CHECK(d.integral_mhz_us == doctest::Approx(2.5 * 1.7));
}

TEST_CASE("hahn echo attenuation from sampled trajectories matches the closed form") {
    // chi(t) = (2 pi sigma)^2 tau^2 [t/tau - 3 + 4 e^{-t/2tau} - e^{-t/tau}];
    // at sigma=0.367, tau=10, t=2.93 the exponent is 1.0001 (the 1/e point)
    BathModel b;
    b.sigma_dyn_mhz = 0.367;
    b.tau_corr_us = 10.0;
    Rng rng = Rng::stream(29, 3, 0, 0);
    const double t = 2.93;
    const int n = 400000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        // stationary start, refocused phase = integral(second half) - integral(first half)
        const double d0 = sample_detuning(0.367, rng);
        const OuDelay first = ou_delay(d0, b, 0.5 * t, rng);
        const OuDelay second = ou_delay(first.delta_end_mhz, b, 0.5 * t, rng);
        acc += std::cos(kTwoPi * (second.integral_mhz_us - first.integral_mhz_us));
    }
    acc /= n;
    CHECK(acc == doctest::Approx(std::exp(-1.0000733598744977)).epsilon(0.02));
}

TEST_CASE("rewarming interpolates the dephasing time back to warm") {
    BathModel b;
    CHECK(rewarm_sigma(2.9, 0.0, b) == 2.9);
    CHECK(rewarm_sigma(2.9, 1e6, b) == doctest::Approx(52.0));
    // monotone in the wait time
    double prev = 2.9;
    for (double t : {1.0, 5.0, 20.0, 41.0, 100.0}) {
        const double s = rewarm_sigma(2.9, t, b);
        CHECK(s > prev);
        CHECK(s < 52.0);
        prev = s;
    }
    // one relax time recovers all but 1/e of the dephasing-time deficit
    const double t2_now = t2star_from_sigma_us(2.9);
    const double t2_warm = t2star_from_sigma_us(52.0);
    const double t2_expect = t2_warm + (t2_now - t2_warm) * std::exp(-1.0);
    CHECK(rewarm_sigma(2.9, 41.0, b) ==
          doctest::Approx(sigma_from_t2star_us(t2_expect)).epsilon(1e-12));
}
