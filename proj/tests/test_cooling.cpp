#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdsim/constants.hpp"
#include "qdsim/cooling.hpp"
#include "qdsim/units.hpp"

using namespace qdsim;

TEST_CASE("feedback efficiency peaks at the difference frequency") {
    CHECK(hh_efficiency(constants::kHHCenterMHz) == doctest::Approx(1.0));
    CHECK(hh_efficiency(constants::kHHCenterMHz + 3.0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(hh_efficiency(constants::kHHCenterMHz - 3.0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(hh_efficiency(40.0) < 1e-9);
}

TEST_CASE("rabi drift is an odd restoring kernel around the drive") {
    RabiCoolingConfig cfg;
    CHECK(rabi_cool_drift(0.0, cfg) == 0.0);
    for (double d : {5.0, 50.0, 150.0}) {
        CHECK(rabi_cool_drift(d, cfg) < 0.0);
        CHECK(rabi_cool_drift(-d, cfg) == doctest::Approx(-rabi_cool_drift(d, cfg)));
    }
    // far outside the capture width the pull dies off
    CHECK(std::abs(rabi_cool_drift(500.0, cfg)) < std::abs(rabi_cool_drift(100.0, cfg)));

    // a frequency offset recenters the lock point
    RabiCoolingConfig off = cfg;
    off.f_offset_mhz = -40.0;
    CHECK(rabi_cool_drift(-40.0, off) == 0.0);
    CHECK(rabi_cool_drift(-30.0, off) < 0.0);
    CHECK(rabi_cool_drift(-50.0, off) > 0.0);

    // drift scales with the cycle duration and the efficiency
    RabiCoolingConfig slow = cfg;
    slow.t_c_ns = 500.0;
    CHECK(rabi_cool_drift(10.0, slow) ==
          doctest::Approx(0.5 * rabi_cool_drift(10.0, cfg)).epsilon(1e-12));
    RabiCoolingConfig on_center = cfg;
    on_center.omega_c_mhz = constants::kHHCenterMHz;
    RabiCoolingConfig detuned_drive = cfg;
    detuned_drive.omega_c_mhz = constants::kHHCenterMHz + 3.0;
    CHECK(rabi_cool_drift(10.0, detuned_drive) ==
          doctest::Approx(std::exp(-0.5) * rabi_cool_drift(10.0, on_center)).epsilon(1e-12));
}

TEST_CASE("sensing bias is odd in the detuning and bounded") {
    QscConfig cfg;
    CHECK(qsc_bias(0.0, 200.0, cfg) == 0.0);
    for (double tau : {50.0, 125.0, 400.0})
        for (double d : {0.3, 1.0, 4.0}) {
            const double b = qsc_bias(d, tau, cfg);
            CHECK(qsc_bias(-d, tau, cfg) == doctest::Approx(-b).epsilon(1e-12));
            CHECK(std::abs(b) <= 1.0);
        }
}

TEST_CASE("sensing bias peaks near a quarter period of the detuning") {
    QscConfig cfg;
    cfg.t_c_ns = 125.0; // away from the full-transfer null
    const double tau = 200.0;
    // sin(2 pi delta tau) maximal at delta = 1/(4 tau)
    const double d_star = 0.25 / ns_to_us(tau);
    const double peak = qsc_bias(d_star, tau, cfg);
    CHECK(peak > 0.0);
    CHECK(peak > qsc_bias(0.3 * d_star, tau, cfg));
    CHECK(peak > qsc_bias(1.7 * d_star, tau, cfg));
    // at the full-transfer duration the pi-pulse quality term vanishes
    QscConfig full = cfg;
    full.t_c_ns = full.full_transfer_ns;
    CHECK(std::abs(qsc_bias(d_star, tau, full)) < 1e-12);
    // longer sensing windows lose contrast to the dynamical spread
    const double b_short = qsc_bias(0.25 / ns_to_us(100.0), 100.0, cfg);
    const double b_long = qsc_bias(0.25 / ns_to_us(4000.0), 4000.0, cfg);
    CHECK(b_short > b_long);
}

TEST_CASE("zero-gain cycles are pure diffusion") {
    RabiCoolingConfig cfg;
    cfg.gain = 0.0;
    Rng rng = Rng::stream(3, 8, 0, 0);
    const int n = 200000;
    double mean = 0.0, var = 0.0;
    std::vector<double> ends(n);
    for (int i = 0; i < n; ++i) {
        BathState s;
        s.delta_mhz = 1.5;
        rabi_cool_cycle(s, cfg, rng);
        ends[i] = s.delta_mhz;
        mean += s.delta_mhz;
    }
    mean /= n;
    for (double e : ends) var += (e - mean) * (e - mean);
    var /= n - 1;
    CHECK(mean == doctest::Approx(1.5).epsilon(0.005));
    CHECK(var == doctest::Approx(constants::kRabiCoolDiffusion).epsilon(0.02));
}

TEST_CASE("rabi cooling reaches its diffusion-limited width") {
    BathModel bath;
    const ProtocolResult res = run_protocol(RabiCoolingConfig{}, 400, bath, 2000, 11, 1);
    // analytic steady state of the linearized kernel: sqrt(D / (2 g - g^2)) = 2.90
    CHECK(res.final_sigma_mhz == doctest::Approx(2.90).epsilon(0.30));
    CHECK(std::abs(res.final_mean_mhz) < 0.5);
    CHECK(res.final_deltas.size() == 2000);
    REQUIRE(res.trace.size() == 400);
    // trace is cycle-resolved, narrowing from warm toward the steady state
    CHECK(res.trace.front().sigma_now_mhz > 20.0);
    CHECK(res.trace.back().sigma_now_mhz < 4.0);
    CHECK(std::isnan(res.trace.front().tau_sense_ns));
    CHECK(res.wall_time_us == doctest::Approx(400 * 1.0));
}

TEST_CASE("sensing-based cooling narrows far below the rabi limit") {
    BathModel bath;
    QscConfig cfg;
    const ProtocolResult res = run_protocol(cfg, 15, bath, 1200, 13, 1);
    CHECK(res.final_sigma_mhz < 0.5);
    CHECK(res.final_sigma_mhz > 0.1);
    REQUIRE(res.trace.size() == static_cast<std::size_t>(15 * cfg.n_cycles));
    // the sensing window ramps linearly within each pass
    CHECK(res.trace[0].tau_sense_ns == doctest::Approx(cfg.tau_min_ns));
    CHECK(res.trace[cfg.n_cycles - 1].tau_sense_ns == doctest::Approx(cfg.tau_max_ns));
    CHECK(res.trace[cfg.n_cycles].tau_sense_ns == doctest::Approx(cfg.tau_min_ns));
    const double mid = res.trace[cfg.n_cycles / 2].tau_sense_ns;
    CHECK(mid > cfg.tau_min_ns);
    CHECK(mid < cfg.tau_max_ns);
}

TEST_CASE("per-pass wall time accounts for every protocol step") {
    BathModel bath;
    QscConfig cfg;
    cfg.n_cycles = 3;
    cfg.tau_min_ns = 100.0;
    cfg.tau_max_ns = 300.0;
    const ProtocolResult res = run_protocol(cfg, 2, bath, 50, 17, 1);
    // per pass: sum over cycles of tau + t_c + reset + 500/omega_c
    const double pi_half_ns = 500.0 / cfg.omega_c_mhz;
    const double pass_ns =
        (100.0 + 200.0 + 300.0) + 3.0 * (cfg.t_c_ns + cfg.reset_ns + pi_half_ns);
    CHECK(res.wall_time_us == doctest::Approx(ns_to_us(2.0 * pass_ns)).epsilon(1e-12));
}

TEST_CASE("detuned feedback drive cools poorly") {
    BathModel bath;
    RabiCoolingConfig good;
    RabiCoolingConfig bad = good;
    bad.omega_c_mhz = constants::kHHCenterMHz + 12.0; // four widths off the resonance
    const ProtocolResult res_good = run_protocol(good, 300, bath, 1000, 19, 1);
    const ProtocolResult res_bad = run_protocol(bad, 300, bath, 1000, 19, 1);
    CHECK(res_good.final_sigma_mhz < 4.0);
    CHECK(res_bad.final_sigma_mhz > 3.0 * res_good.final_sigma_mhz);
}

TEST_CASE("protocols are reproducible and thread-count independent") {
    BathModel bath;
    QscConfig cfg;
    const ProtocolResult a = run_protocol(cfg, 4, bath, 300, 23, 1);
    const ProtocolResult b = run_protocol(cfg, 4, bath, 300, 23, 1);
    const ProtocolResult c = run_protocol(cfg, 4, bath, 300, 23, 4);
    CHECK(a.final_sigma_mhz == b.final_sigma_mhz);
    CHECK(a.final_sigma_mhz == c.final_sigma_mhz);
    for (std::size_t i = 0; i < a.final_deltas.size(); ++i)
        CHECK(a.final_deltas[i] == c.final_deltas[i]);
    // different seeds decorrelate
    const ProtocolResult d = run_protocol(cfg, 4, bath, 300, 24, 1);
    CHECK(a.final_sigma_mhz != d.final_sigma_mhz);
}

TEST_CASE("cooling configuration validation") {
    RabiCoolingConfig r;
    r.t_c_ns = -1.0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    QscConfig q;
    q.tau_max_ns = q.tau_min_ns - 1.0;
    CHECK_THROWS_WITH_AS(q.validate(), doctest::Contains("tau_max"),
                         std::invalid_argument);
    QscConfig q2;
    q2.n_cycles = 0;
    CHECK_THROWS_AS(q2.validate(), std::invalid_argument);
    BathModel bath;
    CHECK_THROWS_AS(run_protocol(QscConfig{}, 0, bath, 100, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_protocol(QscConfig{}, 1, bath, 0, 1, 1),
                    std::invalid_argument);
}
