#include "qdsim/cooling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qdsim/rng.hpp"
#include "qdsim/units.hpp"

namespace qdsim {
namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double ensemble_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double ensemble_sigma(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

// chunk trajectories over a small pool; per-trajectory state is touched by exactly one
// thread and every draw comes from a (trajectory, cycle) substream, so the ensemble is
// identical for any thread count
template <class Fn>
void parallel_traj(int n_traj, int threads, const Fn& fn) {
    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        for (int i = 0; i < n_traj; ++i) fn(i);
        return;
    }
    constexpr int kChunk = 64;
    const int n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) break;
            const int end = std::min(n_traj, (c + 1) * kChunk);
            for (int i = c * kChunk; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

std::vector<double> warm_ensemble(const BathModel& bath, int n_traj, std::uint64_t seed) {
    std::vector<double> deltas(static_cast<std::size_t>(n_traj));
    for (int i = 0; i < n_traj; ++i) {
        Rng rng = Rng::stream(seed, StreamKind::BathAux, static_cast<std::uint64_t>(i), 0);
        deltas[static_cast<std::size_t>(i)] = sample_detuning(bath.sigma_static_mhz, rng);
    }
    return deltas;
}

void record(ProtocolResult& out, int cycle, double tau_ns, const std::vector<double>& deltas) {
    const double mean = ensemble_mean(deltas);
    out.trace.push_back({cycle, tau_ns, ensemble_sigma(deltas, mean), mean});
}

void finalize(ProtocolResult& out, std::vector<double>&& deltas) {
    const double mean = ensemble_mean(deltas);
    out.final_mean_mhz = mean;
    out.final_sigma_mhz = ensemble_sigma(deltas, mean);
    out.final_deltas = std::move(deltas);
}

} // namespace

void RabiCoolingConfig::validate() const {
    require(omega_c_mhz >= 0.0, "rabi_cooling.omega_c must be non-negative");
    require(t_c_ns >= 0.0, "rabi_cooling.t_c must be non-negative");
    require(capture_width_mhz > 0.0, "rabi_cooling.capture_width must be positive");
    require(gain >= 0.0, "rabi_cooling.gain must be non-negative");
    require(diffusion_mhz2 >= 0.0, "rabi_cooling.diffusion must be non-negative");
}

void QscConfig::validate() const {
    require(n_cycles >= 1, "qsc.n_cycles must be at least 1");
    require(tau_min_ns > 0.0, "qsc.tau_min must be positive");
    require(tau_max_ns >= tau_min_ns, "qsc.tau_max must be at least tau_min");
    require(t_c_ns >= 0.0, "qsc.t_c must be non-negative");
    require(omega_c_mhz >= 0.0, "qsc.omega_c must be non-negative");
    require(gain >= 0.0, "qsc.gain must be non-negative");
    require(diffusion_mhz2 >= 0.0, "qsc.diffusion must be non-negative");
    require(reset_ns >= 0.0, "qsc.reset_ns must be non-negative");
    require(full_transfer_ns > 0.0, "qsc.full_transfer_ns must be positive");
    require(sense_coherence_sigma_mhz >= 0.0,
            "qsc.sense_coherence_sigma must be non-negative");
}

double hh_efficiency(double omega_c_mhz) {
    const double x = omega_c_mhz - constants::kHHCenterMHz;
    const double w = constants::kHHWidthMHz;
    return std::exp(-x * x / (2.0 * w * w));
}

double rabi_cool_drift(double delta_mhz, const RabiCoolingConfig& cfg) {
    const double x = delta_mhz - cfg.f_offset_mhz;
    const double w = cfg.capture_width_mhz;
    return -cfg.gain * hh_efficiency(cfg.omega_c_mhz) * ns_to_us(cfg.t_c_ns) * x *
           std::exp(-x * x / (2.0 * w * w));
}

double qsc_bias(double delta_mhz, double tau_sense_ns, const QscConfig& cfg) {
    const double tau_us = ns_to_us(tau_sense_ns);
    const double arg = kTwoPi * cfg.sense_coherence_sigma_mhz * tau_us;
    const double vis = std::exp(-0.5 * arg * arg);
    const double ramp = std::sin(kPi * cfg.t_c_ns / cfg.full_transfer_ns);
    const double transfer = ramp * ramp;
    return transfer * vis * std::sin(kTwoPi * delta_mhz * tau_us);
}

void rabi_cool_cycle(BathState& state, const RabiCoolingConfig& cfg, Rng& rng) {
    state.delta_mhz += rabi_cool_drift(state.delta_mhz, cfg) +
                       std::sqrt(cfg.diffusion_mhz2) * rng.gauss();
}

void qsc_cycle(BathState& state, double tau_sense_ns, const QscConfig& cfg,
               double a_c_mhz, Rng& rng) {
    const double eff = hh_efficiency(cfg.omega_c_mhz);
    const double b = std::clamp(qsc_bias(state.delta_mhz, tau_sense_ns, cfg), -1.0, 1.0);
    const double kick = (rng.u01() < 0.5 * (1.0 + b)) ? 1.0 : -1.0;

    // the drive pulse also drags far-detuned trajectories toward resonance, reusing the
    // broadband locking kernel; without it the warm tails would never reach the narrow
    // sensing capture range
    const double w = constants::kRabiCaptureWidthMHz;
    const double pull = -constants::kRabiCoolGain * eff * ns_to_us(cfg.t_c_ns) *
                        state.delta_mhz *
                        std::exp(-state.delta_mhz * state.delta_mhz / (2.0 * w * w));

    state.delta_mhz += -cfg.gain * eff * a_c_mhz * kick + pull +
                       std::sqrt(cfg.diffusion_mhz2) * rng.gauss();
}

ProtocolResult run_protocol(const RabiCoolingConfig& cfg, int reps, const BathModel& bath,
                            int n_traj, std::uint64_t seed, int threads) {
    cfg.validate();
    bath.validate();
    require(reps >= 1, "protocol.reps must be at least 1");
    require(n_traj >= 1, "protocol.n_traj must be at least 1");

    ProtocolResult out;
    std::vector<double> deltas = warm_ensemble(bath, n_traj, seed);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int cycle = 0; cycle < reps; ++cycle) {
        parallel_traj(n_traj, threads, [&](int i) {
            Rng rng = Rng::stream(seed, StreamKind::RabiCooling,
                                  static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(cycle));
            BathState st{deltas[static_cast<std::size_t>(i)], bath.sigma_static_mhz};
            rabi_cool_cycle(st, cfg, rng);
            deltas[static_cast<std::size_t>(i)] = st.delta_mhz;
        });
        record(out, cycle, nan, deltas);
        out.wall_time_us += ns_to_us(cfg.t_c_ns);
    }
    finalize(out, std::move(deltas));
    return out;
}

ProtocolResult run_protocol(const QscConfig& cfg, int reps, const BathModel& bath,
                            int n_traj, std::uint64_t seed, int threads) {
    cfg.validate();
    bath.validate();
    require(reps >= 1, "protocol.reps must be at least 1");
    require(n_traj >= 1, "protocol.n_traj must be at least 1");

    ProtocolResult out;
    std::vector<double> deltas = warm_ensemble(bath, n_traj, seed);
    const double pulse_ns = cfg.omega_c_mhz > 0.0 ? 500.0 / cfg.omega_c_mhz : 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        for (int c = 0; c < cfg.n_cycles; ++c) {
            const double frac = cfg.n_cycles > 1
                                    ? static_cast<double>(c) /
                                          static_cast<double>(cfg.n_cycles - 1)
                                    : 0.0;
            const double tau_ns = cfg.tau_min_ns + (cfg.tau_max_ns - cfg.tau_min_ns) * frac;
            const int cycle = rep * cfg.n_cycles + c;
            parallel_traj(n_traj, threads, [&](int i) {
                Rng rng = Rng::stream(seed, StreamKind::Qsc,
                                      static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(cycle));
                BathState st{deltas[static_cast<std::size_t>(i)], bath.sigma_static_mhz};
                qsc_cycle(st, tau_ns, cfg, bath.a_c_mhz, rng);
                deltas[static_cast<std::size_t>(i)] = st.delta_mhz;
            });
            record(out, cycle, tau_ns, deltas);
            out.wall_time_us += ns_to_us(tau_ns + cfg.t_c_ns + cfg.reset_ns + pulse_ns);
        }
    }
    finalize(out, std::move(deltas));
    return out;
}

} // namespace qdsim
