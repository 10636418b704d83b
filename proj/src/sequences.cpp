#include "qdsim/sequences.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qdsim/bloch.hpp"
#include "qdsim/estimators.hpp"
#include "qdsim/rng.hpp"
#include "qdsim/units.hpp"

namespace qdsim {
namespace {

constexpr long kChunkShots = 1024;

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

// Sum per-shot contributions into a width-sized accumulator. Shots are processed in
// fixed chunks and chunk totals are reduced in chunk order, so the floating-point sum
// is identical for any thread count.
template <class PerShot>
std::vector<double> accumulate_shots(long shots, int threads, std::size_t width,
                                     const PerShot& per_shot) {
    const long n_chunks = (shots + kChunkShots - 1) / kChunkShots;
    std::vector<std::vector<double>> chunk_sums(static_cast<std::size_t>(n_chunks));
    std::atomic<long> next_chunk{0};

    auto work = [&]() {
        for (;;) {
            const long c = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) break;
            auto& acc = chunk_sums[static_cast<std::size_t>(c)];
            acc.assign(width, 0.0);
            const long begin = c * kChunkShots;
            const long end = std::min(shots, begin + kChunkShots);
            for (long shot = begin; shot < end; ++shot) per_shot(shot, acc.data());
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1 || n_chunks <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<double> total(width, 0.0);
    for (const auto& acc : chunk_sums) {
        if (acc.empty()) continue;
        for (std::size_t j = 0; j < width; ++j) total[j] += acc[j];
    }
    return total;
}

void check_common(const SequenceParams& p) {
    p.qubit.validate();
    p.bath.validate();
    if (p.shots < 1) throw std::invalid_argument("shots must be at least 1");
}

double prep_z(const QubitParams& q) { return 2.0 * q.osp_fidelity - 1.0; }

// per-shot static detuning: cooled-ensemble pool when supplied, Gaussian otherwise
double draw_static(const SequenceParams& p, Rng& rng) {
    if (!p.delta_pool.empty()) {
        auto idx = static_cast<std::size_t>(rng.u01() *
                                            static_cast<double>(p.delta_pool.size()));
        if (idx >= p.delta_pool.size()) idx = p.delta_pool.size() - 1;
        return p.delta_pool[idx];
    }
    return sample_detuning(p.bath.sigma_static_mhz, rng);
}

Envelope make_single(const std::vector<double>& sweep, const std::vector<double>& sums,
                     long shots) {
    Envelope env;
    env.sweep = sweep;
    env.shots = shots;
    const std::size_t n = sweep.size();
    env.top.resize(n);
    for (std::size_t i = 0; i < n; ++i) env.top[i] = sums[i] / static_cast<double>(shots);
    env.bottom.assign(n, std::numeric_limits<double>::quiet_NaN());
    env.visibility.assign(n, std::numeric_limits<double>::quiet_NaN());
    return env;
}

Envelope make_two_variant(const std::vector<double>& sweep, const std::vector<double>& sums,
                          long shots) {
    Envelope env;
    env.sweep = sweep;
    env.shots = shots;
    const std::size_t n = sweep.size();
    env.top.resize(n);
    env.bottom.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        env.top[i] = sums[2 * i] / static_cast<double>(shots);
        env.bottom[i] = sums[2 * i + 1] / static_cast<double>(shots);
    }
    env.visibility = visibility(env.top, env.bottom);
    return env;
}

struct TwoVariant {
    double p_top = 0.0;
    double p_bot = 0.0;
    double u = 0.0; // shared readout uniform, drawn after the physics
};

// One Ramsey shot: ideal pi/2 about x, free phase from static detuning plus the exact
// OU integral, transverse T1 damping, final pi/2 about the axis at phi_f. The final
// z-projection is -z0 cos(phase - phi_f), so shifting phi_f by pi exchanges the two
// variants exactly; both variants share one readout uniform so the exchange holds
// shot by shot.
TwoVariant ramsey_shot(const SequenceParams& p, StreamKind kind, std::uint64_t point,
                       long shot, double delta_mhz, double serrodyne_mhz, double tau_ns,
                       double ft) {
    Rng rng = Rng::stream(p.seed, kind, point, static_cast<std::uint64_t>(shot));
    const double tau_us = ns_to_us(tau_ns);
    const double ds = draw_static(p, rng);

    double phase = kTwoPi * (delta_mhz + ds) * tau_us;
    if (p.bath.sigma_dyn_mhz > 0.0) {
        const double d0 = p.bath.sigma_dyn_mhz * rng.gauss();
        const OuDelay od = ou_delay(d0, p.bath, tau_us, rng);
        phase += kTwoPi * od.integral_mhz_us;
    }

    const double z0 = prep_z(p.qubit);
    const double x = z0 * std::sin(phase) * ft;
    const double y = -z0 * std::cos(phase) * ft;
    const double phi_f = phase_rad(serrodyne_mhz, tau_ns) + p.final_phase_offset_rad;
    const double z_top = std::cos(phi_f) * y - std::sin(phi_f) * x;

    TwoVariant out;
    out.p_top = clamp01(p.readout.detect(0.5 * (1.0 - z_top)));
    out.p_bot = clamp01(p.readout.detect(0.5 * (1.0 + z_top)));
    out.u = rng.u01();
    return out;
}

} // namespace

Envelope run_rabi(const SequenceParams& p, double omega_mhz, double delta_mhz,
                  const std::vector<double>& t_grid_ns) {
    check_common(p);
    if (omega_mhz <= 0.0) throw std::invalid_argument("rabi.omega must be positive");
    const std::size_t n = t_grid_ns.size();
    const double z0 = prep_z(p.qubit);
    const double kappa_mhz = p.qubit.kappa_ratio * omega_mhz;

    const auto sums = accumulate_shots(
        p.shots, p.threads, n, [&](long shot, double* acc) {
            for (std::size_t i = 0; i < n; ++i) {
                Rng rng = Rng::stream(p.seed, StreamKind::Rabi, i,
                                      static_cast<std::uint64_t>(shot));
                const double ds = draw_static(p, rng);
                DriveSegment seg;
                seg.rabi_mhz = omega_mhz;
                seg.detuning_mhz = delta_mhz + ds;
                seg.duration_ns = t_grid_ns[i];
                seg.flip_rate_mhz = kappa_mhz;
                BlochVector s{0.0, 0.0, z0};
                s = propagate(s, seg, p.qubit.t1_us);
                const double pd = clamp01(p.readout.detect(0.5 * (1.0 - s.z)));
                if (rng.u01() < pd) acc[i] += 1.0;
            }
        });
    return make_single(t_grid_ns, sums, p.shots);
}

ChevronMap run_chevron_mc(const SequenceParams& p, double omega_mhz,
                          const std::vector<double>& t_grid_ns,
                          const std::vector<double>& delta_grid_mhz, double delta_ac_mhz) {
    check_common(p);
    if (omega_mhz <= 0.0) throw std::invalid_argument("chevron.omega must be positive");
    const std::size_t nt = t_grid_ns.size();
    const std::size_t nd = delta_grid_mhz.size();

    // one detuning draw per shot, shared across the grid; per-cell means are unbiased
    // and probabilities are averaged directly so the map is projection-noise free
    const auto sums = accumulate_shots(
        p.shots, p.threads, nt * nd, [&](long shot, double* acc) {
            Rng rng = Rng::stream(p.seed, StreamKind::Chevron, 0,
                                  static_cast<std::uint64_t>(shot));
            const double ds = draw_static(p, rng);
            for (std::size_t i = 0; i < nt; ++i) {
                for (std::size_t j = 0; j < nd; ++j) {
                    acc[i * nd + j] += rabi_lineshape(
                        t_grid_ns[i], delta_grid_mhz[j] - delta_ac_mhz + ds, omega_mhz);
                }
            }
        });

    ChevronMap map;
    map.t_ns = t_grid_ns;
    map.delta_mhz = delta_grid_mhz;
    map.shots = p.shots;
    map.p.resize(nt * nd);
    for (std::size_t k = 0; k < map.p.size(); ++k)
        map.p[k] = sums[k] / static_cast<double>(p.shots);
    return map;
}

Envelope run_ramsey(const SequenceParams& p, double delta_mhz, double serrodyne_mhz,
                    const std::vector<double>& tau_grid_ns) {
    check_common(p);
    const std::size_t n = tau_grid_ns.size();
    std::vector<double> ft(n);
    for (std::size_t i = 0; i < n; ++i)
        ft[i] = std::exp(-ns_to_us(tau_grid_ns[i]) / (2.0 * p.qubit.t1_us));

    const auto sums = accumulate_shots(
        p.shots, p.threads, 2 * n, [&](long shot, double* acc) {
            for (std::size_t i = 0; i < n; ++i) {
                const TwoVariant tv = ramsey_shot(p, StreamKind::Ramsey, i, shot,
                                                  delta_mhz, serrodyne_mhz,
                                                  tau_grid_ns[i], ft[i]);
                if (tv.u < tv.p_top) acc[2 * i] += 1.0;
                if (tv.u < tv.p_bot) acc[2 * i + 1] += 1.0;
            }
        });
    return make_two_variant(tau_grid_ns, sums, p.shots);
}

DetunedRamseyMap run_detuned_ramsey(const SequenceParams& p,
                                    const std::vector<double>& delta_grid_mhz,
                                    const std::vector<double>& tau_grid_ns) {
    check_common(p);
    const std::size_t nd = delta_grid_mhz.size();
    const std::size_t nt = tau_grid_ns.size();
    std::vector<double> ft(nt);
    for (std::size_t i = 0; i < nt; ++i)
        ft[i] = std::exp(-ns_to_us(tau_grid_ns[i]) / (2.0 * p.qubit.t1_us));

    const auto sums = accumulate_shots(
        p.shots, p.threads, 2 * nd * nt, [&](long shot, double* acc) {
            for (std::size_t d = 0; d < nd; ++d) {
                for (std::size_t i = 0; i < nt; ++i) {
                    const std::uint64_t point = d * nt + i;
                    const TwoVariant tv = ramsey_shot(p, StreamKind::DetunedRamsey, point,
                                                      shot, delta_grid_mhz[d], 0.0,
                                                      tau_grid_ns[i], ft[i]);
                    if (tv.u < tv.p_top) acc[2 * point] += 1.0;
                    if (tv.u < tv.p_bot) acc[2 * point + 1] += 1.0;
                }
            }
        });

    DetunedRamseyMap map;
    map.delta_mhz = delta_grid_mhz;
    map.envelopes.reserve(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        const std::vector<double> slice(sums.begin() + static_cast<std::ptrdiff_t>(2 * d * nt),
                                        sums.begin() + static_cast<std::ptrdiff_t>(2 * (d + 1) * nt));
        map.envelopes.push_back(make_two_variant(tau_grid_ns, slice, p.shots));
    }
    return map;
}

Envelope run_cpmg(const SequenceParams& p, int n_pi, const std::vector<double>& t_grid_us,
                  CpmgConvention convention) {
    check_common(p);
    if (n_pi < 1) throw std::invalid_argument("cpmg.n_pi must be at least 1");
    const std::size_t n = t_grid_us.size();
    const double m = convention == CpmgConvention::TotalIsNTau ? 1.0 : 2.0;
    const double z0 = prep_z(p.qubit);

    const auto sums = accumulate_shots(
        p.shots, p.threads, 2 * n, [&](long shot, double* acc) {
            for (std::size_t i = 0; i < n; ++i) {
                Rng rng = Rng::stream(p.seed, StreamKind::Cpmg, i,
                                      static_cast<std::uint64_t>(shot));
                const double total_us = t_grid_us[i] / m;
                const double spacing_us = total_us / static_cast<double>(n_pi);
                const double ds = draw_static(p, rng);
                const bool dyn = p.bath.sigma_dyn_mhz > 0.0;
                double d = dyn ? p.bath.sigma_dyn_mhz * rng.gauss() : 0.0;

                // track the transverse components only; z stays zero after the first
                // pi/2 and pi_y maps (x, y) -> (-x, y)
                double x = 0.0, y = -z0;
                for (int k = 0; k <= n_pi; ++k) {
                    const double seg_us =
                        (k == 0 || k == n_pi) ? 0.5 * spacing_us : spacing_us;
                    double integral = d * seg_us;
                    if (dyn) {
                        const OuDelay od = ou_delay(d, p.bath, seg_us, rng);
                        integral = od.integral_mhz_us;
                        d = od.delta_end_mhz;
                    }
                    const double phi = kTwoPi * (ds * seg_us + integral);
                    const double c = std::cos(phi), s = std::sin(phi);
                    const double xr = c * x - s * y;
                    y = s * x + c * y;
                    x = xr;
                    if (k < n_pi) x = -x;
                }
                const double ft = std::exp(-total_us / (2.0 * p.qubit.t1_us));
                x *= ft;
                y *= ft;

                const double phi_f = p.final_phase_offset_rad;
                const double z_top = std::cos(phi_f) * y - std::sin(phi_f) * x;
                const double p_top = clamp01(p.readout.detect(0.5 * (1.0 - z_top)));
                const double p_bot = clamp01(p.readout.detect(0.5 * (1.0 + z_top)));
                const double u = rng.u01();
                if (u < p_top) acc[2 * i] += 1.0;
                if (u < p_bot) acc[2 * i + 1] += 1.0;
            }
        });
    return make_two_variant(t_grid_us, sums, p.shots);
}

Envelope run_t1_pumpprobe(const SequenceParams& p, const std::vector<double>& tau_grid_us) {
    check_common(p);
    const std::size_t n = tau_grid_us.size();
    const double z0 = prep_z(p.qubit);

    const auto sums = accumulate_shots(
        p.shots, p.threads, n, [&](long shot, double* acc) {
            for (std::size_t i = 0; i < n; ++i) {
                Rng rng = Rng::stream(p.seed, StreamKind::T1, i,
                                      static_cast<std::uint64_t>(shot));
                const double z = z0 * std::exp(-tau_grid_us[i] / p.qubit.t1_us);
                const double pd = clamp01(p.readout.detect(0.5 * (1.0 - z)));
                if (rng.u01() < pd) acc[i] += 1.0;
            }
        });
    return make_single(tau_grid_us, sums, p.shots);
}

Envelope run_phase_sweep(const SequenceParams& p, const std::vector<double>& phi_grid_rad) {
    check_common(p);
    const std::size_t n = phi_grid_rad.size();
    const double z0 = prep_z(p.qubit);

    const auto sums = accumulate_shots(
        p.shots, p.threads, n, [&](long shot, double* acc) {
            for (std::size_t i = 0; i < n; ++i) {
                Rng rng = Rng::stream(p.seed, StreamKind::PhaseSweep, i,
                                      static_cast<std::uint64_t>(shot));
                const double z = -z0 * std::cos(phi_grid_rad[i] + p.final_phase_offset_rad);
                const double pd = clamp01(p.readout.detect(0.5 * (1.0 - z)));
                if (rng.u01() < pd) acc[i] += 1.0;
            }
        });
    return make_single(phi_grid_rad, sums, p.shots);
}

} // namespace qdsim
