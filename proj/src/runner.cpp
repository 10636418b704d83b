#include "qdsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "qdsim/bloch.hpp"
#include "qdsim/csv.hpp"
#include "qdsim/estimators.hpp"
#include "qdsim/fit.hpp"
#include "qdsim/rng.hpp"
#include "qdsim/spectrum.hpp"
#include "qdsim/units.hpp"

namespace qdsim {
namespace {

using Rows = std::vector<std::vector<std::string>>;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    return splitmix64(x);
}

const char* model_label(FitModel m) {
    switch (m) {
        case FitModel::Exponential: return "exponential";
        case FitModel::Gaussian: return "gaussian";
        case FitModel::Stretched: return "stretched";
        case FitModel::Recovery: return "recovery";
        case FitModel::ExpFringe: return "exp_fringe";
        case FitModel::GaussFringe: return "gauss_fringe";
        case FitModel::Sinusoid: return "sinusoid";
        case FitModel::GaussPeak: return "gauss_peak";
    }
    return "unknown";
}

// accumulates fit.csv rows (model, quantity, value, error) and the overall
// convergence verdict that decides exit code 3
struct FitReport {
    Rows rows;
    bool all_converged = true;
    std::ostringstream summary;

    void add_scalar(const std::string& model, const std::string& quantity, double value,
                    double error = 0.0) {
        rows.push_back({model, quantity, format_double(value), format_double(error)});
    }

    void add_fit(const FitResult& fr, const std::string& prefix = "") {
        const std::string label = model_label(fr.model);
        for (std::size_t i = 0; i < fr.params.size(); ++i)
            add_scalar(label, prefix + fr.names[i], fr.params[i], fr.errors[i]);
        add_scalar(label, prefix + "residual_norm", fr.residual_norm);
        add_scalar(label, prefix + "converged", fr.converged ? 1.0 : 0.0);
        all_converged = all_converged && fr.converged;
    }

    void note(const std::string& name, double value) {
        summary << name << " = " << format_double(value) << "\n";
    }
};

class Writer {
public:
    explicit Writer(const RunConfig& cfg) : dir_(cfg.out_dir) {
        std::filesystem::create_directories(dir_);
    }

    std::string emit(const std::string& name, const std::vector<std::string>& header,
                     const Rows& rows) {
        const std::string path = (std::filesystem::path(dir_) / name).string();
        write_csv(path, header, rows);
        files.push_back(path);
        return path;
    }

    std::vector<std::string> files;

private:
    std::string dir_;
};

SequenceParams seq_params(const RunConfig& cfg) {
    SequenceParams p;
    p.qubit = cfg.qubit;
    p.bath = cfg.bath;
    p.readout = cfg.readout;
    p.shots = cfg.shots;
    p.seed = cfg.seed;
    p.threads = cfg.threads;
    return p;
}

Rows envelope_rows(const Envelope& env) {
    Rows rows;
    rows.reserve(env.sweep.size());
    for (std::size_t i = 0; i < env.sweep.size(); ++i)
        rows.push_back({format_double(env.sweep[i]), format_double(env.top[i]),
                        format_double(env.bottom[i]), format_double(env.visibility[i]),
                        std::to_string(env.shots)});
    return rows;
}

const std::vector<std::string> kEnvelopeHeader = {"sweep", "top", "bottom", "visibility",
                                                  "shots"};

// shared Ramsey post-processing: envelope fit (Gaussian, or a Gaussian fringe when a
// deterministic oscillation is present) plus the spectral width estimate
void analyze_ramsey(const Envelope& env, double fringe_mhz, double t2_guess_ns,
                    FitReport& report) {
    FitResult fr;
    if (fringe_mhz != 0.0) {
        const double a0 = *std::max_element(env.visibility.begin(), env.visibility.end());
        fr = fit_decay(env.sweep, env.visibility, FitModel::GaussFringe,
                       {a0, t2_guess_ns, std::fabs(fringe_mhz), 0.0, 0.0});
    } else {
        fr = fit_decay(env.sweep, env.visibility, FitModel::Gaussian);
    }
    report.add_fit(fr);
    report.note("t2_star_ns", fr.param("t"));

    if (env.sweep.size() >= 8) {
        const SpectrumPeak peak = fft_sigma(env.sweep, env.visibility);
        report.add_scalar("fft", "sigma_oh_mhz", peak.sigma_oh_mhz);
        report.add_scalar("fft", "f_center_mhz", peak.f_center_mhz);
        report.all_converged = report.all_converged && peak.peak_fit.converged;
        report.note("sigma_oh_mhz", peak.sigma_oh_mhz);
    }
}

double t2_guess_ns(const BathModel& bath, const std::vector<double>& sweep) {
    if (bath.sigma_static_mhz > 0.0)
        return us_to_ns(t2star_from_sigma_us(bath.sigma_static_mhz));
    return 0.5 * (sweep.front() + sweep.back());
}

void run_rabi_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const std::vector<double> t = cfg.t_grid.values();

    if (cfg.has_delta_grid) {
        // locked-ESR map: optionally re-cool the bath onto each probe point, then run
        // the drive-time sweep there
        const std::vector<double> deltas = cfg.delta_grid.values();
        Rows rows;
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            SequenceParams p = seq_params(cfg);
            p.seed = mix_seed(cfg.seed, j);
            if (cfg.precool) {
                RabiCoolingConfig cool = cfg.rabi_cooling;
                // the cooling drive sits at the probe frequency, so locking pulls the
                // total detuning delta_probe + delta_oh toward zero
                cool.f_offset_mhz = -deltas[j];
                const ProtocolResult res = run_protocol(cool, cfg.reps, cfg.bath,
                                                        cfg.n_traj, p.seed, cfg.threads);
                p.delta_pool = res.final_deltas;
            }
            const Envelope env = run_rabi(p, cfg.omega_mhz, deltas[j], t);
            for (std::size_t i = 0; i < t.size(); ++i)
                rows.push_back({format_double(t[i]), format_double(deltas[j]),
                                format_double(env.top[i]), std::to_string(env.shots)});
        }
        w.emit("map.csv", {"t", "delta", "p", "shots"}, rows);
        return;
    }

    const Envelope env = run_rabi(seq_params(cfg), cfg.omega_mhz, cfg.delta_mhz, t);
    w.emit("envelope.csv", kEnvelopeHeader, envelope_rows(env));

    double mean = 0.0;
    for (double v : env.top) mean += v;
    mean /= static_cast<double>(env.top.size());
    const double amp = *std::max_element(env.top.begin(), env.top.end()) -
                       *std::min_element(env.top.begin(), env.top.end());
    const double span = env.sweep.back() - env.sweep.front();
    const FitResult fr = fit_decay(env.sweep, env.top, FitModel::ExpFringe,
                                   {-0.5 * amp, 0.5 * span, cfg.omega_mhz, 0.0, mean});
    report.add_fit(fr);
    report.note("t2_rabi_ns", fr.param("t"));
    if (fr.converged && fr.param("t") > 0.0 && fr.param("f") > 0.0) {
        const RabiMetrics m = rabi_metrics(fr.param("t"), fr.param("f"));
        report.add_scalar("metrics", "q", m.q);
        report.add_scalar("metrics", "f_pi", m.f_pi);
        report.note("q", m.q);
        report.note("f_pi", m.f_pi);
    }
}

void run_ramsey_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const Envelope env = run_ramsey(seq_params(cfg), cfg.delta_mhz, cfg.serrodyne_mhz,
                                    cfg.tau_grid.values());
    w.emit("envelope.csv", kEnvelopeHeader, envelope_rows(env));
    const double fringe =
        cfg.serrodyne_mhz != 0.0 ? cfg.serrodyne_mhz : cfg.delta_mhz;
    analyze_ramsey(env, fringe, t2_guess_ns(cfg.bath, env.sweep), report);
}

void run_detuned_ramsey_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const std::vector<double> deltas = cfg.delta_grid.values();
    const DetunedRamseyMap map =
        run_detuned_ramsey(seq_params(cfg), deltas, cfg.tau_grid.values());

    Rows rows;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const Envelope& env = map.envelopes[d];
        for (std::size_t i = 0; i < env.sweep.size(); ++i)
            rows.push_back({format_double(deltas[d]), format_double(env.sweep[i]),
                            format_double(env.top[i]), format_double(env.bottom[i]),
                            format_double(env.visibility[i]), std::to_string(env.shots)});
    }
    w.emit("detuned.csv", {"delta", "sweep", "top", "bottom", "visibility", "shots"},
           rows);

    if (cfg.has_fit_delta) {
        std::size_t best = 0;
        for (std::size_t d = 1; d < deltas.size(); ++d)
            if (std::fabs(deltas[d] - cfg.fit_delta_mhz) <
                std::fabs(deltas[best] - cfg.fit_delta_mhz))
                best = d;
        const Envelope& env = map.envelopes[best];
        report.add_scalar("linecut", "delta_mhz", deltas[best]);
        const double guess = t2_guess_ns(cfg.bath, env.sweep);
        const FitResult fr =
            deltas[best] != 0.0
                ? fit_decay(env.sweep, env.visibility, FitModel::GaussFringe,
                            {1.0, guess, std::fabs(deltas[best]), 0.0, 0.0})
                : fit_decay(env.sweep, env.visibility, FitModel::Gaussian);
        report.add_fit(fr, "linecut_");
        report.note("linecut_t2_star_ns", fr.param("t"));
    }
}

void run_cpmg_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    Rows rows;
    std::vector<double> n_values, t2_values;
    for (std::size_t k = 0; k < cfg.n_pi.size(); ++k) {
        const int n_pi = cfg.n_pi[k];
        std::vector<double> grid;
        if (cfg.has_t_grid) {
            grid = cfg.t_grid.values();
        } else {
            // span the expected decay: log grid around the echo reference scaled by the
            // reported power law
            const double ref = 2.93 * std::pow(static_cast<double>(n_pi), 0.67);
            const int points = 12;
            for (int i = 0; i < points; ++i)
                grid.push_back(0.3 * ref *
                               std::pow(10.0, static_cast<double>(i) /
                                                  static_cast<double>(points - 1)));
        }
        SequenceParams p = seq_params(cfg);
        p.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(n_pi));
        const Envelope env = run_cpmg(p, n_pi, grid, cfg.cpmg_convention);
        for (std::size_t i = 0; i < env.sweep.size(); ++i)
            rows.push_back({std::to_string(n_pi), format_double(env.sweep[i]),
                            format_double(env.top[i]), format_double(env.bottom[i]),
                            format_double(env.visibility[i]), std::to_string(env.shots)});

        const FitResult fr = fit_decay(env.sweep, env.visibility, FitModel::Stretched);
        report.add_fit(fr, "npi" + std::to_string(n_pi) + "_");
        report.note("t2_npi" + std::to_string(n_pi) + "_us", fr.param("t"));
        if (fr.converged && fr.param("t") > 0.0) {
            n_values.push_back(static_cast<double>(n_pi));
            t2_values.push_back(fr.param("t"));
        }
    }
    w.emit("cpmg.csv", {"n_pi", "sweep", "top", "bottom", "visibility", "shots"}, rows);

    if (n_values.size() >= 2) {
        const PowerLawFit pl = fit_powerlaw(n_values, t2_values);
        report.add_scalar("powerlaw", "gamma", pl.gamma, pl.gamma_err);
        report.add_scalar("powerlaw", "amplitude_us", pl.amplitude);
        report.note("gamma", pl.gamma);
    }
}

void run_t1_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const Envelope env = run_t1_pumpprobe(seq_params(cfg), cfg.tau_grid.values());
    w.emit("envelope.csv", kEnvelopeHeader, envelope_rows(env));
    const FitResult fr = fit_decay(env.sweep, env.top, FitModel::Recovery);
    report.add_fit(fr);
    report.note("t1_us", fr.param("t"));
}

void run_phase_sweep_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const Envelope env = run_phase_sweep(seq_params(cfg), cfg.phi_grid.values());
    w.emit("envelope.csv", kEnvelopeHeader, envelope_rows(env));
    double mean = 0.0;
    for (double v : env.top) mean += v;
    mean /= static_cast<double>(env.top.size());
    const double amp = 0.5 * (*std::max_element(env.top.begin(), env.top.end()) -
                              *std::min_element(env.top.begin(), env.top.end()));
    const FitResult fr = fit_decay(env.sweep, env.top, FitModel::Sinusoid,
                                   {amp, kTwoPi, 0.0, mean});
    report.add_fit(fr);
    report.note("period_rad", fr.param("period"));
}

Rows trace_rows(const ProtocolResult& res) {
    Rows rows;
    rows.reserve(res.trace.size());
    for (const auto& tp : res.trace)
        rows.push_back({std::to_string(tp.cycle), format_double(tp.tau_sense_ns),
                        format_double(tp.sigma_now_mhz), format_double(tp.mean_delta_mhz)});
    return rows;
}

void probe_after_cooling(const RunConfig& cfg, const ProtocolResult& res, Writer& w,
                         FitReport& report) {
    if (!cfg.probe.enabled) return;
    SequenceParams p = seq_params(cfg);
    p.delta_pool = res.final_deltas;
    const Envelope env = run_ramsey(p, cfg.probe.delta_mhz, cfg.probe.serrodyne_mhz,
                                    cfg.probe.tau.values());
    w.emit("envelope.csv", kEnvelopeHeader, envelope_rows(env));
    const double fringe =
        cfg.probe.serrodyne_mhz != 0.0 ? cfg.probe.serrodyne_mhz : cfg.probe.delta_mhz;
    const double guess =
        res.final_sigma_mhz > 0.0 ? us_to_ns(t2star_from_sigma_us(res.final_sigma_mhz))
                                  : 0.5 * (env.sweep.front() + env.sweep.back());
    analyze_ramsey(env, fringe, guess, report);
}

void run_cooling_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    ProtocolResult res;
    if (cfg.experiment == ExperimentKind::RabiCooling)
        res = run_protocol(cfg.rabi_cooling, cfg.reps, cfg.bath, cfg.n_traj, cfg.seed,
                           cfg.threads);
    else
        res = run_protocol(cfg.qsc, cfg.reps, cfg.bath, cfg.n_traj, cfg.seed,
                           cfg.threads);
    w.emit("trace.csv", {"cycle", "tau_sense", "sigma_now", "mean_delta"},
           trace_rows(res));
    report.add_scalar("protocol", "final_sigma_mhz", res.final_sigma_mhz);
    report.add_scalar("protocol", "final_mean_mhz", res.final_mean_mhz);
    report.add_scalar("protocol", "wall_time_us", res.wall_time_us);
    report.note("final_sigma_mhz", res.final_sigma_mhz);
    probe_after_cooling(cfg, res, w, report);
}

void run_hh_scan_experiment(const RunConfig& cfg, Writer& w, FitReport&) {
    const std::vector<TransferPoint> curve =
        hh_scan(cfg.cspin, cfg.omega_grid.values(), cfg.t_drive_ns);
    Rows rows;
    rows.reserve(curve.size());
    for (const auto& pt : curve)
        rows.push_back({format_double(pt.omega_mhz), format_double(pt.delta_iz)});
    w.emit("transfer.csv", {"omega", "delta_iz"}, rows);
}

void run_chevron_experiment(const RunConfig& cfg, Writer& w, FitReport& report) {
    const std::vector<double> t = cfg.t_grid.values();
    const std::vector<double> deltas = cfg.delta_grid.values();

    Rows model;
    for (double ti : t)
        for (double dj : deltas)
            model.push_back({format_double(ti), format_double(dj),
                             format_double(averaged_chevron(ti, dj, cfg.omega_mhz,
                                                            cfg.bath.sigma_static_mhz,
                                                            cfg.delta_ac_mhz)),
                             "0"});
    w.emit("model.csv", {"t", "delta", "p", "shots"}, model);

    const ChevronMap mc =
        run_chevron_mc(seq_params(cfg), cfg.omega_mhz, t, deltas, cfg.delta_ac_mhz);
    Rows rows;
    double gap = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            const double p_mc = mc.p[i * deltas.size() + j];
            rows.push_back({format_double(t[i]), format_double(deltas[j]),
                            format_double(p_mc), std::to_string(mc.shots)});
            const double p_model =
                averaged_chevron(t[i], deltas[j], cfg.omega_mhz,
                                 cfg.bath.sigma_static_mhz, cfg.delta_ac_mhz);
            gap = std::max(gap, std::fabs(p_mc - p_model));
        }
    }
    w.emit("map.csv", {"t", "delta", "p", "shots"}, rows);
    report.add_scalar("chevron", "max_abs_model_mc_gap", gap);
    report.note("max_abs_model_mc_gap", gap);
}

} // namespace

RunOutcome run_config(const RunConfig& cfg) {
    Writer w(cfg);
    FitReport report;

    switch (cfg.experiment) {
        case ExperimentKind::Rabi: run_rabi_experiment(cfg, w, report); break;
        case ExperimentKind::Ramsey: run_ramsey_experiment(cfg, w, report); break;
        case ExperimentKind::DetunedRamsey:
            run_detuned_ramsey_experiment(cfg, w, report);
            break;
        case ExperimentKind::Cpmg: run_cpmg_experiment(cfg, w, report); break;
        case ExperimentKind::T1: run_t1_experiment(cfg, w, report); break;
        case ExperimentKind::PhaseSweep: run_phase_sweep_experiment(cfg, w, report); break;
        case ExperimentKind::RabiCooling:
        case ExperimentKind::Qsc: run_cooling_experiment(cfg, w, report); break;
        case ExperimentKind::HhScan: run_hh_scan_experiment(cfg, w, report); break;
        case ExperimentKind::Chevron: run_chevron_experiment(cfg, w, report); break;
    }

    if (!report.rows.empty())
        w.emit("fit.csv", {"model", "quantity", "value", "error"}, report.rows);

    RunOutcome out;
    out.files = w.files;
    out.summary = report.summary.str();
    out.exit_code = report.all_converged ? 0 : 3;
    return out;
}

} // namespace qdsim
