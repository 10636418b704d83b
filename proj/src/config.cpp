#include "qdsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qdsim/toml.hpp"
#include "qdsim/units.hpp"

namespace qdsim {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// tracks which keys the active experiment consumed so leftovers can be rejected
class Reader {
public:
    explicit Reader(const TomlTable& table) : table_(table) {}

    bool contains(const std::string& key) const { return table_.contains(key); }

    double number(const std::string& key, double fallback) {
        used_.insert(key);
        return table_.number(key, fallback);
    }
    double number_required(const std::string& key) {
        used_.insert(key);
        return table_.number(key);
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        used_.insert(key);
        return table_.integer(key, fallback);
    }
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        used_.insert(key);
        return table_.unsigned_integer(key, fallback);
    }
    std::string string(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        return table_.string(key, fallback);
    }
    std::string string_required(const std::string& key) {
        used_.insert(key);
        return table_.string(key);
    }
    bool boolean(const std::string& key, bool fallback) {
        used_.insert(key);
        return table_.boolean(key, fallback);
    }
    std::vector<double> array_required(const std::string& key) {
        used_.insert(key);
        return table_.array(key);
    }
    std::vector<double> array(const std::string& key, const std::vector<double>& fb) {
        used_.insert(key);
        return table_.array(key, fb);
    }
    const TomlValue* find(const std::string& key) {
        used_.insert(key);
        return table_.find(key);
    }

    void finish() const {
        std::string unknown;
        for (const auto& key : table_.keys()) {
            if (used_.count(key)) continue;
            if (!unknown.empty()) unknown += ", ";
            unknown += key;
        }
        if (!unknown.empty()) fail("unknown config key: " + unknown);
    }

private:
    const TomlTable& table_;
    std::set<std::string> used_;
};

// a grid is given by <prefix>_min/_max/_points, all three or none
bool read_grid(Reader& r, const std::string& prefix, GridSpec& grid,
               bool require_positive_min = false) {
    const bool has_min = r.contains(prefix + "_min");
    const bool has_max = r.contains(prefix + "_max");
    const bool has_points = r.contains(prefix + "_points");
    if (!has_min && !has_max && !has_points) return false;
    if (!(has_min && has_max && has_points))
        fail(prefix + " grid needs " + prefix + "_min, " + prefix + "_max and " + prefix +
             "_points");
    grid.min = r.number_required(prefix + "_min");
    grid.max = r.number_required(prefix + "_max");
    const std::int64_t points = r.integer(prefix + "_points", 0);
    if (points < 1) fail(prefix + "_points must be at least 1");
    if (points > 1000000) fail(prefix + "_points must be at most 1000000");
    grid.points = static_cast<int>(points);
    if (grid.max < grid.min) fail(prefix + "_max must be at least " + prefix + "_min");
    if (require_positive_min && !(grid.min > 0.0)) fail(prefix + "_min must be positive");
    return true;
}

void require_grid(Reader& r, const std::string& prefix, GridSpec& grid,
                  bool require_positive_min = false) {
    if (!read_grid(r, prefix, grid, require_positive_min))
        fail("experiment requires the " + prefix + " grid (" + prefix + "_min, " + prefix +
             "_max, " + prefix + "_points)");
}

std::vector<int> read_n_pi(Reader& r) {
    const TomlValue* v = r.find("sequence.n_pi");
    if (!v) fail("experiment requires sequence.n_pi");
    std::vector<double> raw;
    if (v->kind == TomlValue::Kind::Array)
        raw = v->array;
    else if (v->kind == TomlValue::Kind::Number)
        raw.push_back(v->number);
    else
        fail("sequence.n_pi must be an integer or an array of integers");
    std::vector<int> out;
    for (double x : raw) {
        if (!(x >= 1.0) || x != std::floor(x) || x > 10000.0)
            fail("sequence.n_pi entries must be integers in [1, 10000]");
        out.push_back(static_cast<int>(x));
    }
    if (out.empty()) fail("sequence.n_pi must not be empty");
    return out;
}

void read_common(Reader& r, RunConfig& cfg) {
    cfg.qubit.f_zeeman_mhz = r.number("qubit.f_zeeman", cfg.qubit.f_zeeman_mhz);
    cfg.qubit.g_factor = r.number("qubit.g_factor", cfg.qubit.g_factor);
    cfg.qubit.t1_us = r.number("qubit.t1", cfg.qubit.t1_us);
    cfg.qubit.osp_time_ns = r.number("qubit.osp_time", cfg.qubit.osp_time_ns);
    cfg.qubit.osp_fidelity = r.number("qubit.osp_fidelity", cfg.qubit.osp_fidelity);
    cfg.qubit.kappa_ratio = r.number("qubit.kappa_ratio", cfg.qubit.kappa_ratio);
    cfg.qubit.validate();

    cfg.bath.sigma_static_mhz = r.number("bath.sigma_static", cfg.bath.sigma_static_mhz);
    cfg.bath.sigma_dyn_mhz = r.number("bath.sigma_dyn", cfg.bath.sigma_dyn_mhz);
    cfg.bath.tau_corr_us = r.number("bath.tau_corr", cfg.bath.tau_corr_us);
    cfg.bath.relax_time_us = r.number("bath.relax_time", cfg.bath.relax_time_us);
    cfg.bath.sigma_warm_mhz = r.number("bath.sigma_warm", cfg.bath.sigma_warm_mhz);
    cfg.bath.a_c_mhz = r.number("bath.a_c", cfg.bath.a_c_mhz);
    cfg.bath.validate();

    cfg.readout.contrast = r.number("readout.contrast", cfg.readout.contrast);
    cfg.readout.dark_floor = r.number("readout.dark_floor", cfg.readout.dark_floor);
    if (cfg.readout.contrast < 0.0) fail("readout.contrast must be non-negative");
    if (cfg.readout.dark_floor < 0.0) fail("readout.dark_floor must be non-negative");
    if (cfg.readout.contrast + cfg.readout.dark_floor > 1.0 + 1e-12)
        fail("readout.contrast plus readout.dark_floor must not exceed 1");

    const std::int64_t shots = r.integer("run.shots", cfg.shots);
    if (shots < 1) fail("run.shots must be at least 1");
    if (shots > 100000000) fail("run.shots must be at most 100000000");
    cfg.shots = shots;
    cfg.seed = r.unsigned_integer("run.seed", cfg.seed);
    const std::int64_t threads = r.integer("run.threads", cfg.threads);
    if (threads < 1 || threads > 256) fail("run.threads must be in [1, 256]");
    cfg.threads = static_cast<int>(threads);
    cfg.out_dir = r.string("run.out", cfg.out_dir);
}

void read_probe(Reader& r, RunConfig& cfg) {
    cfg.probe.enabled = read_grid(r, "probe.tau", cfg.probe.tau);
    if (!cfg.probe.enabled) {
        if (r.contains("probe.delta") || r.contains("probe.serrodyne"))
            fail("probe block needs the probe.tau grid");
        return;
    }
    if (cfg.probe.tau.min < 0.0) fail("probe.tau_min must be non-negative");
    cfg.probe.delta_mhz = r.number("probe.delta", 0.0);
    cfg.probe.serrodyne_mhz = r.number("probe.serrodyne", 0.0);
}

void read_rabi_cooling(Reader& r, RabiCoolingConfig& cc) {
    cc.omega_c_mhz = r.number("cooling.omega_c", cc.omega_c_mhz);
    cc.t_c_ns = r.number("cooling.t_c", cc.t_c_ns);
    cc.f_offset_mhz = r.number("cooling.f_offset", cc.f_offset_mhz);
    cc.capture_width_mhz = r.number("cooling.capture_width", cc.capture_width_mhz);
    cc.gain = r.number("cooling.gain", cc.gain);
    cc.diffusion_mhz2 = r.number("cooling.diffusion", cc.diffusion_mhz2);
    cc.validate();
}

void read_qsc(Reader& r, QscConfig& qc) {
    const std::int64_t n_cycles = r.integer("cooling.n_cycles", qc.n_cycles);
    if (n_cycles < 1 || n_cycles > 100000) fail("cooling.n_cycles must be in [1, 100000]");
    qc.n_cycles = static_cast<int>(n_cycles);
    qc.tau_min_ns = r.number("cooling.tau_min", qc.tau_min_ns);
    qc.tau_max_ns = r.number("cooling.tau_max", qc.tau_max_ns);
    qc.t_c_ns = r.number("cooling.t_c", qc.t_c_ns);
    qc.omega_c_mhz = r.number("cooling.omega_c", qc.omega_c_mhz);
    qc.gain = r.number("cooling.gain", qc.gain);
    qc.diffusion_mhz2 = r.number("cooling.diffusion", qc.diffusion_mhz2);
    qc.reset_ns = r.number("cooling.reset", qc.reset_ns);
    qc.full_transfer_ns = r.number("cooling.full_transfer", qc.full_transfer_ns);
    qc.sense_coherence_sigma_mhz =
        r.number("cooling.sense_sigma", qc.sense_coherence_sigma_mhz);
    qc.validate();
}

void read_protocol_size(Reader& r, RunConfig& cfg, int default_reps, int default_traj) {
    const std::int64_t reps = r.integer("cooling.reps", default_reps);
    if (reps < 1 || reps > 1000000) fail("cooling.reps must be in [1, 1000000]");
    cfg.reps = static_cast<int>(reps);
    const std::int64_t n_traj = r.integer("cooling.n_traj", default_traj);
    if (n_traj < 1 || n_traj > 10000000) fail("cooling.n_traj must be in [1, 10000000]");
    cfg.n_traj = static_cast<int>(n_traj);
}

void read_centralspin(Reader& r, RunConfig& cfg) {
    const std::int64_t n = r.integer("centralspin.n_nuclei", -1);
    if (n < 0) fail("experiment requires centralspin.n_nuclei");
    cfg.cspin.n_nuclei = static_cast<int>(n);
    cfg.cspin.omega_n_mhz = r.array_required("centralspin.omega_n");
    cfg.cspin.a_nc_mhz = r.array_required("centralspin.a_nc");
    cfg.cspin.a_col_mhz = r.array(
        "centralspin.a_col", std::vector<double>(cfg.cspin.omega_n_mhz.size(), 0.0));
    cfg.cspin.detuning_mhz = r.number("centralspin.detuning", 0.0);
    cfg.cspin.rabi_mhz = 0.0; // swept by hh_scan
    cfg.cspin.validate();
    if (std::none_of(cfg.cspin.a_nc_mhz.begin(), cfg.cspin.a_nc_mhz.end(),
                     [](double a) { return a > 0.0; }))
        fail("centralspin.a_nc must contain a positive entry");
    cfg.t_drive_ns = r.number("centralspin.t_drive", cfg.t_drive_ns);
    if (!(cfg.t_drive_ns > 0.0)) fail("centralspin.t_drive must be positive");
    require_grid(r, "centralspin.omega", cfg.omega_grid);
}

} // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Rabi: return "rabi";
        case ExperimentKind::Ramsey: return "ramsey";
        case ExperimentKind::DetunedRamsey: return "detuned_ramsey";
        case ExperimentKind::Cpmg: return "cpmg";
        case ExperimentKind::T1: return "t1";
        case ExperimentKind::PhaseSweep: return "phase_sweep";
        case ExperimentKind::RabiCooling: return "rabi_cooling";
        case ExperimentKind::Qsc: return "qsc";
        case ExperimentKind::HhScan: return "hh_scan";
        case ExperimentKind::Chevron: return "chevron";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    static const ExperimentKind kinds[] = {
        ExperimentKind::Rabi,        ExperimentKind::Ramsey,
        ExperimentKind::DetunedRamsey, ExperimentKind::Cpmg,
        ExperimentKind::T1,          ExperimentKind::PhaseSweep,
        ExperimentKind::RabiCooling, ExperimentKind::Qsc,
        ExperimentKind::HhScan,      ExperimentKind::Chevron,
    };
    for (ExperimentKind k : kinds)
        if (name == experiment_name(k)) return k;
    fail("unknown experiment '" + name +
         "'; valid experiments: rabi, ramsey, detuned_ramsey, cpmg, t1, phase_sweep, "
         "rabi_cooling, qsc, hh_scan, chevron");
}

std::vector<double> GridSpec::values() const {
    if (points < 1) throw std::invalid_argument("grid needs at least 1 point");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = min;
        return v;
    }
    const double step = (max - min) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = min + step * i;
    v.back() = max; // exact endpoint regardless of rounding
    return v;
}

RunConfig load_config_text(const std::string& text) {
    const TomlTable table = TomlTable::parse(text);
    Reader r(table);
    RunConfig cfg;
    cfg.experiment = parse_experiment(r.string_required("experiment"));
    read_common(r, cfg);

    switch (cfg.experiment) {
        case ExperimentKind::Rabi:
            cfg.omega_mhz = r.number_required("sequence.omega");
            if (!(cfg.omega_mhz > 0.0)) fail("sequence.omega must be positive");
            cfg.delta_mhz = r.number("sequence.delta", 0.0);
            require_grid(r, "sequence.t", cfg.t_grid);
            if (cfg.t_grid.min < 0.0) fail("sequence.t_min must be non-negative");
            cfg.has_delta_grid = read_grid(r, "sequence.delta", cfg.delta_grid);
            cfg.precool = r.boolean("sequence.precool", false);
            if (cfg.precool) {
                read_rabi_cooling(r, cfg.rabi_cooling);
                read_protocol_size(r, cfg, 150, 512);
            }
            break;
        case ExperimentKind::Ramsey:
            cfg.delta_mhz = r.number("sequence.delta", 0.0);
            cfg.serrodyne_mhz = r.number("sequence.serrodyne", 0.0);
            require_grid(r, "sequence.tau", cfg.tau_grid);
            if (cfg.tau_grid.min < 0.0) fail("sequence.tau_min must be non-negative");
            break;
        case ExperimentKind::DetunedRamsey:
            require_grid(r, "sequence.delta", cfg.delta_grid);
            require_grid(r, "sequence.tau", cfg.tau_grid);
            if (cfg.tau_grid.min < 0.0) fail("sequence.tau_min must be non-negative");
            cfg.has_fit_delta = r.contains("sequence.fit_delta");
            cfg.fit_delta_mhz = r.number("sequence.fit_delta", 0.0);
            break;
        case ExperimentKind::Cpmg: {
            cfg.n_pi = read_n_pi(r);
            cfg.has_t_grid = read_grid(r, "sequence.t", cfg.t_grid, true);
            if (cfg.has_t_grid && cfg.n_pi.size() > 1)
                fail("sequence.t grid is only valid with a single n_pi");
            const std::string conv = r.string("sequence.convention", "n_tau");
            if (conv == "n_tau")
                cfg.cpmg_convention = CpmgConvention::TotalIsNTau;
            else if (conv == "2n_tau")
                cfg.cpmg_convention = CpmgConvention::TotalIsTwoNTau;
            else
                fail("sequence.convention must be n_tau or 2n_tau");
            break;
        }
        case ExperimentKind::T1:
            require_grid(r, "sequence.tau", cfg.tau_grid);
            if (cfg.tau_grid.min < 0.0) fail("sequence.tau_min must be non-negative");
            break;
        case ExperimentKind::PhaseSweep:
            if (!read_grid(r, "sequence.phi", cfg.phi_grid)) {
                cfg.phi_grid = {0.0, kTwoPi, 25};
            }
            break;
        case ExperimentKind::RabiCooling:
            read_rabi_cooling(r, cfg.rabi_cooling);
            read_protocol_size(r, cfg, 400, 3000);
            read_probe(r, cfg);
            break;
        case ExperimentKind::Qsc:
            read_qsc(r, cfg.qsc);
            read_protocol_size(r, cfg, 15, 2000);
            read_probe(r, cfg);
            break;
        case ExperimentKind::HhScan:
            read_centralspin(r, cfg);
            break;
        case ExperimentKind::Chevron:
            cfg.omega_mhz = r.number_required("sequence.omega");
            if (!(cfg.omega_mhz > 0.0)) fail("sequence.omega must be positive");
            cfg.delta_ac_mhz = r.number("sequence.delta_ac", 0.0);
            require_grid(r, "sequence.t", cfg.t_grid);
            if (cfg.t_grid.min < 0.0) fail("sequence.t_min must be non-negative");
            require_grid(r, "sequence.delta", cfg.delta_grid);
            break;
    }

    r.finish();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

} // namespace qdsim
