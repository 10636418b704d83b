#pragma once

// Declarative experiment description loaded from a TOML config. Every tunable lives
// here; the runner consumes a validated RunConfig and nothing else. Unknown keys and
// out-of-range values are rejected at load time with messages naming the field.

#include <cstdint>
#include <string>
#include <vector>

#include "qdsim/bath.hpp"
#include "qdsim/centralspin.hpp"
#include "qdsim/cooling.hpp"
#include "qdsim/model.hpp"
#include "qdsim/sequences.hpp"

namespace qdsim {

enum class ExperimentKind {
    Rabi,
    Ramsey,
    DetunedRamsey,
    Cpmg,
    T1,
    PhaseSweep,
    RabiCooling,
    Qsc,
    HhScan,
    Chevron,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name); // lists valid names on error

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    std::vector<double> values() const; // inclusive linear grid
};

struct ProbeSpec {
    bool enabled = false;
    GridSpec tau;              // ns
    double delta_mhz = 0.0;
    double serrodyne_mhz = 0.0;
};

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::Rabi;
    QubitParams qubit = default_qubit();
    BathModel bath;
    MeasurementModel readout;
    long shots = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    // sequence block; which members matter depends on the experiment
    double omega_mhz = 0.0;
    double delta_mhz = 0.0;
    double serrodyne_mhz = 0.0;
    double delta_ac_mhz = 0.0;
    GridSpec t_grid;      // rabi/chevron in ns, cpmg/t1 in us
    GridSpec tau_grid;    // ramsey delays in ns
    GridSpec delta_grid;  // detuning axis in MHz
    GridSpec phi_grid;    // phase sweep in rad
    std::vector<int> n_pi;
    CpmgConvention cpmg_convention = CpmgConvention::TotalIsNTau;
    bool has_t_grid = false;
    bool has_delta_grid = false;
    double fit_delta_mhz = 0.0; // detuned_ramsey linecut to fit
    bool has_fit_delta = false;
    bool precool = false;       // rabi map: lock the bath to each probe point first

    // cooling protocols
    RabiCoolingConfig rabi_cooling;
    QscConfig qsc;
    int reps = 1;
    int n_traj = 2000;
    ProbeSpec probe;

    // small-N quantum scan
    CentralSpinSystem cspin;
    GridSpec omega_grid;   // MHz
    double t_drive_ns = 125.0;
};

RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

} // namespace qdsim
