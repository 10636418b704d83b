#pragma once

// Pulse-sequence experiments run as Monte-Carlo shot ensembles over the bath. Pulses are
// ideal instantaneous rotations; delays evolve phase analytically from the sampled bath,
// so a shot costs a handful of random draws. Every (sweep point, shot) pair owns its own
// random substream and aggregation is chunk-ordered, making results independent of the
// thread count.

#include <cstdint>
#include <vector>

#include "qdsim/bath.hpp"
#include "qdsim/model.hpp"

namespace qdsim {

struct Envelope {
    std::vector<double> sweep;       // swept value; unit depends on the experiment
    std::vector<double> top;         // normalized counts, final phase 0
    std::vector<double> bottom;      // normalized counts, final phase pi (NaN if unused)
    std::vector<double> visibility;  // (top - bottom) / max(top - bottom) (NaN if unused)
    long shots = 0;
};

// one envelope per probe detuning, all sharing the same delay sweep
struct DetunedRamseyMap {
    std::vector<double> delta_mhz;
    std::vector<Envelope> envelopes;
};

// detuning-averaged flop probability on a (t, delta) grid, row-major in t
struct ChevronMap {
    std::vector<double> t_ns;
    std::vector<double> delta_mhz;
    std::vector<double> p;
    long shots = 0;
};

struct MeasurementModel {
    double contrast = 1.0;   // affine map from flip probability to detection probability
    double dark_floor = 0.0;
    double detect(double p_flip) const { return dark_floor + contrast * p_flip; }
};

struct SequenceParams {
    QubitParams qubit = default_qubit();
    BathModel bath;
    MeasurementModel readout;
    long shots = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    // extra phase added to the final pi/2 pulse of both envelope variants; adding pi
    // exchanges top and bottom exactly
    double final_phase_offset_rad = 0.0;
    // when non-empty, per-shot detunings are resampled from this pool instead of the
    // Gaussian static draw (used to probe a cooled, non-Gaussian ensemble)
    std::vector<double> delta_pool;
};

enum class CpmgConvention {
    TotalIsNTau,    // sweep value t = n_pi * spacing (default)
    TotalIsTwoNTau, // sweep value t = 2 * n_pi * spacing
};

// drive-time sweep at fixed detuning; drive-induced flips and T1 act during the pulse.
// sweep unit: ns
Envelope run_rabi(const SequenceParams& p, double omega_mhz, double delta_mhz,
                  const std::vector<double>& t_grid_ns);

// Monte-Carlo flop-probability map over (drive time, detuning); probabilities are
// averaged directly (no projection noise) for comparison against averaged_chevron
ChevronMap run_chevron_mc(const SequenceParams& p, double omega_mhz,
                          const std::vector<double>& t_grid_ns,
                          const std::vector<double>& delta_grid_mhz, double delta_ac_mhz);

// pi/2 - delay - pi/2 with final-pulse phase ramp 2*pi*serrodyne*tau and its pi-shifted
// variant. sweep unit: ns
Envelope run_ramsey(const SequenceParams& p, double delta_mhz, double serrodyne_mhz,
                    const std::vector<double>& tau_grid_ns);

// Ramsey fringes versus probe detuning; one envelope per detuning. sweep unit: ns
DetunedRamseyMap run_detuned_ramsey(const SequenceParams& p,
                                    const std::vector<double>& delta_grid_mhz,
                                    const std::vector<double>& tau_grid_ns);

// pi/2_x - [tau_s/2 - pi_y - tau_s/2] x n_pi - pi/2_x; the bath integral over each
// delay is sampled exactly. sweep unit: us (total sequence time per the convention).
// throws std::invalid_argument when n_pi < 1
Envelope run_cpmg(const SequenceParams& p, int n_pi, const std::vector<double>& t_grid_us,
                  CpmgConvention convention = CpmgConvention::TotalIsNTau);

// pump into the dark state, wait, probe; signal recovers toward the mixed state.
// sweep unit: us
Envelope run_t1_pumpprobe(const SequenceParams& p, const std::vector<double>& tau_grid_us);

// two back-to-back pi/2 pulses, second at swept phase. sweep unit: rad
Envelope run_phase_sweep(const SequenceParams& p, const std::vector<double>& phi_grid_rad);

} // namespace qdsim
