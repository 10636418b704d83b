#pragma once

// Feedback-cooling protocols for the nuclear-spin bath, modeled as parametric drift
// kernels on the per-trajectory Overhauser detuning. The microscopic electron-nuclear
// flip-flop is not simulated here; the drift amplitudes carry a Hartmann-Hahn efficiency
// factor and calibrated gain/diffusion constants chosen to reproduce the measured
// steady-state widths (see constants.hpp). The small-N quantum model in centralspin
// backs the direction and resonance structure of the kernels.

#include <cstdint>
#include <vector>

#include "qdsim/bath.hpp"
#include "qdsim/constants.hpp"

namespace qdsim {

class Rng;

struct RabiCoolingConfig {
    double omega_c_mhz = 17.0;   // drive Rabi frequency during the cooling pulse
    double t_c_ns = 1000.0;      // cooling drive duration per cycle
    double f_offset_mhz = 0.0;   // lock point relative to the probe frequency
    double capture_width_mhz = constants::kRabiCaptureWidthMHz;
    double gain = constants::kRabiCoolGain;          // drift per unit detuning per us of drive
    double diffusion_mhz2 = constants::kRabiCoolDiffusion; // variance added per cycle
    void validate() const;
};

struct QscConfig {
    int n_cycles = 40;           // sensing cycles per pass
    double tau_min_ns = 20.0;    // linear sensing-time ramp endpoints
    double tau_max_ns = 400.0;
    double t_c_ns = 125.0;       // electron-nuclear drive time per cycle
    double omega_c_mhz = 17.0;
    double gain = constants::kQscGain;
    double diffusion_mhz2 = constants::kQscDiffusion;
    double reset_ns = 200.0;     // re-initialization time, enters the wall-clock tally
    // drive time giving complete conditional transfer; sin^2(pi t_c / full_transfer)
    // modulates the feedback direction bias
    double full_transfer_ns = constants::kQscFullTransferNs;
    // coherence width governing the sensing visibility V(tau); kept separate from the
    // ensemble bath so the sensing contrast is a protocol property
    double sense_coherence_sigma_mhz = constants::kSigmaDynMHz;
    void validate() const;
};

// Gaussian Hartmann-Hahn efficiency of the electron-nuclear drive, peaked at the
// species difference frequency
double hh_efficiency(double omega_c_mhz);

// deterministic part of the Rabi-cooling update: -gain * eff * (t_c/1us) * x * exp(-x^2
// / 2w^2) with x the detuning from the lock point; odd in x, zero outside the window
double rabi_cool_drift(double delta_mhz, const RabiCoolingConfig& cfg);

// signed bias of the sensing-conditioned nuclear kick: transfer(t_c) * V(tau) *
// sin(2 pi delta tau); odd in delta, maximal near |delta| = 1/(4 tau)
double qsc_bias(double delta_mhz, double tau_sense_ns, const QscConfig& cfg);

void rabi_cool_cycle(BathState& state, const RabiCoolingConfig& cfg, Rng& rng);

// one sensing cycle: a +-a_c kick whose direction is biased by qsc_bias, a weak
// broadband pull from the drive pulse itself, and diffusion
void qsc_cycle(BathState& state, double tau_sense_ns, const QscConfig& cfg,
               double a_c_mhz, Rng& rng);

struct ProtocolTracePoint {
    int cycle = 0;
    double tau_sense_ns = 0.0; // NaN for Rabi cooling (no sensing step)
    double sigma_now_mhz = 0.0;
    double mean_delta_mhz = 0.0;
};

struct ProtocolResult {
    std::vector<ProtocolTracePoint> trace;
    double final_sigma_mhz = 0.0;
    double final_mean_mhz = 0.0;
    double wall_time_us = 0.0;       // experiment-equivalent duration of one pass chain
    std::vector<double> final_deltas; // cooled ensemble, for feeding a probe sequence
};

// Evolve an ensemble of n_traj bath trajectories through `reps` passes of the schedule
// (Rabi cooling: one cycle per pass; sensing protocol: n_cycles per pass with the
// linear tau ramp). Models the steady state of the interleaved cool-then-probe
// experiment. Throws for reps < 1 or n_traj < 1.
ProtocolResult run_protocol(const RabiCoolingConfig& cfg, int reps, const BathModel& bath,
                            int n_traj, std::uint64_t seed, int threads = 1);
ProtocolResult run_protocol(const QscConfig& cfg, int reps, const BathModel& bath,
                            int n_traj, std::uint64_t seed, int threads = 1);

} // namespace qdsim
