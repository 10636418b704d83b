#pragma once

// Semiclassical Overhauser field: a quasi-static Gaussian detuning per shot plus a slow
// mean-reverting component that produces finite echo coherence times. The mean-reverting
// part is sampled exactly (no time stepping), including the joint law of its end value
// and its time integral over a free-evolution window.

#include "qdsim/rng.hpp"

namespace qdsim {

struct BathModel {
    double sigma_static_mhz = 52.0; // quasi-static Gaussian width
    double sigma_dyn_mhz = 0.0;     // stationary width of the dynamic component
    double tau_corr_us = 10.0;      // correlation time of the dynamic component
    double relax_time_us = 41.0;    // return-to-warm time of a cooled distribution
    double sigma_warm_mhz = 52.0;   // thermal-equilibrium width
    double a_c_mhz = 0.138;         // single-nucleus coupling quantum

    // throws std::invalid_argument naming the offending field
    void validate() const;
};

struct BathState {
    double delta_mhz = 0.0;     // current detuning of one trajectory
    double sigma_now_mhz = 0.0; // ensemble width tracked by the cooling protocols
};

// quasi-static draw, N(0, sigma^2)
double sample_detuning(double sigma_mhz, Rng& rng);

// exact one-step marginal of the mean-reverting component over dt
double ou_step(double delta_mhz, const BathModel& model, double dt_us, Rng& rng);

struct OuDelay {
    double delta_end_mhz;       // component value at the end of the window
    double integral_mhz_us;     // time integral of the component over the window
};

// exact joint sample of (end value, integral) conditioned on the entry value
OuDelay ou_delay(double delta_mhz, const BathModel& model, double t_us, Rng& rng);

// ensemble width after waiting t following cooling: the equivalent dephasing time
// relaxes exponentially back to its warm value with time constant relax_time
double rewarm_sigma(double sigma_now_mhz, double t_wait_us, const BathModel& model);

} // namespace qdsim
