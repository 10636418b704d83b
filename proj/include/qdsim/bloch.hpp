#pragma once

// Single-trajectory spin dynamics in the rotating frame: exact rotations under square
// drive segments, longitudinal relaxation, and drive-induced isotropic depolarization.

namespace qdsim {

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double norm() const;
};

struct DriveSegment {
    double rabi_mhz = 0.0;      // Omega / 2pi
    double detuning_mhz = 0.0;  // total detuning including the bath contribution
    double phase_rad = 0.0;     // drive phase, sets the equatorial rotation axis
    double duration_ns = 0.0;
    double flip_rate_mhz = 0.0; // kappa / 2pi, nonzero only while the laser is on
};

// spin-flip probability from the prepared state for a square resonant/detuned pulse
double rabi_lineshape(double t_ns, double delta_mhz, double omega_mhz);

// rotation about (Omega cos phi, Omega sin phi, Delta) composed with relaxation.
// t1_us <= 0 or infinite disables longitudinal relaxation; the segment is exact
// when no decay channel is active and operator-split at <= 0.1 ns otherwise.
BlochVector propagate(BlochVector s, const DriveSegment& seg, double t1_us);

// Gaussian-ensemble average of rabi_lineshape over a detuning spread sigma_oh,
// with the drive offset delta_ac folded into the detuning argument
double averaged_chevron(double t_ns, double delta_mhz, double omega_mhz,
                        double sigma_oh_mhz, double delta_ac_mhz);

} // namespace qdsim
