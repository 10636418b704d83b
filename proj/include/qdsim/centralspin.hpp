#pragma once

// Exact state-vector model of one driven electron spin coupled to a handful of nuclear
// spins, with collinear (S_z I_z) and non-collinear (S_z I_x) hyperfine terms. This is a
// mechanism verifier for the cooling kernels: it shows polarization transfer at the
// Hartmann-Hahn match and its sign reversal with detuning, not a quantitative bath.
//
// Basis: electron bit is the most significant bit (bit value 0 means m_s = +1/2),
// nuclear spin k occupies bit (n_nuclei - 1 - k), bit value 0 meaning m_I = +1/2.
// Nuclei are treated as spin-1/2; the resonance and sign physics do not depend on the
// spin magnitude.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qdsim {

struct CentralSpinSystem {
    int n_nuclei = 0;
    std::vector<double> omega_n_mhz;  // nuclear Larmor frequencies
    std::vector<double> a_col_mhz;    // S_z I_z couplings
    std::vector<double> a_nc_mhz;     // S_z I_x couplings
    double rabi_mhz = 0.0;
    double detuning_mhz = 0.0;
    void validate() const; // throws: n_nuclei outside [0, 8] or list-length mismatch
    int dim() const { return 2 << n_nuclei; }
};

// rotating-frame Hamiltonian in ordinary-frequency units (MHz):
// H = rabi S_x + detuning S_z + sum_n [omega_n I_z + a_col S_z I_z + a_nc S_z I_x]
Eigen::MatrixXd build_hamiltonian(const CentralSpinSystem& sys);

// exact evolution by t_ns via eigendecomposition; unitary to machine precision
Eigen::VectorXcd evolve(const Eigen::VectorXcd& state, const CentralSpinSystem& sys,
                        double t_ns);

// basis state with the electron in m_s = +1/2 (bit 0) and nuclei in the computational
// configuration `nuclear_bits` (bit k of the argument sets nucleus k to m_I = -1/2)
Eigen::VectorXcd basis_state(const CentralSpinSystem& sys, unsigned nuclear_bits,
                             bool electron_down = false);

// expectation of nucleus k's I_z in a (not necessarily normalized) state
double nuclear_iz(const Eigen::VectorXcd& state, const CentralSpinSystem& sys, int k);

// total nuclear I_z expectation
double total_iz(const Eigen::VectorXcd& state, const CentralSpinSystem& sys);

struct TransferPoint {
    double omega_mhz = 0.0;
    double delta_iz = 0.0;
};

// Hartmann-Hahn scan: drive the electron at each Rabi rate for t_drive starting from
// the electron-up state, averaging the change of total nuclear polarization over all
// nuclear basis configurations. Peaks appear where the drive matches a Larmor
// frequency and the transfer sign follows the sign of the detuning.
std::vector<TransferPoint> hh_scan(const CentralSpinSystem& sys_template,
                                   const std::vector<double>& omega_grid_mhz,
                                   double t_drive_ns);

} // namespace qdsim
