#include "qdsim/centralspin.hpp"

#include <cmath>
#include <stdexcept>

#include "qdsim/units.hpp"

namespace qdsim {
namespace {

int nuclear_bit(const CentralSpinSystem& sys, int k) { return sys.n_nuclei - 1 - k; }

// m = +1/2 for bit value 0, -1/2 for bit value 1
double half_spin(int index, int bit) { return ((index >> bit) & 1) ? -0.5 : 0.5; }

double basis_total_iz(const CentralSpinSystem& sys, int index) {
    double s = 0.0;
    for (int k = 0; k < sys.n_nuclei; ++k) s += half_spin(index, nuclear_bit(sys, k));
    return s;
}

} // namespace

void CentralSpinSystem::validate() const {
    if (n_nuclei < 0 || n_nuclei > 8)
        throw std::invalid_argument("centralspin.n_nuclei must be between 0 and 8");
    const auto n = static_cast<std::size_t>(n_nuclei);
    if (omega_n_mhz.size() != n || a_col_mhz.size() != n || a_nc_mhz.size() != n)
        throw std::invalid_argument(
            "centralspin coupling lists must have one entry per nucleus");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(omega_n_mhz[k]) || !std::isfinite(a_col_mhz[k]) ||
            !std::isfinite(a_nc_mhz[k]))
            throw std::invalid_argument("centralspin couplings must be finite");
    }
    if (!std::isfinite(rabi_mhz) || !std::isfinite(detuning_mhz))
        throw std::invalid_argument("centralspin drive parameters must be finite");
}

Eigen::MatrixXd build_hamiltonian(const CentralSpinSystem& sys) {
    sys.validate();
    const int d = sys.dim();
    const int ebit = sys.n_nuclei;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);

    for (int i = 0; i < d; ++i) {
        const double ms = half_spin(i, ebit);
        double diag = sys.detuning_mhz * ms;
        for (int k = 0; k < sys.n_nuclei; ++k) {
            const double mi = half_spin(i, nuclear_bit(sys, k));
            diag += sys.omega_n_mhz[static_cast<std::size_t>(k)] * mi +
                    sys.a_col_mhz[static_cast<std::size_t>(k)] * ms * mi;
        }
        h(i, i) = diag;

        // S_x flips the electron bit; S_z I_x flips one nuclear bit
        h(i ^ (1 << ebit), i) += 0.5 * sys.rabi_mhz;
        for (int k = 0; k < sys.n_nuclei; ++k)
            h(i ^ (1 << nuclear_bit(sys, k)), i) +=
                0.5 * sys.a_nc_mhz[static_cast<std::size_t>(k)] * ms;
    }
    return h;
}

Eigen::VectorXcd evolve(const Eigen::VectorXcd& state, const CentralSpinSystem& sys,
                        double t_ns) {
    const Eigen::MatrixXd h = build_hamiltonian(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd coeff = v.adjoint() * state;
    for (int j = 0; j < coeff.size(); ++j) {
        const double angle = -kTwoPi * es.eigenvalues()(j) * ns_to_us(t_ns);
        coeff(j) *= std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return v * coeff;
}

Eigen::VectorXcd basis_state(const CentralSpinSystem& sys, unsigned nuclear_bits,
                             bool electron_down) {
    sys.validate();
    int index = electron_down ? (1 << sys.n_nuclei) : 0;
    for (int k = 0; k < sys.n_nuclei; ++k)
        if ((nuclear_bits >> k) & 1U) index |= 1 << nuclear_bit(sys, k);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sys.dim());
    psi(index) = 1.0;
    return psi;
}

double nuclear_iz(const Eigen::VectorXcd& state, const CentralSpinSystem& sys, int k) {
    const int bit = nuclear_bit(sys, k);
    double s = 0.0;
    for (int i = 0; i < state.size(); ++i)
        s += std::norm(state(i)) * half_spin(static_cast<int>(i), bit);
    return s;
}

double total_iz(const Eigen::VectorXcd& state, const CentralSpinSystem& sys) {
    double s = 0.0;
    for (int i = 0; i < state.size(); ++i)
        s += std::norm(state(i)) * basis_total_iz(sys, static_cast<int>(i));
    return s;
}

std::vector<TransferPoint> hh_scan(const CentralSpinSystem& sys_template,
                                   const std::vector<double>& omega_grid_mhz,
                                   double t_drive_ns) {
    CentralSpinSystem sys = sys_template;
    sys.validate();
    const int d = sys.dim();
    const int n_configs = 1 << sys.n_nuclei;

    std::vector<TransferPoint> curve;
    curve.reserve(omega_grid_mhz.size());
    for (double omega : omega_grid_mhz) {
        sys.rabi_mhz = omega;
        const Eigen::MatrixXd h = build_hamiltonian(sys);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const Eigen::MatrixXd& v = es.eigenvectors();

        // propagator column for a basis start gives the full outcome distribution;
        // average the polarization change over every nuclear configuration with the
        // electron prepared up
        double mean_diz = 0.0;
        for (int cfg = 0; cfg < n_configs; ++cfg) {
            int start = 0;
            for (int k = 0; k < sys.n_nuclei; ++k)
                if ((cfg >> k) & 1) start |= 1 << nuclear_bit(sys, k);

            Eigen::VectorXcd coeff(d);
            for (int j = 0; j < d; ++j) {
                const double angle = -kTwoPi * es.eigenvalues()(j) * ns_to_us(t_drive_ns);
                coeff(j) = v(start, j) * std::complex<double>(std::cos(angle),
                                                              std::sin(angle));
            }
            const Eigen::VectorXcd psi_t = v * coeff;
            double iz_t = 0.0;
            for (int i = 0; i < d; ++i) iz_t += std::norm(psi_t(i)) * basis_total_iz(sys, i);
            mean_diz += iz_t - basis_total_iz(sys, start);
        }
        curve.push_back({omega, mean_diz / static_cast<double>(n_configs)});
    }
    return curve;
}

} // namespace qdsim
