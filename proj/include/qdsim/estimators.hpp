#pragma once

// Closed-form estimators and figures of merit derived from fitted decay times: bath size
// and coupling from T2*, Rabi quality factor and pi-pulse fidelity, pumping fidelity,
// and the two-sided visibility normalization.

#include <vector>

#include "qdsim/model.hpp"

namespace qdsim {

struct BathEstimate {
    double n_nuclei = 0.0;
    double a_c_mhz = 0.0;
    double macrostates = 0.0;
};

// N = 5/4 sum_k eta_k (2 pi A_k)^2 T2*^2 and A_c = 1/(sqrt(5N/2) pi T2*), with the
// macrostate count sigma_oh / A_c evaluated at the supplied spread. When
// site_fraction_norm is set, the sublattice abundances are halved so they sum to one
// over the whole lattice instead of per sublattice. Throws for t2_star <= 0 or an
// empty registry.
BathEstimate estimate_bath(double t2_star_ns, const SpeciesRegistry& registry,
                           double sigma_oh_mhz, bool site_fraction_norm = false);

// distinct nuclear macrostates resolved within one spread: sigma / a_c
double macrostates(double sigma_mhz, double a_c_mhz);

struct RabiMetrics {
    double q = 0.0;
    double f_pi = 0.0;
};

// Q = 2 T2_Rabi f_Rabi (T2 in ns, f in MHz, the ns-MHz product carries 1e-3) and
// f_pi = (1 + exp(-1/Q)) / 2
double quality_factor(double t2_rabi_ns, double f_rabi_mhz);
double pi_fidelity(double q); // throws for q <= 0
RabiMetrics rabi_metrics(double t2_rabi_ns, double f_rabi_mhz);

// pumping fidelity from the driven steady-state contrast: sqrt(1 - c_inf / c0)
double osp_fidelity(double c_inf, double c0);

// C = (c_down - c_up) / max(c_down - c_up), elementwise over a sweep; all zeros when
// the peak difference is not positive
std::vector<double> visibility(const std::vector<double>& c_down,
                               const std::vector<double>& c_up);

} // namespace qdsim
