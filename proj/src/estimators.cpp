#include "qdsim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdsim/units.hpp"

namespace qdsim {
namespace {

double coupling_from_bath_size(double n_nuclei, double t2_star_ns) {
    return 1.0 / (std::sqrt(2.5 * n_nuclei) * kPi * ns_to_us(t2_star_ns));
}

} // namespace

BathEstimate estimate_bath(double t2_star_ns, const SpeciesRegistry& registry,
                           double sigma_oh_mhz, bool site_fraction_norm) {
    if (!(t2_star_ns > 0.0))
        throw std::invalid_argument("estimate_bath requires t2_star > 0");
    const double t2_us = ns_to_us(t2_star_ns);

    // N = 5/4 sum_k eta_k (2 pi A_k T2*)^2, abundances per sublattice by default
    double sum = 0.0;
    bool any = false;
    for (const auto& sp : registry.species) {
        if (!sp.in_estimate) continue;
        any = true;
        const double w = site_fraction_norm ? 0.5 * sp.abundance : sp.abundance;
        const double x = kTwoPi * sp.hyperfine_mhz * t2_us;
        sum += w * x * x;
    }
    if (!any) throw std::invalid_argument("estimate_bath requires registry species");

    BathEstimate est;
    est.n_nuclei = 1.25 * sum;
    est.a_c_mhz = coupling_from_bath_size(est.n_nuclei, t2_star_ns);
    est.macrostates = macrostates(sigma_oh_mhz, est.a_c_mhz);
    return est;
}

double macrostates(double sigma_mhz, double a_c_mhz) {
    if (!(a_c_mhz > 0.0)) throw std::invalid_argument("macrostates requires a_c > 0");
    if (sigma_mhz < 0.0) throw std::invalid_argument("macrostates requires sigma >= 0");
    return sigma_mhz / a_c_mhz;
}

double quality_factor(double t2_rabi_ns, double f_rabi_mhz) {
    if (!(t2_rabi_ns > 0.0) || !(f_rabi_mhz > 0.0))
        throw std::invalid_argument("quality_factor requires positive inputs");
    return 2.0 * ns_to_us(t2_rabi_ns) * f_rabi_mhz;
}

double pi_fidelity(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("pi_fidelity requires q > 0");
    return 0.5 * (1.0 + std::exp(-1.0 / q));
}

RabiMetrics rabi_metrics(double t2_rabi_ns, double f_rabi_mhz) {
    RabiMetrics m;
    m.q = quality_factor(t2_rabi_ns, f_rabi_mhz);
    m.f_pi = pi_fidelity(m.q);
    return m;
}

double osp_fidelity(double c_inf, double c0) {
    if (!(c0 > 0.0)) throw std::invalid_argument("osp_fidelity requires c0 > 0");
    if (c_inf < 0.0 || c_inf > c0)
        throw std::invalid_argument("osp_fidelity requires 0 <= c_inf <= c0");
    return std::sqrt(1.0 - c_inf / c0);
}

std::vector<double> visibility(const std::vector<double>& c_down,
                               const std::vector<double>& c_up) {
    if (c_down.size() != c_up.size())
        throw std::invalid_argument("visibility inputs must have equal length");
    std::vector<double> diff(c_down.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = c_down[i] - c_up[i];
        peak = std::max(peak, diff[i]);
    }
    if (!(peak > 0.0)) return std::vector<double>(c_down.size(), 0.0);
    for (double& v : diff) v /= peak;
    return diff;
}

} // namespace qdsim
