#include "qdsim/model.hpp"

#include <cmath>
#include <stdexcept>

#include "qdsim/constants.hpp"

namespace qdsim {

void QubitParams::validate() const {
    if (!(f_zeeman_mhz > 0.0))
        throw std::invalid_argument("qubit.f_zeeman must be positive");
    if (!std::isfinite(g_factor))
        throw std::invalid_argument("qubit.g_factor must be finite");
    if (!(t1_us > 0.0))
        throw std::invalid_argument("qubit.t1 must be positive");
    if (!(osp_time_ns >= 0.0))
        throw std::invalid_argument("qubit.osp_time must be non-negative");
    if (!(osp_fidelity >= 0.0 && osp_fidelity <= 1.0))
        throw std::invalid_argument("qubit.osp_fidelity must lie in [0, 1]");
    if (!(kappa_ratio >= 0.0))
        throw std::invalid_argument("qubit.kappa_ratio must be non-negative");
}

QubitParams default_qubit() {
    QubitParams q;
    q.f_zeeman_mhz = constants::kZeemanSplittingMHz;
    q.g_factor = constants::kElectronGFactor;
    q.t1_us = constants::kT1Us;
    q.osp_time_ns = constants::kOspTimeNs;
    q.osp_fidelity = constants::kOspFidelity;
    q.kappa_ratio = constants::kKappaRatio;
    return q;
}

const NuclearSpecies* SpeciesRegistry::find(const std::string& name) const {
    for (const auto& s : species)
        if (s.name == name) return &s;
    return nullptr;
}

double SpeciesRegistry::derived_difference_mhz() const {
    const NuclearSpecies* ga71 = find("71Ga");
    const NuclearSpecies* as75 = find("75As");
    if (ga71 == nullptr || as75 == nullptr) return 0.0;
    return ga71->larmor_mhz - as75->larmor_mhz;
}

double SpeciesRegistry::estimate_site_weight() const {
    double w = 0.0;
    for (const auto& s : species)
        if (s.in_estimate) w += s.abundance;
    return w;
}

SpeciesRegistry default_gaas_registry(double b_field_t) {
    using namespace constants;
    auto make = [b_field_t](const char* name, double gamma, double abundance, double a_uev,
                            bool in_estimate) {
        NuclearSpecies s;
        s.name = name;
        s.gamma_mhz_per_t = gamma;
        s.larmor_mhz = gamma * b_field_t;
        s.abundance = abundance;
        s.hyperfine_mhz = a_uev * kUevToMHz;
        s.spin = kNuclearSpin;
        s.in_estimate = in_estimate;
        return s;
    };
    SpeciesRegistry r;
    r.b_field_t = b_field_t;
    r.difference_mhz = kHHCenterMHz;
    r.species = {
        make("75As", kGammaAs75MHzPerT, kAbundanceAs75, kHyperfineAs75Uev, true),
        make("69Ga", kGammaGa69MHzPerT, kAbundanceGa69, kHyperfineGa69Uev, true),
        make("71Ga", kGammaGa71MHzPerT, kAbundanceGa71, kHyperfineGa71Uev, true),
        // barrier species, visible in Larmor tables but not part of the dot estimate
        make("27Al", kGammaAl27MHzPerT, 0.0, kHyperfineAl27Uev, false),
    };
    return r;
}

} // namespace qdsim
