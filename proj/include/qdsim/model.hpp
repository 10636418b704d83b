#pragma once

// Device-level description: the electron spin qubit and the nuclear species it talks to.
// Everything downstream (bath statistics, drive response, bath-size estimators) pulls its
// physical inputs from here rather than hard-coding numbers at the point of use.

#include <string>
#include <vector>

namespace qdsim {

struct QubitParams {
    double f_zeeman_mhz;  // electron Zeeman splitting |g| mu_B B / h
    double g_factor;      // electron g factor, sign included
    double t1_us;         // longitudinal relaxation of the ground-state spin
    double osp_time_ns;   // optical spin-pumping 1/e time
    double osp_fidelity;  // initialization fidelity of the pumped state
    double kappa_ratio;   // drive-induced spin-flip rate per unit Rabi rate

    // throws std::invalid_argument naming the offending field
    void validate() const;
};

QubitParams default_qubit();

struct NuclearSpecies {
    std::string name;
    double larmor_mhz;       // at the field the registry was built for
    double gamma_mhz_per_t;  // gyromagnetic ratio over 2pi
    double abundance;        // occupation of its sublattice site
    double hyperfine_mhz;    // total coupling constant A
    double spin;             // nuclear spin quantum number I
    bool in_estimate;        // counts toward the bath-size estimate
};

struct SpeciesRegistry {
    std::vector<NuclearSpecies> species;
    double b_field_t;        // field the larmor values correspond to
    double difference_mhz;   // 71Ga-75As difference frequency, the feedback resonance

    const NuclearSpecies* find(const std::string& name) const;
    // difference recomputed from the table, for cross-checking against difference_mhz
    double derived_difference_mhz() const;
    // sum of abundances of species included in estimates (sites per lattice cell)
    double estimate_site_weight() const;
};

// arsenic plus the two gallium isotopes, aluminium listed but excluded from estimates
SpeciesRegistry default_gaas_registry(double b_field_t = 3.00);

} // namespace qdsim
