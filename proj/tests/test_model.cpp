#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "qdsim/constants.hpp"
#include "qdsim/model.hpp"
#include "qdsim/units.hpp"

using namespace qdsim;

TEST_CASE("default qubit parameters are self-consistent") {
    const QubitParams q = default_qubit();
    CHECK_NOTHROW(q.validate());
    CHECK(q.f_zeeman_mhz == doctest::Approx(4540.0));
    CHECK(q.g_factor == doctest::Approx(-0.11));
    CHECK(q.t1_us == doctest::Approx(47.0));
    CHECK(q.osp_fidelity > 0.9);
    CHECK(q.kappa_ratio == doctest::Approx(0.019));

    // Zeeman splitting follows from the g factor and the field
    const double from_g = std::abs(q.g_factor) * 13996.24493 * constants::kMagneticFieldT;
    CHECK(q.f_zeeman_mhz == doctest::Approx(from_g).epsilon(0.02));
}

TEST_CASE("qubit validation names the offending field") {
    QubitParams q = default_qubit();
    q.f_zeeman_mhz = -1.0;
    CHECK_THROWS_WITH_AS(q.validate(), doctest::Contains("qubit.f_zeeman"),
                         std::invalid_argument);
    q = default_qubit();
    q.osp_fidelity = 1.5;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = default_qubit();
    q.kappa_ratio = -0.1;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("species registry holds the four lattice species at 3 T") {
    const SpeciesRegistry reg = default_gaas_registry();
    CHECK(reg.species.size() == 4);
    CHECK(reg.b_field_t == doctest::Approx(3.0));

    const NuclearSpecies* as = reg.find("75As");
    REQUIRE(as != nullptr);
    CHECK(as->larmor_mhz == doctest::Approx(21.9).epsilon(0.002));
    CHECK(as->abundance == doctest::Approx(1.0));
    CHECK(as->in_estimate);

    const NuclearSpecies* ga69 = reg.find("69Ga");
    REQUIRE(ga69 != nullptr);
    CHECK(ga69->larmor_mhz == doctest::Approx(30.7).epsilon(0.002));
    CHECK(ga69->abundance == doctest::Approx(0.601));

    const NuclearSpecies* ga71 = reg.find("71Ga");
    REQUIRE(ga71 != nullptr);
    CHECK(ga71->larmor_mhz == doctest::Approx(39.0).epsilon(0.002));
    CHECK(ga71->abundance == doctest::Approx(0.399));

    // aluminium sits outside the dot material and is excluded from bath estimates
    const NuclearSpecies* al = reg.find("27Al");
    REQUIRE(al != nullptr);
    CHECK(al->abundance == 0.0);
    CHECK_FALSE(al->in_estimate);

    CHECK(reg.find("nope") == nullptr);
}

TEST_CASE("spectator-line spacing matches the species Larmor difference") {
    const SpeciesRegistry reg = default_gaas_registry();
    CHECK(reg.difference_mhz == doctest::Approx(17.08).epsilon(1e-3));
    // the pinned value agrees with the one recomputed from gamma * B
    CHECK(reg.derived_difference_mhz() == doctest::Approx(reg.difference_mhz).epsilon(0.01));
}

TEST_CASE("larmor frequencies reproduce gamma * B") {
    const SpeciesRegistry reg = default_gaas_registry();
    for (const auto& sp : reg.species)
        CHECK(sp.larmor_mhz ==
              doctest::Approx(sp.gamma_mhz_per_t * reg.b_field_t).epsilon(0.005));
}

TEST_CASE("unit helpers") {
    CHECK(ns_to_us(1500.0) == doctest::Approx(1.5));
    CHECK(us_to_ns(2.5) == doctest::Approx(2500.0));
    // 10 MHz for 100 ns accumulates 2 pi
    CHECK(phase_rad(10.0, 100.0) == doctest::Approx(kTwoPi));
    // T2* of a 2.9 MHz Gaussian bath
    CHECK(us_to_ns(t2star_from_sigma_us(2.90)) == doctest::Approx(77.61347553078501));
    CHECK(sigma_from_t2star_us(t2star_from_sigma_us(0.355)) == doctest::Approx(0.355));
}
