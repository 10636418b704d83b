#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdsim/centralspin.hpp"

using namespace qdsim;

namespace {

CentralSpinSystem one_nucleus(double omega_n, double a_col, double a_nc, double rabi,
                              double detuning) {
    CentralSpinSystem sys;
    sys.n_nuclei = 1;
    sys.omega_n_mhz = {omega_n};
    sys.a_col_mhz = {a_col};
    sys.a_nc_mhz = {a_nc};
    sys.rabi_mhz = rabi;
    sys.detuning_mhz = detuning;
    return sys;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

} // namespace

TEST_CASE("hamiltonian is real symmetric and has the right dimension") {
    CentralSpinSystem sys;
    sys.n_nuclei = 3;
    sys.omega_n_mhz = {21.9, 30.7, 39.0};
    sys.a_col_mhz = {1.3, -0.7, 0.4};
    sys.a_nc_mhz = {0.5, 0.8, 0.2};
    sys.rabi_mhz = 17.0;
    sys.detuning_mhz = 2.0;
    CHECK(sys.dim() == 16);
    const Eigen::MatrixXd h = build_hamiltonian(sys);
    REQUIRE(h.rows() == 16);
    REQUIRE(h.cols() == 16);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("undriven single-nucleus spectrum matches the closed form") {
    // with the drive off the Hamiltonian block-diagonalizes by electron projection m:
    // E = m delta +- sqrt((omega + m a_col)^2 + (m a_nc)^2) / 2
    const double omega = 30.0, a_col = 4.0, a_nc = 1.0, delta = 6.0;
    const CentralSpinSystem sys = one_nucleus(omega, a_col, a_nc, 0.0, delta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(sys));
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(got.begin(), got.end());

    const double up = 0.5 * std::hypot(omega + 0.5 * a_col, 0.5 * a_nc);
    const double dn = 0.5 * std::hypot(omega - 0.5 * a_col, 0.5 * a_nc);
    std::vector<double> expect = {0.5 * delta + up, 0.5 * delta - up,
                                  -0.5 * delta + dn, -0.5 * delta - dn};
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i)
        CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("evolution is unitary, composable, and trivial at t = 0") {
    const CentralSpinSystem sys = one_nucleus(21.9, 1.0, 0.7, 17.0, 2.0);
    const Eigen::VectorXcd psi0 = basis_state(sys, 0);
    const Eigen::VectorXcd same = evolve(psi0, sys, 0.0);
    CHECK((same - psi0).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::VectorXcd a = evolve(psi0, sys, 37.0);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-13));

    const Eigen::VectorXcd two_step = evolve(evolve(psi0, sys, 17.0), sys, 20.0);
    CHECK((a - two_step).cwiseAbs().maxCoeff() < 1e-12);

    // energy is conserved along the evolution
    const Eigen::MatrixXd h = build_hamiltonian(sys);
    const std::complex<double> e0 = (psi0.adjoint() * (h * psi0))(0);
    const std::complex<double> e1 = (a.adjoint() * (h * a))(0);
    CHECK(e1.real() == doctest::Approx(e0.real()).epsilon(1e-12));
}

TEST_CASE("basis state bookkeeping") {
    CentralSpinSystem sys;
    sys.n_nuclei = 2;
    sys.omega_n_mhz = {21.9, 39.0};
    sys.a_col_mhz = {0.0, 0.0};
    sys.a_nc_mhz = {0.5, 0.5};
    const Eigen::VectorXcd s = basis_state(sys, 0b01); // nucleus 0 flipped down
    CHECK(nuclear_iz(s, sys, 0) == doctest::Approx(-0.5));
    CHECK(nuclear_iz(s, sys, 1) == doctest::Approx(0.5));
    CHECK(total_iz(s, sys) == doctest::Approx(0.0));
    const Eigen::VectorXcd d = basis_state(sys, 0b10, true); // electron down
    CHECK(nuclear_iz(d, sys, 1) == doctest::Approx(-0.5));
    CHECK(d.norm() == doctest::Approx(1.0));
}

TEST_CASE("collinear-only coupling conserves the nuclear polarization") {
    CentralSpinSystem sys = one_nucleus(21.9, 2.0, 0.0, 21.9, 0.0);
    const Eigen::VectorXcd psi0 = basis_state(sys, 0);
    const double before = total_iz(psi0, sys);
    for (double t : {10.0, 125.0, 1000.0}) {
        const Eigen::VectorXcd psi = evolve(psi0, sys, t);
        CHECK(std::abs(total_iz(psi, sys) - before) < 1e-9);
    }
}

TEST_CASE("polarization transfer peaks at the dressed resonance") {
    CentralSpinSystem sys = one_nucleus(21.9, 0.0, 1.0, 0.0, 0.5);
    const std::vector<double> grid = linspace(15.0, 30.0, 61);
    const std::vector<TransferPoint> scan = hh_scan(sys, grid, 125.0);
    REQUIRE(scan.size() == grid.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (std::abs(scan[i].delta_iz) > std::abs(scan[best].delta_iz)) best = i;
    CHECK(std::abs(scan[best].omega_mhz - 21.9) < 1.0);
    // the peak carries a real transfer, the far tails do not
    CHECK(std::abs(scan[best].delta_iz) > 10.0 * std::abs(scan.front().delta_iz));
}

TEST_CASE("transfer direction follows the sign of the detuning") {
    const std::vector<double> grid = linspace(20.0, 24.0, 17);
    CentralSpinSystem plus = one_nucleus(21.9, 0.0, 1.0, 0.0, 2.0);
    CentralSpinSystem minus = one_nucleus(21.9, 0.0, 1.0, 0.0, -2.0);
    const auto scan_p = hh_scan(plus, grid, 125.0);
    const auto scan_m = hh_scan(minus, grid, 125.0);
    double peak_p = 0.0, peak_m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(scan_p[i].delta_iz) > std::abs(peak_p)) peak_p = scan_p[i].delta_iz;
        if (std::abs(scan_m[i].delta_iz) > std::abs(peak_m)) peak_m = scan_m[i].delta_iz;
    }
    CHECK(peak_p * peak_m < 0.0);
    CHECK(std::abs(std::abs(peak_p) - std::abs(peak_m)) <
          0.2 * (std::abs(peak_p) + std::abs(peak_m)));
}

TEST_CASE("two species give two resolved transfer lines") {
    CentralSpinSystem sys;
    sys.n_nuclei = 2;
    sys.omega_n_mhz = {21.9, 39.0};
    sys.a_col_mhz = {0.0, 0.0};
    sys.a_nc_mhz = {0.5, 0.5};
    sys.detuning_mhz = 2.0;
    const std::vector<double> grid = linspace(10.0, 45.0, 141);
    const auto scan = hh_scan(sys, grid, 125.0);

    // local maxima of |transfer| above a tenth of the global peak
    double peak = 0.0;
    for (const auto& p : scan) peak = std::max(peak, std::abs(p.delta_iz));
    std::vector<double> lines;
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
        const double v = std::abs(scan[i].delta_iz);
        if (v > 0.1 * peak && v >= std::abs(scan[i - 1].delta_iz) &&
            v >= std::abs(scan[i + 1].delta_iz))
            lines.push_back(scan[i].omega_mhz);
    }
    REQUIRE(lines.size() >= 2);
    const bool near_as =
        std::any_of(lines.begin(), lines.end(),
                    [](double w) { return std::abs(w - 21.9) < 1.0; });
    const bool near_ga =
        std::any_of(lines.begin(), lines.end(),
                    [](double w) { return std::abs(w - 39.0) < 1.0; });
    CHECK(near_as);
    CHECK(near_ga);
}

TEST_CASE("system validation") {
    CentralSpinSystem sys;
    sys.n_nuclei = 9;
    CHECK_THROWS_WITH_AS(sys.validate(), doctest::Contains("n_nuclei"),
                         std::invalid_argument);
    CentralSpinSystem mismatch = one_nucleus(21.9, 0.0, 0.5, 0.0, 0.0);
    mismatch.a_nc_mhz = {0.5, 0.5};
    CHECK_THROWS_AS(mismatch.validate(), std::invalid_argument);
}
