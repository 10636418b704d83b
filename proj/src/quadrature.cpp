#include "qdsim/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

#include "qdsim/units.hpp"

namespace qdsim {

namespace {

GaussHermiteRule build_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be >= 1");

    // Hermite polynomials are orthogonal with a zero-diagonal Jacobi matrix and
    // off-diagonal entries sqrt(k/2); eigenvalues are the nodes
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite_rule: eigenvalue iteration failed");

    GaussHermiteRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double p0 = std::pow(M_PI, -0.25);
    for (int i = 0; i < n; ++i) {
        const double xi = solver.eigenvalues()[i];
        rule.x[i] = xi;
        // weight via the orthonormal three-term recurrence: w = 1 / sum_k p_k(x)^2.
        // Extreme nodes can overflow the sum; their true weights underflow to zero,
        // so mapping inf -> 0 loses nothing.
        double pm = 0.0, pk = p0, sum = p0 * p0;
        for (int k = 1; k < n; ++k) {
            const double pn = xi * std::sqrt(2.0 / k) * pk - std::sqrt((k - 1.0) / k) * pm;
            pm = pk;
            pk = pn;
            sum += pn * pn;
        }
        rule.w[i] = std::isfinite(sum) ? 1.0 / sum : 0.0;
    }
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite_rule(int n) {
    static std::mutex mtx;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

int chevron_node_count(double t_ns, double sigma_mhz) {
    // the integrand oscillates in x = delta / (sqrt(2) sigma) with local frequency
    // up to 2*pi*t*sqrt(2)*sigma; an n-node rule resolves frequencies up to about
    // 2*sqrt(2n) across its node span
    const double freq = 1.3 * kTwoPi * ns_to_us(t_ns) * std::sqrt(2.0) * sigma_mhz;
    for (int n : {64, 256, 1024}) {
        if (2.0 * std::sqrt(2.0 * n) >= freq) return n;
    }
    return 1024;
}

} // namespace qdsim
