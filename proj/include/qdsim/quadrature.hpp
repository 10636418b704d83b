#pragma once

// Gauss-Hermite rules for Gaussian ensemble averages, physicists' convention:
// integral of exp(-x^2) f(x) dx ~ sum w_i f(x_i).

#include <vector>

namespace qdsim {

struct GaussHermiteRule {
    std::vector<double> x;
    std::vector<double> w;
};

// nodes from the Jacobi-matrix eigenvalues, weights from the normalized recurrence;
// rules are cached, thread-safe
const GaussHermiteRule& gauss_hermite_rule(int n);

// smallest rule out of {64, 256, 1024} that resolves the detuning-averaged Rabi
// phase 2*pi*sqrt(omega^2+delta^2)*t across the Gaussian, with a 1.3x safety margin
int chevron_node_count(double t_ns, double sigma_mhz);

} // namespace qdsim
