#pragma once

// Least-squares fitting for decay envelopes, fringes, and spectral peaks. The solver is
// Levenberg-Marquardt with a numeric Jacobian, multi-started from a coarse grid of time
// constants; scale parameters are optimized in log space so they stay positive.

#include <string>
#include <vector>

namespace qdsim {

enum class FitModel {
    Exponential, // a exp(-t/T) + c
    Gaussian,    // a exp(-(t/T)^2) + c
    Stretched,   // a exp(-(t/T)^alpha) + c
    Recovery,    // C0 (1 - exp(-t/T))
    ExpFringe,   // a exp(-t/T) cos(2 pi f t + phi) + c, t in ns and f in MHz
    GaussFringe, // a exp(-(t/T)^2) cos(2 pi f t + phi) + c
    Sinusoid,    // a cos(2 pi t / P + phi) + c
    GaussPeak,   // a exp(-(f - f0)^2 / (2 sigma^2))
};

struct FitResult {
    FitModel model = FitModel::Exponential;
    bool converged = false;
    std::vector<double> params;
    std::vector<double> errors; // 1-sigma, from the residual-scaled normal matrix
    std::vector<std::string> names;
    double residual_norm = 0.0; // Euclidean norm of the residual vector

    double param(const std::string& name) const;  // throws for unknown name
    double error(const std::string& name) const;
};

const std::vector<std::string>& model_param_names(FitModel model);
double eval_model(FitModel model, double t, const std::vector<double>& params);

// Fit y(t). When init is non-empty it must carry one value per model parameter and
// becomes the single start; otherwise starts are generated from the data. Returns the
// best run; converged=false flags that no start met the tolerance (best-effort
// parameters are still populated). Throws for fewer than 5 points, mismatched or
// non-finite input.
FitResult fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                    FitModel model, const std::vector<double>& init = {});

struct PowerLawFit {
    double gamma = 0.0;
    double gamma_err = 0.0;
    double amplitude = 0.0; // prefactor c in T2 = c * n^gamma
};

// log-log linear regression of t2 against n; needs at least 2 points, all positive
PowerLawFit fit_powerlaw(const std::vector<double>& n, const std::vector<double>& t2);

} // namespace qdsim
