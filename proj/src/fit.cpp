#include "qdsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "qdsim/units.hpp"

namespace qdsim {
namespace {

struct ModelInfo {
    std::vector<std::string> names;
    std::vector<int> log_params; // indices transformed to log space for the solver
};

const ModelInfo& model_info(FitModel m) {
    static const ModelInfo exponential{{"a", "t", "c"}, {1}};
    static const ModelInfo gaussian{{"a", "t", "c"}, {1}};
    static const ModelInfo stretched{{"a", "t", "alpha", "c"}, {1, 2}};
    static const ModelInfo recovery{{"c0", "t"}, {1}};
    static const ModelInfo exp_fringe{{"a", "t", "f", "phi", "c"}, {1}};
    static const ModelInfo gauss_fringe{{"a", "t", "f", "phi", "c"}, {1}};
    static const ModelInfo sinusoid{{"a", "period", "phi", "c"}, {1}};
    static const ModelInfo gauss_peak{{"a", "f0", "sigma"}, {2}};
    switch (m) {
        case FitModel::Exponential: return exponential;
        case FitModel::Gaussian: return gaussian;
        case FitModel::Stretched: return stretched;
        case FitModel::Recovery: return recovery;
        case FitModel::ExpFringe: return exp_fringe;
        case FitModel::GaussFringe: return gauss_fringe;
        case FitModel::Sinusoid: return sinusoid;
        case FitModel::GaussPeak: return gauss_peak;
    }
    throw std::logic_error("unknown fit model");
}

double eval(FitModel m, double t, const double* p) {
    switch (m) {
        case FitModel::Exponential:
            return p[0] * std::exp(-t / p[1]) + p[2];
        case FitModel::Gaussian: {
            const double x = t / p[1];
            return p[0] * std::exp(-x * x) + p[2];
        }
        case FitModel::Stretched:
            return p[0] * std::exp(-std::pow(t / p[1], p[2])) + p[3];
        case FitModel::Recovery:
            return p[0] * (1.0 - std::exp(-t / p[1]));
        case FitModel::ExpFringe:
            return p[0] * std::exp(-t / p[1]) * std::cos(phase_rad(p[2], t) + p[3]) + p[4];
        case FitModel::GaussFringe: {
            const double x = t / p[1];
            return p[0] * std::exp(-x * x) * std::cos(phase_rad(p[2], t) + p[3]) + p[4];
        }
        case FitModel::Sinusoid:
            return p[0] * std::cos(kTwoPi * t / p[1] + p[2]) + p[3];
        case FitModel::GaussPeak: {
            const double x = (t - p[1]) / p[2];
            return p[0] * std::exp(-0.5 * x * x);
        }
    }
    return 0.0;
}

// external <-> solver coordinates
std::vector<double> to_internal(const ModelInfo& info, std::vector<double> p) {
    for (int idx : info.log_params) {
        const auto j = static_cast<std::size_t>(idx);
        p[j] = std::log(std::max(p[j], 1e-300));
    }
    return p;
}

std::vector<double> to_external(const ModelInfo& info, std::vector<double> q) {
    for (int idx : info.log_params) {
        const auto j = static_cast<std::size_t>(idx);
        q[j] = std::exp(q[j]);
    }
    return q;
}

double ssr_of(FitModel m, const ModelInfo& info, const std::vector<double>& t,
              const std::vector<double>& y, const std::vector<double>& q) {
    const std::vector<double> p = to_external(info, q);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - eval(m, t[i], p.data());
        s += r * r;
    }
    return s;
}

struct LmOutcome {
    std::vector<double> q;
    double ssr = std::numeric_limits<double>::infinity();
    bool converged = false;
};

LmOutcome levenberg_marquardt(FitModel m, const ModelInfo& info,
                              const std::vector<double>& t, const std::vector<double>& y,
                              std::vector<double> q) {
    const std::size_t n = t.size();
    const std::size_t k = q.size();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Eigen::VectorXd resid(static_cast<Eigen::Index>(n));

    LmOutcome out;
    out.q = q;
    out.ssr = ssr_of(m, info, t, y, q);
    if (!std::isfinite(out.ssr)) return out;

    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        const std::vector<double> p = to_external(info, q);
        for (std::size_t i = 0; i < n; ++i)
            resid(static_cast<Eigen::Index>(i)) = y[i] - eval(m, t[i], p.data());

        for (std::size_t j = 0; j < k; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(q[j]));
            std::vector<double> qp = q, qm = q;
            qp[j] += h;
            qm[j] -= h;
            const std::vector<double> pp = to_external(info, qp);
            const std::vector<double> pm = to_external(info, qm);
            for (std::size_t i = 0; i < n; ++i)
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (eval(m, t[i], pp.data()) - eval(m, t[i], pm.data())) / (2.0 * h);
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * resid;
        if (jtr.lpNorm<Eigen::Infinity>() < 1e-12 * (1.0 + out.ssr)) {
            out.converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (std::size_t j = 0; j < k; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                a(jj, jj) += lambda * std::max(jtj(jj, jj), 1e-12);
            }
            const Eigen::VectorXd step = a.ldlt().solve(jtr);
            std::vector<double> q_try = q;
            for (std::size_t j = 0; j < k; ++j)
                q_try[j] += step(static_cast<Eigen::Index>(j));
            const double ssr_try = ssr_of(m, info, t, y, q_try);
            if (std::isfinite(ssr_try) && ssr_try <= out.ssr) {
                const double drop = out.ssr - ssr_try;
                q = q_try;
                out.q = q;
                const double prev = out.ssr;
                out.ssr = ssr_try;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (drop < 1e-12 * (1.0 + prev) ||
                    step.lpNorm<Eigen::Infinity>() < 1e-10) {
                    out.converged = true;
                }
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (!accepted || out.converged) {
            if (!accepted && lambda > 1e12) out.converged = true; // stuck at a minimum
            break;
        }
    }
    return out;
}

// crude fringe-frequency guess from sign changes of the centered data
double crossing_frequency_mhz(const std::vector<double>& t, const std::vector<double>& y) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    int crossings = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if ((y[i] - mean) * (y[i - 1] - mean) < 0.0) ++crossings;
    const double span = t.back() - t.front();
    if (span <= 0.0 || crossings == 0) return 0.0;
    return 500.0 * static_cast<double>(crossings) / span; // crossings/2 periods over span
}

std::vector<std::vector<double>> default_starts(FitModel m, const std::vector<double>& t,
                                                const std::vector<double>& y) {
    const double y_min = *std::min_element(y.begin(), y.end());
    const double y_max = *std::max_element(y.begin(), y.end());
    const double t_min = *std::min_element(t.begin(), t.end());
    const double t_max = *std::max_element(t.begin(), t.end());
    const double span = std::max(t_max - t_min, 1e-9);
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(y.size());

    std::vector<double> t_grid;
    for (int i = 0; i < 8; ++i)
        t_grid.push_back(span / 30.0 * std::pow(90.0, i / 7.0)); // span/30 .. 3*span

    std::vector<std::vector<double>> starts;
    switch (m) {
        case FitModel::Exponential:
        case FitModel::Gaussian:
            for (double tc : t_grid) starts.push_back({y_max - y_min, tc, y_min});
            break;
        case FitModel::Stretched:
            for (double tc : t_grid)
                for (double alpha : {0.8, 1.5})
                    starts.push_back({y_max - y_min, tc, alpha, y_min});
            break;
        case FitModel::Recovery:
            for (double tc : t_grid) starts.push_back({y.back(), tc});
            break;
        case FitModel::ExpFringe:
        case FitModel::GaussFringe: {
            const double f0 = crossing_frequency_mhz(t, y);
            for (double tc : t_grid)
                for (double f : {f0, 0.5 * f0, 2.0 * f0})
                    if (f > 0.0)
                        starts.push_back({0.5 * (y_max - y_min), tc, f, 0.0, y_mean});
            if (starts.empty())
                for (double tc : t_grid)
                    starts.push_back({0.5 * (y_max - y_min), tc, 1.0 / span * 1e3, 0.0,
                                      y_mean});
            break;
        }
        case FitModel::Sinusoid:
            for (double frac : {0.25, 0.5, 1.0, 2.0})
                for (double phi : {0.0, 1.5707963267948966})
                    starts.push_back({0.5 * (y_max - y_min), frac * span, phi, y_mean});
            break;
        case FitModel::GaussPeak: {
            const auto imax = static_cast<std::size_t>(
                std::max_element(y.begin(), y.end()) - y.begin());
            // width guess from the second moment of the magnitude around the peak
            double w2 = 0.0, norm = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const double d = t[i] - t[imax];
                w2 += y[i] * d * d;
                norm += y[i];
            }
            const double sigma0 =
                norm > 0.0 ? std::sqrt(std::max(w2 / norm, 1e-12)) : span / 10.0;
            starts.push_back({y_max, t[imax], sigma0});
            starts.push_back({y_max, t[imax], 0.3 * sigma0});
            break;
        }
    }
    return starts;
}

} // namespace

double FitResult::param(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return params[i];
    throw std::invalid_argument("unknown fit parameter: " + name);
}

double FitResult::error(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return errors[i];
    throw std::invalid_argument("unknown fit parameter: " + name);
}

const std::vector<std::string>& model_param_names(FitModel model) {
    return model_info(model).names;
}

double eval_model(FitModel model, double t, const std::vector<double>& params) {
    if (params.size() != model_info(model).names.size())
        throw std::invalid_argument("parameter count does not match the model");
    return eval(model, t, params.data());
}

FitResult fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                    FitModel model, const std::vector<double>& init) {
    const ModelInfo& info = model_info(model);
    const std::size_t k = info.names.size();
    if (t.size() != y.size()) throw std::invalid_argument("fit data size mismatch");
    if (t.size() < 5 || t.size() <= k)
        throw std::invalid_argument("fit requires at least 5 points");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("fit data must be finite");
    if (!init.empty() && init.size() != k)
        throw std::invalid_argument("initial guess does not match the model");

    std::vector<std::vector<double>> starts;
    if (!init.empty())
        starts.push_back(init);
    else
        starts = default_starts(model, t, y);

    LmOutcome best;
    for (const auto& start : starts) {
        const LmOutcome run = levenberg_marquardt(model, info, t, y, to_internal(info, start));
        if (best.q.empty() || run.ssr < best.ssr ||
            (run.ssr == best.ssr && run.converged && !best.converged))
            best = run;
    }

    FitResult res;
    res.model = model;
    res.names = info.names;
    res.converged = best.converged;
    res.params = to_external(info, best.q);
    res.residual_norm = std::sqrt(std::max(best.ssr, 0.0));

    // 1-sigma errors from the residual-scaled normal matrix, mapped back out of log space
    res.errors.assign(k, 0.0);
    const std::size_t n = t.size();
    if (n > k && std::isfinite(best.ssr)) {
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(best.q[j]));
            std::vector<double> qp = best.q, qm = best.q;
            qp[j] += h;
            qm[j] -= h;
            const std::vector<double> pp = to_external(info, qp);
            const std::vector<double> pm = to_external(info, qm);
            for (std::size_t i = 0; i < n; ++i)
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (eval(model, t[i], pp.data()) - eval(model, t[i], pm.data())) /
                    (2.0 * h);
        }
        const double sigma2 = best.ssr / static_cast<double>(n - k);
        const Eigen::MatrixXd cov =
            sigma2 * (jac.transpose() * jac)
                         .completeOrthogonalDecomposition()
                         .pseudoInverse();
        for (std::size_t j = 0; j < k; ++j) {
            double err = std::sqrt(std::max(cov(static_cast<Eigen::Index>(j),
                                                static_cast<Eigen::Index>(j)),
                                            0.0));
            if (std::find(info.log_params.begin(), info.log_params.end(),
                          static_cast<int>(j)) != info.log_params.end())
                err *= res.params[j]; // d p / d log p = p
            res.errors[j] = err;
        }
    }
    return res;
}

PowerLawFit fit_powerlaw(const std::vector<double>& n, const std::vector<double>& t2) {
    if (n.size() != t2.size()) throw std::invalid_argument("power-law data size mismatch");
    if (n.size() < 2) throw std::invalid_argument("power-law fit requires at least 2 points");
    const std::size_t m = n.size();
    double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n[i] > 0.0) || !(t2[i] > 0.0))
            throw std::invalid_argument("power-law fit requires positive data");
        const double x = std::log(n[i]);
        const double z = std::log(t2[i]);
        sx += x;
        sz += z;
        sxx += x * x;
        sxz += x * z;
    }
    const double dm = static_cast<double>(m);
    const double denom = dm * sxx - sx * sx;
    if (denom <= 0.0)
        throw std::invalid_argument("power-law fit requires at least two distinct n");
    PowerLawFit out;
    out.gamma = (dm * sxz - sx * sz) / denom;
    const double intercept = (sz - out.gamma * sx) / dm;
    out.amplitude = std::exp(intercept);
    if (m > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = std::log(t2[i]) - (intercept + out.gamma * std::log(n[i]));
            ssr += r * r;
        }
        out.gamma_err = std::sqrt(ssr / static_cast<double>(m - 2) * dm / denom);
    }
    return out;
}

} // namespace qdsim
