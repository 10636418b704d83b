#include "qdsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace qdsim {
namespace {

// the FFTW planner is not thread-safe; execution of a private plan is
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

SpectrumPeak fft_sigma(const std::vector<double>& tau_ns,
                       const std::vector<double>& visibility) {
    const std::size_t n = tau_ns.size();
    if (visibility.size() != n) throw std::invalid_argument("fft_sigma data size mismatch");
    if (n < 8) throw std::invalid_argument("fft_sigma requires at least 8 points");
    const double dt = tau_ns[1] - tau_ns[0];
    if (!(dt > 0.0)) throw std::invalid_argument("fft_sigma requires an increasing grid");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs(tau_ns[i] - tau_ns[i - 1] - dt) > 1e-6 * dt + 1e-12)
            throw std::invalid_argument("fft_sigma requires a uniform sweep grid");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(visibility[i]))
            throw std::invalid_argument("fft_sigma requires finite visibilities");

    // even extension [C(tau_max) ... C(0) ... C(tau_max)] removes the one-sidedness of
    // the record; 8x zero padding refines the peak sampling
    const std::size_t n_ext = 2 * n - 1;
    const std::size_t n_fft = 8 * n_ext;
    std::vector<double> buf(n_fft, 0.0);
    for (std::size_t i = 0; i < n_ext; ++i) {
        const std::size_t center = n - 1;
        const std::size_t src = i >= center ? i - center : center - i;
        buf[i] = visibility[src];
    }

    const std::size_t n_half = n_fft / 2 + 1;
    std::vector<double> re(n_half), im(n_half);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_complex* out = fftw_alloc_complex(n_half);
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), buf.data(), out,
                                              FFTW_ESTIMATE);
        fftw_execute(plan);
        for (std::size_t k = 0; k < n_half; ++k) {
            re[k] = out[k][0];
            im[k] = out[k][1];
        }
        fftw_destroy_plan(plan);
        fftw_free(out);
    }

    SpectrumPeak peak;
    peak.f_mhz.resize(n_half);
    peak.magnitude.resize(n_half);
    for (std::size_t k = 0; k < n_half; ++k) {
        peak.f_mhz[k] = static_cast<double>(k) * 1000.0 / (static_cast<double>(n_fft) * dt);
        peak.magnitude[k] = std::hypot(re[k], im[k]);
    }

    const auto imax = static_cast<std::size_t>(
        std::max_element(peak.magnitude.begin(), peak.magnitude.end()) -
        peak.magnitude.begin());

    // seed the Gaussian from a log-parabola through the peak and its neighbors
    const double a0 = peak.magnitude[imax];
    double f0 = peak.f_mhz[imax];
    double sigma0 = peak.f_mhz[std::min(n_half - 1, imax + std::max<std::size_t>(n / 4, 2))] -
                    peak.f_mhz[imax];
    if (imax > 0 && imax + 1 < n_half && a0 > 0.0) {
        const double lm = std::log(std::max(peak.magnitude[imax - 1], 1e-300));
        const double l0 = std::log(a0);
        const double lp = std::log(std::max(peak.magnitude[imax + 1], 1e-300));
        const double curv = lm - 2.0 * l0 + lp;
        if (curv < 0.0) {
            const double df = peak.f_mhz[1] - peak.f_mhz[0];
            f0 = peak.f_mhz[imax] + 0.5 * df * (lm - lp) / curv;
            sigma0 = df / std::sqrt(-curv);
        }
    }
    sigma0 = std::max(sigma0, 1e-6);

    peak.peak_fit = fit_decay(peak.f_mhz, peak.magnitude, FitModel::GaussPeak,
                              {a0, f0, sigma0});
    peak.sigma_oh_mhz = std::fabs(peak.peak_fit.param("sigma"));
    peak.f_center_mhz = peak.peak_fit.param("f0");
    return peak;
}

} // namespace qdsim
