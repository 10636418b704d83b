#include "qdsim/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdsim/units.hpp"

namespace qdsim {

void BathModel::validate() const {
    if (!(sigma_static_mhz >= 0.0))
        throw std::invalid_argument("bath.sigma_static must be non-negative");
    if (!(sigma_dyn_mhz >= 0.0))
        throw std::invalid_argument("bath.sigma_dyn must be non-negative");
    if (!(tau_corr_us > 0.0))
        throw std::invalid_argument("bath.tau_corr must be positive");
    if (!(relax_time_us > 0.0))
        throw std::invalid_argument("bath.relax_time must be positive");
    if (!(sigma_warm_mhz >= 0.0))
        throw std::invalid_argument("bath.sigma_warm must be non-negative");
    if (!(a_c_mhz > 0.0))
        throw std::invalid_argument("bath.a_c must be positive");
}

double sample_detuning(double sigma_mhz, Rng& rng) {
    if (sigma_mhz <= 0.0) return 0.0;
    return sigma_mhz * rng.gauss();
}

double ou_step(double delta_mhz, const BathModel& model, double dt_us, Rng& rng) {
    if (dt_us <= 0.0 || model.sigma_dyn_mhz <= 0.0) return delta_mhz;
    const double f = std::exp(-dt_us / model.tau_corr_us);
    const double s = model.sigma_dyn_mhz * std::sqrt(1.0 - f * f);
    return delta_mhz * f + s * rng.gauss();
}

OuDelay ou_delay(double delta_mhz, const BathModel& model, double t_us, Rng& rng) {
    if (t_us <= 0.0) return {delta_mhz, 0.0};
    const double sig2 = model.sigma_dyn_mhz * model.sigma_dyn_mhz;
    if (sig2 <= 0.0) return {delta_mhz, delta_mhz * t_us};

    const double theta = 1.0 / model.tau_corr_us;
    const double a = theta * t_us;
    const double e1 = std::exp(-a);
    const double e2 = e1 * e1;

    // conditional moments of (delta_end, integral) given the entry value
    const double m_d = delta_mhz * e1;
    const double v_d = sig2 * (1.0 - e2);
    const double m_i = delta_mhz * (1.0 - e1) / theta;
    // 2a - 3 + 4 e^-a - e^-2a cancels catastrophically for small a; switch to its series
    double bracket;
    if (a < 0.02) {
        bracket = a * a * a * (2.0 / 3.0 + a * (-0.5 + a * (7.0 / 30.0)));
    } else {
        bracket = 2.0 * a - 3.0 + 4.0 * e1 - e2;
    }
    const double v_i = sig2 / (theta * theta) * bracket;
    const double c_id = sig2 / theta * (1.0 - e1) * (1.0 - e1);

    const double g1 = rng.gauss();
    const double g2 = rng.gauss();
    const double s_d = std::sqrt(v_d);
    const double delta_end = m_d + s_d * g1;
    const double cond_var = std::max(v_i - c_id * c_id / v_d, 0.0);
    const double integral = m_i + (c_id / v_d) * (delta_end - m_d) + std::sqrt(cond_var) * g2;
    return {delta_end, integral};
}

double rewarm_sigma(double sigma_now_mhz, double t_wait_us, const BathModel& model) {
    if (t_wait_us <= 0.0) return sigma_now_mhz;
    if (sigma_now_mhz <= 0.0) return model.sigma_warm_mhz;
    // the equivalent dephasing time (proportional to 1/sigma) relaxes exponentially
    // toward its warm value, matching the convention used to fit re-warming data
    const double t2_now = t2star_from_sigma_us(sigma_now_mhz);
    const double t2_warm = t2star_from_sigma_us(model.sigma_warm_mhz);
    const double f = std::exp(-t_wait_us / model.relax_time_us);
    const double t2 = t2_warm + (t2_now - t2_warm) * f;
    return sigma_from_t2star_us(t2);
}

} // namespace qdsim
