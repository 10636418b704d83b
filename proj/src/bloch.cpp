#include "qdsim/bloch.hpp"

#include <cmath>
#include <limits>

#include "qdsim/quadrature.hpp"
#include "qdsim/units.hpp"

namespace qdsim {

namespace {

constexpr double kMaxStepNs = 0.1;

inline bool t1_active(double t1_us) {
    return t1_us > 0.0 && std::isfinite(t1_us);
}

inline void mat_mul3(const double a[3][3], const double b[3][3], double out[3][3]) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
}

// Rodrigues rotation of v about unit axis n by angle theta
inline BlochVector rotate(const BlochVector& v, const double n[3], double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double dot = n[0] * v.x + n[1] * v.y + n[2] * v.z;
    const double cx = n[1] * v.z - n[2] * v.y;
    const double cy = n[2] * v.x - n[0] * v.z;
    const double cz = n[0] * v.y - n[1] * v.x;
    BlochVector r;
    r.x = v.x * c + cx * s + n[0] * dot * (1.0 - c);
    r.y = v.y * c + cy * s + n[1] * dot * (1.0 - c);
    r.z = v.z * c + cz * s + n[2] * dot * (1.0 - c);
    return r;
}

} // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double rabi_lineshape(double t_ns, double delta_mhz, double omega_mhz) {
    const double w2 = omega_mhz * omega_mhz;
    const double g2 = w2 + delta_mhz * delta_mhz;
    if (g2 <= 0.0) return 0.0;
    const double s = std::sin(0.5 * phase_rad(std::sqrt(g2), t_ns));
    return w2 / g2 * s * s;
}

BlochVector propagate(BlochVector s, const DriveSegment& seg, double t1_us) {
    const double dur = seg.duration_ns;
    if (dur <= 0.0) return s;

    const double gen = std::hypot(seg.rabi_mhz, seg.detuning_mhz);
    const bool relax = t1_active(t1_us);
    const bool flip = seg.flip_rate_mhz > 0.0;

    // per-ns decay rates; depolarization acts isotropically, T1 relaxes z toward the
    // (unpolarized) thermal state and carries the 1/(2 T1) transverse counterpart
    const double g_flip = flip ? kTwoPi * seg.flip_rate_mhz * 1e-3 : 0.0;
    const double g_long = relax ? 1.0 / us_to_ns(t1_us) : 0.0;

    if (seg.rabi_mhz <= 0.0) {
        // free evolution: z-rotation commutes with the axial damping, so one step is exact
        const double fz = std::exp(-(g_flip + g_long) * dur);
        const double ft = std::exp(-(g_flip + 0.5 * g_long) * dur);
        const double ang = phase_rad(seg.detuning_mhz, dur);
        const double c = std::cos(ang);
        const double sn = std::sin(ang);
        BlochVector r;
        r.x = (s.x * c - s.y * sn) * ft;
        r.y = (s.x * sn + s.y * c) * ft;
        r.z = s.z * fz;
        return r;
    }

    const double n[3] = {seg.rabi_mhz * std::cos(seg.phase_rad) / gen,
                         seg.rabi_mhz * std::sin(seg.phase_rad) / gen,
                         seg.detuning_mhz / gen};

    if (!relax && !flip) return rotate(s, n, phase_rad(gen, dur));

    // driven segment with decay: split into rotation + damping steps
    const int steps = static_cast<int>(std::ceil(dur / kMaxStepNs));
    const double dt = dur / steps;
    const double theta = phase_rad(gen, dt);
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    // per-step rotation matrix, built once
    double R[3][3];
    {
        const double omc = 1.0 - c;
        R[0][0] = c + n[0] * n[0] * omc;
        R[0][1] = n[0] * n[1] * omc - n[2] * sn;
        R[0][2] = n[0] * n[2] * omc + n[1] * sn;
        R[1][0] = n[1] * n[0] * omc + n[2] * sn;
        R[1][1] = c + n[1] * n[1] * omc;
        R[1][2] = n[1] * n[2] * omc - n[0] * sn;
        R[2][0] = n[2] * n[0] * omc - n[1] * sn;
        R[2][1] = n[2] * n[1] * omc + n[0] * sn;
        R[2][2] = c + n[2] * n[2] * omc;
    }
    const double ft = std::exp(-(g_flip + 0.5 * g_long) * dt);
    const double fz = std::exp(-(g_flip + g_long) * dt);

    // one step is damping after rotation; the whole segment is that matrix raised to
    // the step count, done by square-and-multiply so long segments stay cheap
    double M[3][3];
    for (int j = 0; j < 3; ++j) {
        M[0][j] = ft * R[0][j];
        M[1][j] = ft * R[1][j];
        M[2][j] = fz * R[2][j];
    }
    double acc[3][3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    double tmp[3][3];
    unsigned int n_left = static_cast<unsigned int>(steps);
    while (n_left > 0) {
        if (n_left & 1u) {
            mat_mul3(acc, M, tmp);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc[i][j] = tmp[i][j];
        }
        n_left >>= 1;
        if (n_left == 0) break;
        mat_mul3(M, M, tmp);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] = tmp[i][j];
    }
    BlochVector r;
    r.x = acc[0][0] * s.x + acc[0][1] * s.y + acc[0][2] * s.z;
    r.y = acc[1][0] * s.x + acc[1][1] * s.y + acc[1][2] * s.z;
    r.z = acc[2][0] * s.x + acc[2][1] * s.y + acc[2][2] * s.z;
    return r;
}

double averaged_chevron(double t_ns, double delta_mhz, double omega_mhz,
                        double sigma_oh_mhz, double delta_ac_mhz) {
    const double d0 = delta_mhz - delta_ac_mhz;
    if (sigma_oh_mhz <= 0.0) return rabi_lineshape(t_ns, d0, omega_mhz);

    const auto& rule = gauss_hermite_rule(chevron_node_count(t_ns, sigma_oh_mhz));
    const double scale = std::sqrt(2.0) * sigma_oh_mhz;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        if (rule.w[i] == 0.0) continue;
        acc += rule.w[i] * rabi_lineshape(t_ns, d0 + scale * rule.x[i], omega_mhz);
    }
    return acc / std::sqrt(M_PI);
}

} // namespace qdsim
