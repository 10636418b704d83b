#pragma once

// Spectral estimate of the detuning spread from a Ramsey visibility trace: the trace is
// extended symmetrically about tau = 0, zero-padded, Fourier transformed, and the
// magnitude peak is fitted with a Gaussian. For a Gaussian envelope exp(-(tau/T2*)^2)
// the spectral standard deviation equals the detuning spread sqrt(2)/(2 pi T2*)
// exactly, so the fitted width is returned as sigma directly; a serrodyne modulation
// shifts the peak without broadening it.

#include <vector>

#include "qdsim/fit.hpp"

namespace qdsim {

struct SpectrumPeak {
    double sigma_oh_mhz = 0.0;   // fitted spectral standard deviation
    double f_center_mhz = 0.0;   // fitted peak position (0 without modulation)
    FitResult peak_fit;          // underlying Gaussian peak fit
    std::vector<double> f_mhz;   // one-sided frequency grid of the magnitude spectrum
    std::vector<double> magnitude;
};

// tau grid in ns, uniformly spaced (rejected otherwise); at least 8 points
SpectrumPeak fft_sigma(const std::vector<double>& tau_ns,
                       const std::vector<double>& visibility);

} // namespace qdsim
