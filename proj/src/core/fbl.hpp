#pragma once

#include <numbers>

namespace noma::mc {
struct SinrSampleSet;
struct MeanEstimate;
}  // namespace noma::mc

namespace noma::fbl {

// Supremum of the channel dispersion, 1/(ln 2)^2.
inline constexpr double v_bar = 1.0 / (std::numbers::ln2 * std::numbers::ln2);

enum class DispersionMode { ExactV, VBar };

// Channel dispersion V(gamma) = gamma(2+gamma)/(1+gamma)^2 * (log2 e)^2, in bits^2.
double dispersion(double gamma);

// Normal-approximation achievable rate for blocklength n and error target
// eps; the O(log2 n / (2n)) term is dropped. VBar mode gives the lower bound.
double rate_normal_approx(double n, double eps, double gamma, DispersionMode mode);

// Upper bound on the average error probability: the Gaussian integral of the
// outage bound (M >= 1) or the exact chi-squared cdf (M = 0) at the rate-
// dependent threshold T(x) = 2^(sqrt(vbar/n) x + R) - 1. Where the bound is
// inapplicable (d <= 0) the integrand is clamped to 1, keeping the result an
// upper bound.
double avg_error_upper(int copies, int interferers, double rate, double n, double snr,
                       int quadrature_nodes = 96);

// Sample mean of Q(sqrt(n/V(gamma)) (log2(1+gamma) - R)) over SINR draws,
// with V per the dispersion mode and a standard-error CI.
mc::MeanEstimate avg_error_mc(const mc::SinrSampleSet& samples, double rate, double n,
                              DispersionMode mode);

}  // namespace noma::fbl
