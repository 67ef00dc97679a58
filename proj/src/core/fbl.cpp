#include "core/fbl.hpp"

#include <algorithm>
#include <cmath>

#include "core/bounds.hpp"
#include "core/errors.hpp"
#include "core/montecarlo.hpp"
#include "core/numerics.hpp"

namespace noma::fbl {

double dispersion(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("dispersion: gamma must be >= 0");
    const double g1 = 1.0 + gamma;
    return gamma * (2.0 + gamma) / (g1 * g1) * v_bar;
}

double rate_normal_approx(double n, double eps, double gamma, DispersionMode mode) {
    if (!(n >= 1.0)) throw DomainError("rate_normal_approx: n must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("rate_normal_approx: eps must lie in (0,1)");
    if (!(gamma >= 0.0)) throw DomainError("rate_normal_approx: gamma must be >= 0");
    const double v = mode == DispersionMode::VBar ? v_bar : dispersion(gamma);
    return std::log2(1.0 + gamma) - std::sqrt(v / n) * numerics::q_inverse(eps);
}

double avg_error_upper(int copies, int interferers, double rate, double n, double snr,
                       int quadrature_nodes) {
    if (!(rate > 0.0)) throw DomainError("avg_error_upper: rate must be > 0");
    if (!(n >= 2.0)) throw DomainError("avg_error_upper: n must be >= 2");
    if (interferers < 0) throw DomainError("avg_error_upper: M must be >= 0");
    const double spread = std::sqrt(v_bar / n);
    const auto inner = [&](double x) {
        const double threshold = std::exp2(spread * x + rate) - 1.0;
        if (threshold <= 0.0) return 0.0;
        if (interferers == 0) {
            return bounds::outage_exact_m0(copies, threshold, snr);
        }
        // Clamp to 1 wherever the closed form stops being an upper bound:
        // d <= 0 (outside the bound's validity region) and 0 < d < M (the tail
        // term's Chernoff step needs d >= M). Both regions sit far in the
        // Gaussian tail for operating points of interest.
        const bounds::BoundInputs in{copies, interferers, threshold, snr};
        if (!(in.slack_d() >= interferers)) return 1.0;
        const bounds::BoundResult b = bounds::outage_bound(copies, interferers, threshold, snr);
        return std::min(1.0, *b.total);
    };
    const double value = numerics::integrate_gaussian(inner, quadrature_nodes);
    return std::clamp(value, 0.0, 1.0);
}

mc::MeanEstimate avg_error_mc(const mc::SinrSampleSet& samples, double rate, double n,
                              DispersionMode mode) {
    if (samples.values.empty()) throw EmptySampleError("avg_error_mc: empty sample set");
    if (!(rate > 0.0)) throw DomainError("avg_error_mc: rate must be > 0");
    if (!(n >= 2.0)) throw DomainError("avg_error_mc: n must be >= 2");
    double sum = 0.0, sum_sq = 0.0;
    for (double g : samples.values) {
        const double v = mode == DispersionMode::VBar ? v_bar : dispersion(g);
        double e;
        if (v <= 0.0) {
            e = rate > 0.0 ? 1.0 : 0.0;  // gamma = 0 carries no rate
        } else {
            e = numerics::q_function(std::sqrt(n / v) * (std::log2(1.0 + g) - rate));
        }
        sum += e;
        sum_sq += e * e;
    }
    mc::MeanEstimate est;
    est.trials = samples.trials;
    const double m = static_cast<double>(samples.trials);
    est.value = sum / m;
    est.std_error = std::sqrt(std::max(0.0, sum_sq / m - est.value * est.value) / m);
    est.ci_lo = std::max(0.0, est.value - 1.959963984540054 * est.std_error);
    est.ci_hi = std::min(1.0, est.value + 1.959963984540054 * est.std_error);
    return est;
}

}  // namespace noma::fbl
