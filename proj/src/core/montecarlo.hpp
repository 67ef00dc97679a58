#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/channel.hpp"

namespace noma::mc {

enum class SinrKind { ExactSinr, OmegaApprox, LinklevelEmpirical };

// Monte Carlo draws of the instantaneous SINR, or of its chi-squared
// interference approximation, together with the inputs that produced them.
struct SinrSampleSet {
    std::vector<double> values;
    int copies = 0;       // D
    int interferers = 0;  // M
    double snr = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    SinrKind kind = SinrKind::ExactSinr;
};

struct OutageEstimate {
    double p_hat = 0.0;
    std::uint64_t trials = 0;
    double ci_lo = 0.0;  // Wilson score interval, 95%
    double ci_hi = 1.0;
};

// Mean of bounded per-trial values with a normal-theory CI from the sample
// standard error (used for averaged error probabilities).
struct MeanEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    std::uint64_t trials = 0;
};

OutageEstimate wilson_interval(std::uint64_t hits, std::uint64_t trials);

// SINR of one fading draw: own per-copy gains |h|^2 and the summed
// interferer gain per block. Exposed so tests can pin the gains.
double sinr_exact_from_gains(std::span<const double> own, std::span<const double> interference_sum,
                             double snr);

SinrSampleSet sample_sinr_exact(int copies, int interferers, double snr, std::uint64_t trials,
                                std::uint64_t seed);
SinrSampleSet sample_sinr_omega(int copies, int interferers, double snr, std::uint64_t trials,
                                std::uint64_t seed);

// Realized per-codeword SINR of the interleaved QPSK link simulation.
SinrSampleSet sample_sinr_linklevel(const channel::FrameLayout& layout, int user,
                                    long codeword_bits, double snr, std::uint64_t trials,
                                    std::uint64_t seed);

OutageEstimate estimate_outage(const SinrSampleSet& samples, double threshold);

// Streaming estimator drawing the same per-trial streams as the samplers;
// use for trial counts where storing samples is wasteful.
OutageEstimate outage_mc(SinrKind kind, int copies, int interferers, double threshold, double snr,
                         std::uint64_t trials, std::uint64_t seed);

// Empirical moments of the weighted interference sum W against the
// moment-matched chi-squared surrogate Omega.
struct MomentDiag {
    double mean_w = 0.0;
    double second_w = 0.0;
    double se_mean_w = 0.0;
    double se_second_w = 0.0;
    double predicted_mean = 0.0;    // 2M
    double predicted_second = 0.0;  // 4M(M + 1/N), N = (D+1)/2
    double alpha_sq = 0.0;          // empirical E[alpha_l^2]
    double predicted_alpha_sq = 0.0;  // 2/(D(D+1))
    double ks_w_omega = 0.0;
    std::uint64_t trials = 0;
};
MomentDiag moment_diagnostics(int copies, int interferers, std::uint64_t trials,
                              std::uint64_t seed);

enum class SicDecision {
    SinrThreshold,  // outage model: fail iff SINR < T_b
    FblBernoulli,   // fail with the finite-blocklength error probability at rate log2(1+T_b)
};

struct SicResult {
    // Conditional per-layer outage (lower layers genie-removed) and the
    // unconditional error with SIC propagation.
    std::vector<OutageEstimate> eps;
    std::vector<OutageEstimate> rho;
};

SicResult simulate_sic_frame(const channel::FrameLayout& layout,
                             std::span<const double> thresholds, double snr, std::uint64_t trials,
                             std::uint64_t seed, SicDecision decision = SicDecision::SinrThreshold,
                             long codeword_bits = 0);

// Average finite-blocklength error of the QPSK link simulation for one user.
MeanEstimate simulate_linklevel(const channel::FrameLayout& layout, int user, double rate,
                                long codeword_bits, double snr, std::uint64_t trials,
                                std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov distance (consumes and sorts copies).
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace noma::mc
