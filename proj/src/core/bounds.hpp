#pragma once

#include <optional>

namespace noma::bounds {

// Parameter tuple every closed-form expression consumes. N and c_D are
// derived; d is recomputed on demand so it can never go stale.
struct BoundInputs {
    int copies = 1;        // D
    int interferers = 0;   // M
    double threshold = 1;  // T
    double snr = 1;        // linear

    double moment_match_n() const { return (copies + 1) / 2.0; }  // N = (D+1)/2
    double correction() const;                                    // c_D
    double slack_d() const;                                       // D/(c_D T) - 1/snr
};

// c_D = D e^{-1} (D!)^{-1/D}, in (0, 1], evaluated in the log domain.
double correction_c(int copies);

// Chernoff-style cdf bounds for Z_D = chi^2_{2D} / (2D).
// left:  F_D(z) = (z c_D e^{1 - z c_D})^D on [0, 1/c_D]   (corrected bound)
// right: (z e^{1-z})^D for z > 1                            (upper tail)
struct ChernoffBounds {
    std::optional<double> left;
    std::optional<double> right;
};
ChernoffBounds chernoff_cdf_bounds(int copies, double z);

// Interference-free outage: exact chi-squared cdf and its closed-form bound
// (1/D!) (T/snr)^D exp(-c_D T / snr).
double outage_exact_m0(int copies, double threshold, double snr);
double outage_bound_m0(int copies, double threshold, double snr);

// Closed-form main term of the outage bound for M >= 1 interferers.
double psi(int copies, int interferers, double threshold, double snr);

// Tail term (d e / M)^{MN} e^{-N d}; requires d > 0. The Chernoff step
// behind it holds for d >= M, so main + tail is guaranteed to dominate the
// approximated outage only in that regime; for 0 < d < M it can undershoot.
double residual_term(int copies, int interferers, double threshold, double snr);

// High-SNR limit of psi (the error floor).
double psi_asymptotic(int copies, int interferers, double threshold);

struct DiversityCondition {
    double nu = 0.0;
    double c_const = 0.0;  // the D-independent constant in psi <= (C/D!) nu^D
    bool holds = false;    // the sufficient condition for nu < 1
};
// Requires d > 0.
DiversityCondition diversity_condition(int copies, int interferers, double threshold, double snr);

struct BoundResult {
    bool valid = false;  // d > 0, i.e. the bound applies
    std::optional<double> main_term;  // psi
    std::optional<double> residual;
    std::optional<double> total;  // psi + residual
    double floor = 0.0;           // psi_asymptotic
    std::optional<double> nu;
    bool diversity_ok = false;
};
BoundResult outage_bound(int copies, int interferers, double threshold, double snr);

// Design rules for picking layer parameters.
int max_interferers(int copies, double threshold);      // floor(2 log2(D / (4T)))
int copies_needed(int interferers, double threshold);   // ceil(4T 2^(M/2))
bool sufficient_condition(int copies, int interferers, double threshold);  // 2^(1+M/2) < (D+1)/(2T)

}  // namespace noma::bounds
