#include "core/bounds.hpp"

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace noma::bounds {

namespace {

void check_basic(int copies, double threshold, double snr) {
    if (copies < 1) throw DomainError("bounds: D must be >= 1");
    if (!(threshold > 0.0)) throw DomainError("bounds: T must be > 0");
    if (!(snr > 0.0)) throw DomainError("bounds: snr must be > 0");
}

}  // namespace

double correction_c(int copies) {
    if (copies < 1) throw DomainError("correction_c: D must be >= 1");
    const double d = copies;
    return std::exp(std::log(d) - 1.0 - numerics::log_gamma(d + 1.0) / d);
}

double BoundInputs::correction() const { return correction_c(copies); }

double BoundInputs::slack_d() const {
    return copies / (correction() * threshold) - 1.0 / snr;
}

ChernoffBounds chernoff_cdf_bounds(int copies, double z) {
    if (copies < 1) throw DomainError("chernoff_cdf_bounds: D must be >= 1");
    if (!(z >= 0.0)) throw DomainError("chernoff_cdf_bounds: z must be >= 0");
    ChernoffBounds out;
    const double c = correction_c(copies);
    if (z <= 1.0 / c) {
        out.left = z == 0.0 ? 0.0 : std::exp(copies * (std::log(z * c) + 1.0 - z * c));
    }
    if (z > 1.0) {
        out.right = std::exp(copies * (std::log(z) + 1.0 - z));
    }
    return out;
}

double outage_exact_m0(int copies, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    return numerics::regularized_lower_gamma(copies, threshold / snr);
}

double outage_bound_m0(int copies, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    const double r = threshold / snr;
    return std::exp(-numerics::log_gamma(copies + 1.0) + copies * std::log(r) -
                    correction_c(copies) * r);
}

double psi(int copies, int interferers, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    if (interferers < 1) throw DomainError("psi: M must be >= 1 (use outage_exact_m0 for M = 0)");
    const double D = copies;
    const double c = correction_c(copies);
    const double N = (D + 1.0) / 2.0;
    const double MN = interferers * N;
    const double cT = c * threshold;

    const double log_prefactor = -numerics::log_gamma(D + 1.0) +
                                 D * (std::log(threshold) - std::log(snr)) - cT / snr -
                                 MN * std::log1p(cT / N);

    // Sum over n of binom(D,n) (snr/(N+cT))^n Gamma(MN+n)/Gamma(MN), in the
    // log domain with log-sum-exp; terms more than 1e-18 below the running
    // max cannot move the double result and are skipped.
    const double log_ratio = std::log(snr) - std::log(N + cT);
    const double lg_mn = numerics::log_gamma(MN);
    std::vector<double> log_terms(copies + 1);
    double max_term = -HUGE_VAL;
    for (int n = 0; n <= copies; ++n) {
        const double lb = (n == 0 || n == copies) ? 0.0 : numerics::log_binomial(D, n);
        log_terms[n] = lb + n * log_ratio + numerics::log_gamma(MN + n) - lg_mn;
        if (log_terms[n] > max_term) max_term = log_terms[n];
    }
    const double cutoff = max_term + std::log(1e-18);
    double sum = 0.0;
    for (double lt : log_terms) {
        if (lt >= cutoff) sum += std::exp(lt - max_term);
    }
    return std::exp(log_prefactor + max_term + std::log(sum));
}

double residual_term(int copies, int interferers, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    if (interferers < 1) throw DomainError("residual_term: M must be >= 1");
    const BoundInputs in{copies, interferers, threshold, snr};
    const double d = in.slack_d();
    if (!(d > 0.0))
        throw ConditionViolatedError("residual_term: requires d = D/(c_D T) - 1/snr > 0");
    const double N = in.moment_match_n();
    const double MN = interferers * N;
    return std::exp(MN * (std::log(d) + 1.0 - std::log(interferers)) - N * d);
}

double psi_asymptotic(int copies, int interferers, double threshold) {
    if (copies < 1) throw DomainError("psi_asymptotic: D must be >= 1");
    if (interferers < 1) throw DomainError("psi_asymptotic: M must be >= 1");
    if (!(threshold > 0.0)) throw DomainError("psi_asymptotic: T must be > 0");
    const double D = copies;
    const double N = (D + 1.0) / 2.0;
    const double MN = interferers * N;
    const double cT = correction_c(copies) * threshold;
    // binom(MN+D-1, MN-1) through the gamma function; MN may be half-integer.
    const double log_binom = numerics::log_gamma(MN + D) - numerics::log_gamma(MN) -
                             numerics::log_gamma(D + 1.0);
    return std::exp(log_binom + MN * (std::log(N) - std::log(N + cT)) +
                    D * (std::log(threshold) - std::log(N + cT)));
}

DiversityCondition diversity_condition(int copies, int interferers, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    if (interferers < 1) throw DomainError("diversity_condition: M must be >= 1");
    const BoundInputs in{copies, interferers, threshold, snr};
    const double d = in.slack_d();
    if (!(d > 0.0))
        throw ConditionViolatedError("diversity_condition: requires d > 0");
    const double D = copies;
    const double M = interferers;
    const double cT = in.correction() * threshold;
    const double denom = D + 1.0 + 2.0 * cT;

    DiversityCondition out;
    const double growth = 1.0 + snr * (D * (M + 1.0) + M - 1.0) / denom;
    out.nu = (threshold / snr) * std::pow(1.0 + 2.0 * cT / (D + 1.0), -M / 2.0) * growth;
    out.c_const = std::pow(1.0 + snr / (d * snr + 1.0), -M / 2.0);
    const double lhs = (snr / threshold) * std::pow((D + 1.0) / denom, M / 2.0);
    out.holds = lhs >= growth;
    return out;
}

BoundResult outage_bound(int copies, int interferers, double threshold, double snr) {
    check_basic(copies, threshold, snr);
    if (interferers < 1) throw DomainError("outage_bound: M must be >= 1");
    BoundResult out;
    out.floor = psi_asymptotic(copies, interferers, threshold);
    const BoundInputs in{copies, interferers, threshold, snr};
    if (!(in.slack_d() > 0.0)) {
        out.valid = false;
        return out;
    }
    out.valid = true;
    out.main_term = psi(copies, interferers, threshold, snr);
    out.residual = residual_term(copies, interferers, threshold, snr);
    out.total = *out.main_term + *out.residual;
    const DiversityCondition dc = diversity_condition(copies, interferers, threshold, snr);
    out.nu = dc.nu;
    out.diversity_ok = dc.holds;
    return out;
}

int max_interferers(int copies, double threshold) {
    if (copies < 1 || !(threshold > 0.0)) throw DomainError("max_interferers: bad arguments");
    const double ratio = copies / (4.0 * threshold);
    if (ratio < 1.0) throw DomainError("max_interferers: no interferers supportable (D/(4T) < 1)");
    return static_cast<int>(std::floor(2.0 * std::log2(ratio)));
}

int copies_needed(int interferers, double threshold) {
    if (interferers < 0 || !(threshold > 0.0)) throw DomainError("copies_needed: bad arguments");
    return static_cast<int>(std::ceil(4.0 * threshold * std::exp2(interferers / 2.0)));
}

bool sufficient_condition(int copies, int interferers, double threshold) {
    if (copies < 1 || interferers < 0 || !(threshold > 0.0))
        throw DomainError("sufficient_condition: bad arguments");
    return std::exp2(1.0 + interferers / 2.0) < (copies + 1.0) / (2.0 * threshold);
}

}  // namespace noma::bounds
