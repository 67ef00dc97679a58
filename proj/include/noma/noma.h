/*
 * noma_rep: repetition-based NOMA uplink analysis and simulation.
 *
 * C API over the C++ core. All functions return a noma_status; results come
 * back through out-pointers. Layouts and SINR sample sets are opaque handles
 * that must be released with their _free function. Strings returned through
 * char** are heap-allocated and released with noma_string_free.
 *
 * Thread-safety: every function is reentrant. Monte Carlo estimators are
 * deterministic in (seed, trials) regardless of how many worker threads the
 * library uses internally (NOMA_THREADS overrides the default).
 */
#ifndef NOMA_REP_NOMA_H
#define NOMA_REP_NOMA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NOMA_API __declspec(dllexport)
#else
#define NOMA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum noma_status {
    NOMA_OK = 0,
    NOMA_ERR_BAD_ARG = 1,        /* null pointer / malformed call */
    NOMA_ERR_DOMAIN = 2,         /* argument outside the operation's domain */
    NOMA_ERR_INVALID_LAYOUT = 3, /* frame layout invariant violated */
    NOMA_ERR_CONDITION = 4,      /* bound validity condition (d > 0) violated */
    NOMA_ERR_INFEASIBLE = 5,     /* planner target unreachable */
    NOMA_ERR_EMPTY = 6,          /* empty sample set */
    NOMA_ERR_PARSE = 7,          /* malformed JSON input */
    NOMA_ERR_INTERNAL = 8
} noma_status;

NOMA_API const char* noma_status_str(noma_status status);

/* Human-readable detail for the most recent failure on this thread. */
NOMA_API const char* noma_last_error(void);

NOMA_API const char* noma_version(void);

/* ---- numerics ------------------------------------------------------- */

NOMA_API noma_status noma_reg_lower_gamma(double a, double x, double* out);
NOMA_API noma_status noma_q_function(double x, double* out);
NOMA_API noma_status noma_q_inverse(double p, double* out);
NOMA_API noma_status noma_binary_entropy(double p, double* out);

/* ---- closed-form outage bounds -------------------------------------- */

NOMA_API noma_status noma_correction_c(int copies, double* out);
NOMA_API noma_status noma_outage_exact_m0(int copies, double threshold, double snr, double* out);
NOMA_API noma_status noma_outage_bound_m0(int copies, double threshold, double snr, double* out);
NOMA_API noma_status noma_psi(int copies, int interferers, double threshold, double snr,
                              double* out);
NOMA_API noma_status noma_residual_term(int copies, int interferers, double threshold, double snr,
                                        double* out);
NOMA_API noma_status noma_psi_asymptotic(int copies, int interferers, double threshold,
                                         double* out);

typedef struct noma_bound_result {
    int valid; /* 1 iff d > 0 and the bound applies; main/residual/total defined only then */
    double main_term;
    double residual;
    double total;
    double floor_value; /* high-SNR limit of the main term */
    double nu;
    int diversity_ok;
} noma_bound_result;

NOMA_API noma_status noma_outage_bound(int copies, int interferers, double threshold, double snr,
                                       noma_bound_result* out);

NOMA_API noma_status noma_max_interferers(int copies, double threshold, int* out);
NOMA_API noma_status noma_copies_needed(int interferers, double threshold, int* out);
NOMA_API noma_status noma_sufficient_condition(int copies, int interferers, double threshold,
                                               int* out);

/* ---- finite-blocklength --------------------------------------------- */

typedef enum noma_dispersion_mode {
    NOMA_DISPERSION_EXACT = 0,
    NOMA_DISPERSION_VBAR = 1
} noma_dispersion_mode;

NOMA_API noma_status noma_dispersion(double gamma, double* out);
NOMA_API noma_status noma_rate_normal_approx(double n, double eps, double gamma,
                                             noma_dispersion_mode mode, double* out);
NOMA_API noma_status noma_avg_error_upper(int copies, int interferers, double rate, double n,
                                          double snr, int quadrature_nodes, double* out);

/* ---- frame layouts --------------------------------------------------- */

typedef struct noma_layout noma_layout;

NOMA_API noma_status noma_layout_build(int blocks, int num_layers, noma_layout** out);
/* copies[] and users[] are parallel arrays of length num_layers. */
NOMA_API noma_status noma_layout_build_custom(const int* copies, const int* users, int num_layers,
                                              noma_layout** out);
NOMA_API noma_status noma_layout_from_json(const char* json, noma_layout** out);
NOMA_API noma_status noma_layout_to_json(const noma_layout* layout, char** out_json);
NOMA_API noma_status noma_layout_blocks(const noma_layout* layout, int* out);
NOMA_API noma_status noma_layout_num_layers(const noma_layout* layout, int* out);
NOMA_API noma_status noma_layout_total_users(const noma_layout* layout, int* out);
/* Per-layer descriptors; arrays must have space for num_layers entries. */
NOMA_API noma_status noma_layout_layers(const noma_layout* layout, int* copies, int* users,
                                        int* interferers);
NOMA_API void noma_layout_free(noma_layout* layout);

NOMA_API void noma_string_free(char* s);

/* ---- Monte Carlo ------------------------------------------------------ */

typedef struct noma_samples noma_samples;

typedef struct noma_estimate {
    double value;
    double ci_lo;
    double ci_hi;
    uint64_t trials;
} noma_estimate;

typedef enum noma_sinr_kind {
    NOMA_SINR_EXACT = 0,
    NOMA_SINR_OMEGA = 1
} noma_sinr_kind;

NOMA_API noma_status noma_sample_sinr(noma_sinr_kind kind, int copies, int interferers,
                                      double snr, uint64_t trials, uint64_t seed,
                                      noma_samples** out);
NOMA_API noma_status noma_sample_sinr_linklevel(const noma_layout* layout, int user,
                                                long codeword_bits, double snr, uint64_t trials,
                                                uint64_t seed, noma_samples** out);
NOMA_API noma_status noma_samples_size(const noma_samples* samples, uint64_t* out);
NOMA_API noma_status noma_samples_values(const noma_samples* samples, const double** out);
NOMA_API void noma_samples_free(noma_samples* samples);

NOMA_API noma_status noma_estimate_outage(const noma_samples* samples, double threshold,
                                          noma_estimate* out);
/* Streaming variant; draws the same per-trial streams without storing them. */
NOMA_API noma_status noma_outage_mc(noma_sinr_kind kind, int copies, int interferers,
                                    double threshold, double snr, uint64_t trials, uint64_t seed,
                                    noma_estimate* out);
NOMA_API noma_status noma_avg_error_mc(const noma_samples* samples, double rate, double n,
                                       noma_dispersion_mode mode, noma_estimate* out);

typedef struct noma_moment_diag {
    double mean_w;
    double second_w;
    double se_mean_w;
    double se_second_w;
    double predicted_mean;
    double predicted_second;
    double alpha_sq;
    double predicted_alpha_sq;
    double ks_w_omega;
    uint64_t trials;
} noma_moment_diag;

NOMA_API noma_status noma_moment_diagnostics(int copies, int interferers, uint64_t trials,
                                             uint64_t seed, noma_moment_diag* out);

typedef enum noma_sic_decision {
    NOMA_SIC_THRESHOLD = 0,
    NOMA_SIC_FBL_BERNOULLI = 1
} noma_sic_decision;

/* thresholds has one entry per layer; eps/rho must hold num_layers entries. */
NOMA_API noma_status noma_simulate_sic(const noma_layout* layout, const double* thresholds,
                                       double snr, uint64_t trials, uint64_t seed,
                                       noma_sic_decision decision, long codeword_bits,
                                       noma_estimate* eps, noma_estimate* rho);

NOMA_API noma_status noma_simulate_linklevel(const noma_layout* layout, int user, double rate,
                                             long codeword_bits, double snr, uint64_t trials,
                                             uint64_t seed, noma_estimate* out);

/* ---- planner ---------------------------------------------------------- */

NOMA_API noma_status noma_rate_for_threshold(double threshold, double* out);
NOMA_API noma_status noma_threshold_for_rate(double rate, double* out);
NOMA_API noma_status noma_solve_threshold(int copies, int interferers, double snr,
                                          double eps_target, double* out);
/* rho must have space for count entries. */
NOMA_API noma_status noma_propagated_error(const double* eps, int count, double* rho);

typedef enum noma_rate_target {
    NOMA_TARGET_PER_LAYER = 0,
    NOMA_TARGET_PROPAGATED = 1
} noma_rate_target;

/* Plans serialize to JSON. *feasible reports whether every layer met its
 * target (the plan JSON carries per-layer flags either way). */
NOMA_API noma_status noma_plan_dyadic(int blocks, int num_layers, double snr, double eps_target,
                                      noma_rate_target target, char** out_json, int* feasible);
NOMA_API noma_status noma_plan_exponential(int num_layers, double threshold, double snr, char** out_json,
                                    int* feasible);

#ifdef __cplusplus
}
#endif

#endif /* NOMA_REP_NOMA_H */
