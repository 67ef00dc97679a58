#include "noma/noma.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/bounds.hpp"
#include "core/channel.hpp"
#include "core/errors.hpp"
#include "core/fbl.hpp"
#include "core/montecarlo.hpp"
#include "core/numerics.hpp"
#include "core/planner.hpp"

extern "C" {
struct noma_layout {
    noma::channel::FrameLayout layout;
};
struct noma_samples {
    noma::mc::SinrSampleSet set;
};
}

namespace {

thread_local std::string g_last_error;

noma_status fail(noma_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

template <class Fn>
noma_status guard(Fn&& fn) {
    try {
        return std::forward<Fn>(fn)();
    } catch (const noma::DomainError& e) {
        return fail(NOMA_ERR_DOMAIN, e.what());
    } catch (const noma::InvalidLayoutError& e) {
        return fail(NOMA_ERR_INVALID_LAYOUT, e.what());
    } catch (const noma::ConditionViolatedError& e) {
        return fail(NOMA_ERR_CONDITION, e.what());
    } catch (const noma::InfeasibleError& e) {
        return fail(NOMA_ERR_INFEASIBLE, e.what());
    } catch (const noma::EmptySampleError& e) {
        return fail(NOMA_ERR_EMPTY, e.what());
    } catch (const std::bad_alloc&) {
        return fail(NOMA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NOMA_ERR_INTERNAL, e.what());
    }
}

noma_status scalar_out(double* out, double value) {
    if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
    *out = value;
    return NOMA_OK;
}

char* dup_string(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

noma_estimate convert(const noma::mc::OutageEstimate& e) {
    return {e.p_hat, e.ci_lo, e.ci_hi, e.trials};
}

noma_estimate convert(const noma::mc::MeanEstimate& e) {
    return {e.value, e.ci_lo, e.ci_hi, e.trials};
}

}  // namespace

extern "C" {

const char* noma_status_str(noma_status status) {
    switch (status) {
        case NOMA_OK: return "ok";
        case NOMA_ERR_BAD_ARG: return "bad argument";
        case NOMA_ERR_DOMAIN: return "domain error";
        case NOMA_ERR_INVALID_LAYOUT: return "invalid layout";
        case NOMA_ERR_CONDITION: return "bound condition violated";
        case NOMA_ERR_INFEASIBLE: return "infeasible";
        case NOMA_ERR_EMPTY: return "empty sample set";
        case NOMA_ERR_PARSE: return "parse error";
        case NOMA_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* noma_last_error(void) { return g_last_error.c_str(); }

const char* noma_version(void) { return "0.1.0"; }

noma_status noma_reg_lower_gamma(double a, double x, double* out) {
    return guard([&] { return scalar_out(out, noma::numerics::regularized_lower_gamma(a, x)); });
}

noma_status noma_q_function(double x, double* out) {
    return guard([&] { return scalar_out(out, noma::numerics::q_function(x)); });
}

noma_status noma_q_inverse(double p, double* out) {
    return guard([&] { return scalar_out(out, noma::numerics::q_inverse(p)); });
}

noma_status noma_binary_entropy(double p, double* out) {
    return guard([&] { return scalar_out(out, noma::numerics::binary_entropy(p)); });
}

noma_status noma_correction_c(int copies, double* out) {
    return guard([&] { return scalar_out(out, noma::bounds::correction_c(copies)); });
}

noma_status noma_outage_exact_m0(int copies, double threshold, double snr, double* out) {
    return guard(
        [&] { return scalar_out(out, noma::bounds::outage_exact_m0(copies, threshold, snr)); });
}

noma_status noma_outage_bound_m0(int copies, double threshold, double snr, double* out) {
    return guard(
        [&] { return scalar_out(out, noma::bounds::outage_bound_m0(copies, threshold, snr)); });
}

noma_status noma_psi(int copies, int interferers, double threshold, double snr, double* out) {
    return guard(
        [&] { return scalar_out(out, noma::bounds::psi(copies, interferers, threshold, snr)); });
}

noma_status noma_residual_term(int copies, int interferers, double threshold, double snr,
                               double* out) {
    return guard([&] {
        return scalar_out(out, noma::bounds::residual_term(copies, interferers, threshold, snr));
    });
}

noma_status noma_psi_asymptotic(int copies, int interferers, double threshold, double* out) {
    return guard([&] {
        return scalar_out(out, noma::bounds::psi_asymptotic(copies, interferers, threshold));
    });
}

noma_status noma_outage_bound(int copies, int interferers, double threshold, double snr,
                              noma_bound_result* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        const noma::bounds::BoundResult r =
            noma::bounds::outage_bound(copies, interferers, threshold, snr);
        out->valid = r.valid ? 1 : 0;
        out->main_term = r.main_term.value_or(0.0);
        out->residual = r.residual.value_or(0.0);
        out->total = r.total.value_or(0.0);
        out->floor_value = r.floor;
        out->nu = r.nu.value_or(0.0);
        out->diversity_ok = r.diversity_ok ? 1 : 0;
        return NOMA_OK;
    });
}

noma_status noma_max_interferers(int copies, double threshold, int* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = noma::bounds::max_interferers(copies, threshold);
        return NOMA_OK;
    });
}

noma_status noma_copies_needed(int interferers, double threshold, int* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = noma::bounds::copies_needed(interferers, threshold);
        return NOMA_OK;
    });
}

noma_status noma_sufficient_condition(int copies, int interferers, double threshold, int* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = noma::bounds::sufficient_condition(copies, interferers, threshold) ? 1 : 0;
        return NOMA_OK;
    });
}

noma_status noma_dispersion(double gamma, double* out) {
    return guard([&] { return scalar_out(out, noma::fbl::dispersion(gamma)); });
}

noma_status noma_rate_normal_approx(double n, double eps, double gamma, noma_dispersion_mode mode,
                                    double* out) {
    return guard([&] {
        return scalar_out(out, noma::fbl::rate_normal_approx(
                                   n, eps, gamma,
                                   mode == NOMA_DISPERSION_VBAR
                                       ? noma::fbl::DispersionMode::VBar
                                       : noma::fbl::DispersionMode::ExactV));
    });
}

noma_status noma_avg_error_upper(int copies, int interferers, double rate, double n, double snr,
                                 int quadrature_nodes, double* out) {
    return guard([&] {
        return scalar_out(out, noma::fbl::avg_error_upper(copies, interferers, rate, n, snr,
                                                          quadrature_nodes));
    });
}

noma_status noma_layout_build(int blocks, int num_layers, noma_layout** out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = new noma_layout{noma::channel::build_layout(blocks, num_layers)};
        return NOMA_OK;
    });
}

noma_status noma_layout_build_custom(const int* copies, const int* users, int num_layers,
                                     noma_layout** out) {
    return guard([&]() -> noma_status {
        if (!out || !copies || !users || num_layers < 1)
            return fail(NOMA_ERR_BAD_ARG, "null arrays or bad layer count");
        std::vector<std::pair<int, int>> dk;
        for (int b = 0; b < num_layers; ++b) dk.emplace_back(copies[b], users[b]);
        *out = new noma_layout{noma::channel::build_layout_custom(dk)};
        return NOMA_OK;
    });
}

noma_status noma_layout_from_json(const char* json, noma_layout** out) {
    if (!json || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    try {
        *out = new noma_layout{noma::channel::FrameLayout::from_json(json)};
        return NOMA_OK;
    } catch (const noma::InvalidLayoutError& e) {
        return fail(NOMA_ERR_INVALID_LAYOUT, e.what());
    } catch (const std::exception& e) {
        return fail(NOMA_ERR_PARSE, e.what());
    }
}

noma_status noma_layout_to_json(const noma_layout* layout, char** out_json) {
    return guard([&]() -> noma_status {
        if (!layout || !out_json) return fail(NOMA_ERR_BAD_ARG, "null argument");
        *out_json = dup_string(layout->layout.to_json());
        return NOMA_OK;
    });
}

noma_status noma_layout_blocks(const noma_layout* layout, int* out) {
    if (!layout || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    *out = layout->layout.blocks;
    return NOMA_OK;
}

noma_status noma_layout_num_layers(const noma_layout* layout, int* out) {
    if (!layout || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    *out = layout->layout.num_layers();
    return NOMA_OK;
}

noma_status noma_layout_total_users(const noma_layout* layout, int* out) {
    if (!layout || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    *out = layout->layout.total_users();
    return NOMA_OK;
}

noma_status noma_layout_layers(const noma_layout* layout, int* copies, int* users,
                               int* interferers) {
    if (!layout || !copies || !users || !interferers)
        return fail(NOMA_ERR_BAD_ARG, "null argument");
    for (int b = 0; b < layout->layout.num_layers(); ++b) {
        copies[b] = layout->layout.layers[b].copies;
        users[b] = layout->layout.layers[b].users;
        interferers[b] = layout->layout.layers[b].interferers;
    }
    return NOMA_OK;
}

void noma_layout_free(noma_layout* layout) { delete layout; }

void noma_string_free(char* s) { delete[] s; }

noma_status noma_sample_sinr(noma_sinr_kind kind, int copies, int interferers, double snr,
                             uint64_t trials, uint64_t seed, noma_samples** out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = new noma_samples{
            kind == NOMA_SINR_OMEGA
                ? noma::mc::sample_sinr_omega(copies, interferers, snr, trials, seed)
                : noma::mc::sample_sinr_exact(copies, interferers, snr, trials, seed)};
        return NOMA_OK;
    });
}

noma_status noma_sample_sinr_linklevel(const noma_layout* layout, int user, long codeword_bits,
                                       double snr, uint64_t trials, uint64_t seed,
                                       noma_samples** out) {
    return guard([&]() -> noma_status {
        if (!layout || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
        *out = new noma_samples{noma::mc::sample_sinr_linklevel(layout->layout, user,
                                                                codeword_bits, snr, trials, seed)};
        return NOMA_OK;
    });
}

noma_status noma_samples_size(const noma_samples* samples, uint64_t* out) {
    if (!samples || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    *out = samples->set.trials;
    return NOMA_OK;
}

noma_status noma_samples_values(const noma_samples* samples, const double** out) {
    if (!samples || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
    *out = samples->set.values.data();
    return NOMA_OK;
}

void noma_samples_free(noma_samples* samples) { delete samples; }

noma_status noma_estimate_outage(const noma_samples* samples, double threshold,
                                 noma_estimate* out) {
    return guard([&]() -> noma_status {
        if (!samples || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
        *out = convert(noma::mc::estimate_outage(samples->set, threshold));
        return NOMA_OK;
    });
}

noma_status noma_outage_mc(noma_sinr_kind kind, int copies, int interferers, double threshold,
                           double snr, uint64_t trials, uint64_t seed, noma_estimate* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        *out = convert(noma::mc::outage_mc(kind == NOMA_SINR_OMEGA
                                               ? noma::mc::SinrKind::OmegaApprox
                                               : noma::mc::SinrKind::ExactSinr,
                                           copies, interferers, threshold, snr, trials, seed));
        return NOMA_OK;
    });
}

noma_status noma_avg_error_mc(const noma_samples* samples, double rate, double n,
                              noma_dispersion_mode mode, noma_estimate* out) {
    return guard([&]() -> noma_status {
        if (!samples || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
        *out = convert(noma::fbl::avg_error_mc(samples->set, rate, n,
                                               mode == NOMA_DISPERSION_VBAR
                                                   ? noma::fbl::DispersionMode::VBar
                                                   : noma::fbl::DispersionMode::ExactV));
        return NOMA_OK;
    });
}

noma_status noma_moment_diagnostics(int copies, int interferers, uint64_t trials, uint64_t seed,
                                    noma_moment_diag* out) {
    return guard([&]() -> noma_status {
        if (!out) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        const noma::mc::MomentDiag d =
            noma::mc::moment_diagnostics(copies, interferers, trials, seed);
        *out = {d.mean_w,         d.second_w,        d.se_mean_w, d.se_second_w,
                d.predicted_mean, d.predicted_second, d.alpha_sq,  d.predicted_alpha_sq,
                d.ks_w_omega,     d.trials};
        return NOMA_OK;
    });
}

noma_status noma_simulate_sic(const noma_layout* layout, const double* thresholds, double snr,
                              uint64_t trials, uint64_t seed, noma_sic_decision decision,
                              long codeword_bits, noma_estimate* eps, noma_estimate* rho) {
    return guard([&]() -> noma_status {
        if (!layout || !thresholds || !eps || !rho)
            return fail(NOMA_ERR_BAD_ARG, "null argument");
        const int layers = layout->layout.num_layers();
        const noma::mc::SicResult r = noma::mc::simulate_sic_frame(
            layout->layout, std::span<const double>(thresholds, layers), snr, trials, seed,
            decision == NOMA_SIC_FBL_BERNOULLI ? noma::mc::SicDecision::FblBernoulli
                                               : noma::mc::SicDecision::SinrThreshold,
            codeword_bits);
        for (int b = 0; b < layers; ++b) {
            eps[b] = convert(r.eps[b]);
            rho[b] = convert(r.rho[b]);
        }
        return NOMA_OK;
    });
}

noma_status noma_simulate_linklevel(const noma_layout* layout, int user, double rate,
                                    long codeword_bits, double snr, uint64_t trials, uint64_t seed,
                                    noma_estimate* out) {
    return guard([&]() -> noma_status {
        if (!layout || !out) return fail(NOMA_ERR_BAD_ARG, "null argument");
        *out = convert(noma::mc::simulate_linklevel(layout->layout, user, rate, codeword_bits, snr,
                                                    trials, seed));
        return NOMA_OK;
    });
}

noma_status noma_rate_for_threshold(double threshold, double* out) {
    return guard([&] { return scalar_out(out, noma::planner::rate_for_layer(threshold)); });
}

noma_status noma_threshold_for_rate(double rate, double* out) {
    return guard([&] { return scalar_out(out, noma::planner::threshold_for_rate(rate)); });
}

noma_status noma_solve_threshold(int copies, int interferers, double snr, double eps_target,
                                 double* out) {
    return guard([&] {
        return scalar_out(out,
                          noma::planner::solve_threshold(copies, interferers, snr, eps_target));
    });
}

noma_status noma_propagated_error(const double* eps, int count, double* rho) {
    return guard([&]() -> noma_status {
        if (!eps || !rho || count < 1) return fail(NOMA_ERR_BAD_ARG, "null arrays or bad count");
        const std::vector<double> r =
            noma::planner::propagated_error(std::span<const double>(eps, count));
        for (int i = 0; i < count; ++i) rho[i] = r[i];
        return NOMA_OK;
    });
}

noma_status noma_plan_dyadic(int blocks, int num_layers, double snr, double eps_target,
                             noma_rate_target target, char** out_json, int* feasible) {
    return guard([&]() -> noma_status {
        if (!out_json) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        const noma::planner::LayerPlan plan = noma::planner::plan_frame_dyadic(
            blocks, num_layers, snr, eps_target,
            target == NOMA_TARGET_PROPAGATED ? noma::planner::RateTarget::Propagated
                                             : noma::planner::RateTarget::PerLayer);
        *out_json = dup_string(plan.to_json());
        if (feasible) *feasible = plan.all_feasible() ? 1 : 0;
        return NOMA_OK;
    });
}

noma_status noma_plan_exponential(int num_layers, double threshold, double snr, char** out_json,
                           int* feasible) {
    return guard([&]() -> noma_status {
        if (!out_json) return fail(NOMA_ERR_BAD_ARG, "null output pointer");
        const noma::planner::LayerPlan plan =
            noma::planner::plan_frame_exponential(num_layers, threshold, snr);
        *out_json = dup_string(plan.to_json());
        if (feasible) *feasible = plan.all_feasible() ? 1 : 0;
        return NOMA_OK;
    });
}

}  // extern "C"
