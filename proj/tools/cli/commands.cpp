#include "cli/commands.hpp"

#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <noma/noma.h>

#include "cli/csv.hpp"
#include "cli/util.hpp"

namespace cli {

namespace {

void check(noma_status st, const std::string& what) {
    if (st != NOMA_OK)
        throw std::runtime_error(what + ": " + noma_status_str(st) + " (" + noma_last_error() +
                                 ")");
}

struct LayoutDeleter {
    void operator()(noma_layout* p) const { noma_layout_free(p); }
};
using LayoutPtr = std::unique_ptr<noma_layout, LayoutDeleter>;

struct SamplesDeleter {
    void operator()(noma_samples* p) const { noma_samples_free(p); }
};
using SamplesPtr = std::unique_ptr<noma_samples, SamplesDeleter>;

// Either the canonical layout document {"L": ..., "layers": [{"D","K"}...]}
// under "layout", or "L"/"B" for the dyadic frame.
LayoutPtr layout_from_config(const RunConfig& cfg) {
    noma_layout* raw = nullptr;
    if (cfg.has("layout")) {
        if (!cfg.section["layout"].is_object())
            throw ConfigError("config [" + cfg.command + "]: 'layout' must be an object");
        const std::string doc = cfg.section["layout"].dump();
        check(noma_layout_from_json(doc.c_str(), &raw), "layout");
    } else {
        check(noma_layout_build(static_cast<int>(cfg.integer("L")),
                                static_cast<int>(cfg.integer("B")), &raw),
              "layout");
    }
    return LayoutPtr(raw);
}

}  // namespace

int cmd_outage_sweep(const RunConfig& cfg) {
    const auto d_list = cfg.integer_list("D");
    const auto m_list = cfg.integer_list("M");
    const auto t_list = cfg.number_list("T");
    const auto snr_db_list = cfg.number_list("snr_db");

    CsvWriter csv(cfg.out_path, cfg.command, cfg.seed, cfg.trials, cfg.config_hash,
                  {"D", "M", "T", "snr_db", "mc_exact", "mc_ci_lo", "mc_ci_hi", "mc_omega", "psi",
                   "residual", "bound_total", "bound_valid", "psi_asymptotic"});

    for (long D : d_list)
        for (long M : m_list)
            for (double T : t_list)
                for (double db : snr_db_list) {
                    const double snr = db_to_linear(db);
                    noma_estimate exact{};
                    check(noma_outage_mc(NOMA_SINR_EXACT, static_cast<int>(D),
                                         static_cast<int>(M), T, snr, cfg.trials, cfg.seed,
                                         &exact),
                          "outage_mc exact");
                    std::vector<std::string> row = {std::to_string(D), std::to_string(M), fmt(T),
                                                    fmt(db), fmt(exact.value), fmt(exact.ci_lo),
                                                    fmt(exact.ci_hi)};
                    if (M == 0) {
                        double bound = 0.0, c = 0.0;
                        check(noma_outage_bound_m0(static_cast<int>(D), T, snr, &bound),
                              "outage_bound_m0");
                        check(noma_correction_c(static_cast<int>(D), &c), "correction_c");
                        const bool applies = T / (D * snr) <= 1.0 / c;
                        row.insert(row.end(), {"nan", "nan", "nan", fmt(bound),
                                               applies ? "1" : "0", "nan"});
                    } else {
                        noma_estimate omega{};
                        check(noma_outage_mc(NOMA_SINR_OMEGA, static_cast<int>(D),
                                             static_cast<int>(M), T, snr, cfg.trials, cfg.seed,
                                             &omega),
                              "outage_mc omega");
                        noma_bound_result b{};
                        check(noma_outage_bound(static_cast<int>(D), static_cast<int>(M), T, snr,
                                                &b),
                              "outage_bound");
                        row.push_back(fmt(omega.value));
                        if (b.valid) {
                            row.insert(row.end(), {fmt(b.main_term), fmt(b.residual),
                                                   fmt(b.total), "1", fmt(b.floor_value)});
                        } else {
                            row.insert(row.end(),
                                       {"nan", "nan", "nan", "0", fmt(b.floor_value)});
                        }
                    }
                    csv.row(row);
                }
    return 0;
}

int cmd_fbl_sweep(const RunConfig& cfg) {
    const auto pairs = cfg.pair_list("pairs");
    const auto r_list = cfg.number_list("R");
    const auto n_list = cfg.integer_list("n");
    const auto snr_db_list = cfg.number_list("snr_db");
    const std::string disp = cfg.text_or("dispersion", "exact");
    if (disp != "exact" && disp != "vbar")
        throw ConfigError("config [fbl_sweep]: dispersion must be 'exact' or 'vbar'");
    const noma_dispersion_mode mode =
        disp == "vbar" ? NOMA_DISPERSION_VBAR : NOMA_DISPERSION_EXACT;

    CsvWriter csv(cfg.out_path, cfg.command, cfg.seed, cfg.trials, cfg.config_hash,
                  {"D", "M", "R", "n", "snr_db", "mc_avg_error", "mc_ci_lo", "mc_ci_hi",
                   "analytic_upper"});

    for (const auto& [D, M] : pairs)
        for (double db : snr_db_list) {
            const double snr = db_to_linear(db);
            noma_samples* raw = nullptr;
            check(noma_sample_sinr(NOMA_SINR_EXACT, D, M, snr, cfg.trials, cfg.seed, &raw),
                  "sample_sinr");
            SamplesPtr samples(raw);
            for (double R : r_list)
                for (long n : n_list) {
                    noma_estimate mc{};
                    check(noma_avg_error_mc(samples.get(), R, static_cast<double>(n), mode, &mc),
                          "avg_error_mc");
                    double upper = 0.0;
                    check(noma_avg_error_upper(D, M, R, static_cast<double>(n), snr, 96, &upper),
                          "avg_error_upper");
                    csv.row({std::to_string(D), std::to_string(M), fmt(R), std::to_string(n),
                             fmt(db), fmt(mc.value), fmt(mc.ci_lo), fmt(mc.ci_hi), fmt(upper)});
                }
        }
    return 0;
}

int cmd_moment_check(const RunConfig& cfg) {
    const auto pairs = cfg.pair_list("pairs");
    CsvWriter csv(cfg.out_path, cfg.command, cfg.seed, cfg.trials, cfg.config_hash,
                  {"D", "M", "mean_W", "predicted_mean", "second_W", "predicted_second",
                   "ks_distance"});
    for (const auto& [D, M] : pairs) {
        noma_moment_diag diag{};
        check(noma_moment_diagnostics(D, M, cfg.trials, cfg.seed, &diag), "moment_diagnostics");
        csv.row({std::to_string(D), std::to_string(M), fmt(diag.mean_w), fmt(diag.predicted_mean),
                 fmt(diag.second_w), fmt(diag.predicted_second), fmt(diag.ks_w_omega)});
    }
    return 0;
}

int cmd_plan(const RunConfig& cfg) {
    const std::string mode = cfg.text_or("mode", "dyadic");
    const double snr = db_to_linear(cfg.number("snr_db"));
    char* json = nullptr;
    int feasible = 0;
    if (mode == "dyadic") {
        const std::string target = cfg.text_or("rate_target", "per_layer");
        if (target != "per_layer" && target != "propagated")
            throw ConfigError("config [plan]: rate_target must be 'per_layer' or 'propagated'");
        check(noma_plan_dyadic(static_cast<int>(cfg.integer("L")),
                               static_cast<int>(cfg.integer("B")), snr, cfg.number("eps_target"),
                               target == "propagated" ? NOMA_TARGET_PROPAGATED
                                                      : NOMA_TARGET_PER_LAYER,
                               &json, &feasible),
              "plan_dyadic");
    } else if (mode == "exponential") {
        check(noma_plan_exponential(static_cast<int>(cfg.integer("B")), cfg.number("T"), snr, &json,
                             &feasible),
              "plan_exponential");
    } else {
        throw ConfigError("config [plan]: mode must be 'dyadic' or 'exponential'");
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
        noma_string_free(json);
        throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    }
    out << json << "\n";
    noma_string_free(json);
    return feasible ? 0 : 3;
}

int cmd_linklevel(const RunConfig& cfg) {
    const auto r_list = cfg.number_list("R");
    const long n = cfg.integer("n");
    const double db = cfg.number("snr_db");
    const double snr = db_to_linear(db);
    if (n < 2 || n % 2 != 0) throw ConfigError("config [linklevel]: n must be even and >= 2");

    // Targets are (layout, user) pairs: either an explicit layout document
    // plus a user index, or D with a list of interferer counts, which
    // builds M+1 full-frame layers of (D copies, 1 user) around the target.
    struct Target {
        LayoutPtr layout;
        int user;
        int copies;
        long interferers;
    };
    std::vector<Target> targets;
    if (cfg.has("layout") || cfg.has("user")) {
        LayoutPtr layout = layout_from_config(cfg);
        const int user = static_cast<int>(cfg.integer("user"));
        int total = 0, layers = 0;
        check(noma_layout_total_users(layout.get(), &total), "layout");
        check(noma_layout_num_layers(layout.get(), &layers), "layout");
        if (user < 0 || user >= total)
            throw ConfigError("config [linklevel]: user index out of range");
        std::vector<int> copies(layers), users(layers), interferers(layers);
        check(noma_layout_layers(layout.get(), copies.data(), users.data(), interferers.data()),
              "layout");
        int layer = 0, cursor = 0;
        for (int b = 0; b < layers; ++b) {
            cursor += users[b];
            if (user < cursor) {
                layer = b;
                break;
            }
        }
        targets.push_back(
            {std::move(layout), user, copies[layer], static_cast<long>(interferers[layer])});
    } else {
        const int D = static_cast<int>(cfg.integer("D"));
        for (long M : cfg.integer_list("M")) {
            std::vector<int> copies(M + 1, D), users(M + 1, 1);
            noma_layout* lraw = nullptr;
            check(noma_layout_build_custom(copies.data(), users.data(),
                                           static_cast<int>(M + 1), &lraw),
                  "layout");
            targets.push_back({LayoutPtr(lraw), 0, D, M});
        }
    }

    CsvWriter csv(cfg.out_path, cfg.command, cfg.seed, cfg.trials, cfg.config_hash,
                  {"D", "M", "R", "n", "snr_db", "ll_error", "ll_ci_lo", "ll_ci_hi", "flat_error",
                   "flat_ci_lo", "flat_ci_hi", "analytic_upper"});

    for (const Target& target : targets) {
        noma_samples* sraw = nullptr;
        check(noma_sample_sinr_linklevel(target.layout.get(), target.user, n, snr, cfg.trials,
                                         cfg.seed, &sraw),
              "sample_sinr_linklevel");
        SamplesPtr link(sraw);
        check(noma_sample_sinr(NOMA_SINR_EXACT, target.copies,
                               static_cast<int>(target.interferers), snr, cfg.trials, cfg.seed,
                               &sraw),
              "sample_sinr");
        SamplesPtr flat_ref(sraw);

        for (double R : r_list) {
            noma_estimate ll{}, ex{};
            check(noma_avg_error_mc(link.get(), R, static_cast<double>(n),
                                    NOMA_DISPERSION_EXACT, &ll),
                  "avg_error_mc");
            check(noma_avg_error_mc(flat_ref.get(), R, static_cast<double>(n), NOMA_DISPERSION_EXACT,
                                    &ex),
                  "avg_error_mc");
            double upper = 0.0;
            check(noma_avg_error_upper(target.copies, static_cast<int>(target.interferers), R,
                                       static_cast<double>(n), snr, 96, &upper),
                  "avg_error_upper");
            csv.row({std::to_string(target.copies), std::to_string(target.interferers), fmt(R),
                     std::to_string(n), fmt(db), fmt(ll.value), fmt(ll.ci_lo), fmt(ll.ci_hi),
                     fmt(ex.value), fmt(ex.ci_lo), fmt(ex.ci_hi), fmt(upper)});
        }
    }
    return 0;
}

int cmd_sic_sim(const RunConfig& cfg) {
    LayoutPtr layout = layout_from_config(cfg);
    int B = 0;
    check(noma_layout_num_layers(layout.get(), &B), "layout");
    std::vector<int> copies(B), users(B), interferers(B);
    check(noma_layout_layers(layout.get(), copies.data(), users.data(), interferers.data()),
          "layout");

    const double db = cfg.number("snr_db");
    const double snr = db_to_linear(db);

    std::vector<double> thresholds;
    if (cfg.has("thresholds")) {
        thresholds = cfg.number_list("thresholds");
        if (static_cast<int>(thresholds.size()) != B)
            throw ConfigError("config [sic_sim]: one threshold per layer required");
    } else {
        const double eps = cfg.number("eps_target");
        for (int b = 0; b < B; ++b) {
            double t = 0.0;
            check(noma_solve_threshold(copies[b], interferers[b], snr, eps, &t),
                  "solve_threshold");
            thresholds.push_back(t);
        }
    }

    const std::string decision = cfg.text_or("decision", "threshold");
    if (decision != "threshold" && decision != "fbl")
        throw ConfigError("config [sic_sim]: decision must be 'threshold' or 'fbl'");
    const long n = cfg.integer_or("n", 0);
    if (decision == "fbl" && (n < 2 || n % 2 != 0))
        throw ConfigError("config [sic_sim]: fbl decision needs an even n >= 2");

    std::vector<noma_estimate> eps(B), rho(B);
    check(noma_simulate_sic(layout.get(), thresholds.data(), snr, cfg.trials, cfg.seed,
                            decision == "fbl" ? NOMA_SIC_FBL_BERNOULLI : NOMA_SIC_THRESHOLD, n,
                            eps.data(), rho.data()),
          "simulate_sic");

    CsvWriter csv(cfg.out_path, cfg.command, cfg.seed, cfg.trials, cfg.config_hash,
                  {"b", "D", "K", "M", "threshold", "eps", "eps_ci_lo", "eps_ci_hi", "rho",
                   "rho_ci_lo", "rho_ci_hi", "rho_union_bound"});
    double eps_sum = 0.0;
    for (int b = 0; b < B; ++b) {
        eps_sum += eps[b].value;
        csv.row({std::to_string(b + 1), std::to_string(copies[b]), std::to_string(users[b]),
                 std::to_string(interferers[b]), fmt(thresholds[b]), fmt(eps[b].value),
                 fmt(eps[b].ci_lo), fmt(eps[b].ci_hi), fmt(rho[b].value), fmt(rho[b].ci_lo),
                 fmt(rho[b].ci_hi), fmt(eps_sum)});
    }
    return 0;
}

}  // namespace cli
