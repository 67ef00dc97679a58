#include "core/planner.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "core/bounds.hpp"
#include "core/errors.hpp"

namespace noma::planner {

double rate_for_layer(double threshold) {
    if (!(threshold > 0.0)) throw DomainError("rate_for_layer: T must be > 0");
    return std::log2(1.0 + threshold);
}

double threshold_for_rate(double rate) {
    if (!(rate > 0.0)) throw DomainError("threshold_for_rate: R must be > 0");
    return std::exp2(rate) - 1.0;
}

namespace {

// Outage predicted by the closed forms: the bounded total for M >= 1 (taken
// as +inf where d <= 0), the exact cdf for M = 0.
double predicted_outage(int copies, int interferers, double threshold, double snr) {
    if (interferers == 0) return bounds::outage_exact_m0(copies, threshold, snr);
    const bounds::BoundResult b = bounds::outage_bound(copies, interferers, threshold, snr);
    return b.valid ? *b.total : HUGE_VAL;
}

}  // namespace

double solve_threshold(int copies, int interferers, double snr, double eps_target) {
    if (!(eps_target > 0.0 && eps_target < 0.5))
        throw DomainError("solve_threshold: eps_target must lie in (0, 0.5)");
    if (copies < 1 || interferers < 0) throw DomainError("solve_threshold: bad D or M");
    if (!(snr > 0.0)) throw DomainError("solve_threshold: snr must be > 0");

    constexpr double kTMin = 1e-6;
    if (predicted_outage(copies, interferers, kTMin, snr) > eps_target)
        throw InfeasibleError("solve_threshold: target outage unreachable even at tiny T");

    // Doubling scan for the first T exceeding the target (or leaving d > 0).
    double lo = kTMin;
    double hi = kTMin;
    for (int i = 0; i < 64; ++i) {
        hi = lo * 2.0;
        if (predicted_outage(copies, interferers, hi, snr) > eps_target) break;
        lo = hi;
    }

    // The bisection assumes the bound is monotone in T; verify on the
    // bracket. Bisection keeps its "outage <= target at the returned T"
    // guarantee either way, so a violation only warns.
    double prev = predicted_outage(copies, interferers, lo, snr);
    for (int i = 1; i <= 32; ++i) {
        const double t = lo + (hi - lo) * i / 32.0;
        const double v = predicted_outage(copies, interferers, t, snr);
        if (v + 1e-15 < prev) {
            std::fprintf(stderr,
                         "solve_threshold: outage bound not monotone on [%g, %g] "
                         "(D=%d, M=%d); returned threshold may not be maximal\n",
                         lo, hi, copies, interferers);
            break;
        }
        prev = v;
    }

    while ((hi - lo) / hi > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (predicted_outage(copies, interferers, mid, snr) <= eps_target)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::vector<double> propagated_error(std::span<const double> eps) {
    std::vector<double> rho;
    rho.reserve(eps.size());
    double survive = 1.0;  // probability all lower layers decoded
    double acc = 0.0;
    for (double e : eps) {
        if (!(e >= 0.0 && e <= 1.0)) throw DomainError("propagated_error: eps must lie in [0,1]");
        acc += survive * e;
        survive *= 1.0 - e;
        rho.push_back(acc);
    }
    return rho;
}

bool LayerPlan::all_feasible() const {
    for (const Layer& l : layers)
        if (!l.feasible) return false;
    return true;
}

channel::FrameLayout LayerPlan::to_layout() const {
    std::vector<std::pair<int, int>> dk;
    for (const Layer& l : layers) dk.emplace_back(l.copies, l.users);
    return channel::build_layout_custom(dk);
}

std::string LayerPlan::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["L"] = blocks;
    j["B"] = static_cast<int>(layers.size());
    j["snr"] = snr;
    j["snr_db"] = 10.0 * std::log10(snr);
    if (eps_target) j["eps_target"] = *eps_target;
    if (threshold) j["threshold"] = *threshold;
    j["feasible"] = all_feasible();
    j["layers"] = nlohmann::json::array();
    for (const Layer& l : layers) {
        nlohmann::json jl;
        jl["b"] = l.index;
        jl["D"] = l.copies;
        jl["K"] = l.users;
        jl["M"] = l.interferers;
        jl["threshold"] = l.threshold;
        jl["rate"] = l.rate;
        jl["eps_predicted"] = l.eps_predicted;
        jl["rho_bound"] = l.rho_bound;
        jl["feasible"] = l.feasible;
        if (!l.violated_rule.empty()) jl["violated_rule"] = l.violated_rule;
        if (l.copies_slack > 0.0) jl["copies_slack"] = l.copies_slack;
        j["layers"].push_back(jl);
    }
    return j.dump(2);
}

namespace {

void fill_predictions(LayerPlan& plan) {
    double eps_sum = 0.0;
    for (auto& l : plan.layers) {
        eps_sum += l.eps_predicted;
        l.rho_bound = eps_sum;
    }
}

void check_design_rule(LayerPlan::Layer& layer) {
    // The high-SNR design rule M <= 2 log2(D / (4T)).
    const double ratio = layer.copies / (4.0 * layer.threshold);
    const bool ok =
        ratio >= 1.0 && layer.interferers <= 2.0 * std::log2(ratio) + 1e-12;
    if (layer.interferers > 0 && !ok) {
        layer.feasible = false;
        layer.violated_rule = "interferer budget M <= 2 log2(D/(4T))";
    }
}

}  // namespace

LayerPlan plan_frame_dyadic(int blocks, int num_layers, double snr, double eps_target,
                            RateTarget target) {
    if (!(snr > 0.0)) throw DomainError("plan_frame_dyadic: snr must be > 0");
    channel::FrameLayout layout = channel::build_layout(blocks, num_layers);

    LayerPlan plan;
    plan.mode = target == RateTarget::PerLayer ? "dyadic" : "dyadic-propagated";
    plan.blocks = blocks;
    plan.snr = snr;
    plan.eps_target = eps_target;
    const double per_layer_target =
        target == RateTarget::PerLayer ? eps_target : eps_target / num_layers;

    for (const channel::LayerSpec& s : layout.layers) {
        LayerPlan::Layer l;
        l.index = s.index;
        l.copies = s.copies;
        l.users = s.users;
        l.interferers = s.interferers;
        try {
            l.threshold = solve_threshold(s.copies, s.interferers, snr, per_layer_target);
            l.rate = rate_for_layer(l.threshold);
            l.eps_predicted = predicted_outage(s.copies, s.interferers, l.threshold, snr);
            check_design_rule(l);
        } catch (const InfeasibleError& e) {
            l.feasible = false;
            l.violated_rule = e.what();
            l.threshold = 0.0;
            l.rate = 0.0;
            l.eps_predicted = 1.0;
        }
        plan.layers.push_back(std::move(l));
    }
    fill_predictions(plan);
    return plan;
}

LayerPlan plan_frame_exponential(int num_layers, double threshold, double snr) {
    if (num_layers < 1) throw DomainError("plan_frame_exponential: B must be >= 1");
    if (!(threshold > 0.0)) throw DomainError("plan_frame_exponential: T must be > 0");
    if (!(snr > 0.0)) throw DomainError("plan_frame_exponential: snr must be > 0");

    // D_(b) = 4T 2^(M_(b)/2) with M_(b) = B - b, rounded up to integers,
    // then L rounded up to a common multiple so every D_(b) divides it.
    std::vector<int> copies(num_layers);
    std::vector<double> raw(num_layers);
    for (int b = 1; b <= num_layers; ++b) {
        raw[b - 1] = 4.0 * threshold * std::exp2((num_layers - b) / 2.0);
        copies[b - 1] = static_cast<int>(std::ceil(raw[b - 1]));
    }
    long long l0 = 0;
    for (int b = 1; b <= num_layers; ++b)
        l0 = std::max(l0, static_cast<long long>(copies[b - 1]) * (1LL << (b - 1)));
    long long common = 1;
    for (int d : copies) common = std::lcm(common, static_cast<long long>(d));
    const long long blocks = (l0 + common - 1) / common * common;

    LayerPlan plan;
    plan.mode = "exponential";
    plan.blocks = static_cast<int>(blocks);
    plan.snr = snr;
    plan.threshold = threshold;
    for (int b = 1; b <= num_layers; ++b) {
        LayerPlan::Layer l;
        l.index = b;
        l.copies = copies[b - 1];
        l.users = static_cast<int>(blocks / copies[b - 1]);
        l.interferers = num_layers - b;
        l.threshold = threshold;
        l.rate = rate_for_layer(threshold);
        l.eps_predicted = predicted_outage(l.copies, l.interferers, threshold, snr);
        l.copies_slack = copies[b - 1] / raw[b - 1] - 1.0;
        check_design_rule(l);
        plan.layers.push_back(std::move(l));
    }
    fill_predictions(plan);
    return plan;
}

}  // namespace noma::planner
