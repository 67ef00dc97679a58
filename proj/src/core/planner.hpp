#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/channel.hpp"

namespace noma::planner {

double rate_for_layer(double threshold);      // R = log2(1 + T)
double threshold_for_rate(double rate);       // T = 2^R - 1

// Largest T whose outage bound stays at or below the target; bisection after
// a doubling scan, with the bound's monotonicity verified on the bracket.
// M = 0 inverts the exact chi-squared cdf instead.
double solve_threshold(int copies, int interferers, double snr, double eps_target);

// rho_1 = eps_1, rho_b = rho_{b-1} + prod_{b'<b}(1 - eps_b') eps_b.
std::vector<double> propagated_error(std::span<const double> eps);

enum class RateTarget {
    PerLayer,    // every layer targets eps_target for its own (genie) outage
    Propagated,  // per-layer targets eps_target / B so the propagated sum meets eps_target
};

struct LayerPlan {
    struct Layer {
        int index = 0;        // b
        int copies = 0;       // D_(b)
        int users = 0;        // K_(b)
        int interferers = 0;  // M_(b) = B - b
        double threshold = 0.0;
        double rate = 0.0;
        double eps_predicted = 0.0;
        double rho_bound = 0.0;       // sum of eps up to this layer
        bool feasible = true;
        std::string violated_rule;    // which rule failed, when infeasible
        double copies_slack = 0.0;    // relative slack from rounding D up to a divisor
    };

    std::string mode;
    int blocks = 0;
    double snr = 0.0;
    std::optional<double> eps_target;
    std::optional<double> threshold;  // fixed-T plans
    std::vector<Layer> layers;

    bool all_feasible() const;
    channel::FrameLayout to_layout() const;
    std::string to_json() const;
};

// Dyadic frame (D_(b) = L / 2^(b-1)) with per-layer thresholds solved for
// the outage target.
LayerPlan plan_frame_dyadic(int blocks, int num_layers, double snr, double eps_target,
                            RateTarget target = RateTarget::PerLayer);

// Exponential layering D_(b) = ceil(4T 2^((B-b)/2)) at a common threshold T,
// with L rounded up so every layer's copy count divides it.
LayerPlan plan_frame_exponential(int num_layers, double threshold, double snr);

}  // namespace noma::planner
