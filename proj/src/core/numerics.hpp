#pragma once

#include <functional>
#include <vector>

namespace noma::numerics {

// Regularized lower incomplete gamma P(a, x): the cdf of Gamma(a, 1) at x.
// Series for x < a+1, continued fraction otherwise.
double regularized_lower_gamma(double a, double x);

// Gaussian tail Q(x) = 0.5 * erfc(x / sqrt(2)) and its inverse on (0,1).
double q_function(double x);
double q_inverse(double p);

double log_gamma(double a);                           // a > 0
double log_binomial(double top, double bottom);       // generalized, top >= bottom > 0 allowed down to bottom >= 0

// Binary entropy in bits; H(0) = H(1) = 0 by the usual limit convention.
double binary_entropy(double p);

enum class RuleKind { GaussianWeight, FiniteInterval };

// Quadrature rule for E[f(X)], X ~ N(0,1): sum(weights * f(nodes)).
// A gaussian-weight rule integrates the constant 1 to 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    RuleKind kind = RuleKind::GaussianWeight;
};

// Gauss-Hermite rule rescaled to the standard normal weight.
const QuadratureRule& gaussian_rule(int size);

// integral of f(x) * phi(x) dx over the real line, phi the standard normal pdf.
double integrate_gaussian(const std::function<double(double)>& f, int rule_size);

// Verification mode: adaptive Simpson on x in [-10, 10] of f(x) * phi(x).
double integrate_gaussian_adaptive(const std::function<double(double)>& f, double tol = 1e-10);

}  // namespace noma::numerics
