#include "core/numerics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "core/errors.hpp"

namespace noma::numerics {

namespace {

// P(a,x) via the power series around 0; converges fast for x < a+1.
double lower_gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) via the Lentz continued fraction; converges fast for x >= a+1.
double upper_gamma_cf(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("regularized_lower_gamma: a must be > 0");
    if (!(x >= 0.0)) throw DomainError("regularized_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_cf(a, x);
}

double q_function(double x) {
    return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("q_inverse: p must lie in (0,1)");
    // Work on the small-probability side where Q is well conditioned; for
    // p in [0.5, 1) the reflection costs nothing since 1-p is exact there.
    if (p > 0.5) return -q_inverse(1.0 - p);
    // Acklam's rational approximation to the normal quantile, then Newton
    // polish against Q itself. Q^{-1}(p) = -Phi^{-1}(p).
    static constexpr double a[] = {-39.69683028665376, 220.9460984245205,  -275.9285104469687,
                                   138.3577518672690,  -30.66479806614716, 2.506628277459239};
    static constexpr double b[] = {-54.47609879822406, 161.5858368580409, -155.6989798598866,
                                   66.80131188771972, -13.28068155288572};
    static constexpr double c[] = {-7.784894002430293e-3, -0.3223964580411365, -2.400758277161838,
                                   -2.549732539343734,    4.374664141464968,   2.938163982698783};
    static constexpr double d[] = {7.784695709041462e-3, 0.3224671290700398, 2.445134137142996,
                                   3.754408661907416};
    const double plow = 0.02425;
    double z;  // Phi^{-1}(p)
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double x = -z;
    for (int it = 0; it < 3; ++it) {
        const double err = q_function(x) - p;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        if (pdf <= 0.0) break;
        x += err / pdf;  // dQ/dx = -pdf
    }
    return x;
}

double log_gamma(double a) {
    if (!(a > 0.0)) throw DomainError("log_gamma: argument must be > 0");
    return std::lgamma(a);
}

double log_binomial(double top, double bottom) {
    if (!(top > 0.0) || !(bottom > 0.0)) throw DomainError("log_binomial: arguments must be > 0");
    if (top < bottom) throw DomainError("log_binomial: top must be >= bottom");
    return log_gamma(top + 1.0) - log_gamma(bottom + 1.0) - log_gamma(top - bottom + 1.0);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p must lie in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

namespace {

// Implicit-QL diagonalization of a symmetric tridiagonal matrix, tracking
// the first row of the accumulated rotations (the classic IMTQLX routine).
// d holds the diagonal, e the subdiagonal; on return d carries ascending
// eigenvalues and z the first components of the matching eigenvectors.
void tridiagonal_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                                 std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    constexpr double kEps = 2.2204460492503131e-16;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                if (std::fabs(e[m]) <= kEps * (std::fabs(d[m]) + std::fabs(d[m + 1]))) break;
            }
            if (m == l) break;
            if (iter++ == 60) throw DomainError("gaussian_rule: eigenvalue iteration stalled");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // insertion sort ascending, permuting the vector alongside
    for (int i = 1; i < n; ++i) {
        const double dv = d[i];
        const double zv = z[i];
        int j = i - 1;
        for (; j >= 0 && d[j] > dv; --j) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
        }
        d[j + 1] = dv;
        z[j + 1] = zv;
    }
}

}  // namespace

const QuadratureRule& gaussian_rule(int size) {
    if (size < 1) throw DomainError("gaussian_rule: size must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(size);
    if (it != cache.end()) return it->second;

    // Golub-Welsch: the Jacobi matrix of the exp(-t^2) weight has zero
    // diagonal and subdiagonal sqrt(k/2); eigenvalues are the nodes and the
    // squared first eigenvector components give weights / mu0, mu0 = sqrt(pi).
    std::vector<double> diag(size, 0.0), sub(size, 0.0), first(size, 0.0);
    for (int k = 1; k < size; ++k) sub[k - 1] = std::sqrt(k / 2.0);
    first[0] = 1.0;
    tridiagonal_eigen_first_row(diag, sub, first);

    QuadratureRule rule;
    rule.kind = RuleKind::GaussianWeight;
    rule.nodes.resize(size);
    rule.weights.resize(size);
    for (int i = 0; i < size; ++i) {
        rule.nodes[i] = std::numbers::sqrt2 * diag[i];  // x = sqrt(2) t maps exp(-t^2) to phi(x)
        rule.weights[i] = first[i] * first[i];  // mu0 cancels against the 1/sqrt(pi) rescale
    }
    return cache.emplace(size, std::move(rule)).first->second;
}

double integrate_gaussian(const std::function<double(double)>& f, int rule_size) {
    const QuadratureRule& rule = gaussian_rule(rule_size);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& g, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_step(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_gaussian_adaptive(const std::function<double(double)>& f, double tol) {
    const auto g = [&f](double x) {
        return f(x) * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    };
    // Integrate the halves separately so a kink at 0 (step integrands) is on a panel edge.
    double total = 0.0;
    for (const auto& [a, b] : {std::pair{-10.0, 0.0}, std::pair{0.0, 10.0}}) {
        const double m = 0.5 * (a + b);
        const double fa = g(a), fm = g(m), fb = g(b);
        total += adaptive_step(g, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
    }
    return total;
}

}  // namespace noma::numerics
