#include "hifd/chi2.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hifd/error.hpp"

namespace hifd {
namespace {

constexpr int kMaxIterations = 500;
constexpr double kConvergence = 1e-15;

// Series representation, converges fastest for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kConvergence) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kConvergence;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double frac = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        frac *= delta;
        if (std::fabs(delta - 1.0) < kConvergence) break;
    }
    return frac * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) fail(ErrorCode::invalid_argument, "gamma P requires a > 0");
    if (!(x >= 0.0)) fail(ErrorCode::invalid_argument, "gamma P requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi2_cdf(double dof, double x) {
    if (!(dof > 0.0)) fail(ErrorCode::invalid_argument, "chi2_cdf requires dof > 0");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(dof / 2.0, x / 2.0);
}

double chi2_quantile(double dof, double p) {
    if (!(dof > 0.0))
        fail(ErrorCode::invalid_argument, "chi2_quantile requires dof > 0, got " + std::to_string(dof));
    if (!(p > 0.0 && p < 1.0))
        fail(ErrorCode::invalid_argument, "chi2_quantile requires 0 < p < 1, got " + std::to_string(p));

    // Bracket: the mean is dof, the tail decays exponentially.
    double lo = 0.0;
    double hi = dof + 10.0;
    while (chi2_cdf(dof, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) fail(ErrorCode::internal, "chi2_quantile bracket expansion failed");
    }

    // Bisection to a tight interval, then Newton polish with the density.
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double c = chi2_cdf(dof, mid);
        if (c < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * (1.0 + mid)) break;
    }

    const double a = dof / 2.0;
    const double log_norm = -a * std::log(2.0) - std::lgamma(a);
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double err = chi2_cdf(dof, x) - p;
        if (std::fabs(err) < 1e-12) break;
        const double log_pdf = log_norm + (a - 1.0) * std::log(x) - x / 2.0;
        const double pdf = std::exp(log_pdf);
        if (!(pdf > 0.0)) break;
        double next = x - err / pdf;
        if (next <= lo || next >= hi) break;  // keep the bisection bracket
        x = next;
    }
    return x;
}

}  // namespace hifd
