#include "ncx2/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ncx2/errors.hpp"
#include "log_gamma.hpp"

namespace ncx2 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 1e-17;

void check_point(double x) {
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("evaluation point must be finite and >= 0, got " + std::to_string(x));
}

double log_pdf_at_zero(const Params& p) {
    if (p.k() > 2.0) return -kInf;
    if (p.k() == 2.0) return -0.5 * p.lambda() - std::numbers::ln2;
    throw DivergenceError("density diverges at x = 0 for k < 2 (k = " + std::to_string(p.k()) + ")");
}

struct SeriesSum {
    double log_f;
    double mean_index;  // posterior mean of the mixture index
};

// With h = k/2 and q = lambda*x/4, term j of the mixture is
//   exp(c0 + j ln q - lgamma(j+1) - lgamma(h+j)),
//   c0 = -(lambda+x)/2 + (h-1) ln x - h ln 2.
// The exponent is concave in j; its maximum is the first j with (j+1)(h+j) >= q.
SeriesSum mixture_series(const Params& p, double x) {
    const double h = 0.5 * p.k();
    const double lambda = p.lambda();
    const double c0 = -0.5 * (lambda + x) + (h - 1.0) * std::log(x) - h * std::numbers::ln2;

    if (lambda == 0.0) return {c0 - detail::log_gamma(h), 0.0};

    const double q = 0.25 * lambda * x;
    const double log_q = std::log(q);

    const double root = 0.5 * (-(h + 1.0) + std::sqrt((h - 1.0) * (h - 1.0) + 4.0 * q));
    double peak = root > 0.0 ? std::floor(root) : 0.0;
    while ((peak + 1.0) * (h + peak) < q) peak += 1.0;
    while (peak > 0.0 && peak * (h + peak - 1.0) >= q) peak -= 1.0;

    const double a_peak = peak * log_q - detail::log_gamma(peak + 1.0) - detail::log_gamma(h + peak);

    // Weights are relative to the peak term; sum and first moment around the peak.
    double sum = 1.0;
    double moment = 0.0;

    double a = 0.0;
    for (double j = peak + 1.0;; j += 1.0) {
        a += log_q - std::log(j) - std::log(h + j - 1.0);
        const double w = std::exp(a);
        sum += w;
        moment += (j - peak) * w;
        if (w < kTailCutoff * sum) break;
    }
    a = 0.0;
    for (double j = peak - 1.0; j >= 0.0; j -= 1.0) {
        a -= log_q - std::log(j + 1.0) - std::log(h + j);
        const double w = std::exp(a);
        sum += w;
        moment += (j - peak) * w;
        if (w < kTailCutoff * sum) break;
    }

    return {c0 + a_peak + std::log(sum), peak + moment / sum};
}

}  // namespace

LogDensityValue log_pdf(const Params& p, double x) {
    check_point(x);
    if (x == 0.0) return {log_pdf_at_zero(p), x};
    return {mixture_series(p, x).log_f, x};
}

double pdf(const Params& p, double x) { return std::exp(log_pdf(p, x).log_f); }

double dlogpdf_dx(const Params& p, double x) {
    if (!std::isfinite(x) || !(x > 0.0))
        throw DomainError("derivative requires finite x > 0, got " + std::to_string(x));
    const auto s = mixture_series(p, x);
    return (0.5 * p.k() - 1.0 + s.mean_index) / x - 0.5;
}

double log_pdf_mixture_oracle(const Params& p, double x, int terms) {
    check_point(x);
    if (terms < 1) throw DomainError("oracle needs at least one term");

    using real = long double;
    const real k = p.k();
    const real lambda = p.lambda();

    if (x == 0.0) {
        if (p.k() < 2.0) throw DivergenceError("density diverges at x = 0 for k < 2");
        if (p.k() > 2.0) return -kInf;
        // Only the j = 0 term, a chi-squared(2) density of 1/2, survives.
        return static_cast<double>(-lambda / 2 - std::log(real{2}));
    }

    const real lx = std::log(static_cast<real>(x));
    const real half_lambda = lambda / 2;
    auto log_term = [&](int j) {
        const real dof = k + 2 * j;
        real poisson = -half_lambda;
        if (j > 0) poisson += j * std::log(half_lambda) - std::lgamma(static_cast<real>(j) + 1);
        const real chi2 = (dof / 2 - 1) * lx - static_cast<real>(x) / 2 - (dof / 2) * std::log(real{2}) -
                          std::lgamma(dof / 2);
        return poisson + chi2;
    };

    const int n = lambda == 0 ? 1 : terms;
    real top = -std::numeric_limits<real>::infinity();
    for (int j = 0; j < n; ++j) top = std::max(top, log_term(j));
    real sum = 0;
    for (int j = 0; j < n; ++j) sum += std::exp(log_term(j) - top);
    return static_cast<double>(top + std::log(sum));
}

}  // namespace ncx2
