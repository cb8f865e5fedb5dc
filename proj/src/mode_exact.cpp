#include "ncx2/mode_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncx2/density.hpp"
#include "ncx2/mode_approx.hpp"

namespace ncx2 {
namespace {

constexpr int kMaxGoldenSteps = 200;
constexpr int kSignScanPoints = 64;
constexpr double kSignScanStart = 1e-6;

std::string describe(const Params& p) {
    return "k = " + std::to_string(p.k()) + ", lambda = " + std::to_string(p.lambda());
}

// Rough size of the rounding error in log_pdf(x). The mixture sum handles terms of
// magnitude about lambda * |ln(lambda x)| plus (lambda + x) / 2.
double log_density_noise(const Params& p, double x) {
    const double lx = std::abs(std::log(x));
    const double lq = p.lambda() > 0.0 ? std::abs(std::log(0.25 * p.lambda() * x)) : 0.0;
    const double scale = 8.0 + x + p.lambda() * (1.0 + lq) + p.k() * (1.0 + lx);
    return 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

// True when the density at c (< d) is at least the density at d. When the two
// values are indistinguishable in floating point, the sign of the slope at the
// midpoint decides: for a unimodal function a negative slope there means the
// peak lies left of the midpoint.
bool left_is_higher(const Params& p, double c, double fc, double d, double fd) {
    const double noise = std::max(log_density_noise(p, c), log_density_noise(p, d));
    if (std::abs(fc - fd) > noise) return fc > fd;
    return dlogpdf_dx(p, 0.5 * (c + d)) < 0.0;
}

void certify_boundary_mode(const Params& p) {
    const double top = p.lambda() + 50.0;
    const double step = std::log(top / kSignScanStart) / (kSignScanPoints - 1);
    for (int i = 0; i < kSignScanPoints; ++i) {
        const double x = kSignScanStart * std::exp(step * i);
        if (dlogpdf_dx(p, x) > 0.0)
            throw CertificationFailed("density rises at x = " + std::to_string(x) +
                                          " although the boundary mode was expected for " + describe(p),
                                      std::nullopt);
    }
}

double strategy_guess(const Params& p, Strategy s) {
    switch (s) {
        case Strategy::Naive: return naive_initial_guess(p);
        case Strategy::Corrected: return corrected_initial_guess(p);
        case Strategy::Auto: return choose_initial_guess(p);
    }
    return naive_initial_guess(p);
}

}  // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::Corrected: return "corrected";
        case Strategy::Auto: return "auto";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "naive") return Strategy::Naive;
    if (name == "corrected") return Strategy::Corrected;
    if (name == "auto") return Strategy::Auto;
    throw DomainError("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(ModeTag t) {
    switch (t) {
        case ModeTag::Interior: return "INTERIOR";
        case ModeTag::AtZero: return "AT_ZERO";
        case ModeTag::UnboundedAtZero: return "UNBOUNDED_AT_ZERO";
    }
    return "?";
}

FailedToBracket::FailedToBracket(const BracketTrace& trace)
    : SolverError(Kind::FailedToBracket, "failed to bracket the mode from x0 = " +
                                             std::to_string(trace.initial_guess) + " within " +
                                             std::to_string(trace.doublings) + " doublings"),
      trace_(trace) {}

CertificationFailed::CertificationFailed(const std::string& what, std::optional<BracketTrace> trace)
    : SolverError(Kind::CertificationFailed, what), trace_(trace) {}

BracketTrace bracket_expand(const Params& p, double x0, int max_doublings) {
    if (!std::isfinite(x0) || !(x0 > 0.0))
        throw DomainError("initial guess must be finite and > 0, got " + std::to_string(x0));
    if (max_doublings < 1) throw DomainError("max_doublings must be >= 1");

    const double center = log_pdf(p, x0).log_f;
    if (!std::isfinite(center))
        throw DomainError("density at the initial guess must be positive and finite");

    BracketTrace trace{.initial_guess = x0, .doublings = 0, .density_evaluations = 1, .final_bracket = {x0, x0}};
    for (int i = 1; i <= max_doublings; ++i) {
        const double lo = std::ldexp(x0, -i);
        const double hi = std::ldexp(x0, i);
        const double flo = log_pdf(p, lo).log_f;
        const double fhi = log_pdf(p, hi).log_f;
        trace.doublings = i;
        trace.density_evaluations += 2;
        trace.final_bracket = {lo, hi};
        if (flo < center && fhi < center) return trace;
    }
    throw FailedToBracket(trace);
}

double maximize_unimodal(const Params& p, double lo, double hi, double xtol) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo >= 0.0) || !(lo < hi))
        throw DomainError("malformed bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (!(xtol > 0.0)) throw DomainError("xtol must be > 0");

    const double shrink = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double x) { return log_pdf(p, x).log_f; };

    double a = lo;
    double b = hi;
    double c = b - shrink * (b - a);
    double d = a + shrink * (b - a);
    double fc = f(c);
    double fd = f(d);

    for (int step = 0; step < kMaxGoldenSteps; ++step) {
        if (b - a <= xtol * std::max(1.0, 0.5 * (a + b))) break;
        if (left_is_higher(p, c, fc, d, fd)) {
            b = d;
            d = c;
            fd = fc;
            c = b - shrink * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + shrink * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

ModeResult exact_mode(const Params& p, Strategy strategy, const SolveOptions& opts) {
    const auto cls = classify_mode(p).tag;
    if (cls == ModeClass::UnboundedAtZero) return {ModeTag::UnboundedAtZero, std::nullopt, std::nullopt, std::nullopt};

    if (cls == ModeClass::BoundaryCandidate && p.lambda() <= 2.0) {
        certify_boundary_mode(p);
        return {ModeTag::AtZero, std::nullopt, std::nullopt, std::nullopt};
    }

    if (p.lambda() == 0.0) {
        const double x = p.k() - 2.0;
        const BracketTrace trace{.initial_guess = x, .doublings = 0, .density_evaluations = 0, .final_bracket = {x, x}};
        return {ModeTag::Interior, x, master_residual(p, x), trace};
    }

    BracketTrace trace;
    try {
        trace = bracket_expand(p, strategy_guess(p, strategy), opts.max_doublings);
    } catch (const FailedToBracket&) {
        if (strategy != Strategy::Auto) throw;
        const bool used_corrected = asymptotic_scale(p) <= kConservativeScale;
        const double other = used_corrected ? naive_initial_guess(p) : corrected_initial_guess(p);
        trace = bracket_expand(p, other, opts.max_doublings);
    }

    const double x = maximize_unimodal(p, trace.final_bracket.lo, trace.final_bracket.hi, opts.xtol);
    const double r = master_residual(p, x);
    if (!(std::abs(r) <= opts.rtol))
        throw CertificationFailed("master-equation residual " + std::to_string(r) + " at x = " + std::to_string(x) +
                                      " exceeds " + std::to_string(opts.rtol) + " for " + describe(p),
                                  trace);
    return {ModeTag::Interior, x, r, trace};
}

double master_residual(const Params& p, double x) { return 2.0 * x * dlogpdf_dx(p, x); }

double ode_residual(const Params& p, double x, double xprime) {
    if (p.lambda() <= 0.0) throw DomainError("mode ODE requires lambda > 0");
    const double k = p.k();
    const double lambda = p.lambda();
    return lambda * xprime * (x - k - lambda + 4.0) + x * (x - k - lambda + 2.0);
}

}  // namespace ncx2
