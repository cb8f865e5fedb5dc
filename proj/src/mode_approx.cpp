#include "ncx2/mode_approx.hpp"

#include <algorithm>
#include <string>

#include "ncx2/errors.hpp"

namespace ncx2 {
namespace {

constexpr double kGuessFloor = 1e-8;

void require_positive_lambda(const Params& p, const char* what) {
    if (p.lambda() <= 0.0) throw DomainError(std::string(what) + " requires lambda > 0");
}

void require_positive_k(double k) {
    if (!(k > 0.0)) throw DomainError("degrees of freedom must be > 0, got " + std::to_string(k));
}

}  // namespace

std::string_view to_string(ModeClass c) {
    switch (c) {
        case ModeClass::UnboundedAtZero: return "UNBOUNDED_AT_ZERO";
        case ModeClass::BoundaryCandidate: return "BOUNDARY_CANDIDATE";
        case ModeClass::Interior: return "INTERIOR";
    }
    return "?";
}

ApproxMode approx_mode(const Params& p, double switch_scale) {
    require_positive_lambda(p, "approximate mode");
    const double k = p.k();
    const double lambda = p.lambda();
    const double t = k / lambda;
    return {
        .value = lambda + (k - 3.0) + (k - 3.0) / (2.0 * lambda),
        .scale_t = t,
        .applicable = k > 2.0 && t <= switch_scale,
        .error_order = t * t,
    };
}

double asymptotic_scale(const Params& p) {
    require_positive_lambda(p, "asymptotic scale");
    return p.k() / p.lambda();
}

ModeClassification classify_mode(const Params& p) {
    if (p.k() < 2.0) return {ModeClass::UnboundedAtZero, std::nullopt};
    if (p.k() == 2.0) return {ModeClass::BoundaryCandidate, 2.0};
    return {ModeClass::Interior, std::nullopt};
}

double undershoot_lambda_threshold(double k) {
    require_positive_k(k);
    return k + 5.0;
}

double alpha_threshold(double k) {
    require_positive_k(k);
    return 5.0 / k + 1.0;
}

double naive_initial_guess(const Params& p) { return p.k() + 1.0; }

double corrected_initial_guess(const Params& p) {
    return std::max(approx_mode(p).value, kGuessFloor);
}

double choose_initial_guess(const Params& p, double switch_scale) {
    const bool searchable = p.k() > 2.0 || (p.k() == 2.0 && p.lambda() > 2.0);
    if (!searchable)
        throw DomainError("no interior mode search applies for k = " + std::to_string(p.k()) +
                          ", lambda = " + std::to_string(p.lambda()));
    if (p.lambda() > 0.0 && asymptotic_scale(p) <= switch_scale) return corrected_initial_guess(p);
    return naive_initial_guess(p);
}

}  // namespace ncx2
