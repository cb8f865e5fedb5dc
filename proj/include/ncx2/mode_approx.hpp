#pragma once

#include <optional>
#include <string_view>

#include "ncx2/params.hpp"

namespace ncx2 {

/// Asymptotic scale below which the closed-form mode replaces the naive guess.
inline constexpr double kConservativeScale = 0.25;

/// Closed-form mode lambda + k - 3 + (k - 3) / (2 lambda), valid for k/lambda << 1.
struct ApproxMode {
    double value;
    double scale_t;      // k / lambda
    bool applicable;     // k > 2 and scale_t <= the switching scale
    double error_order;  // k^2 / lambda^2, the order of the neglected remainder
};

enum class ModeClass { UnboundedAtZero, BoundaryCandidate, Interior };

struct ModeClassification {
    ModeClass tag;
    std::optional<double> boundary_lambda;  // 2 for BoundaryCandidate
};

std::string_view to_string(ModeClass c);

/// Throws DomainError for lambda == 0.
ApproxMode approx_mode(const Params& p, double switch_scale = kConservativeScale);

/// t = k / lambda. Throws DomainError for lambda == 0.
double asymptotic_scale(const Params& p);

/// Existence class of the mode, decided by k alone.
ModeClassification classify_mode(const Params& p);

/// lambda above which the naive guess k + 1 needs a second bracket doubling: k + 5.
double undershoot_lambda_threshold(double k);

/// Same threshold as a multiple of k (lambda = alpha k): 5/k + 1.
double alpha_threshold(double k);

/// Initial guess for the bracket search: the closed-form mode (floored at 1e-8)
/// when k/lambda <= switch_scale, otherwise k + 1.
/// Requires k > 2, or k == 2 with lambda > 2; throws DomainError otherwise.
double choose_initial_guess(const Params& p, double switch_scale = kConservativeScale);

/// k + 1, the historical guess.
double naive_initial_guess(const Params& p);

/// Closed-form mode floored at 1e-8; throws DomainError for lambda == 0.
double corrected_initial_guess(const Params& p);

}  // namespace ncx2
