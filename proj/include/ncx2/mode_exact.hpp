#pragma once

#include <optional>
#include <string_view>

#include "ncx2/errors.hpp"
#include "ncx2/params.hpp"

namespace ncx2 {

enum class Strategy { Naive, Corrected, Auto };

std::string_view to_string(Strategy s);
/// Parses "naive", "corrected" or "auto"; throws DomainError otherwise.
Strategy parse_strategy(std::string_view name);

struct Bracket {
    double lo;
    double hi;
};

/// Record of one region-doubling search around x0.
/// After i doublings the region is [x0 / 2^i, x0 * 2^i].
struct BracketTrace {
    double initial_guess = 0.0;
    int doublings = 0;
    int density_evaluations = 0;
    Bracket final_bracket{};
};

enum class ModeTag { Interior, AtZero, UnboundedAtZero };

std::string_view to_string(ModeTag t);

struct ModeResult {
    ModeTag tag;
    std::optional<double> location;  // present iff Interior
    std::optional<double> residual;  // master-equation residual at location
    std::optional<BracketTrace> trace;
};

struct SolveOptions {
    double xtol = 1e-10;     // relative position tolerance of the interior maximizer
    double rtol = 1e-6;      // certification bound on |master_residual|
    int max_doublings = 60;
};

class FailedToBracket : public SolverError {
public:
    explicit FailedToBracket(const BracketTrace& trace);
    const BracketTrace& trace() const noexcept { return trace_; }

private:
    BracketTrace trace_;
};

class CertificationFailed : public SolverError {
public:
    CertificationFailed(const std::string& what, std::optional<BracketTrace> trace);
    const std::optional<BracketTrace>& trace() const noexcept { return trace_; }

private:
    std::optional<BracketTrace> trace_;
};

/// Smallest i >= 1 such that the log-density at both x0 / 2^i and x0 * 2^i is
/// strictly below its value at x0. Ties count as "not yet below".
/// Throws FailedToBracket once i would exceed max_doublings.
BracketTrace bracket_expand(const Params& p, double x0, int max_doublings = 60);

/// Golden-section search for the maximum of the log-density on [lo, hi].
/// Stops when the bracket is narrower than xtol * max(1, x), or after 200 steps.
double maximize_unimodal(const Params& p, double lo, double hi, double xtol = 1e-10);

/// Mode of the density, certified against the master equation.
///
/// k < 2 has no mode (unbounded at 0). k == 2 with lambda <= 2 peaks at the
/// boundary, which is confirmed by a sign scan of the log-derivative.
/// lambda == 0 with k > 2 is the central mode k - 2. Everything else is
/// bracketed from the strategy's initial guess and maximized. Auto starts
/// from the policy guess and retries once from the other guess if the
/// bracket cannot be closed.
ModeResult exact_mode(const Params& p, Strategy strategy = Strategy::Auto, const SolveOptions& opts = {});

/// r(x) = 2x d/dx ln f(x) = sqrt(lambda x) I'_v/I_v - x + (k-2)/2 with v = (k-2)/2.
/// Zero exactly at an interior mode; positive to its left, negative to its right.
double master_residual(const Params& p, double x);

/// lambda x' (x - k - lambda + 4) + x (x - k - lambda + 2): the ODE satisfied
/// by the mode x(lambda) at fixed k. Requires lambda > 0.
double ode_residual(const Params& p, double x, double xprime);

}  // namespace ncx2
