#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ncx2/mode_exact.hpp"

namespace ncx2 {

enum class SweepMode { Lambda, K };

struct Range {
    double min = 0.0;
    double max = 0.0;
};

/// Grid of (k, lambda) points compared across initial-guess strategies.
///
/// A lambda sweep holds k fixed and spaces lambda evenly over lambda_range.
/// A k sweep spaces k evenly over k_range and sets lambda = k / scale_t.
struct SweepSpec {
    SweepMode mode = SweepMode::Lambda;
    double k = 0.0;
    Range k_range;
    Range lambda_range;
    double scale_t = 0.0;
    int points = 25;
    std::vector<Strategy> strategies{Strategy::Naive, Strategy::Corrected};
    int reps = 100;
    double jitter_sigma = 1e-6;
    std::uint64_t seed = 1;

    /// Throws DomainError when the spec is inconsistent or a grid point has no
    /// interior mode to search for.
    void validate() const;

    /// Grid points in sweep order.
    std::vector<Params> grid() const;
};

struct BenchRecord {
    double k;
    double lambda;
    Strategy strategy;
    int doublings;
    int density_evaluations;
    std::optional<double> wall_ns_mean;
    std::optional<double> wall_ns_std;
    bool failed;
};

/// One record per grid point and strategy, in grid order then strategy order.
/// Counts come from the unjittered point. With timing on, each record also
/// gets the mean and standard deviation of `reps` exact_mode wall times at
/// jittered parameters. Solver failures mark the record failed; the sweep
/// itself never aborts on them.
std::vector<BenchRecord> run_sweep(const SweepSpec& spec, bool timing);

struct Summary {
    double mean;
    double std;  // population standard deviation
};

Summary summarize(std::span<const double> values);

/// Standard normal draws: std::mt19937_64 feeding a Box-Muller transform.
/// Draws come in pairs from two 64-bit outputs, each mapped via its top 53
/// bits to (0, 1].
/// The sequence is fixed by the seed on every platform.
class GaussianJitter {
public:
    explicit GaussianJitter(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double unit();

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace ncx2
