#include "ncx2/bench.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ncx2/errors.hpp"

namespace ncx2 {
namespace {

std::vector<double> linspace(Range r, int points) {
    std::vector<double> out(static_cast<std::size_t>(points));
    const double step = (r.max - r.min) / (points - 1);
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = r.min + step * i;
    out.back() = r.max;
    return out;
}

bool searchable(double k, double lambda) { return k > 2.0 || (k == 2.0 && lambda > 2.0); }

void require_range(Range r, const char* name, double floor) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max || r.min < floor)
        throw DomainError(std::string("invalid ") + name + " range");
}

double time_once(const Params& p, Strategy s) {
    const auto start = std::chrono::steady_clock::now();
    try {
        [[maybe_unused]] volatile auto tag = exact_mode(p, s).tag;
    } catch (const SolverError&) {
    }
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::nano>(stop - start).count();
}

}  // namespace

void SweepSpec::validate() const {
    if (points < 2) throw DomainError("a sweep needs at least 2 points");
    if (reps < 1) throw DomainError("reps must be >= 1");
    if (!std::isfinite(jitter_sigma) || jitter_sigma < 0.0) throw DomainError("jitter sigma must be >= 0");
    if (strategies.empty()) throw DomainError("at least one strategy is required");

    if (mode == SweepMode::Lambda) {
        if (!std::isfinite(k) || !(k > 0.0)) throw DomainError("lambda sweep needs a fixed k > 0");
        require_range(lambda_range, "lambda", 0.0);
    } else {
        if (!std::isfinite(scale_t) || !(scale_t > 0.0)) throw DomainError("k sweep needs a scale > 0");
        require_range(k_range, "k", 0.0);
        if (!(k_range.min > 0.0)) throw DomainError("k sweep needs k > 0");
    }

    for (const auto& p : grid()) {
        if (!searchable(p.k(), p.lambda()))
            throw DomainError("grid point k = " + std::to_string(p.k()) + ", lambda = " + std::to_string(p.lambda()) +
                              " has no interior mode to search for");
    }
}

std::vector<Params> SweepSpec::grid() const {
    std::vector<Params> out;
    out.reserve(static_cast<std::size_t>(points));
    if (mode == SweepMode::Lambda) {
        for (double lambda : linspace(lambda_range, points)) out.emplace_back(k, lambda);
    } else {
        for (double kk : linspace(k_range, points)) out.emplace_back(kk, kk / scale_t);
    }
    return out;
}

std::vector<BenchRecord> run_sweep(const SweepSpec& spec, bool timing) {
    spec.validate();
    GaussianJitter jitter(spec.seed);

    std::vector<BenchRecord> records;
    for (const auto& p : spec.grid()) {
        for (Strategy s : spec.strategies) {
            BenchRecord rec{p.k(), p.lambda(), s, 0, 0, std::nullopt, std::nullopt, false};
            try {
                const auto result = exact_mode(p, s);
                if (result.trace) {
                    rec.doublings = result.trace->doublings;
                    rec.density_evaluations = result.trace->density_evaluations;
                }
            } catch (const FailedToBracket& e) {
                rec.failed = true;
                rec.doublings = e.trace().doublings;
                rec.density_evaluations = e.trace().density_evaluations;
            } catch (const CertificationFailed& e) {
                rec.failed = true;
                if (e.trace()) {
                    rec.doublings = e.trace()->doublings;
                    rec.density_evaluations = e.trace()->density_evaluations;
                }
            }

            if (timing) {
                std::vector<double> samples;
                samples.reserve(static_cast<std::size_t>(spec.reps));
                for (int r = 0; r < spec.reps; ++r) {
                    const double dk = spec.jitter_sigma * jitter.next();
                    const double dl = spec.jitter_sigma * jitter.next();
                    const Params jittered(p.k() + dk, std::max(0.0, p.lambda() + dl));
                    samples.push_back(time_once(jittered, s));
                }
                const auto stats = summarize(samples);
                rec.wall_ns_mean = stats.mean;
                rec.wall_ns_std = stats.std;
            }
            records.push_back(rec);
        }
    }
    return records;
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw DomainError("cannot summarize an empty sample");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

double GaussianJitter::unit() {
    // (0, 1]: keeps log() finite.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianJitter::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = unit();
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

}  // namespace ncx2
