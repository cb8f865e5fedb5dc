#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "doctest.h"
#include "ncx2/density.hpp"
#include "ncx2/errors.hpp"
#include "ncx2/mode_approx.hpp"
#include "ncx2/mode_exact.hpp"

using ncx2::ModeTag;
using ncx2::Params;
using ncx2::Strategy;

namespace {

double oracle_log_pdf(const Params& p, double x) {
    const int terms = static_cast<int>(p.lambda() + std::sqrt(p.lambda() * x) + 150);
    return ncx2::log_pdf_mixture_oracle(p, x, terms);
}

// Region doubling replayed on the reference density.
int simulated_doublings(const Params& p, double x0) {
    const double center = oracle_log_pdf(p, x0);
    for (int i = 1; i <= 60; ++i) {
        if (oracle_log_pdf(p, std::ldexp(x0, -i)) < center && oracle_log_pdf(p, std::ldexp(x0, i)) < center) return i;
    }
    return -1;
}

// Dense scan for the largest log-density, refined by the vertex of the parabola
// through the best sample and its neighbours.
double grid_argmax(const Params& p, double lo, double hi, int n) {
    const double step = (hi - lo) / (n - 1);
    int best = 0;
    double best_val = -INFINITY;
    for (int i = 0; i < n; ++i) {
        const double v = ncx2::log_pdf(p, lo + step * i).log_f;
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    best = std::clamp(best, 1, n - 2);
    const double x1 = lo + step * (best - 1);
    const double x2 = lo + step * best;
    const double x3 = lo + step * (best + 1);
    const double f1 = ncx2::log_pdf(p, x1).log_f;
    const double f2 = ncx2::log_pdf(p, x2).log_f;
    const double f3 = ncx2::log_pdf(p, x3).log_f;
    const double denom = f1 - 2 * f2 + f3;
    return x2 + 0.5 * step * (f1 - f3) / denom;
}

}  // namespace

TEST_CASE("strategy and tag names") {
    CHECK(ncx2::parse_strategy("naive") == Strategy::Naive);
    CHECK(ncx2::parse_strategy("corrected") == Strategy::Corrected);
    CHECK(ncx2::parse_strategy("auto") == Strategy::Auto);
    CHECK_THROWS_AS(ncx2::parse_strategy("Naive"), ncx2::DomainError);
    CHECK(ncx2::to_string(Strategy::Corrected) == "corrected");
    CHECK(ncx2::to_string(ModeTag::AtZero) == "AT_ZERO");
    CHECK(ncx2::to_string(ModeTag::UnboundedAtZero) == "UNBOUNDED_AT_ZERO");
    CHECK(ncx2::to_string(ModeTag::Interior) == "INTERIOR");
}

TEST_CASE("bracket_expand") {
    SUBCASE("guess at the mode closes after one doubling") {
        const auto t = ncx2::bracket_expand(Params(10, 0), 8);
        CHECK(t.doublings == 1);
        CHECK(t.density_evaluations == 3);
        CHECK(t.final_bracket.lo == 4);
        CHECK(t.final_bracket.hi == 16);
    }
    SUBCASE("naive guess far below the mode") {
        const Params p(2, 20);
        const auto t = ncx2::bracket_expand(p, 3);
        CHECK(t.doublings >= 3);
        CHECK(t.doublings == simulated_doublings(p, 3));
        CHECK(t.final_bracket.hi >= 18.972911659065201086);
    }
    SUBCASE("corrected guess next to the mode") {
        const Params p(2, 20);
        const double x0 = ncx2::corrected_initial_guess(p);
        CHECK(x0 == doctest::Approx(18.975));
        const auto t = ncx2::bracket_expand(p, x0);
        CHECK(t.doublings == 1);
        CHECK(simulated_doublings(p, x0) == 1);
    }
    SUBCASE("guess whose density is below the boundary value cannot be bracketed") {
        // k = 2: pdf(0) = exp(-1.25)/2 = 0.1433 exceeds pdf(3) = 0.1266.
        try {
            ncx2::bracket_expand(Params(2, 2.5), 3);
            FAIL("expected FailedToBracket");
        } catch (const ncx2::FailedToBracket& e) {
            CHECK(e.kind() == ncx2::SolverError::Kind::FailedToBracket);
            CHECK(e.trace().doublings == 60);
            CHECK(e.trace().density_evaluations == 121);
        }
    }
    SUBCASE("max_doublings caps the search") {
        const Params p(2, 200);
        const int needed = simulated_doublings(p, 3);
        REQUIRE(needed > 1);
        CHECK_THROWS_AS(ncx2::bracket_expand(p, 3, needed - 1), ncx2::FailedToBracket);
        CHECK(ncx2::bracket_expand(p, 3, needed).doublings == needed);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(ncx2::bracket_expand(Params(5, 5), 0), ncx2::DomainError);
        CHECK_THROWS_AS(ncx2::bracket_expand(Params(5, 5), -1), ncx2::DomainError);
        CHECK_THROWS_AS(ncx2::bracket_expand(Params(5, 5), 1, 0), ncx2::DomainError);
    }
}

TEST_CASE("bracket trace invariants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> kdist(2.1, 60), ldist(0, 600), gdist(0.01, 4);
    for (int i = 0; i < 300; ++i) {
        const Params p(kdist(rng), ldist(rng));
        const double x0 = gdist(rng) * (p.k() + p.lambda());
        const auto t = ncx2::bracket_expand(p, x0);
        CHECK(t.initial_guess == x0);
        CHECK(t.final_bracket.lo == x0 / std::exp2(t.doublings));
        CHECK(t.final_bracket.hi == x0 * std::exp2(t.doublings));
        CHECK(t.density_evaluations >= 2 * t.doublings);
        CHECK(t.doublings == simulated_doublings(p, x0));
    }
}

TEST_CASE("maximize_unimodal") {
    CHECK(ncx2::maximize_unimodal(Params(4, 0), 0.5, 8, 1e-10) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ncx2::maximize_unimodal(Params(3, 0), 0.1, 6, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));

    const Params p(10, 40);
    const auto t = ncx2::bracket_expand(p, ncx2::choose_initial_guess(p));
    const double got = ncx2::maximize_unimodal(p, t.final_bracket.lo, t.final_bracket.hi, 1e-10);
    const double grid = grid_argmax(p, t.final_bracket.lo, t.final_bracket.hi, 1'000'000);
    CHECK(std::abs(got - grid) <= 1e-8 * got);
    CHECK(std::abs(got - 47.082289714620693094) <= 1e-9 * got);

    // Same inputs, same answer.
    CHECK(ncx2::maximize_unimodal(p, t.final_bracket.lo, t.final_bracket.hi, 1e-10) == got);

    CHECK_THROWS_AS(ncx2::maximize_unimodal(p, 5, 5, 1e-10), ncx2::DomainError);
    CHECK_THROWS_AS(ncx2::maximize_unimodal(p, 6, 5, 1e-10), ncx2::DomainError);
    CHECK_THROWS_AS(ncx2::maximize_unimodal(p, -1, 5, 1e-10), ncx2::DomainError);
    CHECK_THROWS_AS(ncx2::maximize_unimodal(p, 1, 5, 0), ncx2::DomainError);
}

TEST_CASE("exact modes against high-precision roots of the master equation") {
    struct Case {
        double k, lambda, mode;
    };
    const Case cases[] = {
        {5, 10, 12.099999986498974272}, {10, 40, 47.082289714620693094},   {2, 20, 18.972911659065201086},
        {2, 8, 6.9214693300854763711},  {2, 2.5, 0.86938877713693124598},  {3, 1, 1.4392288398906451508},
        {10, 1, 8.8247438672339929165}, {50, 1600, 1647.0144837584317054}, {2.5, 0.7, 0.68375939417406061059},
    };
    for (const auto& c : cases) {
        const auto r = ncx2::exact_mode(Params(c.k, c.lambda));
        CAPTURE(c.k);
        CAPTURE(c.lambda);
        REQUIRE(r.tag == ModeTag::Interior);
        CHECK(std::abs(*r.location - c.mode) <= 1e-9 * std::max(1.0, c.mode));
        CHECK(std::abs(*r.residual) <= 1e-6);
    }
}

TEST_CASE("edge cases of small k") {
    for (Strategy s : {Strategy::Naive, Strategy::Corrected, Strategy::Auto}) {
        const auto r = ncx2::exact_mode(Params(1, 100), s);
        CHECK(r.tag == ModeTag::UnboundedAtZero);
        CHECK_FALSE(r.location);
        CHECK_FALSE(r.trace);
    }

    const auto at_zero = ncx2::exact_mode(Params(2, 1.5));
    CHECK(at_zero.tag == ModeTag::AtZero);
    CHECK_FALSE(at_zero.location);
    // Independent check of the boundary decision: the slope is negative on a
    // fine grid over (0, 50].
    for (int i = 1; i <= 5000; ++i) CHECK(ncx2::dlogpdf_dx(Params(2, 1.5), i * 0.01) < 0.0);

    CHECK(ncx2::exact_mode(Params(2, 2)).tag == ModeTag::AtZero);
    CHECK(ncx2::exact_mode(Params(2, 0)).tag == ModeTag::AtZero);
    CHECK(ncx2::exact_mode(Params(1.5, 0)).tag == ModeTag::UnboundedAtZero);

    const auto interior = ncx2::exact_mode(Params(2, 2.5));
    REQUIRE(interior.tag == ModeTag::Interior);
    CHECK(*interior.location > 0);
    const double grid = grid_argmax(Params(2, 2.5), 1e-6, 5, 1'000'000);
    CHECK(std::abs(*interior.location - grid) <= 1e-7);

    // The naive guess cannot close a bracket here; only Auto falls back.
    CHECK_THROWS_AS(ncx2::exact_mode(Params(2, 2.5), Strategy::Naive), ncx2::FailedToBracket);
    CHECK(ncx2::exact_mode(Params(2, 2.5), Strategy::Corrected).tag == ModeTag::Interior);
}

TEST_CASE("central limit") {
    for (double k : {2.5, 3.0, 4.0, 10.0, 75.0}) {
        const auto r0 = ncx2::exact_mode(Params(k, 0));
        REQUIRE(r0.tag == ModeTag::Interior);
        CHECK(*r0.location == k - 2);
        CHECK(r0.trace->doublings == 0);

        const auto r = ncx2::exact_mode(Params(k, 1e-12));
        REQUIRE(r.tag == ModeTag::Interior);
        CHECK(std::abs(*r.location - (k - 2)) <= 1e-6);
    }
}

TEST_CASE("master residual sign around the mode") {
    const Params p(5, 10);
    const double mode = 12.099999986498974272;
    CHECK(std::abs(ncx2::master_residual(p, mode)) <= 1e-6);
    CHECK(ncx2::master_residual(p, mode - 1) > 0);
    CHECK(ncx2::master_residual(p, mode + 1) < 0);
    // The reference density agrees: rising left of the mode, falling right of it.
    CHECK(oracle_log_pdf(p, mode - 1) < oracle_log_pdf(p, mode - 0.5));
    CHECK(oracle_log_pdf(p, mode + 1) < oracle_log_pdf(p, mode + 0.5));
    CHECK_THROWS_AS(ncx2::master_residual(p, 0), ncx2::DomainError);
}

TEST_CASE("mode ODE residual") {
    CHECK(ncx2::ode_residual(Params(3, 10), 10, 1) == 0.0);
    CHECK(ncx2::ode_residual(Params(5, 100), 0, 0) == 0.0);

    const Params p(5, 100);
    const double x = ncx2::approx_mode(p).value;
    const double xprime = 1 - (p.k() - 3) / (2 * p.lambda() * p.lambda());
    CHECK(std::abs(ncx2::ode_residual(p, x, xprime)) / p.lambda() <= 0.01);

    // Along the exact mode curve the ODE holds; x' from a central difference.
    for (double k : {4.0, 10.0, 30.0}) {
        for (double lambda : {20.0, 100.0, 500.0}) {
            const double h = 1e-3 * lambda;
            const double xm = *ncx2::exact_mode(Params(k, lambda - h)).location;
            const double x0 = *ncx2::exact_mode(Params(k, lambda)).location;
            const double xp = *ncx2::exact_mode(Params(k, lambda + h)).location;
            const double res = ncx2::ode_residual(Params(k, lambda), x0, (xp - xm) / (2 * h));
            CAPTURE(k);
            CAPTURE(lambda);
            CHECK(std::abs(res) <= 1e-4 * lambda * x0);
        }
    }
    CHECK_THROWS_AS(ncx2::ode_residual(Params(5, 0), 1, 1), ncx2::DomainError);
}

TEST_CASE("strategy invariance") {
    const ncx2::SolveOptions opts;
    for (double k : {3.0, 5.0, 10.0, 50.0}) {
        for (double mult : {4.0, 8.0, 16.0}) {
            const Params p(k, mult * k);
            const auto naive = ncx2::exact_mode(p, Strategy::Naive, opts);
            const auto corrected = ncx2::exact_mode(p, Strategy::Corrected, opts);
            CAPTURE(k);
            CAPTURE(mult);
            CHECK(std::abs(*naive.location - *corrected.location) <= 2 * opts.xtol * *corrected.location);
        }
    }
}

TEST_CASE("certification and bracket containment on random parameters") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> kdist(2.05, 120), ldist(0.01, 3000);
    for (int i = 0; i < 300; ++i) {
        const Params p(kdist(rng), ldist(rng));
        for (Strategy s : {Strategy::Naive, Strategy::Corrected, Strategy::Auto}) {
            const auto r = ncx2::exact_mode(p, s);
            REQUIRE(r.tag == ModeTag::Interior);
            CHECK(*r.location > 0);
            CHECK(std::abs(*r.residual) <= 1e-6);
            CHECK(r.trace->final_bracket.lo <= *r.location);
            CHECK(*r.location <= r.trace->final_bracket.hi);
        }
    }
}

TEST_CASE("corrected guess never needs more doublings") {
    for (double k : {2.0, 5.0, 15.0, 50.0}) {
        for (double lambda = 4 * k; lambda <= 60 * k; lambda += k / 2) {
            if (lambda <= k + 5) continue;
            const Params p(k, lambda);
            const auto naive = ncx2::exact_mode(p, Strategy::Naive);
            const auto corrected = ncx2::exact_mode(p, Strategy::Corrected);
            CAPTURE(k);
            CAPTURE(lambda);
            CHECK(corrected.trace->doublings <= naive.trace->doublings);
            // Beyond lambda = k + 5 the closed-form mode exceeds 2(k + 1).
            CHECK(corrected.trace->doublings < naive.trace->doublings);
        }
    }
}

TEST_CASE("mode grows with lambda") {
    for (double k : {3.0, 10.0}) {
        double previous = -1;
        for (double lambda : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
            const auto r = ncx2::exact_mode(Params(k, lambda));
            REQUIRE(r.tag == ModeTag::Interior);
            CHECK(*r.location > previous);
            previous = *r.location;
        }
    }
}

TEST_CASE("certification failure is reported, not returned") {
    ncx2::SolveOptions strict;
    strict.rtol = 1e-300;
    strict.xtol = 1e-3;
    CHECK_THROWS_AS(ncx2::exact_mode(Params(10, 400), Strategy::Auto, strict), ncx2::CertificationFailed);
}

TEST_CASE("concurrent searches agree with serial ones") {
    std::vector<Params> params;
    for (int i = 1; i <= 40; ++i) params.emplace_back(2.0 + i, 7.0 * i);
    std::vector<double> serial;
    for (const auto& p : params) serial.push_back(*ncx2::exact_mode(p).location);

    std::vector<std::future<std::vector<double>>> jobs;
    for (int t = 0; t < 4; ++t) {
        jobs.push_back(std::async(std::launch::async, [&] {
            std::vector<double> out;
            for (const auto& p : params) out.push_back(*ncx2::exact_mode(p).location);
            return out;
        }));
    }
    for (auto& j : jobs) CHECK(j.get() == serial);
}
