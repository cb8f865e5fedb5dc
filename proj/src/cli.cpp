#include "ncx2/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncx2/bench.hpp"
#include "ncx2/density.hpp"
#include "ncx2/errors.hpp"
#include "ncx2/mode_approx.hpp"
#include "ncx2/mode_exact.hpp"
#include "ncx2/table.hpp"

namespace ncx2::cli {
namespace {

struct OutputOptions {
    std::string path = "-";
    std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--out", o.path, "Output file, '-' for stdout")->capture_default_str();
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

struct GridOptions {
    std::string mode;
    std::optional<double> k;
    std::optional<double> k_min, k_max;
    std::optional<double> lambda_min, lambda_max;
    std::optional<double> scale;
    int points = 25;
};

void add_grid_flags(CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--mode", g.mode, "lambda: fixed k; k: fixed k/lambda")
        ->required()
        ->check(CLI::IsMember({"lambda", "k"}));
    cmd->add_option("--k", g.k, "Degrees of freedom (lambda sweep)");
    cmd->add_option("--k-min", g.k_min, "Smallest k (k sweep)");
    cmd->add_option("--k-max", g.k_max, "Largest k (k sweep)");
    cmd->add_option("--lambda-min", g.lambda_min, "Smallest lambda (lambda sweep)");
    cmd->add_option("--lambda-max", g.lambda_max, "Largest lambda (lambda sweep)");
    cmd->add_option("--scale", g.scale, "Fixed k/lambda (k sweep)");
    cmd->add_option("--points", g.points, "Grid points")->capture_default_str();
}

SweepSpec grid_spec(const GridOptions& g) {
    SweepSpec spec;
    spec.points = g.points;
    if (g.mode == "lambda") {
        if (!g.k || !g.lambda_min || !g.lambda_max)
            throw DomainError("--mode lambda needs --k, --lambda-min and --lambda-max");
        spec.mode = SweepMode::Lambda;
        spec.k = *g.k;
        spec.lambda_range = {*g.lambda_min, *g.lambda_max};
    } else {
        if (!g.scale || !g.k_min || !g.k_max) throw DomainError("--mode k needs --scale, --k-min and --k-max");
        spec.mode = SweepMode::K;
        spec.scale_t = *g.scale;
        spec.k_range = {*g.k_min, *g.k_max};
    }
    return spec;
}

Cell opt_cell(const std::optional<double>& v) {
    if (v) return *v;
    return std::monostate{};
}

// Runs `body` against the selected output stream and maps library errors to
// exit codes.
int with_output(const OutputOptions& o, std::ostream& out, std::ostream& err,
                const std::function<int(std::ostream&, Format)>& body) {
    const Format format = o.format == "json" ? Format::Json : Format::Csv;
    try {
        if (o.path == "-") return body(out, format);
        std::ofstream file(o.path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << o.path << "'\n";
            return kUsage;
        }
        return body(file, format);
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

// ---------------------------------------------------------------------------

struct PdfOptions {
    double k = 0.0;
    double lambda = 0.0;
    std::optional<double> x;
    std::optional<double> x_min, x_max;
    std::optional<int> points;
    OutputOptions output;
};

Row pdf_row(const Params& p, double x) {
    try {
        const double lf = log_pdf(p, x).log_f;
        return {x, std::exp(lf), lf};
    } catch (const DivergenceError&) {
        const double inf = std::numeric_limits<double>::infinity();
        return {x, inf, inf};
    }
}

int cmd_pdf(const PdfOptions& o, std::ostream& out, std::ostream& err) {
    return with_output(o.output, out, err, [&](std::ostream& os, Format fmt) {
        const Params p(o.k, o.lambda);
        std::vector<double> xs;
        if (o.x) {
            if (o.x_min || o.x_max || o.points) throw DomainError("--x cannot be combined with a grid");
            xs.push_back(*o.x);
        } else {
            if (!o.x_min || !o.x_max || !o.points) throw DomainError("give --x or all of --x-min, --x-max, --points");
            if (*o.points < 1) throw DomainError("--points must be >= 1");
            if (*o.x_min > *o.x_max) throw DomainError("--x-min must not exceed --x-max");
            const int n = *o.points;
            for (int i = 0; i < n; ++i)
                xs.push_back(n == 1 ? *o.x_min : *o.x_min + (*o.x_max - *o.x_min) * i / (n - 1));
            if (n > 1) xs.back() = *o.x_max;
        }
        // Validate every point before the first row goes out.
        std::vector<Row> rows;
        for (double x : xs) rows.push_back(pdf_row(p, x));

        TableWriter table(os, fmt, {"x", "pdf", "log_pdf"});
        for (const auto& r : rows) table.add(r);
        table.finish();
        return int{kOk};
    });
}

// ---------------------------------------------------------------------------

struct ModeOptions {
    double k = 0.0;
    double lambda = 0.0;
    std::string method = "auto";
    std::string strategy = "auto";
    double xtol = 1e-10;
    OutputOptions output;
};

int cmd_mode(const ModeOptions& o, std::ostream& out, std::ostream& err) {
    return with_output(o.output, out, err, [&](std::ostream& os, Format fmt) {
        const Params p(o.k, o.lambda);
        const Strategy strategy = parse_strategy(o.strategy);
        if (!(o.xtol > 0.0)) throw DomainError("--xtol must be > 0");

        std::optional<ApproxMode> approx;
        if (p.lambda() > 0.0) approx = approx_mode(p);
        const Cell scale = approx ? Cell{approx->scale_t} : Cell{};
        const bool applicable = approx && approx->applicable;

        std::string method = o.method;
        if (method == "auto") method = applicable ? "approx" : "exact";

        const std::vector<std::string> columns{"k", "lambda", "method", "tag", "location", "residual", "scale_t",
                                               "applicable"};
        if (method == "approx") {
            if (!approx) throw DomainError("the approximate mode needs lambda > 0");
            const double x = approx->value;
            const Cell residual = x > 0.0 ? Cell{master_residual(p, x)} : Cell{};
            TableWriter table(os, fmt, columns);
            table.add({p.k(), p.lambda(), method, std::string(to_string(classify_mode(p).tag)), x, residual, scale,
                       applicable});
            table.finish();
            if (!applicable) {
                err << "warning: approximation is not applicable (needs k > 2 and k/lambda <= "
                    << format_number(kConservativeScale) << ")\n";
                return int{kApproxInapplicable};
            }
            return int{kOk};
        }

        SolveOptions opts;
        opts.xtol = o.xtol;
        const auto result = exact_mode(p, strategy, opts);
        TableWriter table(os, fmt, columns);
        table.add({p.k(), p.lambda(), method, std::string(to_string(result.tag)), opt_cell(result.location),
                   opt_cell(result.residual), scale, applicable});
        table.finish();
        return int{kOk};
    });
}

// ---------------------------------------------------------------------------

struct SweepOptions {
    GridOptions grid;
    double xtol = 1e-10;
    OutputOptions output;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    return with_output(o.output, out, err, [&](std::ostream& os, Format fmt) {
        SweepSpec spec = grid_spec(o.grid);
        spec.validate();
        SolveOptions opts;
        opts.xtol = o.xtol;

        TableWriter table(os, fmt, {"k", "lambda", "mode_exact", "mode_approx", "abs_err", "scale_t"});
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& p : spec.grid()) {
            const auto approx = approx_mode(p);
            double exact = nan;
            try {
                const auto result = exact_mode(p, Strategy::Auto, opts);
                if (result.location) exact = *result.location;
            } catch (const SolverError& e) {
                err << "warning: k = " << format_number(p.k()) << ", lambda = " << format_number(p.lambda())
                    << ": " << e.what() << '\n';
            }
            table.add({p.k(), p.lambda(), exact, approx.value, std::abs(exact - approx.value), approx.scale_t});
        }
        table.finish();
        return int{kOk};
    });
}

// ---------------------------------------------------------------------------

struct BenchOptions {
    GridOptions grid;
    std::vector<std::string> strategies{"naive", "corrected"};
    int reps = 100;
    double jitter = 1e-6;
    std::uint64_t seed = 1;
    bool timing = false;
    OutputOptions output;
};

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    return with_output(o.output, out, err, [&](std::ostream& os, Format fmt) {
        SweepSpec spec = grid_spec(o.grid);
        spec.strategies.clear();
        for (const auto& s : o.strategies) spec.strategies.push_back(parse_strategy(s));
        spec.reps = o.reps;
        spec.jitter_sigma = o.jitter;
        spec.seed = o.seed;

        const auto records = run_sweep(spec, o.timing);
        TableWriter table(os, fmt,
                          {"k", "lambda", "strategy", "doublings", "density_evaluations", "wall_ns_mean",
                           "wall_ns_std", "failed"});
        for (const auto& r : records) {
            table.add({r.k, r.lambda, std::string(to_string(r.strategy)), static_cast<long long>(r.doublings),
                       static_cast<long long>(r.density_evaluations), opt_cell(r.wall_ns_mean),
                       opt_cell(r.wall_ns_std), r.failed});
        }
        table.finish();
        return int{kOk};
    });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-central chi-squared density and mode tools", "ncx2mode"};
    app.require_subcommand(1);

    PdfOptions pdf_opts;
    auto* pdf_cmd = app.add_subcommand("pdf", "Evaluate the density on a point or a grid");
    pdf_cmd->add_option("--k", pdf_opts.k, "Degrees of freedom")->required();
    pdf_cmd->add_option("--lambda", pdf_opts.lambda, "Non-centrality")->required();
    pdf_cmd->add_option("--x", pdf_opts.x, "Single evaluation point");
    pdf_cmd->add_option("--x-min", pdf_opts.x_min, "Grid start");
    pdf_cmd->add_option("--x-max", pdf_opts.x_max, "Grid end");
    pdf_cmd->add_option("--points", pdf_opts.points, "Grid points");
    add_output_flags(pdf_cmd, pdf_opts.output);

    ModeOptions mode_opts;
    auto* mode_cmd = app.add_subcommand("mode", "Approximate or exact mode");
    mode_cmd->add_option("--k", mode_opts.k, "Degrees of freedom")->required();
    mode_cmd->add_option("--lambda", mode_opts.lambda, "Non-centrality")->required();
    mode_cmd->add_option("--method", mode_opts.method, "approx, exact or auto")
        ->check(CLI::IsMember({"approx", "exact", "auto"}))
        ->capture_default_str();
    mode_cmd->add_option("--strategy", mode_opts.strategy, "Initial guess: naive, corrected or auto")
        ->check(CLI::IsMember({"naive", "corrected", "auto"}))
        ->capture_default_str();
    mode_cmd->add_option("--xtol", mode_opts.xtol, "Relative position tolerance")->capture_default_str();
    add_output_flags(mode_cmd, mode_opts.output);

    SweepOptions sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Exact versus approximate mode over a grid");
    add_grid_flags(sweep_cmd, sweep_opts.grid);
    sweep_cmd->add_option("--xtol", sweep_opts.xtol, "Relative position tolerance")->capture_default_str();
    add_output_flags(sweep_cmd, sweep_opts.output);

    BenchOptions bench_opts;
    auto* bench_cmd = app.add_subcommand("bench", "Compare initial-guess strategies over a grid");
    add_grid_flags(bench_cmd, bench_opts.grid);
    bench_cmd->add_option("--strategies", bench_opts.strategies, "Comma-separated strategies")
        ->delimiter(',')
        ->check(CLI::IsMember({"naive", "corrected", "auto"}))
        ->capture_default_str();
    bench_cmd->add_option("--reps", bench_opts.reps, "Timing repetitions per record")->capture_default_str();
    bench_cmd->add_option("--jitter", bench_opts.jitter, "Std. dev. of parameter jitter")->capture_default_str();
    bench_cmd->add_option("--seed", bench_opts.seed, "Jitter seed")->capture_default_str();
    bench_cmd->add_option("--timing", bench_opts.timing, "Measure wall time (true/false)")->capture_default_str();
    add_output_flags(bench_cmd, bench_opts.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (pdf_cmd->parsed()) return cmd_pdf(pdf_opts, out, err);
    if (mode_cmd->parsed()) return cmd_mode(mode_opts, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, out, err);
    return cmd_bench(bench_opts, out, err);
}

}  // namespace ncx2::cli
