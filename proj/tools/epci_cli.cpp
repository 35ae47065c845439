// epci: exceedance-probability curves, parameter intervals, coverage
// simulations and SVG figures from a dataset or published summary statistics.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "epci/error.hpp"
#include "epci/exceedance.hpp"
#include "epci/models.hpp"
#include "epci/records.hpp"
#include "epci/simulation.hpp"
#include "epci/svg_plot.hpp"

namespace {

using namespace epci;

struct InputOptions {
    std::string input;
    std::optional<double> theta;
    std::optional<double> sigma;
    std::optional<std::size_t> n;
    std::size_t d = 1;
    std::optional<std::size_t> coef;  // 1-based
};

struct CurveOptions {
    InputOptions in;
    double alpha = 0.05;
    std::optional<std::size_t> m;
    std::string side = "two_sided";
    std::string cutoff;
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 1;
    int width = 640;
    int height = 420;
    bool parameter_ci = true;
};

struct CoverageOptions {
    std::string scenario = "mean";
    std::string sizes;
    std::string cutoff;
    std::size_t replications = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string format = "csv";
    std::string output;
};

struct Fitted {
    FitSummary fit;
    std::size_t coefficient = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::validation, "cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& output, const std::string& text) {
    if (output.empty() || output == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) fail(ErrorKind::validation, "cannot write '" + output + "'");
}

Side side_of(const std::string& text) {
    const auto side = parse_side(text);
    if (!side) fail(ErrorKind::validation, "unknown side '" + text + "'");
    return *side;
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json") fail(ErrorKind::validation, "unknown format '" + format + "'");
}

Fitted load_fit(const InputOptions& in) {
    const bool summary = in.theta || in.sigma || in.n;
    if (!in.input.empty() && summary)
        fail(ErrorKind::validation, "--input and --theta/--sigma/--n are mutually exclusive");
    if (in.input.empty() && !summary) fail(ErrorKind::validation, "need --input or --theta/--sigma/--n");

    Fitted out;
    if (summary) {
        if (!in.theta || !in.sigma || !in.n) fail(ErrorKind::validation, "--theta, --sigma and --n go together");
        if (in.coef && *in.coef != 1) fail(ErrorKind::validation, "summary input carries a single coefficient");
        out.fit = summary_from_stats(*in.theta, *in.sigma, *in.n, in.d);
        return out;
    }
    const DatasetCsv csv = parse_dataset_csv(read_file(in.input));
    out.fit = csv.regression ? fit_linear_regression(csv.data) : fit_sample_mean(csv.data);
    const std::size_t coef = in.coef.value_or(csv.regression ? 2 : 1);
    if (coef < 1 || coef > out.fit.theta_hat.size())
        fail(ErrorKind::validation, "--coef must lie in 1.." + std::to_string(out.fit.theta_hat.size()));
    out.coefficient = coef - 1;
    return out;
}

EpCurve compute_curve(const CurveOptions& o, const Fitted& f) {
    const Side side = side_of(o.side);
    const std::vector<double> cutoffs =
        o.cutoff.empty() ? default_cutoff_grid(f.fit, f.coefficient) : parse_cutoff_spec(o.cutoff);
    return ep_curve(f.fit, cutoffs, o.m.value_or(f.fit.n), o.alpha, side, f.coefficient);
}

std::string run_curve(const CurveOptions& o) {
    check_format(o.format);
    const Fitted f = load_fit(o.in);
    const EpCurve curve = compute_curve(o, f);
    return o.format == "json" ? curve_json(curve) : curve_csv(curve_records(curve));
}

std::string run_ci(const CurveOptions& o) {
    check_format(o.format);
    const Side side = side_of(o.side);
    const Fitted f = load_fit(o.in);
    const std::vector<double> cutoffs = o.cutoff.empty() ? std::vector<double>{0.0} : parse_cutoff_spec(o.cutoff);
    const ParameterInterval ci = parameter_ci(f.fit, f.coefficient, o.alpha, side);
    std::vector<CiRecord> records;
    for (double c : cutoffs) {
        CiRecord r;
        r.coefficient = f.coefficient;
        r.estimate = ci.estimate;
        r.ci_lower = ci.lower;
        r.ci_upper = ci.upper;
        r.cutoff = c;
        r.p_value = p_value(f.fit, f.coefficient, c, side);
        r.side = side;
        r.alpha = o.alpha;
        r.n = f.fit.n;
        r.d = f.fit.d;
        records.push_back(r);
    }
    return o.format == "json" ? ci_json(records) : ci_csv(records);
}

std::string run_plot(const CurveOptions& o) {
    const Fitted f = load_fit(o.in);
    const EpCurve curve = compute_curve(o, f);
    PlotOptions plot;
    plot.width = o.width;
    plot.height = o.height;
    plot.show_parameter_ci = o.parameter_ci;
    return render_curve_svg(curve, parameter_ci(f.fit, f.coefficient, o.alpha, curve.side), plot);
}

std::string run_coverage_cmd(const CoverageOptions& o) {
    check_format(o.format);
    const auto scenario = parse_scenario(o.scenario);
    if (!scenario) fail(ErrorKind::validation, "unknown scenario '" + o.scenario + "'");
    CoverageConfig config = default_coverage_config(*scenario);
    if (!o.sizes.empty()) config.sample_sizes = parse_size_list(o.sizes);
    if (!o.cutoff.empty()) config.cutoffs = parse_cutoff_spec(o.cutoff);
    config.replications = o.replications;
    config.alpha = o.alpha;
    config.master_seed = o.seed;
    if (o.threads < 0) fail(ErrorKind::validation, "--threads must be non-negative");
    if (o.threads > 0) omp_set_num_threads(o.threads);
    const CoverageResult result = run_coverage(config);
    return o.format == "json" ? coverage_json(result, o.seed) : coverage_csv(result);
}

void add_curve_options(CLI::App& cmd, CurveOptions& o, bool with_format) {
    auto* input = cmd.add_option("--input,-i", o.in.input, "CSV with column y (mean) or y,x1..xk (regression)");
    auto* theta = cmd.add_option("--theta", o.in.theta, "Published estimate");
    auto* sigma = cmd.add_option("--sigma", o.in.sigma, "Published sigma (standard error times sqrt(n))");
    auto* n = cmd.add_option("--n", o.in.n, "Sample size of the original study");
    cmd.add_option("--d", o.in.d, "Number of model coefficients")->capture_default_str();
    for (auto* opt : {theta, sigma, n}) input->excludes(opt);
    cmd.add_option("--coef", o.in.coef, "Coefficient to report, 1-based (default 1 for mean, 2 for regression)");
    cmd.add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
    cmd.add_option("--m", o.m, "Replication sample size (default n)");
    cmd.add_option("--side", o.side, "two_sided, lower_one_sided or upper_one_sided")->capture_default_str();
    cmd.add_option("--cutoff,-c", o.cutoff, "Cutoffs: c1,c2,... or lo:hi:count");
    if (with_format) cmd.add_option("--format", o.format, "csv or json")->capture_default_str();
    cmd.add_option("--output,-o", o.output, "Output path (default standard output)");
    cmd.add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exceedance probabilities for exact replication studies"};
    app.require_subcommand(1);

    CurveOptions curve_opts, ci_opts, plot_opts;
    CoverageOptions cov_opts;

    auto* curve_cmd = app.add_subcommand("curve", "Exceedance-probability curve with confidence band");
    add_curve_options(*curve_cmd, curve_opts, true);

    auto* ci_cmd = app.add_subcommand("ci", "Parameter confidence interval and p-values");
    add_curve_options(*ci_cmd, ci_opts, true);

    auto* plot_cmd = app.add_subcommand("plot", "SVG figure of the curve, band and parameter interval");
    add_curve_options(*plot_cmd, plot_opts, false);
    plot_cmd->add_option("--width", plot_opts.width, "Width in pixels")->capture_default_str();
    plot_cmd->add_option("--height", plot_opts.height, "Height in pixels")->capture_default_str();
    plot_cmd->add_flag("--parameter-ci,!--no-parameter-ci", plot_opts.parameter_ci,
                       "Draw the parameter interval at height 0.5");

    auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of the confidence band");
    cov_cmd->add_option("--scenario", cov_opts.scenario, "mean or regression")->capture_default_str();
    cov_cmd->add_option("--sizes", cov_opts.sizes, "Sample sizes, e.g. 20,40,60,80,100");
    cov_cmd->add_option("--cutoff,-c", cov_opts.cutoff, "Cutoffs: c1,c2,... or lo:hi:count");
    cov_cmd->add_option("--replications,-K", cov_opts.replications, "Replicates per sample size")
        ->capture_default_str();
    cov_cmd->add_option("--alpha", cov_opts.alpha, "Significance level")->capture_default_str();
    cov_cmd->add_option("--seed", cov_opts.seed, "Master seed")->capture_default_str();
    cov_cmd->add_option("--threads", cov_opts.threads, "Worker threads (0 = runtime default)");
    cov_cmd->add_option("--format", cov_opts.format, "csv or json")->capture_default_str();
    cov_cmd->add_option("--output,-o", cov_opts.output, "Output path (default standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "EP-ERR:2 usage: " << e.what() << "\n";
        return 2;
    }

    try {
        std::string text;
        std::string output;
        if (*curve_cmd) {
            text = run_curve(curve_opts);
            output = curve_opts.output;
        } else if (*ci_cmd) {
            text = run_ci(ci_opts);
            output = ci_opts.output;
        } else if (*plot_cmd) {
            text = run_plot(plot_opts);
            output = plot_opts.output;
        } else {
            text = run_coverage_cmd(cov_opts);
            output = cov_opts.output;
        }
        emit(output, text);
    } catch (const Error& e) {
        const int code = exit_code(e.kind());
        std::cerr << "EP-ERR:" << code << ' ' << to_string(e.kind()) << ": " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "EP-ERR:4 internal: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
