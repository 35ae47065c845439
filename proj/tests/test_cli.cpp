#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "epci/records.hpp"
#include "epci/svg_plot.hpp"

using namespace epci;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const fs::path& scratch() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("epci_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

Run run(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = std::string(EPCI_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("curve output equals the library") {
    const Run r = run("curve --theta 0.25 --sigma 1.1 --n 100 --cutoff 0 --alpha 0.05");
    REQUIRE(r.status == 0);
    const FitSummary fit = summary_from_stats(0.25, 1.1, 100);
    CHECK(r.out == curve_csv(curve_records(ep_curve(fit, {0.0}, 100, 0.05, Side::two_sided))));
    const auto rows = parse_curve_csv(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].point == doctest::Approx(0.98846).epsilon(1e-4));
    CHECK(rows[0].upper == doctest::Approx(1.0).epsilon(1e-3));

    const Run second = run("curve --theta 57.825 --sigma 136.39 --n 32 --cutoff 0");
    REQUIRE(second.status == 0);
    CHECK(std::abs(parse_curve_csv(second.out)[0].lower - 0.63) < 0.01);
}

TEST_CASE("default grid, JSON and explicit m") {
    const Run r = run("curve --theta 1 --sigma 2 --n 40 --m 80 --side upper --format json");
    REQUIRE(r.status == 0);
    const FitSummary fit = summary_from_stats(1.0, 2.0, 40);
    CHECK(r.out == curve_json(ep_curve(fit, default_cutoff_grid(fit), 80, 0.05, Side::upper_one_sided)));
}

TEST_CASE("curve CSV survives a round trip through the tool") {
    const Run r = run("curve --theta 0.25 --sigma 1.1 --n 100 --cutoff -0.5:1:31");
    REQUIRE(r.status == 0);
    CHECK(curve_csv(parse_curve_csv(r.out)) == r.out);
}

TEST_CASE("dataset input") {
    const auto mean_csv = write_file("mean.csv", "y\n1.2\n0.4\n-0.3\n2.2\n0.9\n1.1\n");
    const Run m = run("curve --input " + mean_csv.string() + " --cutoff 0,0.5,1");
    REQUIRE(m.status == 0);
    const auto mean_data = parse_dataset_csv(slurp(mean_csv));
    const FitSummary mean_fit = fit_sample_mean(mean_data.data);
    CHECK(m.out == curve_csv(curve_records(ep_curve(mean_fit, {0.0, 0.5, 1.0}, 6, 0.05, Side::two_sided))));

    const auto reg_csv = write_file("reg.csv", "y,x1\n1.1,0\n2.9,1\n5.2,2\n7.1,3\n8.8,4\n11.3,5\n");
    const Run g = run("ci --input " + reg_csv.string() + " --cutoff 2");
    REQUIRE(g.status == 0);
    const FitSummary reg_fit = fit_linear_regression(parse_dataset_csv(slurp(reg_csv)).data);
    const ParameterInterval pci = parameter_ci(reg_fit, 1, 0.05, Side::two_sided);
    CiRecord rec;
    rec.coefficient = 1;
    rec.estimate = pci.estimate;
    rec.ci_lower = pci.lower;
    rec.ci_upper = pci.upper;
    rec.cutoff = 2.0;
    rec.p_value = p_value(reg_fit, 1, 2.0, Side::two_sided);
    rec.n = 6;
    rec.d = 2;
    CHECK(g.out == ci_csv({rec}));

    const Run intercept = run("ci --input " + reg_csv.string() + " --coef 1");
    REQUIRE(intercept.status == 0);
    CHECK(intercept.out.find("\n1,") != std::string::npos);
    CHECK(run("ci --input " + reg_csv.string() + " --coef 3").status == 2);
}

TEST_CASE("ci report") {
    const Run two = run("ci --theta 57.825 --sigma 136.39 --n 32");
    REQUIRE(two.status == 0);
    CHECK(two.out.find(",8.6511612,106.998839,0,0.0226762158,two_sided,") != std::string::npos);
    const Run one = run("ci --theta 57.825 --sigma 136.39 --n 32 --side lower_one_sided --format json");
    REQUIRE(one.status == 0);
    CHECK(one.out.find("\"ci_upper\": \"inf\"") != std::string::npos);
    const Run at_estimate = run("ci --theta 57.825 --sigma 136.39 --n 32 --cutoff 57.825");
    CHECK(at_estimate.out.find(",57.825,1,two_sided,") != std::string::npos);
}

TEST_CASE("error exits") {
    const auto empty = write_file("empty.csv", "");
    const fs::path target = scratch() / "never.csv";
    Run r = run("curve --input " + empty.string() + " --output " + target.string());
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("EP-ERR:2", 0) == 0);
    CHECK_FALSE(fs::exists(target));

    r = run("curve --theta 1 --sigma 0 --n 10");
    CHECK(r.status == 3);
    CHECK(r.err.rfind("EP-ERR:3", 0) == 0);
    CHECK(r.out.empty());

    r = run("curve --theta 1 --sigma 1 --n 2 --d 2");
    CHECK(r.status == 3);

    CHECK(run("curve --input /nonexistent/data.csv").status == 2);
    CHECK(run("curve --theta 1 --sigma 1").status == 2);
    CHECK(run("curve --theta 1 --sigma 1 --n 10 --alpha 2").status == 2);
    CHECK(run("curve --theta 1 --sigma 1 --n 10 --side sideways").status == 2);
    CHECK(run("curve --theta 1 --sigma 1 --n 10 --format xml").status == 2);
    CHECK(run("curve --theta 1 --sigma 1 --n 10 --cutoff 1,0").status == 2);
    CHECK(run("curve --input " + empty.string() + " --theta 1").status == 2);
    CHECK(run("bogus").status == 2);
    CHECK(run("").status == 2);

    r = run("coverage --scenario anova");
    CHECK(r.status == 2);
    CHECK(r.err.rfind("EP-ERR:2", 0) == 0);
    CHECK(run("--help").status == 0);
}

TEST_CASE("quick coverage run") {
    const auto start = std::chrono::steady_clock::now();
    const Run r = run("coverage --replications 100 --seed 5");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(r.status == 0);
    CHECK(seconds < 5.0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "scenario,n,cutoff,coverage,mc_se,K");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        REQUIRE(f.size() == 6);
        const double coverage = std::stod(f[3]);
        CHECK(coverage >= 0.85);
        CHECK(coverage <= 1.0);
    }
    CHECK(rows == 55);
}

TEST_CASE("identical flags give identical bytes") {
    for (const std::string args :
         {"coverage --scenario regression --sizes 20 --cutoff 1:3:5 --replications 50 --seed 3 --format json",
          "curve --theta 0.3 --sigma 1 --n 50 --seed 9", "ci --theta 0.3 --sigma 1 --n 50 --seed 9",
          "plot --theta 0.3 --sigma 1 --n 50 --seed 9"}) {
        const Run a = run(args);
        const Run b = run(args);
        CAPTURE(args);
        REQUIRE(a.status == 0);
        CHECK(a.out == b.out);
    }
    const Run one = run("coverage --sizes 20,40 --replications 80 --threads 1");
    const Run four = run("coverage --sizes 20,40 --replications 80 --threads 4");
    CHECK(one.out == four.out);
    CHECK(run("coverage --sizes 20 --replications 80 --seed 1").out !=
          run("coverage --sizes 20 --replications 80 --seed 2").out);
}

TEST_CASE("plot writes an SVG file") {
    const fs::path svg = scratch() / "curve.svg";
    const Run r = run("plot --theta 0.25 --sigma 1.1 --n 100 --width 700 --height 450 --output " + svg.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    const std::string text = slurp(svg);
    const FitSummary fit = summary_from_stats(0.25, 1.1, 100);
    const EpCurve curve = ep_curve(fit, default_cutoff_grid(fit), 100, 0.05, Side::two_sided);
    PlotOptions opts;
    opts.width = 700;
    opts.height = 450;
    CHECK(text == render_curve_svg(curve, parameter_ci(fit, 0, 0.05, Side::two_sided), opts));

    const Run bare = run("plot --theta 0.25 --sigma 1.1 --n 100 --no-parameter-ci");
    REQUIRE(bare.status == 0);
    CHECK(bare.out.find("class=\"parameter-ci\"") == std::string::npos);
    const Run single = run("plot --theta 0.25 --sigma 1.1 --n 100 --cutoff 0");
    REQUIRE(single.status == 0);
    CHECK(single.out.find("<polygon") == std::string::npos);
}
