#include <doctest.h>

#include <cmath>
#include <regex>
#include <sstream>

#include "epci/records.hpp"
#include "epci/svg_plot.hpp"

using namespace epci;

namespace {

struct Point {
    double x;
    double y;
};

std::vector<Point> points_of(const std::string& svg, const std::string& element, const std::string& cls) {
    const std::regex re("<" + element + " class=\"" + cls + "\" points=\"([^\"]*)\"");
    std::smatch m;
    if (!std::regex_search(svg, m, re)) return {};
    std::vector<Point> out;
    std::istringstream in(m[1].str());
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        out.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    }
    return out;
}

double attr(const std::string& tag, const std::string& name) {
    const std::regex re(" " + name + "=\"([-0-9.]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(tag, m, re));
    return std::stod(m[1].str());
}

std::vector<std::string> tags_of(const std::string& svg, const std::string& prefix) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = svg.find(prefix, pos)) != std::string::npos) {
        const auto end = svg.find('>', pos);
        out.push_back(svg.substr(pos, end - pos + 1));
        pos = end;
    }
    return out;
}

struct Rendered {
    EpCurve curve;
    ParameterInterval interval;
    PlotFrame frame;
    std::string svg;
};

Rendered render(double theta, double sigma, std::size_t n, const std::string& cutoffs) {
    const FitSummary fit = summary_from_stats(theta, sigma, n);
    Rendered r;
    r.curve = ep_curve(fit, parse_cutoff_spec(cutoffs), n, 0.05, Side::two_sided);
    r.interval = parameter_ci(fit, 0, 0.05, Side::two_sided);
    r.frame = plot_frame(r.curve, r.interval, PlotOptions{});
    r.svg = render_curve_svg(r.curve, r.interval);
    return r;
}

// Band edges at a cutoff present in the grid, in data coordinates.
std::pair<double, double> band_at(const Rendered& r, double x) {
    const auto band = points_of(r.svg, "polygon", "band");
    const std::size_t count = r.curve.cutoffs.size();
    REQUIRE(band.size() == 2 * count);
    std::optional<double> upper, lower;
    for (std::size_t i = 0; i < band.size(); ++i) {
        if (std::abs(r.frame.data_x(band[i].x) - x) > 1e-3) continue;
        (i < count ? upper : lower) = r.frame.data_y(band[i].y);
    }
    REQUIRE(upper);
    REQUIRE(lower);
    return {*lower, *upper};
}

// First crossing of y = 0.5 along an edge, by linear interpolation in pixels.
double crossing_px(const std::vector<Point>& edge, double y_px) {
    for (std::size_t i = 1; i < edge.size(); ++i) {
        const double a = edge[i - 1].y - y_px, b = edge[i].y - y_px;
        if (a == 0.0) return edge[i - 1].x;
        if ((a < 0.0) != (b < 0.0)) return edge[i - 1].x + a / (a - b) * (edge[i].x - edge[i - 1].x);
    }
    FAIL("edge does not cross");
    return NAN;
}

}  // namespace

TEST_CASE("document structure") {
    const Rendered r = render(0.25, 1.1, 100, "-0.2:0.7:91");
    CHECK(r.svg.rfind("<?xml", 0) == 0);
    CHECK(r.svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(r.svg.substr(r.svg.size() - 7) == "</svg>\n");
    CHECK(r.svg.find("cutoff c") != std::string::npos);
    CHECK(r.svg.find("exceedance probability") != std::string::npos);
    CHECK(r.svg.find("m = 100, n = 100") != std::string::npos);
    CHECK(r.svg.find("= 0.05") != std::string::npos);
    CHECK(tags_of(r.svg, "<polygon").size() == 1);
    CHECK(points_of(r.svg, "polyline", "point-estimate").size() == 91);
    CHECK(tags_of(r.svg, "<circle class=\"parameter-estimate\"").size() == 1);
    CHECK(render_curve_svg(r.curve, r.interval) == r.svg);
}

TEST_CASE("frame maps both ways") {
    const Rendered r = render(0.25, 1.1, 100, "-0.2:0.7:91");
    for (double x : {-0.2, 0.0, 0.33, 0.7}) CHECK(r.frame.data_x(r.frame.px(x)) == doctest::Approx(x));
    for (double y : {0.0, 0.5, 1.0}) CHECK(r.frame.data_y(r.frame.py(y)) == doctest::Approx(y));
    CHECK(r.frame.py(1.0) < r.frame.py(0.0));
}

TEST_CASE("band at zero for the unrounded summary spans 0.58 to 1") {
    const Rendered r = render(0.247, 1.123869, 100, "-0.5:1:151");
    const auto [lower, upper] = band_at(r, 0.0);
    CHECK(std::abs(lower - 0.58) < 0.01);
    CHECK(std::abs(upper - 1.0) < 0.01);
}

TEST_CASE("band at zero for the rounded summary matches the library") {
    const Rendered r = render(0.25, 1.1, 100, "-0.5:1:151");
    const auto [lower, upper] = band_at(r, 0.0);
    const auto row = ep_curve_serial(r.curve.fit, {0.0}, 100, 0.05, Side::two_sided).estimates[0];
    CHECK(std::abs(lower - row.lower) < 0.005);
    CHECK(std::abs(upper - row.upper) < 0.005);
}

TEST_CASE("parameter bar ends meet the band at one half") {
    const Rendered r = render(0.25, 1.1, 100, "-0.3:0.8:221");
    const auto band = points_of(r.svg, "polygon", "band");
    const std::size_t count = r.curve.cutoffs.size();
    const std::vector<Point> upper_edge(band.begin(), band.begin() + count);
    std::vector<Point> lower_edge(band.begin() + count, band.end());
    std::reverse(lower_edge.begin(), lower_edge.end());

    const double half = r.frame.py(0.5);
    const auto lines = tags_of(r.svg, "<line class=\"parameter-ci\"");
    REQUIRE(lines.size() == 3);
    const double x1 = attr(lines[0], "x1"), x2 = attr(lines[0], "x2");
    CHECK(attr(lines[0], "y1") == doctest::Approx(half).epsilon(1e-4));
    CHECK(std::abs(crossing_px(lower_edge, half) - x1) < 1.0);
    CHECK(std::abs(crossing_px(upper_edge, half) - x2) < 1.0);
    CHECK(r.frame.data_x(x1) == doctest::Approx(r.interval.lower).epsilon(1e-3));
    CHECK(r.frame.data_x(x2) == doctest::Approx(r.interval.upper).epsilon(1e-3));
}

TEST_CASE("single cutoff renders a marker without a band") {
    const Rendered r = render(0.25, 1.1, 100, "0");
    CHECK(r.svg.find("<polygon") == std::string::npos);
    CHECK(tags_of(r.svg, "<circle class=\"point-estimate\"").size() == 1);
    CHECK(r.svg.substr(r.svg.size() - 7) == "</svg>\n");
}

TEST_CASE("options") {
    const FitSummary fit = summary_from_stats(0.0, 1.0, 30);
    const EpCurve curve = ep_curve(fit, parse_cutoff_spec("-1:1:21"), 30, 0.1, Side::lower_one_sided);
    const ParameterInterval one = parameter_ci(fit, 0, 0.1, Side::lower_one_sided);
    PlotOptions opts;
    opts.width = 800;
    opts.height = 500;
    const std::string svg = render_curve_svg(curve, one, opts);
    CHECK(svg.find("width=\"800\" height=\"500\"") != std::string::npos);
    CHECK(svg.find("lower_one_sided") != std::string::npos);
    // Open-ended interval: bar plus a single cap.
    CHECK(tags_of(svg, "<line class=\"parameter-ci\"").size() == 2);
    opts.show_parameter_ci = false;
    const std::string bare = render_curve_svg(curve, one, opts);
    CHECK(bare.find("class=\"parameter-ci\"") == std::string::npos);
    opts.width = 10;
    CHECK_THROWS(render_curve_svg(curve, one, opts));
}
