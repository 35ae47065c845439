#include "epci/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "epci/error.hpp"
#include "epci/records.hpp"

namespace epci {

namespace {

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 52.0;
constexpr double kCapHalfHeight = 5.0;

std::string fixed2(double v) {
    if (std::abs(v) < 0.005) v = 0.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string xy(const PlotFrame& f, double x, double y) { return fixed2(f.px(x)) + ',' + fixed2(f.py(y)); }

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

void line(std::string& out, double x1, double y1, double x2, double y2, const char* cls) {
    out += "<line class=\"" + std::string(cls) + "\" x1=\"" + fixed2(x1) + "\" y1=\"" + fixed2(y1) + "\" x2=\"" +
           fixed2(x2) + "\" y2=\"" + fixed2(y2) + "\"/>\n";
}

void text(std::string& out, double x, double y, const char* anchor, const std::string& body,
          const std::string& extra = {}) {
    out += "<text x=\"" + fixed2(x) + "\" y=\"" + fixed2(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
           body + "</text>\n";
}

}  // namespace

double PlotFrame::px(double x) const { return left + (x - x_min) / (x_max - x_min) * (right - left); }
double PlotFrame::py(double y) const { return bottom - y * (bottom - top); }
double PlotFrame::data_x(double p) const { return x_min + (p - left) / (right - left) * (x_max - x_min); }
double PlotFrame::data_y(double p) const { return (bottom - p) / (bottom - top); }

PlotFrame plot_frame(const EpCurve& curve, const std::optional<ParameterInterval>& interval,
                     const PlotOptions& options) {
    if (options.width < 160 || options.height < 120)
        fail(ErrorKind::validation, "plot must be at least 160x120 pixels");
    if (curve.cutoffs.empty()) fail(ErrorKind::validation, "curve has no cutoffs");
    PlotFrame f;
    f.x_min = curve.cutoffs.front();
    f.x_max = curve.cutoffs.back();
    if (interval) {
        for (double v : {interval->estimate, interval->lower, interval->upper}) {
            if (!std::isfinite(v)) continue;
            f.x_min = std::min(f.x_min, v);
            f.x_max = std::max(f.x_max, v);
        }
    }
    if (!(f.x_max > f.x_min)) {
        const double pad = std::max(1.0, std::abs(f.x_min) * 0.1);
        f.x_min -= pad;
        f.x_max += pad;
    }
    f.left = kMarginLeft;
    f.right = options.width - kMarginRight;
    f.top = kMarginTop;
    f.bottom = options.height - kMarginBottom;
    return f;
}

std::string render_curve_svg(const EpCurve& curve, const std::optional<ParameterInterval>& interval,
                             const PlotOptions& options) {
    if (curve.estimates.size() != curve.cutoffs.size()) fail(ErrorKind::validation, "curve is inconsistent");
    const std::optional<ParameterInterval> shown = options.show_parameter_ci ? interval : std::nullopt;
    const PlotFrame f = plot_frame(curve, shown, options);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + ' ' +
           std::to_string(options.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<style>\n"
           ".band{fill:#bdbdbd;fill-opacity:0.7;stroke:none}\n"
           ".point-estimate{fill:none;stroke:#000;stroke-width:1.6}\n"
           ".parameter-ci{stroke:#000;stroke-width:1.4}\n"
           ".parameter-estimate{fill:#000}\n"
           ".interval{stroke:#777;stroke-width:3}\n"
           ".axis{stroke:#000;stroke-width:1}\n"
           ".grid{stroke:#e0e0e0;stroke-width:1}\n"
           "</style>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" fill=\"#fff\"/>\n";

    // Axes, grid and ticks.
    for (int i = 0; i <= 4; ++i) {
        const double y = 0.25 * i;
        line(out, f.left, f.py(y), f.right, f.py(y), "grid");
        line(out, f.left - 4.0, f.py(y), f.left, f.py(y), "axis");
        text(out, f.left - 7.0, f.py(y) + 4.0, "end", format_number(y));
    }
    const double step = nice_step(f.x_max - f.x_min, 6);
    for (double x = std::ceil(f.x_min / step) * step; x <= f.x_max + 1e-9 * step; x += step) {
        const double xv = std::abs(x) < 1e-9 * step ? 0.0 : x;
        line(out, f.px(xv), f.bottom, f.px(xv), f.bottom + 4.0, "axis");
        text(out, f.px(xv), f.bottom + 17.0, "middle", format_number(xv));
    }
    line(out, f.left, f.bottom, f.right, f.bottom, "axis");
    line(out, f.left, f.top, f.left, f.bottom, "axis");
    text(out, 0.5 * (f.left + f.right), options.height - 12.0, "middle", "cutoff c");
    const double mid_y = 0.5 * (f.top + f.bottom);
    text(out, 16.0, mid_y, "middle", "exceedance probability",
         " transform=\"rotate(-90 16.00 " + fixed2(mid_y) + ")\"");
    text(out, f.right, f.top - 12.0, "end",
         "\xCE\xB1 = " + format_number(curve.alpha) + ", m = " + std::to_string(curve.rep_size) +
             ", n = " + std::to_string(curve.fit.n) + ", " + std::string(to_string(curve.side)));

    const std::size_t count = curve.cutoffs.size();
    if (count >= 2) {
        out += "<polygon class=\"band\" points=\"";
        for (std::size_t i = 0; i < count; ++i) {
            if (i) out += ' ';
            out += xy(f, curve.cutoffs[i], curve.estimates[i].upper);
        }
        for (std::size_t i = count; i-- > 0;) out += ' ' + xy(f, curve.cutoffs[i], curve.estimates[i].lower);
        out += "\"/>\n";
        out += "<polyline class=\"point-estimate\" points=\"";
        for (std::size_t i = 0; i < count; ++i) {
            if (i) out += ' ';
            out += xy(f, curve.cutoffs[i], curve.estimates[i].point);
        }
        out += "\"/>\n";
    } else {
        const double x = f.px(curve.cutoffs[0]);
        const auto& e = curve.estimates[0];
        line(out, x, f.py(e.lower), x, f.py(e.upper), "interval");
        out += "<circle class=\"point-estimate\" cx=\"" + fixed2(x) + "\" cy=\"" + fixed2(f.py(e.point)) +
               "\" r=\"3.5\" fill=\"#000\"/>\n";
    }

    if (shown) {
        const double y = f.py(0.5);
        const bool lo_finite = std::isfinite(shown->lower);
        const bool hi_finite = std::isfinite(shown->upper);
        const double x1 = lo_finite ? f.px(shown->lower) : f.left;
        const double x2 = hi_finite ? f.px(shown->upper) : f.right;
        line(out, x1, y, x2, y, "parameter-ci");
        if (lo_finite) line(out, x1, y - kCapHalfHeight, x1, y + kCapHalfHeight, "parameter-ci");
        if (hi_finite) line(out, x2, y - kCapHalfHeight, x2, y + kCapHalfHeight, "parameter-ci");
        out += "<circle class=\"parameter-estimate\" cx=\"" + fixed2(f.px(shown->estimate)) + "\" cy=\"" +
               fixed2(y) + "\" r=\"3.5\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace epci
