#pragma once

// Standalone SVG rendering of an exceedance-probability curve: point-estimate
// line, shaded confidence band, and a horizontal bar at height 0.5 marking the
// parameter interval.

#include <optional>
#include <string>

#include "epci/exceedance.hpp"

namespace epci {

struct PlotOptions {
    int width = 640;
    int height = 420;
    bool show_parameter_ci = true;
};

// Maps data coordinates (cutoff, probability) to pixels and back.
struct PlotFrame {
    double x_min = 0.0;
    double x_max = 1.0;
    double left = 0.0;
    double right = 1.0;
    double top = 0.0;
    double bottom = 1.0;

    double px(double x) const;
    double py(double y) const;
    double data_x(double px) const;
    double data_y(double py) const;
};

PlotFrame plot_frame(const EpCurve& curve, const std::optional<ParameterInterval>& interval,
                     const PlotOptions& options);

// Elements carry classes "band" (polygon), "point-estimate" (polyline, or a
// circle for a single cutoff), "parameter-ci" and "parameter-estimate".
std::string render_curve_svg(const EpCurve& curve, const std::optional<ParameterInterval>& interval,
                             const PlotOptions& options = {});

}  // namespace epci
