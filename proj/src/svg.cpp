#include "heckelab/svg.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace heckelab {

namespace {

void append(std::ostringstream& out, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out << buf;
}

}  // namespace

std::string halfplane_figure_svg(const OrbitCloud& cloud, double epsilon, const Region& region,
                                 double metric_scale) {
    if (cloud.n != 2) throw std::invalid_argument("halfplane_figure_svg: n must be 2");

    const double y_top = region.y_max * 1.06;
    const double x_half = 0.75;
    const double scale = 720.0;  // pixels per half-plane unit
    const double width = 2 * x_half * scale;
    const double height = y_top * scale;
    auto px = [&](double x) { return (x + x_half) * scale; };
    auto py = [&](double y) { return (y_top - y) * scale; };

    // Trace-form radius -> hyperbolic radius.
    const double r_hyp = epsilon / (metric_scale * std::sqrt(2.0));

    std::ostringstream out;
    append(out,
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
           "viewBox=\"0 0 %.0f %.0f\">\n",
           width, height, width, height);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Fundamental domain outline: verticals at x = +-1/2 down to the unit
    // circle, the arc between them, and the truncation line at y_max.
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
    append(out, "M %.3f %.3f L %.3f %.3f ", px(-0.5), py(region.y_max), px(-0.5),
           py(std::sqrt(3.0) / 2.0));
    const int arc_segments = 64;
    for (int s = 0; s <= arc_segments; ++s) {
        const double a = (2.0 * M_PI / 3.0) - (M_PI / 3.0) * s / arc_segments;  // 120deg -> 60deg
        append(out, "L %.3f %.3f ", px(std::cos(a)), py(std::sin(a)));
    }
    append(out, "L %.3f %.3f ", px(0.5), py(region.y_max));
    append(out, "L %.3f %.3f", px(-0.5), py(region.y_max));
    out << "\"/>\n";

    // Epsilon-balls: a hyperbolic circle of radius r around (x,y) is the
    // euclidean circle centered at (x, y cosh r) with radius y sinh r.
    for (const auto& pt : cloud.points) {
        const HalfPlanePoint z = to_halfplane(pt.point);
        append(out,
               "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"#4477aa\" fill-opacity=\"0.25\" "
               "stroke=\"#223355\" stroke-width=\"0.4\"/>\n",
               px(z.x), py(z.y * std::cosh(r_hyp)), z.y * std::sinh(r_hyp) * scale);
    }
    for (const auto& pt : cloud.points) {
        const HalfPlanePoint z = to_halfplane(pt.point);
        append(out, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"1.2\" fill=\"black\"/>\n", px(z.x),
               py(z.y));
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace heckelab
