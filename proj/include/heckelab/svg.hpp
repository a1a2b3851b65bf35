#pragma once

#include <string>

#include "heckelab/covering.hpp"

namespace heckelab {

// Half-plane picture (n = 2 only): the fundamental domain outline up to
// y_max, the orbit points, and around each a circle of radius epsilon in the
// trace-form metric.
std::string halfplane_figure_svg(const OrbitCloud& cloud, double epsilon, const Region& region,
                                 double metric_scale = 1.0);

}  // namespace heckelab
