#pragma once

#include <array>
#include <span>
#include <vector>

namespace cqstat {

using Point2 = std::array<double, 2>;

struct Polyline {
  std::vector<Point2> points;
  [[nodiscard]] bool closed() const { return points.size() > 2 && points.front() == points.back(); }
};

/// Iso-lines of a scalar field sampled on the tensor grid xs x ys by
/// marching squares with linear interpolation along cell edges. `field` is
/// row-major with xs as the slow index: field[i * ys.size() + j] = f(xs[i], ys[j]).
/// Cells touching a NaN sample are skipped. Saddle cells are resolved by the
/// cell-centre average. Segments sharing an edge crossing are joined into
/// polylines.
std::vector<Polyline> contour_lines(std::span<const double> field, std::span<const double> xs,
                                    std::span<const double> ys, double level);

}  // namespace cqstat
