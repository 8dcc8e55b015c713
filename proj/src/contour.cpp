#include "cqstat/contour.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace cqstat {

namespace {

// Edge identifier: (i, j, dir) where dir 0 is the edge from (i,j) to (i+1,j)
// and dir 1 the edge from (i,j) to (i,j+1).
struct EdgeKey {
  std::size_t i, j;
  int dir;
  auto operator<=>(const EdgeKey&) const = default;
};

using Segment = std::pair<EdgeKey, EdgeKey>;

}  // namespace

std::vector<Polyline> contour_lines(std::span<const double> field, std::span<const double> xs,
                                    std::span<const double> ys, double level) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  if (field.size() != nx * ny) throw std::invalid_argument("contour_lines: field size mismatch");
  if (nx < 2 || ny < 2) return {};

  auto f = [&](std::size_t i, std::size_t j) { return field[i * ny + j] - level; };
  auto crossing = [&](const EdgeKey& e) -> Point2 {
    const std::size_t i2 = e.dir == 0 ? e.i + 1 : e.i;
    const std::size_t j2 = e.dir == 1 ? e.j + 1 : e.j;
    const double a = f(e.i, e.j);
    const double b = f(i2, j2);
    const double t = a / (a - b);
    return {xs[e.i] + t * (xs[i2] - xs[e.i]), ys[e.j] + t * (ys[j2] - ys[e.j])};
  };

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double v00 = f(i, j), v10 = f(i + 1, j), v11 = f(i + 1, j + 1), v01 = f(i, j + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;
      // corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
      const int mask = (v00 >= 0 ? 1 : 0) | (v10 >= 0 ? 2 : 0) | (v11 >= 0 ? 4 : 0) | (v01 >= 0 ? 8 : 0);
      if (mask == 0 || mask == 15) continue;
      const EdgeKey bottom{i, j, 0}, right{i + 1, j, 1}, top{i, j + 1, 0}, left{i, j, 1};
      const bool center_high = 0.25 * (v00 + v10 + v11 + v01) >= 0;
      switch (mask) {
        case 1: case 14: segments.emplace_back(left, bottom); break;
        case 2: case 13: segments.emplace_back(bottom, right); break;
        case 3: case 12: segments.emplace_back(left, right); break;
        case 4: case 11: segments.emplace_back(right, top); break;
        case 6: case 9: segments.emplace_back(bottom, top); break;
        case 7: case 8: segments.emplace_back(left, top); break;
        case 5:
          if (center_high) {
            segments.emplace_back(left, top);
            segments.emplace_back(bottom, right);
          } else {
            segments.emplace_back(left, bottom);
            segments.emplace_back(right, top);
          }
          break;
        case 10:
          if (center_high) {
            segments.emplace_back(left, bottom);
            segments.emplace_back(right, top);
          } else {
            segments.emplace_back(left, top);
            segments.emplace_back(bottom, right);
          }
          break;
        default: break;
      }
    }
  }

  // Every edge crossing is shared by at most two segments.
  std::multimap<EdgeKey, std::size_t> by_edge;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    by_edge.emplace(segments[k].first, k);
    by_edge.emplace(segments[k].second, k);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_segment = [&](const EdgeKey& e, std::size_t from) -> std::ptrdiff_t {
    auto [lo, hi] = by_edge.equal_range(e);
    for (auto it = lo; it != hi; ++it) {
      if (it->second != from && !used[it->second]) return static_cast<std::ptrdiff_t>(it->second);
    }
    return -1;
  };

  std::vector<Polyline> lines;
  // Open chains start at edges with a single segment; do those first so the
  // remaining unused segments form closed loops.
  auto trace = [&](std::size_t start, bool reverse) {
    Polyline line;
    used[start] = true;
    EdgeKey a = reverse ? segments[start].second : segments[start].first;
    EdgeKey b = reverse ? segments[start].first : segments[start].second;
    line.points.push_back(crossing(a));
    line.points.push_back(crossing(b));
    std::size_t current = start;
    EdgeKey tail = b;
    while (true) {
      const auto nxt = next_segment(tail, current);
      if (nxt < 0) break;
      current = static_cast<std::size_t>(nxt);
      used[current] = true;
      tail = segments[current].first == tail ? segments[current].second : segments[current].first;
      line.points.push_back(crossing(tail));
    }
    lines.push_back(std::move(line));
  };
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (used[k]) continue;
    const bool first_free = by_edge.count(segments[k].first) == 1;
    const bool second_free = by_edge.count(segments[k].second) == 1;
    if (first_free) trace(k, false);
    else if (second_free) trace(k, true);
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (!used[k]) trace(k, false);
  }
  return lines;
}

}  // namespace cqstat
