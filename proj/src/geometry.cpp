#include "screenbie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace screenbie {

ScreenGeometry ScreenGeometry::intervals(std::vector<Interval> parts) {
  if (parts.empty()) throw std::invalid_argument("screen needs at least one interval");
  std::sort(parts.begin(), parts.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].b > parts[i].a) || !std::isfinite(parts[i].a) || !std::isfinite(parts[i].b))
      throw std::invalid_argument("screen interval must be finite with a < b");
    if (i > 0 && parts[i].a < parts[i - 1].b)
      throw std::invalid_argument("screen intervals overlap");
  }
  ScreenGeometry g;
  g.dim_ = 2;
  g.parts_ = std::move(parts);
  g.diameter_ = g.parts_.back().b - g.parts_.front().a;
  return g;
}

ScreenGeometry ScreenGeometry::rectangle(Interval x, Interval y) {
  if (!(x.b > x.a) || !(y.b > y.a) || !std::isfinite(x.a + x.b + y.a + y.b))
    throw std::invalid_argument("screen rectangle must be finite with a < b on both axes");
  ScreenGeometry g;
  g.dim_ = 3;
  g.parts_ = {x};
  g.rect_y_ = y;
  g.diameter_ = std::hypot(x.length(), y.length());
  return g;
}

double ScreenGeometry::measure() const {
  if (dim_ == 3) return parts_[0].length() * rect_y_.length();
  double m = 0.0;
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool ScreenGeometry::contains(PlanePoint p, double slack) const {
  if (dim_ == 3) {
    return p.x1 >= parts_[0].a - slack && p.x1 <= parts_[0].b + slack && p.x2 >= rect_y_.a - slack &&
           p.x2 <= rect_y_.b + slack;
  }
  for (const auto& iv : parts_)
    if (p.x1 >= iv.a - slack && p.x1 <= iv.b + slack) return true;
  return false;
}

Interval ScreenGeometry::bbox_x() const { return {parts_.front().a, parts_.back().b}; }

Interval ScreenGeometry::bbox_y() const { return dim_ == 3 ? rect_y_ : Interval{0.0, 0.0}; }

PlanePoint ScreenGeometry::centre() const {
  auto bx = bbox_x();
  auto by = bbox_y();
  return {0.5 * (bx.a + bx.b), 0.5 * (by.a + by.b)};
}

ScreenGeometry ScreenGeometry::scaled(double factor) const {
  if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
  if (dim_ == 3)
    return rectangle({factor * parts_[0].a, factor * parts_[0].b}, {factor * rect_y_.a, factor * rect_y_.b});
  std::vector<Interval> p;
  for (const auto& iv : parts_) p.push_back({factor * iv.a, factor * iv.b});
  return intervals(std::move(p));
}

double norm(PlanePoint a) { return std::hypot(a.x1, a.x2); }

double distance(SpacePoint a, SpacePoint b) {
  double d1 = a.t.x1 - b.t.x1, d2 = a.t.x2 - b.t.x2, d3 = a.xn - b.xn;
  return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}

}  // namespace screenbie
