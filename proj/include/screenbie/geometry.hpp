#pragma once

#include <array>
#include <complex>
#include <vector>

namespace screenbie {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// A point of the screen plane R^{n-1}; x2 is unused when n = 2.
struct PlanePoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

// x = (x~, x_n) in R^n.
struct SpacePoint {
  PlanePoint t;
  double xn = 0.0;
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

// Planar screen: a finite union of disjoint open intervals (n = 2) or one
// axis-aligned open rectangle (n = 3).
class ScreenGeometry {
 public:
  static ScreenGeometry intervals(std::vector<Interval> parts);
  static ScreenGeometry rectangle(Interval x, Interval y);

  int dim() const { return dim_; }           // ambient n
  int plane_dim() const { return dim_ - 1; }
  double diameter() const { return diameter_; }
  double measure() const;
  const std::vector<Interval>& parts() const { return parts_; }
  Interval rect_x() const { return parts_[0]; }
  Interval rect_y() const { return rect_y_; }

  // Closed-support membership with a small slack.
  bool contains(PlanePoint p, double slack = 0.0) const;
  // Bounding box of the support.
  Interval bbox_x() const;
  Interval bbox_y() const;
  PlanePoint centre() const;

  // Uniformly scaled copy about the origin.
  ScreenGeometry scaled(double factor) const;

 private:
  int dim_ = 2;
  std::vector<Interval> parts_;
  Interval rect_y_{};
  double diameter_ = 0.0;
};

inline double dot(PlanePoint a, PlanePoint b) { return a.x1 * b.x1 + a.x2 * b.x2; }
double norm(PlanePoint a);
double distance(SpacePoint a, SpacePoint b);

}  // namespace screenbie
