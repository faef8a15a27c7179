#pragma once

#include <vector>

#include "screenbie/geometry.hpp"

namespace screenbie {

// Gauss-Legendre nodes and weights on [-1, 1]; cached, 1 <= n <= 128.
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

struct Rule1D {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
  void append(double a, double b, int order);
};

// Composite Gauss rule over sorted breakpoints; every panel between two
// consecutive breakpoints is cut into equal pieces no longer than max_panel.
Rule1D composite_gauss(const std::vector<double>& breaks, double max_panel, int order);

// Geometrically graded Gauss rule on [a, b], refined toward a (or b). Panel
// sizes shrink by `ratio` down to `smallest`.
Rule1D graded_gauss(double a, double b, bool toward_a, double ratio, double smallest, int order);

// Tensor or composite quadrature of the screen support. For n = 3 the
// tensor factors are kept so that transforms can be separated.
struct SpatialQuadrature {
  ScreenGeometry geometry;
  std::vector<PlanePoint> nodes;
  std::vector<double> weights;
  bool tensor = false;
  Rule1D axis_x, axis_y;  // tensor factors; node index = i * axis_y.size() + j

  int plane_dim() const { return geometry.plane_dim(); }
  std::size_t size() const { return nodes.size(); }
};

// Panels are aligned with the screen support and with the extra breakpoints
// (smoothness breaks of the density). Breaks outside the support are ignored.
SpatialQuadrature make_spatial_quadrature(const ScreenGeometry& g, std::vector<double> breaks_x,
                                          std::vector<double> breaks_y, double max_panel, int order = 16);

}  // namespace screenbie
