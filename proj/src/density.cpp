#include "screenbie/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace screenbie {

GridFunction sample_density(const Density& d, const ScreenGeometry& g, double max_frequency, int order) {
  if (d.plane_dim != g.plane_dim()) throw std::invalid_argument("density dimension does not match the screen");
  const double panel = std::min(10.0 / std::max(max_frequency + d.frequency_shift, 1e-12), g.diameter());
  auto quad = std::make_shared<const SpatialQuadrature>(make_spatial_quadrature(g, d.breaks_x, d.breaks_y, panel, order));
  return make_grid_function(quad, d.value);
}

SpectralOptions spectral_options_for(const Density& d) {
  SpectralOptions o;
  o.finest_scale = d.finest_scale;
  o.frequency_shift = d.frequency_shift;
  return o;
}

double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  const double u2 = u * u;
  return u2 * u2 * u2;
}

Density bump_density(int plane_dim, std::vector<Bump> bumps, PlanePoint modulation) {
  if (bumps.empty()) throw std::invalid_argument("bump density needs at least one bump");
  Density d;
  d.plane_dim = plane_dim;
  d.finest_scale = std::numeric_limits<double>::infinity();
  for (const auto& b : bumps) {
    d.breaks_x.push_back(b.centre.x1 - b.half_width.x1);
    d.breaks_x.push_back(b.centre.x1 + b.half_width.x1);
    d.finest_scale = std::min(d.finest_scale, b.half_width.x1);
    if (plane_dim == 2) {
      d.breaks_y.push_back(b.centre.x2 - b.half_width.x2);
      d.breaks_y.push_back(b.centre.x2 + b.half_width.x2);
      d.finest_scale = std::min(d.finest_scale, b.half_width.x2);
    }
  }
  d.frequency_shift = norm(modulation);
  d.value = [plane_dim, bumps = std::move(bumps), modulation](PlanePoint x) -> cplx {
    double v = 0.0;
    for (const auto& b : bumps) {
      double p = bump_profile((x.x1 - b.centre.x1) / b.half_width.x1);
      if (p == 0.0) continue;
      if (plane_dim == 2) p *= bump_profile((x.x2 - b.centre.x2) / b.half_width.x2);
      v += b.weight * p;
    }
    if (v == 0.0 || (modulation.x1 == 0.0 && modulation.x2 == 0.0)) return v;
    const double ph = dot(modulation, x);
    return v * cplx(std::cos(ph), std::sin(ph));
  };
  return d;
}

}  // namespace screenbie
