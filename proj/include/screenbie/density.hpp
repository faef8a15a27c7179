#pragma once

#include <functional>
#include <vector>

#include "screenbie/spectral_core.hpp"

namespace screenbie {

// A density given in closed form. Breakpoints mark where it is not smooth,
// so quadrature panels can be aligned with them.
struct Density {
  int plane_dim = 1;
  std::function<cplx(PlanePoint)> value;
  std::vector<double> breaks_x, breaks_y;
  double finest_scale = 1.0;     // smallest feature size
  double frequency_shift = 0.0;  // |k d~| for modulated densities
};

// Sample on a breakpoint-aligned Gauss grid fine enough for transforms up to
// max_frequency.
GridFunction sample_density(const Density& d, const ScreenGeometry& g, double max_frequency, int order = 16);

// Spectral options matching a density: finest scale and modulation centre.
SpectralOptions spectral_options_for(const Density& d);

// (1 - t^2)^6 on |t| < 1, zero outside.
double bump_profile(double t);

struct Bump {
  PlanePoint centre;
  PlanePoint half_width;  // x2 ignored for n = 2
  double weight = 1.0;
};

// sum_i weight_i psi_i(x) times e^{i m.x}; m is the modulation frequency
// vector k d~ (zero for no modulation).
Density bump_density(int plane_dim, std::vector<Bump> bumps, PlanePoint modulation = {});

}  // namespace screenbie
