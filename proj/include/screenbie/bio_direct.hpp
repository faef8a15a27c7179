#pragma once

#include <vector>

#include "screenbie/density.hpp"
#include "screenbie/quadrature.hpp"

namespace screenbie {

// Helmholtz fundamental solution: e^{ikr}/(4 pi r) (n = 3) or (i/4) H0(kr) (n = 2).
cplx phi(SpacePoint x, SpacePoint y, double k, int dim);
cplx phi_radial(double r, double k, int dim);

// (i/4) H0(kr) + log(r)/(2 pi), the smooth part of the 2D kernel; r >= 0.
cplx phi2_regular_part(double r, double k);

// int_a^b log|y - x| (y - x)^m dy for m = 0, 1, 2, in closed form.
double log_moment(int m, double a, double b, double x);

// int_I int_J log|x - y| dy dx for two intervals of a line, in closed form.
double log_interaction(Interval i, Interval j);

struct DirectOptions {
  double tolerance = 1e-11;  // relative change between refinement levels
  int max_levels = 7;
  int order = 16;
};

struct DirectResult {
  cplx value;
  bool converged = false;
  double estimated_error = 0.0;
  int levels = 0;
};

// int_Gamma Phi(x, y) phi(y) ds(y) by panel quadrature refined until two
// levels agree. On-screen points use singularity subtraction (n = 2) or a
// polar split around the singular point (n = 3).
DirectResult direct_single_layer(const Density& d, double k, SpacePoint x, const ScreenGeometry& g,
                                 const DirectOptions& o = {});

// Fourier transform in x~ of the kernel restricted to |x~| <= L, at height x_n:
//   n = 3: int_0^L F(r) J0(|xi| r) r dr,   n = 2: sqrt(2/pi) int_0^L F(r) cos(|xi| r) dr
// with F(r) = Phi at distance sqrt(r^2 + x_n^2).
struct KernelTransform {
  cplx value;
  bool converged = false;
  int levels = 0;
};
KernelTransform truncated_kernel_transform(int dim, double L, double xn, double xi, double k, double tol = 1e-12);

// Precomputed radial rule for evaluating the truncated transform at many
// frequencies |xi| <= xi_max.
class TruncatedKernelTable {
 public:
  TruncatedKernelTable(int dim, double L, double xn, double k, double xi_max, int level = 1);
  cplx operator()(double xi) const;

 private:
  int dim_;
  std::vector<double> r_;
  std::vector<cplx> a_;  // weight times kernel (times r for n = 3)
};

// Quadrature rule on [a, b] with cuts at p (if inside) and geometric
// refinement toward p down to `smallest`; no panel exceeds max_len.
Rule1D singular_panel_rule(double a, double b, const double* p, double smallest, double max_len, int order);

// int over the axis-aligned rectangle [x0,x1]x[y0,y1] (plane x_n = 0) of
// Phi(x, y) dy for a constant density, n = 3. Exact radial integration
// around the foot of x, Gauss along the edges.
cplx rectangle_potential(SpacePoint x, double k, Interval cx, Interval cy);

// int_a^b Phi(x, (y, 0)) dy for a constant density, n = 2.
cplx interval_potential(SpacePoint x, double k, Interval e);

}  // namespace screenbie
