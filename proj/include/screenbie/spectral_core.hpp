#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "screenbie/geometry.hpp"
#include "screenbie/quadrature.hpp"

namespace screenbie {

// Samples of a density at the nodes of a spatial quadrature.
struct GridFunction {
  std::shared_ptr<const SpatialQuadrature> quad;
  std::vector<cplx> values;

  int plane_dim() const { return quad->plane_dim(); }
};

GridFunction make_grid_function(std::shared_ptr<const SpatialQuadrature> quad,
                                const std::function<cplx(PlanePoint)>& f);

// A Fourier transform evaluable at arbitrary frequencies.
struct SpectrumFunction {
  std::function<cplx(PlanePoint)> eval;
  double decay_rate = 0.0;  // algebraic decay hint, 0 if unknown
  cplx operator()(PlanePoint xi) const { return eval(xi); }
};

struct SobolevParams {
  double order = 0.0;
  double wavenumber = 1.0;
};

// Frequency-side quadrature. Ring nodes carry Z computed from the
// substitution variable, so |Z| is accurate right up to |xi| = k.
struct SpectralQuadrature {
  int plane_dim = 1;
  double k = 1.0;
  double cutoff = 0.0;
  double ring_half_width = 0.0;
  double phase_extent = 1.0;
  std::vector<PlanePoint> nodes;
  std::vector<double> weights;
  std::vector<double> radius;
  std::vector<cplx> z;

  std::size_t size() const { return nodes.size(); }
};

struct SpectralOptions {
  double cutoff = 0.0;           // 0: automatic
  double finest_scale = 0.0;     // smallest spatial feature; 0: diameter / 8
  double frequency_shift = 0.0;  // centre of modulated spectra, |k d~|
  double phase_extent = 0.0;     // largest point separation in phases; 0: diameter
  double ring_half_width = 0.0;  // 0: k / 4
  double panel_phase = 6.0;      // radial panel length times phase extent
  int order = 16;
};

// Fourier transform with the (2 pi)^{-(n-1)/2} normalisation.
cplx fourier_transform(const GridFunction& f, PlanePoint xi);

// Transform sampled at every node of q, by direct sums. Tensor densities
// (n = 3) are compressed by an SVD first, which turns each node into two
// one-dimensional sums.
std::vector<cplx> sample_spectrum(const GridFunction& f, const SpectralQuadrature& q);
std::vector<cplx> sample_spectrum(const SpectrumFunction& f, const SpectralQuadrature& q);

SpectrumFunction spectrum_of(std::shared_ptr<const GridFunction> f);

// sqrt(k^2 - |xi|^2) for |xi| <= k, i sqrt(|xi|^2 - k^2) otherwise.
cplx z_symbol(PlanePoint xi, double k);
cplx z_symbol_radial(double r, double k);

// Constant c in the default cutoff k_shift + c / h_min.
double cutoff_constant(double accuracy);

SpectralQuadrature build_spectral_quadrature(double k, const ScreenGeometry& geometry, double accuracy = 1e-8,
                                             const SpectralOptions& options = {});

double sobolev_norm(const SpectrumFunction& f, const SobolevParams& p, const SpectralQuadrature& q);
double sobolev_norm(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q);
// Weighted sum  sum w (k^2+|xi|^2)^s |f|^2, i.e. the squared norm.
double sobolev_norm_sq(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q);

// Fraction of the squared norm carried by nodes with |xi| > cutoff / 2.
// Small values mean the cutoff is adequate.
double outer_fraction(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q);

// Norm with the cutoff doubled until the outer fraction drops below the
// accuracy (at most `max_doublings` times). Reports the final fraction.
struct AdaptiveNorm {
  double value = 0.0;
  double outer_fraction = 0.0;
  double cutoff = 0.0;
  bool converged = false;
};
AdaptiveNorm adaptive_sobolev_norm(const GridFunction& f, const SobolevParams& p, const ScreenGeometry& geometry,
                                   double accuracy, SpectralOptions options = {}, int max_doublings = 4);

}  // namespace screenbie
