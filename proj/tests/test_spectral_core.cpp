#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "screenbie/density.hpp"
#include "screenbie/spectral_core.hpp"

using namespace screenbie;

namespace {

GridFunction gaussian_on_16() {
  const auto g = ScreenGeometry::intervals({{-8.0, 8.0}});
  auto q = std::make_shared<const SpatialQuadrature>(make_spatial_quadrature(g, {}, {}, 0.25, 16));
  return make_grid_function(q, [](PlanePoint x) { return cplx(std::exp(-0.5 * x.x1 * x.x1)); });
}

SpectralQuadrature gaussian_spectral(double k) {
  SpectralOptions o;
  o.cutoff = 12.0;
  return build_spectral_quadrature(k, ScreenGeometry::intervals({{-8.0, 8.0}}), 1e-10, o);
}

}  // namespace

TEST_CASE("fourier transform: closed forms") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}});
  auto q = std::make_shared<const SpatialQuadrature>(make_spatial_quadrature(g, {}, {}, 0.5, 8));
  const auto zero = make_grid_function(q, [](PlanePoint) { return cplx(0.0); });
  CHECK(std::abs(fourier_transform(zero, {3.0, 0.0})) == 0.0);
  const auto one = make_grid_function(q, [](PlanePoint) { return cplx(1.0); });
  CHECK(std::abs(fourier_transform(one, {0.0, 0.0}) - 1.0 / std::sqrt(2.0 * pi)) < 1e-15);
  CHECK(std::abs(fourier_transform(gaussian_on_16(), {1.0, 0.0}) - std::exp(-0.5)) < 1e-8);
}

TEST_CASE("fourier transform: conjugate symmetry for real densities") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}, {1.5, 2.0}});
  const auto d = bump_density(1, {{{0.4, 0}, {0.3, 0}, 1.0}, {{1.75, 0}, {0.2, 0}, 0.5}});
  const auto f = sample_density(d, g, 200.0);
  double mx = 0.0, err = 0.0;
  for (double xi = 0.1; xi < 150.0; xi *= 1.3) {
    const cplx p = fourier_transform(f, {xi, 0}), m = fourier_transform(f, {-xi, 0});
    mx = std::max(mx, std::abs(p));
    err = std::max(err, std::abs(m - std::conj(p)));
  }
  CHECK(err <= 1e-12 * mx);
}

TEST_CASE("z symbol") {
  CHECK(z_symbol({0.0, 0.0}, 2.0) == cplx(2.0, 0.0));
  CHECK(z_symbol({3.0, 4.0}, 5.0) == cplx(0.0, 0.0));
  CHECK(std::abs(z_symbol({std::sqrt(2.0), 0.0}, 1.0) - cplx(0.0, 1.0)) < 1e-15);
  for (double r = 0.0; r < 4.0; r += 0.173) {
    const cplx z = z_symbol({r, 0.0}, 2.0);
    CHECK(z.real() >= 0.0);
    CHECK(z.imag() >= 0.0);
    CHECK(((z.real() == 0.0) != (z.imag() == 0.0)));
    CHECK(std::abs(std::norm(z) - std::abs(4.0 - r * r)) < 1e-13);
  }
}

TEST_CASE("spectral quadrature: ring singularity and measure") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}});
  const auto q = build_spectral_quadrature(1.0, g);
  double prop = 0.0, all = 0.0;
  for (std::size_t n = 0; n < q.size(); ++n) {
    CHECK(q.radius[n] != 1.0);
    CHECK(q.weights[n] > 0.0);
    all += q.weights[n];
    if (q.z[n].imag() == 0.0) prop += q.weights[n] / std::abs(q.z[n]);
  }
  CHECK(std::abs(prop - pi) < 1e-8);
  CHECK(std::abs(all - 2.0 * q.cutoff) < 1e-8 * q.cutoff);

  const auto g3 = ScreenGeometry::rectangle({0.0, 1.0}, {0.0, 1.0});
  const auto q3 = build_spectral_quadrature(5.0, g3, 1e-8);
  double area = 0.0;
  for (std::size_t n = 0; n < q3.size(); ++n) {
    CHECK(q3.radius[n] != 5.0);
    area += q3.weights[n];
  }
  CHECK(std::abs(area - pi * q3.cutoff * q3.cutoff) < 1e-8 * area);
}

TEST_CASE("spectral quadrature: invalid input") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}});
  CHECK_THROWS_AS(build_spectral_quadrature(0.0, g), std::invalid_argument);
  CHECK_THROWS_AS(build_spectral_quadrature(1.0, g, 0.0), std::invalid_argument);
  const auto q = build_spectral_quadrature(1.0, g);
  std::vector<cplx> s(q.size(), 1.0);
  CHECK_THROWS_AS(sobolev_norm(s, {0.0, 0.0}, q), std::invalid_argument);
}

TEST_CASE("Sobolev norms of the Gaussian") {
  const auto f = gaussian_on_16();
  for (double k : {0.5, 1.0, 3.0}) {
    const auto q = gaussian_spectral(k);
    const auto s = sample_spectrum(f, q);
    CHECK(std::abs(sobolev_norm(s, {0.0, k}, q) - std::pow(pi, 0.25)) < 1e-6);
    const double h1 = k * k * std::sqrt(pi) + 0.5 * std::sqrt(pi);
    CHECK(std::abs(sobolev_norm_sq(s, {1.0, k}, q) - h1) < 1e-6);
  }
  const auto q = gaussian_spectral(1.0);
  CHECK(std::abs(sobolev_norm(sample_spectrum(f, q), {1.0, 1.0}, q) - std::sqrt(1.5 * std::sqrt(pi))) < 1e-6);
  std::vector<cplx> zero(q.size(), 0.0);
  CHECK(sobolev_norm(zero, {0.5, 1.0}, q) == 0.0);
}

TEST_CASE("Plancherel and norm sandwich for bump densities") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const double w = 0.1 + 0.3 * u(rng);
    const double c = w + (1.0 - 2.0 * w) * u(rng);
    const auto d = bump_density(1, {{{c, 0}, {w, 0}, 1.0}});
    for (double k : {0.3, 1.0, 7.0}) {
      const auto q = build_spectral_quadrature(k, g, 1e-10, spectral_options_for(d));
      const auto f = sample_density(d, g, q.cutoff);
      const auto s = sample_spectrum(f, q);
      double l2 = 0.0;
      for (std::size_t j = 0; j < f.values.size(); ++j) l2 += f.quad->weights[j] * std::norm(f.values[j]);
      CHECK(std::abs(sobolev_norm_sq(s, {0.0, k}, q) / l2 - 1.0) < 1e-8);
      for (double sord : {-1.0, -0.5, 0.5, 1.0}) {
        const double nk = sobolev_norm(s, {sord, k}, q);
        const double n1 = sobolev_norm(s, {sord, 1.0}, q);
        const double ks = std::pow(k, sord);
        CHECK(std::min(1.0, ks) * n1 <= nk * (1 + 1e-14));
        CHECK(nk <= std::max(1.0, ks) * n1 * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("tensor transform matches the direct sum") {
  const auto g = ScreenGeometry::rectangle({0.0, 1.0}, {0.0, 0.5});
  const auto d = bump_density(2, {{{0.4, 0.25}, {0.3, 0.2}, 1.0}, {{0.7, 0.2}, {0.2, 0.15}, 0.7}}, {3.0, -1.0});
  const auto q = build_spectral_quadrature(4.0, g, 1e-8, spectral_options_for(d));
  const auto f = sample_density(d, g, q.cutoff);
  const auto s = sample_spectrum(f, q);
  double err = 0.0, mx = 0.0;
  for (std::size_t n = 0; n < q.size(); n += 997) {
    const cplx ref = fourier_transform(f, q.nodes[n]);
    err = std::max(err, std::abs(ref - s[n]));
    mx = std::max(mx, std::abs(ref));
  }
  CHECK(err < 1e-12 * mx);
}

TEST_CASE("adaptive cutoff doubling converges") {
  const auto g = ScreenGeometry::intervals({{0.0, 1.0}});
  const auto d = bump_density(1, {{{0.5, 0}, {0.2, 0}, 1.0}});
  SpectralOptions o = spectral_options_for(d);
  o.cutoff = 20.0;
  const auto f = sample_density(d, g, 2000.0);
  const auto r = adaptive_sobolev_norm(f, {1.0, 2.0}, g, 1e-10, o, 6);
  CHECK(r.converged);
  CHECK(r.cutoff > 20.0);
}
