#include "screenbie/bio_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace screenbie {

namespace {

const cplx I(0.0, 1.0);

double inverse_norm_factor(int plane_dim) { return plane_dim == 1 ? 1.0 / std::sqrt(2.0 * pi) : 1.0 / (2.0 * pi); }

void check_k(double k, const SpectralQuadrature& q) {
  if (!(k > 0)) throw std::invalid_argument("wavenumber must be positive");
  if (std::abs(k - q.k) > 1e-12 * q.k) throw std::invalid_argument("spectral quadrature was built for another wavenumber");
}

// sum_q w f(xi) e^{i xi.x} over all nodes, for each target.
std::vector<cplx> inverse_sums(std::span<const cplx> g, std::span<const SpacePoint> xs, const SpectralQuadrature& q,
                               bool with_decay) {
  std::vector<cplx> out(xs.size(), 0.0);
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const double ax = std::abs(xs[t].xn);
    cplx sum = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) {
      if (g[n] == cplx(0.0)) continue;
      cplx e = std::exp(I * dot(q.nodes[n], xs[t].t));
      if (with_decay && ax > 0) e *= std::exp(I * ax * q.z[n]);
      sum += q.weights[n] * g[n] * e;
    }
    out[t] = sum;
  }
  return out;
}

}  // namespace

cplx symbol_value(SymbolKind kind, cplx z) { return kind == SymbolKind::SingleLayer ? 0.5 * I / z : 0.5 * I * z; }

std::vector<cplx> apply_symbol(SymbolKind kind, std::span<const cplx> phi_hat, std::span<const PlanePoint> targets,
                               const SpectralQuadrature& q) {
  std::vector<cplx> g(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) g[n] = symbol_value(kind, q.z[n]) * phi_hat[n];
  std::vector<SpacePoint> xs;
  for (const auto& t : targets) xs.push_back({t, 0.0});
  auto out = inverse_sums(g, xs, q, false);
  const double c = inverse_norm_factor(q.plane_dim);
  for (auto& v : out) v *= c;
  return out;
}

SymbolApplication apply_symbol(SymbolKind kind, const GridFunction& phi, double k, std::span<const PlanePoint> targets,
                               const SpectralQuadrature& q) {
  check_k(k, q);
  const auto s = sample_spectrum(phi, q);
  return {apply_symbol(kind, s, targets, q), true, 0.0};
}

SymbolApplication apply_symbol_checked(SymbolKind kind, const GridFunction& phi, double k,
                                       std::span<const PlanePoint> targets, const ScreenGeometry& geometry,
                                       double accuracy, SpectralOptions options, double tol) {
  const auto q1 = build_spectral_quadrature(k, geometry, accuracy, options);
  auto r = apply_symbol(kind, phi, k, targets, q1);
  options.cutoff = 2.0 * q1.cutoff;
  options.panel_phase = 0.5 * options.panel_phase;
  const auto q2 = build_spectral_quadrature(k, geometry, accuracy, options);
  const auto r2 = apply_symbol(kind, phi, k, targets, q2);
  double scale = 0.0, diff = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    scale = std::max(scale, std::abs(r2.values[t]));
    diff = std::max(diff, std::abs(r2.values[t] - r.values[t]));
  }
  r.values = r2.values;
  r.change = scale > 0 ? diff / scale : diff;
  r.converged = r.change <= tol;
  return r;
}

cplx sesquilinear_form(SymbolKind kind, std::span<const cplx> phi_hat, std::span<const cplx> psi_hat,
                       const SpectralQuadrature& q) {
  if (phi_hat.size() != q.size() || psi_hat.size() != q.size())
    throw std::invalid_argument("sample count does not match quadrature");
  cplx sum = 0.0;
  for (std::size_t n = 0; n < q.size(); ++n)
    sum += q.weights[n] * symbol_value(kind, q.z[n]) * phi_hat[n] * std::conj(psi_hat[n]);
  return sum;
}

cplx sesquilinear_a_D(const GridFunction& phi, const GridFunction& psi, double k, const SpectralQuadrature& q) {
  check_k(k, q);
  const auto a = sample_spectrum(phi, q);
  const auto b = &phi == &psi ? a : sample_spectrum(psi, q);
  return sesquilinear_form(SymbolKind::SingleLayer, a, b, q);
}

cplx sesquilinear_a_N(const GridFunction& phi, const GridFunction& psi, double k, const SpectralQuadrature& q) {
  check_k(k, q);
  const auto a = sample_spectrum(phi, q);
  const auto b = &phi == &psi ? a : sample_spectrum(psi, q);
  return sesquilinear_form(SymbolKind::Hypersingular, a, b, q);
}

std::vector<cplx> single_layer_potential(std::span<const cplx> phi_hat, std::span<const SpacePoint> xs,
                                         const SpectralQuadrature& q) {
  std::vector<cplx> g(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) g[n] = symbol_value(SymbolKind::SingleLayer, q.z[n]) * phi_hat[n];
  auto out = inverse_sums(g, xs, q, true);
  const double c = inverse_norm_factor(q.plane_dim);
  for (auto& v : out) v *= c;
  return out;
}

std::vector<cplx> double_layer_potential(std::span<const cplx> phi_hat, std::span<const SpacePoint> xs,
                                         const SpectralQuadrature& q) {
  for (const auto& x : xs)
    if (x.xn == 0.0) throw std::invalid_argument("double-layer potential needs x_n != 0");
  auto out = inverse_sums(phi_hat, xs, q, true);
  const double c = 0.5 * inverse_norm_factor(q.plane_dim);
  for (std::size_t t = 0; t < xs.size(); ++t) out[t] *= (xs[t].xn > 0 ? c : -c);
  return out;
}

PotentialValue single_layer_potential(const GridFunction& phi, double k, SpacePoint x, const SpectralQuadrature& q) {
  check_k(k, q);
  if (x.xn == 0.0 && phi.quad->geometry.contains(x.t))
    throw std::invalid_argument("field point lies on the screen");
  const auto s = sample_spectrum(phi, q);
  const SpacePoint xs[1] = {x};
  return {single_layer_potential(s, xs, q)[0], x.xn == 0.0};
}

PotentialValue double_layer_potential(const GridFunction& phi, double k, SpacePoint x, const SpectralQuadrature& q) {
  check_k(k, q);
  const auto s = sample_spectrum(phi, q);
  const SpacePoint xs[1] = {x};
  return {double_layer_potential(s, xs, q)[0], false};
}

}  // namespace screenbie
