#include "screenbie/spectral_core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace screenbie {

GridFunction make_grid_function(std::shared_ptr<const SpatialQuadrature> quad,
                                const std::function<cplx(PlanePoint)>& f) {
  GridFunction g{std::move(quad), {}};
  g.values.reserve(g.quad->size());
  for (const auto& x : g.quad->nodes) g.values.push_back(f(x));
  return g;
}

namespace {

double norm_factor(int plane_dim) { return plane_dim == 1 ? 1.0 / std::sqrt(2.0 * pi) : 1.0 / (2.0 * pi); }

struct WeightedSamples {
  std::vector<double> x1, x2;
  std::vector<cplx> a;  // w_j f(x_j)
};

WeightedSamples nonzero_samples(const GridFunction& f) {
  WeightedSamples s;
  const auto& q = *f.quad;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (f.values[j] == cplx(0.0)) continue;
    s.x1.push_back(q.nodes[j].x1);
    s.x2.push_back(q.nodes[j].x2);
    s.a.push_back(q.weights[j] * f.values[j]);
  }
  return s;
}

// sum_j a_j e^{-i xi x_j} and sum_j a_j e^{+i xi x_j} in one pass.
inline void pair_sum_1d(const std::vector<double>& x, const std::vector<cplx>& a, double xi, cplx& minus, cplx& plus) {
  cplx c = 0.0, s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = xi * x[j];
    c += a[j] * std::cos(t);
    s += a[j] * std::sin(t);
  }
  const cplx i(0.0, 1.0);
  minus = c - i * s;
  plus = c + i * s;
}

std::vector<cplx> sample_tensor(const GridFunction& f, const SpectralQuadrature& q) {
  const auto& sq = *f.quad;
  const std::size_t nx = sq.axis_x.size(), ny = sq.axis_y.size();
  // Keep only rows and columns that carry nonzero samples.
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (f.values[i * ny + j] != cplx(0.0)) {
        rows.push_back(i);
        break;
      }
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (f.values[i * ny + j] != cplx(0.0)) {
        cols.push_back(j);
        break;
      }
  std::vector<cplx> out(q.size(), 0.0);
  if (rows.empty()) return out;
  Eigen::MatrixXcd F(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const std::size_t i = rows[a], j = cols[b];
      F(a, b) = sq.axis_x.w[i] * sq.axis_y.w[j] * f.values[i * ny + j];
    }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-15 * sv(0)) ++rank;
  Eigen::MatrixXcd U = svd.matrixU().leftCols(rank) * sv.head(rank).asDiagonal();
  Eigen::MatrixXcd V = svd.matrixV().leftCols(rank).conjugate();
  std::vector<double> xs(rows.size()), ys(cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) xs[a] = sq.axis_x.x[rows[a]];
  for (std::size_t b = 0; b < cols.size(); ++b) ys[b] = sq.axis_y.x[cols[b]];
  Eigen::VectorXcd ex(xs.size()), ey(ys.size());
  const double c = norm_factor(2);
  for (std::size_t n = 0; n < q.size(); ++n) {
    const PlanePoint xi = q.nodes[n];
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const double t = xi.x1 * xs[a];
      ex(a) = cplx(std::cos(t), -std::sin(t));
    }
    for (std::size_t b = 0; b < ys.size(); ++b) {
      const double t = xi.x2 * ys[b];
      ey(b) = cplx(std::cos(t), -std::sin(t));
    }
    const Eigen::VectorXcd l = U.transpose() * ex;
    const Eigen::VectorXcd r = V.transpose() * ey;
    out[n] = c * (l.transpose() * r)(0, 0);
  }
  return out;
}

}  // namespace

cplx fourier_transform(const GridFunction& f, PlanePoint xi) {
  const auto& q = *f.quad;
  cplx sum = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (f.values[j] == cplx(0.0)) continue;
    const double t = xi.x1 * q.nodes[j].x1 + xi.x2 * q.nodes[j].x2;
    sum += q.weights[j] * f.values[j] * cplx(std::cos(t), -std::sin(t));
  }
  return norm_factor(q.plane_dim()) * sum;
}

std::vector<cplx> sample_spectrum(const GridFunction& f, const SpectralQuadrature& q) {
  if (f.plane_dim() != q.plane_dim) throw std::invalid_argument("density and spectral quadrature dimensions differ");
  if (q.plane_dim == 2 && f.quad->tensor) return sample_tensor(f, q);
  std::vector<cplx> out(q.size());
  const auto s = nonzero_samples(f);
  const double c = norm_factor(q.plane_dim);
  if (q.plane_dim == 1) {
    // Nodes come in +/- pairs: node i + half is the mirror of node i.
    const std::size_t half = q.size() / 2;
    for (std::size_t n = 0; n < half; ++n) {
      cplx m, p;
      pair_sum_1d(s.x1, s.a, q.nodes[n].x1, m, p);
      out[n] = c * m;
      out[n + half] = c * p;
    }
    return out;
  }
  for (std::size_t n = 0; n < q.size(); ++n) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < s.a.size(); ++j) {
      const double t = q.nodes[n].x1 * s.x1[j] + q.nodes[n].x2 * s.x2[j];
      sum += s.a[j] * cplx(std::cos(t), -std::sin(t));
    }
    out[n] = c * sum;
  }
  return out;
}

std::vector<cplx> sample_spectrum(const SpectrumFunction& f, const SpectralQuadrature& q) {
  std::vector<cplx> out(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) out[n] = f(q.nodes[n]);
  return out;
}

SpectrumFunction spectrum_of(std::shared_ptr<const GridFunction> f) {
  return {[f](PlanePoint xi) { return fourier_transform(*f, xi); }, 0.0};
}

cplx z_symbol_radial(double r, double k) {
  if (r <= k) return {std::sqrt((k - r) * (k + r)), 0.0};
  return {0.0, std::sqrt((r - k) * (r + k))};
}

cplx z_symbol(PlanePoint xi, double k) { return z_symbol_radial(norm(xi), k); }

double cutoff_constant(double accuracy) {
  // Fitted to the spectral tail of the (1 - t^2)^6 bump in the H^1 weight.
  const double c = 20.0 * std::pow(1.25e-7 / accuracy, 1.0 / 10.8);
  return std::clamp(c, 20.0, 60.0);
}

namespace {

struct RadialNode {
  double r, w;
  cplx z;
};

// Rule for integrals over r in (0, cutoff) with a 1/|Z| or |Z| factor at r = k.
std::vector<RadialNode> radial_rule(double k, double cutoff, double delta, double panel, int order) {
  std::vector<RadialNode> out;
  const auto& g = gauss_legendre(order);
  auto panels = [&](double a, double b, double len, auto&& emit) {
    if (!(b > a)) return;
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / len - 1e-12)));
    const double h = (b - a) / m;
    for (int p = 0; p < m; ++p) {
      const double c = a + (p + 0.5) * h;
      for (int i = 0; i < order; ++i) emit(c + 0.5 * h * g.x[i], 0.5 * h * g.w[i]);
    }
  };
  // Propagating part away from the ring.
  panels(0.0, k - delta, panel, [&](double r, double w) { out.push_back({r, w, z_symbol_radial(r, k)}); });
  // Ring, inside: r = sqrt(k^2 - u^2), dr = u/r du, Z = u.
  const double u1 = std::sqrt(delta * (2.0 * k - delta));
  panels(0.0, u1, panel, [&](double u, double w) {
    const double r = std::sqrt((k - u) * (k + u));
    out.push_back({r, w * u / r, cplx(u, 0.0)});
  });
  // Ring, outside: r = sqrt(k^2 + u^2), Z = i u.
  const double u2 = std::sqrt(delta * (2.0 * k + delta));
  panels(0.0, u2, panel, [&](double u, double w) {
    const double r = std::sqrt(k * k + u * u);
    out.push_back({r, w * u / r, cplx(0.0, u)});
  });
  // Evanescent part, graded away from the ring.
  double a = k + delta;
  double len = std::min(delta, panel);
  while (a < cutoff) {
    const double b = std::min(cutoff, a + len);
    panels(a, b, b - a, [&](double r, double w) { out.push_back({r, w, z_symbol_radial(r, k)}); });
    a = b;
    len = std::min(2.0 * len, panel);
  }
  return out;
}

}  // namespace

SpectralQuadrature build_spectral_quadrature(double k, const ScreenGeometry& geometry, double accuracy,
                                             const SpectralOptions& o) {
  if (!(k > 0) || !std::isfinite(k)) throw std::invalid_argument("wavenumber must be positive");
  if (!(accuracy > 0)) throw std::invalid_argument("accuracy must be positive");
  SpectralQuadrature q;
  q.plane_dim = geometry.plane_dim();
  q.k = k;
  const double h_min = o.finest_scale > 0 ? o.finest_scale : geometry.diameter() / 8.0;
  q.cutoff = o.cutoff > 0 ? o.cutoff : std::max(2.0 * k, o.frequency_shift + cutoff_constant(accuracy) / h_min);
  q.cutoff = std::max(q.cutoff, 1.5 * k);
  q.ring_half_width = o.ring_half_width > 0 ? std::min(o.ring_half_width, k / 3.0) : k / 4.0;
  q.phase_extent = o.phase_extent > 0 ? o.phase_extent : geometry.diameter();
  const double panel = o.panel_phase / q.phase_extent;
  const auto radial = radial_rule(k, q.cutoff, q.ring_half_width, panel, o.order);

  if (q.plane_dim == 1) {
    const std::size_t m = radial.size();
    q.nodes.resize(2 * m);
    q.weights.resize(2 * m);
    q.radius.resize(2 * m);
    q.z.resize(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t n = i + side * m;
        q.nodes[n] = {side ? -radial[i].r : radial[i].r, 0.0};
        q.weights[n] = radial[i].w;
        q.radius[n] = radial[i].r;
        q.z[n] = radial[i].z;
      }
    }
    return q;
  }
  for (const auto& rn : radial) {
    const double band = rn.r * q.phase_extent;
    int a = static_cast<int>(std::ceil(band + 6.0 * std::cbrt(band) + 16.0));
    a = std::max(32, (a + 3) / 4 * 4);
    const double w = rn.w * rn.r * 2.0 * pi / a;
    for (int m = 0; m < a; ++m) {
      const double th = 2.0 * pi * (m + 0.5) / a;
      q.nodes.push_back({rn.r * std::cos(th), rn.r * std::sin(th)});
      q.weights.push_back(w);
      q.radius.push_back(rn.r);
      q.z.push_back(rn.z);
    }
  }
  return q;
}

double sobolev_norm_sq(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q) {
  if (!(p.wavenumber > 0)) throw std::invalid_argument("Sobolev wavenumber must be positive");
  if (samples.size() != q.size()) throw std::invalid_argument("sample count does not match quadrature");
  const double k2 = p.wavenumber * p.wavenumber;
  double sum = 0.0;
  for (std::size_t n = 0; n < q.size(); ++n) {
    const double r2 = q.radius[n] * q.radius[n];
    sum += q.weights[n] * std::pow(k2 + r2, p.order) * std::norm(samples[n]);
  }
  return sum;
}

double sobolev_norm(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q) {
  return std::sqrt(sobolev_norm_sq(samples, p, q));
}

double sobolev_norm(const SpectrumFunction& f, const SobolevParams& p, const SpectralQuadrature& q) {
  if (!(p.wavenumber > 0)) throw std::invalid_argument("Sobolev wavenumber must be positive");
  const auto s = sample_spectrum(f, q);
  return sobolev_norm(s, p, q);
}

double outer_fraction(std::span<const cplx> samples, const SobolevParams& p, const SpectralQuadrature& q) {
  const double k2 = p.wavenumber * p.wavenumber;
  double all = 0.0, outer = 0.0;
  for (std::size_t n = 0; n < q.size(); ++n) {
    const double r2 = q.radius[n] * q.radius[n];
    const double v = q.weights[n] * std::pow(k2 + r2, p.order) * std::norm(samples[n]);
    all += v;
    if (q.radius[n] > 0.5 * q.cutoff) outer += v;
  }
  return all > 0 ? outer / all : 0.0;
}

AdaptiveNorm adaptive_sobolev_norm(const GridFunction& f, const SobolevParams& p, const ScreenGeometry& geometry,
                                   double accuracy, SpectralOptions options, int max_doublings) {
  AdaptiveNorm r;
  for (int it = 0; it <= max_doublings; ++it) {
    const auto q = build_spectral_quadrature(p.wavenumber, geometry, accuracy, options);
    const auto s = sample_spectrum(f, q);
    r.value = sobolev_norm(s, p, q);
    r.outer_fraction = outer_fraction(s, p, q);
    r.cutoff = q.cutoff;
    if (r.outer_fraction < accuracy) {
      r.converged = true;
      break;
    }
    options.cutoff = 2.0 * q.cutoff;
  }
  return r;
}

}  // namespace screenbie
