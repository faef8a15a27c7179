#include "screenbie/estimates_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "screenbie/bio_direct.hpp"
#include "screenbie/bio_spectral.hpp"
#include "screenbie/parallel.hpp"
#include "screenbie/quadrature.hpp"
#include "screenbie/special_functions.hpp"

namespace screenbie {

namespace {

double weighted_sq(const std::vector<cplx>& hat, const SpectralQuadrature& q, double s) {
  return sobolev_norm_sq(hat, {s, q.k}, q);
}

void require_nonzero(double n) {
  if (!(n > 0)) throw std::invalid_argument("Rayleigh quotient of a zero density");
}

std::vector<double> kl_values(const std::vector<double>& ks, double L) {
  std::vector<double> x;
  for (double k : ks) x.push_back(k * L);
  return x;
}

std::vector<double> quantities(const EstimateReport& r) {
  std::vector<double> y;
  for (const auto& p : r.sweep) y.push_back(p.quantity);
  return y;
}

void check_sweep(const std::vector<double>& ks) {
  if (ks.empty()) throw std::invalid_argument("empty k sweep");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0)) throw std::invalid_argument("wavenumbers must be positive");
    if (i > 0 && ks[i] <= ks[i - 1]) throw std::invalid_argument("k sweep must be increasing");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Ensembles

Ensemble make_ensemble(const ScreenGeometry& g, std::uint64_t seed, int count) {
  if (count < 2 || count % 2) throw std::invalid_argument("ensemble size must be even and at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Ensemble e;
  e.geometry = g;
  const int half = count / 2;
  std::vector<double> lengths;
  for (const auto& p : g.parts()) lengths.push_back(p.length());
  std::discrete_distribution<int> pick(lengths.begin(), lengths.end());
  for (int i = 0; i < half; ++i) {
    EnsembleMember m;
    for (int b = 0; b < 3; ++b) {
      Bump bump;
      bump.weight = 0.2 + 0.8 * u(rng);
      if (g.dim() == 2) {
        const Interval p = g.parts()[pick(rng)];
        const double w = (0.15 + 0.15 * u(rng)) * p.length();
        bump.half_width = {w, 0.0};
        bump.centre = {p.a + w + (p.length() - 2 * w) * u(rng), 0.0};
      } else {
        const Interval rx = g.rect_x(), ry = g.rect_y();
        const double wx = (0.15 + 0.15 * u(rng)) * rx.length(), wy = (0.15 + 0.15 * u(rng)) * ry.length();
        bump.half_width = {wx, wy};
        bump.centre = {rx.a + wx + (rx.length() - 2 * wx) * u(rng), ry.a + wy + (ry.length() - 2 * wy) * u(rng)};
      }
      m.bumps.push_back(bump);
    }
    e.members.push_back(m);
  }
  const double angles[4] = {0.0, 30.0, 60.0, 90.0};
  for (int i = 0; i < half; ++i) {
    EnsembleMember m = e.members[i];
    m.modulated = true;
    m.angle_deg = angles[i % 4];
    if (g.dim() == 2) {
      m.direction = {u(rng) < 0.5 ? -1.0 : 1.0, 0.0};
    } else {
      const double a = 2.0 * pi * u(rng);
      m.direction = {std::cos(a), std::sin(a)};
    }
    e.members.push_back(m);
  }
  return e;
}

Density realize(const EnsembleMember& m, int plane_dim, double k) {
  PlanePoint mod{};
  if (m.modulated && m.angle_deg != 90.0) {
    const double c = k * std::cos(m.angle_deg * pi / 180.0);
    mod = {c * m.direction.x1, plane_dim == 2 ? c * m.direction.x2 : 0.0};
  }
  return bump_density(plane_dim, m.bumps, mod);
}

EnsembleMember sharpness_bump(const ScreenGeometry& g, bool modulated) {
  EnsembleMember m;
  Bump b;
  if (g.dim() == 2) {
    const auto& parts = g.parts();
    const auto p = *std::max_element(parts.begin(), parts.end(),
                                     [](const Interval& a, const Interval& c) { return a.length() < c.length(); });
    b.centre = {0.5 * (p.a + p.b), 0.0};
    b.half_width = {0.3 * p.length(), 0.0};
  } else {
    b.centre = g.centre();
    b.half_width = {0.3 * g.rect_x().length(), 0.3 * g.rect_y().length()};
  }
  m.bumps = {b};
  m.modulated = modulated;
  m.angle_deg = modulated ? 0.0 : 90.0;
  return m;
}

Family family_of(const EnsembleMember& m, int plane_dim) {
  return [m, plane_dim](double k) { return realize(m, plane_dim, k); };
}

// ---------------------------------------------------------------------------
// Measures

SpectralSample spectral_sample(const Density& d, const ScreenGeometry& g, double k, const ProbeOptions& o) {
  SpectralSample s;
  s.q = build_spectral_quadrature(k, g, o.accuracy, spectral_options_for(d));
  s.hat = sample_spectrum(sample_density(d, g, s.q.cutoff), s.q);
  return s;
}

double rayleigh_dirichlet(const std::vector<cplx>& hat, const SpectralQuadrature& q) {
  const double n = weighted_sq(hat, q, -0.5);
  require_nonzero(n);
  return std::abs(sesquilinear_form(SymbolKind::SingleLayer, hat, hat, q)) / n;
}

double rayleigh_neumann(const std::vector<cplx>& hat, const SpectralQuadrature& q) {
  const double n = weighted_sq(hat, q, 0.5);
  require_nonzero(n);
  return std::abs(sesquilinear_form(SymbolKind::Hypersingular, hat, hat, q)) / n;
}

double hypersingular_ratio(const std::vector<cplx>& hat, double s, const SpectralQuadrature& q) {
  double num = 0.0, den = 0.0;
  const double k2 = q.k * q.k;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = q.weights[i] * std::norm(hat[i]);
    const double m = k2 + q.radius[i] * q.radius[i];
    num += w * 0.25 * std::norm(q.z[i]) * std::pow(m, s - 1.0);
    den += w * std::pow(m, s);
  }
  require_nonzero(den);
  return std::sqrt(num / den);
}

std::vector<cplx> truncated_kernel_at_nodes(const SpectralQuadrature& q, double L) {
  const int dim = q.plane_dim + 1;
  const TruncatedKernelTable tab(dim, L, 0.0, q.k, q.cutoff * 1.01, 1);
  const double c = std::pow(2.0 * pi, 0.5 * (dim - 1));
  std::vector<cplx> out(q.size());
  if (dim == 2) {
    parallel_for(q.size(), [&](std::size_t i) { out[i] = c * tab(q.radius[i]); });
    return out;
  }
  // Polar nodes share radii.
  std::vector<double> radii(q.radius);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::vector<cplx> vals(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { vals[i] = c * tab(radii[i]); });
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto it = std::lower_bound(radii.begin(), radii.end(), q.radius[i]);
    out[i] = vals[it - radii.begin()];
  }
  return out;
}

double single_layer_ratio(const std::vector<cplx>& hat, const std::vector<cplx>& kernel, double s, double order,
                          const SpectralQuadrature& q) {
  double num = 0.0, den = 0.0;
  const double k2 = q.k * q.k;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double m = k2 + q.radius[i] * q.radius[i];
    const double a = q.weights[i] * std::norm(hat[i]);
    num += a * std::norm(kernel[i]) * std::pow(m, s + order);
    den += a * std::pow(m, s);
  }
  require_nonzero(den);
  return std::sqrt(num / den);
}

DensityMeasures measure_density(const Density& d, const ScreenGeometry& g, double k, const ProbeOptions& o,
                                bool with_single_layer) {
  const auto s = spectral_sample(d, g, k, o);
  DensityMeasures m;
  m.a_D = sesquilinear_form(SymbolKind::SingleLayer, s.hat, s.hat, s.q);
  m.a_N = sesquilinear_form(SymbolKind::Hypersingular, s.hat, s.hat, s.q);
  m.dirichlet = rayleigh_dirichlet(s.hat, s.q);
  m.neumann = rayleigh_neumann(s.hat, s.q);
  for (int j = 0; j < 3; ++j) m.hypersingular[j] = hypersingular_ratio(s.hat, 0.5 * j, s.q);
  if (with_single_layer) {
    const auto kern = truncated_kernel_at_nodes(s.q, g.diameter());
    m.single_layer = single_layer_ratio(s.hat, kern, -0.5, 1.0, s.q);
    m.single_layer_same = single_layer_ratio(s.hat, kern, 0.0, 0.0, s.q);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Fits and sweeps

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y, double max_residual) {
  if (x.size() != y.size()) throw std::invalid_argument("fit needs matching x and y");
  SlopeFit f;
  const std::size_t n = x.size();
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - f.intercept - f.slope * std::log(x[i]);
    r2 += r * r;
  }
  f.residual = std::sqrt(r2 / n);
  f.ok = n >= 4 && f.residual < max_residual;
  return f;
}

void judge_slope(EstimateReport& r, double lo, double hi) {
  std::ostringstream os;
  os << "slope " << r.fit.slope << " (target [" << lo << ", " << hi << "]), fit residual " << r.fit.residual;
  if (!r.fit.ok) {
    r.verdict = Verdict::Inconclusive;
    os << (r.sweep.size() < 4 ? ", fewer than 4 points" : ", residual too large");
  } else {
    r.verdict = r.fit.slope >= lo && r.fit.slope <= hi ? Verdict::Pass : Verdict::Fail;
  }
  r.detail = os.str();
}

double probe_coercivity_dirichlet(const Ensemble& e, double k, const ProbeOptions& o) {
  std::vector<double> r(e.members.size());
  parallel_for(r.size(), [&](std::size_t i) {
    const auto d = realize(e.members[i], e.geometry.plane_dim(), k);
    const auto s = spectral_sample(d, e.geometry, k, o);
    r[i] = rayleigh_dirichlet(s.hat, s.q);
  });
  return *std::min_element(r.begin(), r.end());
}

EstimateReport probe_continuity_single_layer(const Family& f, const ScreenGeometry& g, double s, int order,
                                             const std::vector<double>& ks, const ProbeOptions& o) {
  check_sweep(ks);
  EstimateReport r;
  r.name = order == 1 ? "single-layer continuity" : "single-layer same-order map";
  r.length = g.diameter();
  r.sweep.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    const auto smp = spectral_sample(f(k), g, k, o);
    const auto kern = truncated_kernel_at_nodes(smp.q, g.diameter());
    const double v = single_layer_ratio(smp.hat, kern, s, order, smp.q);
    const double kl = k * r.length;
    const double bound = order == 1 ? 1.0 + std::sqrt(kl) : std::sqrt(1.0 / kl);
    r.sweep[i] = {k, v, bound, v / bound};
  });
  r.fit = fit_slope(kl_values(ks, r.length), quantities(r));
  double c = 0.0;
  for (const auto& p : r.sweep) c = std::max(c, p.ratio);
  r.bound_constant = c;
  return r;
}

EstimateReport probe_continuity_hypersingular(const std::vector<Family>& fs, const ScreenGeometry& g,
                                              const std::vector<double>& ks, const ProbeOptions& o) {
  check_sweep(ks);
  EstimateReport r;
  r.name = "hypersingular continuity";
  r.length = g.diameter();
  r.sweep.resize(ks.size());
  std::vector<double> vals(ks.size() * fs.size());
  parallel_for(vals.size(), [&](std::size_t idx) {
    const std::size_t i = idx / fs.size(), j = idx % fs.size();
    const auto smp = spectral_sample(fs[j](ks[i]), g, ks[i], o);
    double m = 0.0;
    for (double s : {0.0, 0.5, 1.0}) m = std::max(m, hypersingular_ratio(smp.hat, s, smp.q));
    vals[idx] = m;
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < fs.size(); ++j) m = std::max(m, vals[i * fs.size() + j]);
    r.sweep[i] = {ks[i], m, 0.5, m / 0.5};
    worst = std::max(worst, m);
  }
  r.fit = fit_slope(kl_values(ks, r.length), quantities(r));
  r.bound_constant = worst;
  r.verdict = worst <= 0.5 + 1e-6 ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "max ratio " << worst << " (bound 0.5 + 1e-6)";
  r.detail = os.str();
  return r;
}

EstimateReport probe_coercivity_neumann(const Ensemble& e, const std::vector<double>& ks, const ProbeOptions& o) {
  check_sweep(ks);
  const auto& g = e.geometry;
  const double beta = g.dim() == 2 ? -0.5 : -2.0 / 3.0;
  EstimateReport r;
  r.name = "Neumann coercivity";
  r.length = g.diameter();
  const std::size_t m = e.members.size();
  std::vector<double> vals(ks.size() * m);
  parallel_for(vals.size(), [&](std::size_t idx) {
    const double k = ks[idx / m];
    const auto d = realize(e.members[idx % m], g.plane_dim(), k);
    const auto smp = spectral_sample(d, g, k, o);
    vals[idx] = rayleigh_neumann(smp.hat, smp.q);
  });
  std::vector<double> products;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double gamma = *std::min_element(vals.begin() + i * m, vals.begin() + (i + 1) * m);
    const double bound = std::pow(ks[i] * r.length, beta);
    r.sweep.push_back({ks[i], gamma, bound, gamma / bound});
    products.push_back(gamma / bound);
  }
  r.fit = fit_slope(kl_values(ks, r.length), quantities(r));
  const auto pf = fit_slope(kl_values(ks, r.length), products);
  r.bound_constant = *std::min_element(products.begin(), products.end());
  std::ostringstream os;
  os << "min gamma_N (kL)^" << -beta << " = " << r.bound_constant << ", slope of that product " << pf.slope
     << " (must be >= -0.15), gamma_N slope " << r.fit.slope;
  r.detail = os.str();
  if (ks.size() < 4)
    r.verdict = Verdict::Inconclusive;
  else
    r.verdict = r.bound_constant > 0 && pf.slope >= -0.15 ? Verdict::Pass : Verdict::Fail;
  return r;
}

EstimateReport probe_neumann_family(const Family& f, const ScreenGeometry& g, const std::vector<double>& ks,
                                    const ProbeOptions& o) {
  check_sweep(ks);
  EstimateReport r;
  r.name = "Neumann Rayleigh quotient";
  r.length = g.diameter();
  r.sweep.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const auto smp = spectral_sample(f(ks[i]), g, ks[i], o);
    const double v = rayleigh_neumann(smp.hat, smp.q);
    const double bound = std::pow(ks[i] * r.length, -0.5);
    r.sweep[i] = {ks[i], v, bound, v / bound};
  });
  r.fit = fit_slope(kl_values(ks, r.length), quantities(r));
  return r;
}

EstimateReport condition_number_study(const Ensemble& e, OperatorKind kind, const std::vector<double>& ks,
                                      const ProbeOptions& o) {
  check_sweep(ks);
  const auto& g = e.geometry;
  EstimateReport r;
  r.name = kind == OperatorKind::SingleLayer ? "cond S_k estimate" : "cond T_k estimate";
  r.length = g.diameter();
  const std::size_t m = e.members.size();
  std::vector<double> cont(ks.size() * m), coer(ks.size() * m);
  parallel_for(cont.size(), [&](std::size_t idx) {
    const double k = ks[idx / m];
    const auto d = realize(e.members[idx % m], g.plane_dim(), k);
    const auto smp = spectral_sample(d, g, k, o);
    if (kind == OperatorKind::SingleLayer) {
      const auto kern = truncated_kernel_at_nodes(smp.q, g.diameter());
      cont[idx] = single_layer_ratio(smp.hat, kern, -0.5, 1.0, smp.q);
      coer[idx] = rayleigh_dirichlet(smp.hat, smp.q);
    } else {
      cont[idx] = hypersingular_ratio(smp.hat, 0.5, smp.q);
      coer[idx] = rayleigh_neumann(smp.hat, smp.q);
    }
  });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double sup = *std::max_element(cont.begin() + i * m, cont.begin() + (i + 1) * m);
    const double inf = *std::min_element(coer.begin() + i * m, coer.begin() + (i + 1) * m);
    const double kl = ks[i] * r.length;
    const double cond = sup / inf;
    r.sweep.push_back({ks[i], cond, std::sqrt(kl), cond / std::sqrt(kl)});
    if (cond < 1.0) r.warnings.push_back("condition estimate below 1 at k = " + std::to_string(ks[i]));
  }
  r.fit = fit_slope(kl_values(ks, r.length), quantities(r));
  return r;
}

// ---------------------------------------------------------------------------
// Trace norms

namespace {

double smooth_f(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
double smooth_df(double x) { return x > 0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// Phi'(r) with respect to r.
cplx phi_derivative(double r, double k, int dim) {
  const cplx I(0.0, 1.0);
  if (dim == 3) return std::exp(I * (k * r)) * (I * (k * r) - 1.0) / (4.0 * pi * r * r);
  const auto b = bessel_set(k * r);
  return -0.25 * I * k * cplx(b.j1, b.y1);
}

}  // namespace

double cutoff_profile(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = smooth_f(2.0 - t), b = smooth_f(t - 1.0);
  return a / (a + b);
}

double cutoff_derivative(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double a = smooth_f(2.0 - t), b = smooth_f(t - 1.0);
  const double da = -smooth_df(2.0 - t), db = smooth_df(t - 1.0);
  return (da * b - a * db) / ((a + b) * (a + b));
}

double screen_distance(SpacePoint x, const ScreenGeometry& g) {
  double dt;
  if (g.dim() == 2) {
    dt = 1e300;
    for (const auto& p : g.parts()) dt = std::min(dt, std::max({0.0, p.a - x.t.x1, x.t.x1 - p.b}));
  } else {
    const Interval rx = g.rect_x(), ry = g.rect_y();
    dt = std::hypot(std::max({0.0, rx.a - x.t.x1, x.t.x1 - rx.b}), std::max({0.0, ry.a - x.t.x2, x.t.x2 - ry.b}));
  }
  return std::hypot(dt, x.xn);
}

double trace_norm_planewave(const std::vector<double>& d, double s, double k, const ScreenGeometry& g) {
  const int n = g.dim();
  if (static_cast<int>(d.size()) != n) throw std::invalid_argument("direction has the wrong dimension");
  double dd = 0.0;
  for (double c : d) dd += c * c;
  if (std::sqrt(dd) > 1.0 + 1e-12) throw std::invalid_argument("|d| must not exceed 1");
  if (s < 0) throw std::invalid_argument("order s must be non-negative");
  if (!(k > 0)) throw std::invalid_argument("wavenumber must be positive");
  const double L = g.diameter();
  const PlanePoint c = g.centre();
  const PlanePoint dt{d[0], n == 3 ? d[1] : 0.0};
  Density u;
  u.plane_dim = n - 1;
  u.value = [=](PlanePoint y) {
    const double r = std::hypot(y.x1 - c.x1, n == 3 ? y.x2 - c.x2 : 0.0);
    const double chi = cutoff_profile(r / L);
    if (chi == 0.0) return cplx(0.0);
    return chi * std::exp(cplx(0.0, k * (dt.x1 * y.x1 + dt.x2 * y.x2)));
  };
  u.finest_scale = L / 8.0;
  u.frequency_shift = k * std::hypot(dt.x1, dt.x2);
  const ScreenGeometry box = n == 2 ? ScreenGeometry::intervals({{c.x1 - 2 * L, c.x1 + 2 * L}})
                                    : ScreenGeometry::rectangle({c.x1 - 2 * L, c.x1 + 2 * L}, {c.x2 - 2 * L, c.x2 + 2 * L});
  const auto q = build_spectral_quadrature(k, box, 1e-10, spectral_options_for(u));
  if (n == 2) return sobolev_norm(sample_spectrum(sample_density(u, box, q.cutoff), q), {s, k}, q);

  // n = 3: u^(xi) = e^{-i eta.c} H(|eta|), eta = xi - k d~, with the Hankel
  // transform H(rho) = int_0^{2L} chi(r/L) J0(rho r) r dr. H is tabulated on a
  // uniform grid and read back by 6-point Lagrange interpolation.
  const double rho_max = q.cutoff + u.frequency_shift + 1.0;
  const auto rule = composite_gauss({0.0, L, 2.0 * L}, std::min(L / 16.0, pi / rho_max), 16);
  const double step = 0.05 / L;
  const int m = static_cast<int>(rho_max / step) + 4;
  std::vector<double> table(m);
  parallel_for(m, [&](std::size_t j) {
    const double rho = j * step;
    double v = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.x[i];
      v += rule.w[i] * cutoff_profile(r / L) * (rho * r > 0 ? bessel_j(0, rho * r) : 1.0) * r;
    }
    table[j] = v;
  });
  auto hankel = [&](double rho) {
    const double t = rho / step;
    const int j0 = static_cast<int>(std::floor(t)) - 2;
    double v = 0.0;
    for (int a = 0; a < 6; ++a) {
      double w = 1.0;
      for (int b = 0; b < 6; ++b)
        if (b != a) w *= (t - (j0 + b)) / static_cast<double>(a - b);
      v += w * table[std::abs(j0 + a)];  // H is even
    }
    return v;
  };
  std::vector<cplx> hat(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const PlanePoint eta{q.nodes[i].x1 - k * dt.x1, q.nodes[i].x2 - k * dt.x2};
    hat[i] = std::exp(cplx(0.0, -dot(eta, c))) * hankel(std::hypot(eta.x1, eta.x2));
  }
  return sobolev_norm(hat, {s, k}, q);
}

double trace_norm_fundamental(SpacePoint x, double k, const ScreenGeometry& g) {
  if (!(k > 0)) throw std::invalid_argument("wavenumber must be positive");
  const double d = screen_distance(x, g);
  if (!(d > 0)) throw std::invalid_argument("point lies on the closed screen");
  const int n = g.dim();
  const double L = g.diameter();
  const PlanePoint c = g.centre();
  const bool near = d < 4.0 * L;
  // |chi u|^2 k^2 + |grad(chi u)|^2 at a plane point.
  auto integrand = [&](double y1, double y2) {
    const double ex = y1 - c.x1, ey = n == 3 ? y2 - c.x2 : 0.0;
    const double rc = std::hypot(ex, ey);
    double chi = cutoff_profile(rc / L);
    if (chi == 0.0) return 0.0;
    const double dc = cutoff_derivative(rc / L) / L;
    double gx = rc > 0 ? dc * ex / rc : 0.0, gy = rc > 0 ? dc * ey / rc : 0.0;
    const double fx = y1 - x.t.x1, fy = n == 3 ? y2 - x.t.x2 : 0.0;
    const double r = std::sqrt(fx * fx + fy * fy + x.xn * x.xn);
    if (near) {
      const double inner = 1.0 - cutoff_profile(2.0 * r / d);
      const double dinner = -cutoff_derivative(2.0 * r / d) * 2.0 / d;
      gx = gx * inner + chi * dinner * fx / r;
      gy = gy * inner + chi * dinner * fy / r;
      chi *= inner;
      if (chi == 0.0 && gx == 0.0 && gy == 0.0) return 0.0;
    }
    const cplx u = phi_radial(r, k, n);
    const cplx du = phi_derivative(r, k, n);
    const cplx vx = gx * u + chi * du * fx / r, vy = gy * u + chi * du * fy / r;
    return k * k * std::norm(chi * u) + std::norm(vx) + std::norm(vy);
  };
  auto axis = [&](double lo, double hi, double foot) {
    const double f = std::clamp(foot, lo, hi);
    return singular_panel_rule(lo, hi, &f, 0.05 * d, std::min(0.5 / k, L / 8.0), 16);
  };
  double sum = 0.0;
  const auto rx = axis(c.x1 - 2 * L, c.x1 + 2 * L, x.t.x1);
  if (n == 2) {
    for (std::size_t i = 0; i < rx.size(); ++i) sum += rx.w[i] * integrand(rx.x[i], 0.0);
  } else {
    const auto ry = axis(c.x2 - 2 * L, c.x2 + 2 * L, x.t.x2);
    std::vector<double> rows(rx.size());
    parallel_for(rx.size(), [&](std::size_t i) {
      double s = 0.0;
      for (std::size_t j = 0; j < ry.size(); ++j) s += ry.w[j] * integrand(rx.x[i], ry.x[j]);
      rows[i] = rx.w[i] * s;
    });
    for (double v : rows) sum += v;
  }
  return std::sqrt(sum / k);
}

double p_n(int n, double t) { return std::min(std::pow(t, 0.5 * (n - 1)), std::sqrt(std::log(2.0 + t))); }

double fundamental_trace_bound(int n, double k, double L, double d) {
  if (n == 3) return std::sqrt(k) * (1.0 / (k * d) + p_n(3, L / d));
  return (1.0 / std::sqrt(k * d)) * (1.0 / std::sqrt(k * L) + std::log(2.0 + 1.0 / (k * d))) + p_n(2, L / d);
}

double corollary_bound(int n, double k, double L, double d) {
  const double kl = k * L;
  if (n == 3) return std::sqrt(kl) * std::sqrt(1.0 + kl) * (1.0 / (k * d) + p_n(3, L / d));
  return std::sqrt(1.0 + kl) * fundamental_trace_bound(2, k, L, d);
}

}  // namespace screenbie
