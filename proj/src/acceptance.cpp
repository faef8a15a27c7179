#include "screenbie/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "screenbie/bio_direct.hpp"
#include "screenbie/bio_spectral.hpp"
#include "screenbie/galerkin_bem.hpp"

namespace screenbie {

namespace {

const cplx I(0.0, 1.0);
const double kFloor = 1.0 / (2.0 * std::sqrt(2.0));

ScreenGeometry unit_interval() { return ScreenGeometry::intervals({{0.0, 1.0}}); }
ScreenGeometry unit_square() { return ScreenGeometry::rectangle({0.0, 1.0}, {0.0, 1.0}); }

// n = 2 sweep of the scaling criteria.
const std::vector<double> kSweep{8, 16, 32, 64, 128, 256};

// The n = 3 probes run at a looser spectral target; the Rayleigh quotients
// they report agree with the 1e-8 target to about 8 digits.
const ProbeOptions kProbe3{1e-6};

Verdict combine(std::initializer_list<Verdict> vs) {
  bool inconclusive = false;
  for (auto v : vs) {
    if (v == Verdict::Fail) return Verdict::Fail;
    inconclusive |= v == Verdict::Inconclusive;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

Verdict check(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

std::vector<double> scaled(const std::vector<double>& kl, double L) {
  std::vector<double> k;
  for (double v : kl) k.push_back(v / L);
  return k;
}

// ---------------------------------------------------------------------------

CriterionResult coercivity_floor(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "Dirichlet coercivity floor";
  std::ostringstream os;
  os.precision(6);
  double worst = 1e300;
  const auto g2 = unit_interval();
  const auto e2 = make_ensemble(g2, o.seed);
  os << "n=2 min ratio:";
  for (double kl : {1.0, 8.0, 64.0}) {
    const double v = probe_coercivity_dirichlet(e2, kl);
    os << " " << v << " (kL=" << kl << ")";
    worst = std::min(worst, v);
  }
  const auto g3 = unit_square();
  const auto e3 = make_ensemble(g3, o.seed);
  os << "; n=3:";
  for (double kl : {1.0, 8.0}) {
    const double v = probe_coercivity_dirichlet(e3, kl / g3.diameter(), kProbe3);
    os << " " << v << " (kL=" << kl << ")";
    worst = std::min(worst, v);
  }
  // The k-independent bump approaches the upper limit 1/2 as k grows.
  const auto s = spectral_sample(realize(sharpness_bump(g2, false), 1, 64.0), g2, 64.0);
  os << "; floor " << kFloor - 1e-3 << "; fixed bump at kL=64: " << rayleigh_dirichlet(s.hat, s.q);
  r.verdict = check(worst >= kFloor - 1e-3);
  r.detail = os.str();
  return r;
}

CriterionResult hypersingular_continuity(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "hypersingular continuity and sharpness";
  const auto g2 = unit_interval();
  const auto e2 = make_ensemble(g2, o.seed);
  std::vector<Family> fams;
  for (const auto& m : e2.members) fams.push_back(family_of(m, 1));
  fams.push_back(family_of(sharpness_bump(g2, false), 1));
  fams.push_back(family_of(sharpness_bump(g2, true), 1));
  std::vector<double> ks{1.0};
  ks.insert(ks.end(), kSweep.begin(), kSweep.end());
  auto rep2 = probe_continuity_hypersingular(fams, g2, ks);

  const auto g3 = unit_square();
  const auto e3 = make_ensemble(g3, o.seed);
  std::vector<Family> fams3;
  for (const auto& m : e3.members) fams3.push_back(family_of(m, 2));
  auto rep3 = probe_continuity_hypersingular(fams3, g3, {8.0 / g3.diameter()}, kProbe3);

  const auto s = spectral_sample(realize(sharpness_bump(g2, false), 1, 256.0), g2, 256.0);
  double sharp = 1e300;
  for (double ord : {0.0, 0.5, 1.0}) sharp = std::min(sharp, hypersingular_ratio(s.hat, ord, s.q));

  const double worst = std::max(rep2.bound_constant, rep3.bound_constant);
  std::ostringstream os;
  os.precision(8);
  os << "max ratio " << worst << " (n=2: " << rep2.bound_constant << ", n=3: " << rep3.bound_constant
     << "; bound 0.5 + 1e-6); fixed bump at kL=256: min over s " << sharp << " (need >= 0.45)";
  r.detail = os.str();
  r.verdict = check(worst <= 0.5 + 1e-6 && sharp >= 0.45);
  rep2.name = "hypersingular continuity, n=2";
  rep3.name = "hypersingular continuity, n=3";
  r.reports = {rep2, rep3};
  return r;
}

CriterionResult scaling_exponents(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "scaling exponents";
  const auto g = unit_interval();
  const auto mod = family_of(sharpness_bump(g, true), 1);

  auto a = probe_continuity_single_layer(mod, g, -0.5, 1, kSweep);
  judge_slope(a, 0.35, 0.65);
  a.name = "(a) ||S phi||_{1/2} / ||phi||_{-1/2}, modulated";

  // The sharpness argument for the same-order map uses the modulated family;
  // a k-independent bump gives the faster 1/k decay and is reported alongside.
  auto b = probe_continuity_single_layer(mod, g, 0.0, 0, kSweep);
  judge_slope(b, -0.65, -0.35);
  b.name = "(b) ||S phi||_0 / ||phi||_0, modulated";
  auto b0 = probe_continuity_single_layer(family_of(sharpness_bump(g, false), 1), g, 0.0, 0, kSweep);
  b0.name = "same-order map, fixed bump (reported)";

  auto c = probe_neumann_family(mod, g, kSweep);
  judge_slope(c, -0.65, -0.35);
  c.name = "(c) Neumann Rayleigh ratio, modulated";

  const auto e = make_ensemble(g, o.seed);
  auto d = condition_number_study(e, OperatorKind::SingleLayer, kSweep);
  judge_slope(d, 0.35, 0.65);
  d.name = "(d) cond S_k estimate";
  auto t = condition_number_study(e, OperatorKind::Hypersingular, kSweep);
  t.name = "cond T_k estimate (reported)";

  // Lower-bound chain: |a_D(phi, phi)| k^{1/2} for the modulated family, whose
  // L^2 norm does not depend on k.
  EstimateReport chain;
  chain.name = "|a_D(phi,phi)| k^{1/2}, modulated";
  for (double k : kSweep) {
    const auto s = spectral_sample(mod(k), g, k);
    const double v = std::abs(sesquilinear_form(SymbolKind::SingleLayer, s.hat, s.hat, s.q)) * std::sqrt(k);
    chain.sweep.push_back({k, v, 0.0, 0.0});
  }
  std::vector<double> x, y;
  for (const auto& p : chain.sweep) {
    x.push_back(p.k);
    y.push_back(p.quantity);
  }
  chain.fit = fit_slope(x, y);
  chain.bound_constant = *std::min_element(y.begin(), y.end());
  chain.verdict = check(chain.bound_constant > 0 && chain.fit.slope >= -0.15);
  chain.detail = "min " + std::to_string(chain.bound_constant) + ", slope " + std::to_string(chain.fit.slope) +
                 " (must be >= -0.15)";

  std::ostringstream os;
  os.precision(4);
  os << "slopes (a) " << a.fit.slope << " (b) " << b.fit.slope << " (c) " << c.fit.slope << " (d) " << d.fit.slope
     << "; max residual " << std::max({a.fit.residual, b.fit.residual, c.fit.residual, d.fit.residual})
     << "; fixed-bump same-order slope " << b0.fit.slope << ", cond T slope " << t.fit.slope
     << ", a_D k^1/2 slope " << chain.fit.slope;
  r.detail = os.str();
  r.verdict = combine({a.verdict, b.verdict, c.verdict, d.verdict, chain.verdict});
  r.reports = {a, b, c, d, b0, t, chain};
  return r;
}

CriterionResult neumann_coercivity(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "Neumann coercivity lower bound";
  const auto g2 = unit_interval();
  auto n2 = probe_coercivity_neumann(make_ensemble(g2, o.seed), kSweep);
  n2.name = "gamma_N, n=2";
  const auto g3 = unit_square();
  auto n3 = probe_coercivity_neumann(make_ensemble(g3, o.seed), scaled({8, 16, 32, 64}, g3.diameter()), kProbe3);
  n3.name = "gamma_N, n=3";
  r.detail = "n=2: " + n2.detail + "; n=3: " + n3.detail;
  r.verdict = combine({n2.verdict, n3.verdict});
  r.reports = {n2, n3};
  return r;
}

CriterionResult oracle_equivalence(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "oracle equivalence";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  const auto g2 = unit_interval();
  double err2 = 0.0;
  bool converged = true;
  for (double k : {1.0, 5.0, 20.0}) {
    for (int t = 0; t < 5; ++t) {
      std::vector<Bump> bumps;
      for (int b = 0; b < 3; ++b) {
        const double w = 0.1 + 0.2 * u(rng);
        bumps.push_back({{w + (1 - 2 * w) * u(rng), 0}, {w, 0}, 0.2 + u(rng)});
      }
      const auto d = bump_density(1, bumps, {t >= 3 ? (t == 3 ? 0.7 : -1.0) * k : 0.0, 0});
      const auto q = build_spectral_quadrature(k, g2, 1e-10, spectral_options_for(d));
      const auto f = sample_density(d, g2, q.cutoff);
      std::vector<PlanePoint> xs;
      for (int i = 0; i < 7; ++i) xs.push_back({0.05 + 0.15 * i, 0});
      const auto spec = apply_symbol(SymbolKind::SingleLayer, f, k, xs, q);
      double err = 0.0, mx = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto dir = direct_single_layer(d, k, {xs[i], 0.0}, g2);
        converged &= dir.converged;
        err = std::max(err, std::abs(dir.value - spec.values[i]));
        mx = std::max(mx, std::abs(dir.value));
      }
      err2 = std::max(err2, err / mx);
    }
  }

  const auto g3 = unit_square();
  const auto d3 = bump_density(2, {{{0.45, 0.55}, {0.3, 0.3}, 1.0}, {{0.7, 0.3}, {0.2, 0.25}, 0.6}});
  DirectOptions o3;
  o3.tolerance = 1e-6;
  o3.max_levels = 4;
  double err3 = 0.0;
  for (double kl : {1.0, 10.0}) {
    const double k = kl / g3.diameter();
    const auto q = build_spectral_quadrature(k, g3, 1e-7, spectral_options_for(d3));
    const auto f = sample_density(d3, g3, q.cutoff);
    const std::vector<PlanePoint> xs{{0.5, 0.5}, {0.3, 0.7}, {0.72, 0.28}};
    const auto spec = apply_symbol(SymbolKind::SingleLayer, f, k, xs, q);
    double err = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto dir = direct_single_layer(d3, k, {xs[i], 0.0}, g3, o3);
      err = std::max(err, std::abs(dir.value - spec.values[i]));
      mx = std::max(mx, std::abs(dir.value));
    }
    err3 = std::max(err3, err / mx);
  }

  // Galerkin entries against the spectral form of narrowly mollified indicators.
  const auto m = ScreenMesh::uniform(g2, 32);
  const double k = 5.0, delta = m.element_size() / 64.0;
  const auto a = assemble(m, k).matrix;
  const auto q = build_spectral_quadrature(k, g2, 1e-8, mollified_options(delta));
  std::vector<std::vector<cplx>> chi(32);
  auto spectrum = [&](int i) -> const std::vector<cplx>& {
    if (chi[i].empty()) {
      CVector e = CVector::Zero(32);
      e[i] = 1.0;
      chi[i] = mollified_spectrum(m, e, delta, q);
    }
    return chi[i];
  };
  double errg = 0.0;
  for (auto [i, j] : {std::pair{0, 0}, {5, 5}, {5, 6}, {5, 7}, {3, 20}, {0, 31}}) {
    const cplx spec = sesquilinear_form(SymbolKind::SingleLayer, spectrum(j), spectrum(i), q);
    errg = std::max(errg, std::abs(spec - a(i, j)) / std::abs(a(i, j)));
  }

  std::ostringstream os;
  os.precision(3);
  os << "n=2 spectral vs direct " << err2 << " (tol 1e-6), n=3 " << err3 << " (tol 1e-4), Galerkin entries "
     << errg << " (tol 1e-3)";
  if (!converged) r.warnings.push_back("direct quadrature reported non-convergence");
  r.detail = os.str();
  r.verdict = check(err2 <= 1e-6 && err3 <= 1e-4 && errg <= 1e-3);
  return r;
}

CriterionResult pde_checks(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "PDE and representation checks";
  const auto g = unit_interval();
  const double k = 5.0;
  const auto d = bump_density(1, {{{0.4, 0}, {0.3, 0}, 1.0}, {{0.75, 0}, {0.2, 0}, 0.5}});
  const auto q = build_spectral_quadrature(k, g, 1e-9, spectral_options_for(d));
  const auto hat = sample_spectrum(sample_density(d, g, q.cutoff), q);

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-3;
  double fd = 0.0;
  for (int p = 0; p < 10; ++p) {
    const SpacePoint x{{-0.5 + 2.0 * u(rng), 0}, (u(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 0.8 * u(rng))};
    std::vector<SpacePoint> pts;
    for (auto [dx, dz] : {std::pair{0.0, 0.0}, {h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}})
      pts.push_back({{x.t.x1 + dx, 0}, x.xn + dz});
    for (int layer = 0; layer < 2; ++layer) {
      const auto v = layer ? double_layer_potential(hat, pts, q) : single_layer_potential(hat, pts, q);
      const cplx lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
      double mx = 0.0;
      for (auto c : v) mx = std::max(mx, std::abs(c));
      fd = std::max(fd, std::abs(lap + k * k * v[0]) / mx);
    }
  }

  // Jump of the double layer across the screen at x_n = +-1e-4, against the
  // density's maximum (the one-sided limits converge at rate x_n).
  std::vector<SpacePoint> up, down;
  for (int i = 0; i < 7; ++i) {
    up.push_back({{0.1 + 0.125 * i, 0}, 1e-4});
    down.push_back({{0.1 + 0.125 * i, 0}, -1e-4});
  }
  const auto du = double_layer_potential(hat, up, q), dd = double_layer_potential(hat, down, q);
  double jump = 0.0, dmax = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) {
    jump = std::max(jump, std::abs(du[i] - dd[i] - d.value(up[i].t)));
    dmax = std::max(dmax, std::abs(d.value(up[i].t)));
  }
  jump /= dmax;

  // Boundary-condition residual of the Galerkin solution, probed at height
  // 2h so the probes approach the screen with the mesh.
  const IncidentWave wave{{0.0, -1.0}, k};
  std::vector<double> res;
  for (int n : {32, 64, 128, 256}) {
    const auto sys = solve_dirichlet(ScreenMesh::uniform(g, n), wave);
    const double height = 2.0 * sys.mesh.element_size();
    double v = 0.0;
    for (double x : {0.25, 0.5, 0.75}) {
      const SpacePoint p{{x, 0}, height};
      v = std::max(v, std::abs(scattered_field(sys, p).value + incident_field(wave, p)));
    }
    res.push_back(v);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < res.size(); ++i) monotone &= res[i] < res[i - 1];

  std::ostringstream os;
  os.precision(3);
  os << "FD Helmholtz residual " << fd << " (tol 1e-3), double-layer jump error " << jump
     << " (tol 1e-3), BC residual N=32..256:";
  for (double v : res) os << " " << v;
  r.detail = os.str();
  r.verdict = check(fd <= 1e-3 && jump <= 1e-3 && monotone);
  return r;
}

CriterionResult kernel_bound_shape(const AcceptanceOptions&) {
  CriterionResult r;
  r.title = "truncated kernel bound shape";
  std::ostringstream os;
  os.precision(4);
  bool ok = true;
  for (int dim : {3, 2}) {
    EstimateReport rep;
    rep.name = dim == 3 ? "max |Phi_L^| sqrt(k^2+xi^2), n=3" : "max |Phi_L^| sqrt(k^2+xi^2), n=2";
    double lo = 1e300, hi = 0.0;
    for (double k : {1.0, 4.0, 16.0, 64.0}) {
      double worst = 0.0;
      TruncatedKernelTable tab(dim, 1.0, 0.0, k, 4 * k + 20);
      for (double xi = 0.0; xi <= 4 * k + 20; xi += k / 200.0) worst = std::max(worst, std::abs(tab(xi)) * std::hypot(k, xi));
      for (double xi : {k * (1 - 1e-6), k, k * (1 + 1e-6)}) worst = std::max(worst, std::abs(tab(xi)) * std::hypot(k, xi));
      const double den = dim == 3 ? 1.0 + std::sqrt(k) : std::log(2.0 + 1.0 / k) + std::sqrt(k);
      rep.sweep.push_back({k, worst, den, worst / den});
      lo = std::min(lo, worst / den);
      hi = std::max(hi, worst / den);
    }
    rep.bound_constant = hi;
    rep.verdict = check(hi / lo < 3.0);
    ok &= hi / lo < 3.0;
    os << "n=" << dim << " spread " << hi / lo << (dim == 3 ? "; " : " (limit 3)");
    r.reports.push_back(rep);
  }
  r.detail = os.str();
  r.verdict = check(ok);
  return r;
}

CriterionResult trace_bounds(const AcceptanceOptions&) {
  CriterionResult r;
  r.title = "trace-norm and pointwise bounds";
  std::ostringstream os;
  os.precision(4);

  // Plane wave, s = 0: k-independence and the L^{(n-1)/2} scaling.
  const auto g2 = unit_interval();
  const auto g3 = unit_square();
  double spread = 0.0;
  {
    double lo = 1e300, hi = 0.0;
    for (double k : {0.5, 5.0, 50.0}) {
      const double v = trace_norm_planewave({std::sin(0.3), -std::cos(0.3)}, 0.0, k, g2);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    spread = hi / lo - 1.0;
  }
  const std::vector<double> d3{0.3, 0.2, -std::sqrt(1 - 0.13)};
  const double s2 = trace_norm_planewave({0.0, -1.0}, 0.0, 5.0, g2) /
                    trace_norm_planewave({0.0, -1.0}, 0.0, 5.0, g2.scaled(0.5));
  const double s3 = trace_norm_planewave(d3, 0.0, 3.0, g3) / trace_norm_planewave(d3, 0.0, 3.0, g3.scaled(0.5));
  const double e2 = std::abs(s2 / std::sqrt(2.0) - 1.0), e3 = std::abs(s3 / 2.0 - 1.0);
  os << "plane wave s=0: k spread " << spread << " (tol 0.01), L/2 ratio n=2 " << s2 << " (expect 1.414), n=3 " << s3
     << " (expect 2)";

  // Pointwise bound on the scattered field over the (kL, d/L) grid, n = 2.
  EstimateReport cor;
  cor.name = "|u(x)| / pointwise bound, n=2";
  double lo = 1e300, hi = 0.0;
  for (double kl : {5.0, 20.0, 80.0}) {
    const IncidentWave wave{{0.0, -1.0}, kl};
    const auto sys = solve_dirichlet(ScreenMesh::uniform(g2, kl > 40 ? 512 : 256), wave);
    for (double dl : {0.1, 1.0, 10.0}) {
      const double u = std::abs(scattered_field(sys, {{0.5, 0}, dl}).value);
      const double b = corollary_bound(2, kl, 1.0, dl);
      cor.sweep.push_back({kl, u, b, u / b});
      lo = std::min(lo, u / b);
      hi = std::max(hi, u / b);
    }
  }
  cor.bound_constant = hi;
  cor.detail = "fitted C " + std::to_string(hi) + ", ratio spread " + std::to_string(hi / lo);
  cor.verdict = check(hi / lo < 10.0);
  os << "; pointwise C " << hi << ", spread " << hi / lo << " (limit 10)";

  // Fundamental-solution trace norm against its bound (reported).
  EstimateReport fun;
  fun.name = "trace norm of Phi(x,.) / trace bound, n=2";
  double flo = 1e300, fhi = 0.0;
  for (double k : {5.0, 20.0, 80.0})
    for (double dl : {0.1, 1.0, 10.0}) {
      const double v = trace_norm_fundamental({{0.5, 0}, dl}, k, g2);
      const double b = fundamental_trace_bound(2, k, 1.0, dl);
      fun.sweep.push_back({k, v, b, v / b});
      flo = std::min(flo, v / b);
      fhi = std::max(fhi, v / b);
    }
  fun.bound_constant = fhi;
  fun.detail = "fitted C " + std::to_string(fhi) + ", ratio spread " + std::to_string(fhi / flo);
  os << "; fundamental trace C " << fhi << ", spread " << fhi / flo << " (reported)";

  r.detail = os.str();
  r.verdict = check(spread <= 0.01 && e2 <= 0.05 && e3 <= 0.05 && hi / lo < 10.0);
  r.reports = {cor, fun};
  return r;
}

CriterionResult foundation(const AcceptanceOptions& o) {
  CriterionResult r;
  r.title = "foundation identities";
  // Gaussian e^{-x^2/2} on [-8, 8]: ||.||_0^2 = sqrt(pi), ||.||_{H^1_k}^2 = k^2 sqrt(pi) + sqrt(pi)/2.
  const auto wide = ScreenGeometry::intervals({{-8.0, 8.0}});
  auto sq = std::make_shared<const SpatialQuadrature>(make_spatial_quadrature(wide, {}, {}, 0.25, 16));
  const auto f = make_grid_function(sq, [](PlanePoint x) { return cplx(std::exp(-0.5 * x.x1 * x.x1)); });
  double err = 0.0;
  for (double k : {0.5, 1.0, 3.0}) {
    SpectralOptions so;
    so.cutoff = 12.0;
    const auto q = build_spectral_quadrature(k, wide, 1e-10, so);
    const auto s = sample_spectrum(f, q);
    err = std::max(err, std::abs(sobolev_norm_sq(s, {0.0, k}, q) - std::sqrt(pi)));
    err = std::max(err, std::abs(sobolev_norm_sq(s, {1.0, k}, q) - (k * k + 0.5) * std::sqrt(pi)));
  }

  const auto g = unit_interval();
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0, checks = 0;
  for (int t = 0; t < 10; ++t) {
    const double w = 0.1 + 0.3 * u(rng);
    const auto d = bump_density(1, {{{w + (1.0 - 2.0 * w) * u(rng), 0}, {w, 0}, 1.0}});
    for (double k : {0.3, 1.0, 7.0}) {
      const auto q = build_spectral_quadrature(k, g, 1e-10, spectral_options_for(d));
      const auto s = sample_spectrum(sample_density(d, g, q.cutoff), q);
      for (double ord : {-1.0, -0.5, 0.5, 1.0}) {
        // Same nodes for both wavenumbers, so the inequality holds term by term.
        const double nk = sobolev_norm(s, {ord, k}, q), n1 = sobolev_norm(s, {ord, 1.0}, q);
        const double ks = std::pow(k, ord);
        checks += 2;
        violations += std::min(1.0, ks) * n1 > nk * (1 + 1e-14);
        violations += nk > std::max(1.0, ks) * n1 * (1 + 1e-14);
      }
    }
  }
  std::ostringstream os;
  os.precision(3);
  os << "Gaussian Plancherel/H1 error " << err << " (tol 1e-6); norm sandwich " << checks - violations << "/" << checks
     << " hold";
  r.detail = os.str();
  r.verdict = check(err <= 1e-6 && violations == 0);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = coercivity_floor(o); break;
    case 2: r = hypersingular_continuity(o); break;
    case 3: r = scaling_exponents(o); break;
    case 4: r = neumann_coercivity(o); break;
    case 5: r = oracle_equivalence(o); break;
    case 6: r = pde_checks(o); break;
    case 7: r = kernel_bound_shape(o); break;
    case 8: r = trace_bounds(o); break;
    case 9: r = foundation(o); break;
    default: throw std::invalid_argument("no criterion " + std::to_string(id));
  }
  r.id = id;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o,
                                            const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, o));
    if (on_done) on_done(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::string tag = r.verdict == Verdict::Pass ? "PASS" : r.verdict == Verdict::Fail ? "FAIL" : "INCONCLUSIVE";
  std::ostringstream os;
  os.precision(3);
  os << "[" << tag << "] " << r.id << " " << r.title << " (" << std::fixed << r.seconds << " s): " << r.detail;
  return os.str();
}

Verdict overall(const std::vector<CriterionResult>& rs) {
  bool inconclusive = false;
  for (const auto& r : rs) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    inconclusive |= r.verdict == Verdict::Inconclusive;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

}  // namespace screenbie
