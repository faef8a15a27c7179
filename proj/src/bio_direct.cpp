#include "screenbie/bio_direct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "screenbie/special_functions.hpp"

namespace screenbie {

namespace {

const cplx I(0.0, 1.0);

// (e^{iw} - 1) / (iw), stable for small w.
cplx expm1_ratio(double w) {
  if (std::abs(w) < 1e-3) return 1.0 + I * w / 2.0 - w * w / 6.0 - I * w * w * w / 24.0;
  return (std::exp(I * w) - 1.0) / (I * w);
}

}  // namespace

cplx phi_radial(double r, double k, int dim) {
  if (!(r > 0)) throw std::invalid_argument("fundamental solution is singular at x = y");
  if (dim == 3) return std::exp(I * (k * r)) / (4.0 * pi * r);
  if (dim != 2) throw std::invalid_argument("dimension must be 2 or 3");
  const auto b = bessel_set(k * r);
  return cplx(-b.y0, b.j0) / 4.0;
}

cplx phi(SpacePoint x, SpacePoint y, double k, int dim) { return phi_radial(distance(x, y), k, dim); }

cplx phi2_regular_part(double r, double k) {
  const double c0 = -(std::log(0.5 * k) + euler_gamma) / (2.0 * pi);
  if (r == 0.0) return cplx(c0, 0.25);
  const double x = k * r;
  if (x >= 1.0) {
    const auto b = bessel_set(x);
    return cplx(-b.y0 / 4.0 + std::log(r) / (2.0 * pi), b.j0 / 4.0);
  }
  // Series: J0 and S = sum H_m (-x^2/4)^m/(m!)^2, then
  // -(1/2pi)(log(k/2)+gamma) J0 - (1/2pi) log(r) (J0 - 1) + S/(2pi) + (i/4) J0.
  const double q = -0.25 * x * x;
  double t = 1.0, j0m1 = 0.0, s = 0.0, h = 0.0;
  for (int m = 1; m < 40; ++m) {
    t *= q / (double(m) * m);
    h += 1.0 / m;
    j0m1 += t;
    s += h * t;
    if (std::abs(t) < 1e-18) break;
  }
  const double j0 = 1.0 + j0m1;
  return cplx(c0 * j0 - std::log(r) * j0m1 / (2.0 * pi) + s / (2.0 * pi), 0.25 * j0);
}

double log_moment(int m, double a, double b, double x) {
  if (m < 0 || m > 2) throw std::invalid_argument("log moments available for degree 0..2");
  auto prim = [m](double t) {
    if (t == 0.0) return 0.0;
    const double p = m + 1.0;
    return std::pow(t, p) / p * (std::log(std::abs(t)) - 1.0 / p);
  };
  return prim(b - x) - prim(a - x);
}

double log_interaction(Interval i, Interval j) {
  // F'' = log|t| with F(0) = 0.
  auto F = [](double t) { return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t; };
  return F(i.b - j.a) - F(i.a - j.a) - F(i.b - j.b) + F(i.a - j.b);
}

Rule1D singular_panel_rule(double a, double b, const double* p, double smallest, double max_len, int order) {
  std::vector<double> cuts{a, b};
  if (p && *p >= a && *p <= b) {
    const double c = *p;
    if (c > a && c < b) cuts.push_back(c);
    for (double side : {-1.0, 1.0}) {
      const double room = side > 0 ? b - c : c - a;
      double d = room;
      while (d > smallest && d > 0) {
        d *= 0.25;
        cuts.push_back(c + side * d);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return composite_gauss(cuts, max_len, order);
}

// ---------------------------------------------------------------------------
// Direct application of S_k
// ---------------------------------------------------------------------------

namespace {

cplx direct_2d(const Density& d, double k, SpacePoint x, const ScreenGeometry& g, int level, int order) {
  const double scale = std::pow(2.0, -level);
  const double max_len = scale * std::min(2.0 / (k + d.frequency_shift + 1e-300), 0.5 * d.finest_scale);
  bool on_plane = false;
  for (const auto& iv : g.parts()) on_plane |= x.xn == 0.0 && x.t.x1 >= iv.a && x.t.x1 <= iv.b;
  const double ax = std::abs(x.xn);

  // Quadratic approximation of the density at x; any polynomial keeps the
  // subtraction exact, a good one makes the remainder small.
  std::array<cplx, 3> taylor{};
  if (on_plane) {
    const double h = 1e-3 * d.finest_scale;
    const cplx fm = d.value({x.t.x1 - h, 0}), f0 = d.value(x.t), fp = d.value({x.t.x1 + h, 0});
    // Differences across a kink or an edge would blow up the coefficients and
    // the closed-form moments would cancel; keep only the value there.
    bool smooth = true;
    for (double t : d.breaks_x) smooth &= std::abs(t - x.t.x1) > 2.0 * h;
    for (const auto& iv : g.parts()) smooth &= std::abs(iv.a - x.t.x1) > 2.0 * h && std::abs(iv.b - x.t.x1) > 2.0 * h;
    taylor = {f0, 0.0, 0.0};
    if (smooth) taylor = {f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (2.0 * h * h)};
  }

  cplx total = 0.0;
  for (const auto& iv : g.parts()) {
    std::vector<double> br{iv.a, iv.b};
    for (double t : d.breaks_x)
      if (t > iv.a && t < iv.b) br.push_back(t);
    std::sort(br.begin(), br.end());
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double a = br[p], b = br[p + 1];
      const double foot = std::clamp(x.t.x1, a, b);
      const double gap = std::hypot(x.t.x1 - foot, ax);
      Rule1D rule;
      if (on_plane && gap == 0.0) {
        rule = singular_panel_rule(a, b, &foot, 1e-14 * (b - a), max_len, order);
      } else if (gap < (b - a)) {
        rule = singular_panel_rule(a, b, &foot, std::max(0.05 * gap * scale, 1e-14 * (b - a)), max_len, order);
      } else {
        rule = composite_gauss({a, b}, max_len, order);
      }
      if (on_plane) {
        // Phi = R - log|x-y|/(2 pi), with the log part acting on phi - P in
        // the quadrature and on P in closed form.
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const double y = rule.x[i], t = y - x.t.x1;
          const cplx f = d.value({y, 0});
          const cplx pol = taylor[0] + t * (taylor[1] + t * taylor[2]);
          cplx v = phi2_regular_part(std::abs(t), k) * f;
          if (t != 0.0) v -= std::log(std::abs(t)) / (2.0 * pi) * (f - pol);
          total += rule.w[i] * v;
        }
        cplx closed = 0.0;
        for (int m = 0; m < 3; ++m) closed += taylor[m] * log_moment(m, a, b, x.t.x1);
        total -= closed / (2.0 * pi);
      } else {
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const cplx f = d.value({rule.x[i], 0});
          if (f == cplx(0.0)) continue;
          total += rule.w[i] * phi_radial(std::hypot(rule.x[i] - x.t.x1, ax), k, 2) * f;
        }
      }
    }
  }
  return total;
}

// Integral over the triangle (foot, P, Q) in polar coordinates about foot.
cplx polar_triangle(const Density& d, double k, SpacePoint x, PlanePoint P, PlanePoint Q, int level, int order) {
  const PlanePoint c = x.t;
  const double ex = Q.x1 - P.x1, ey = Q.x2 - P.x2;
  const double len = std::hypot(ex, ey);
  const PlanePoint tt{ex / len, ey / len};
  const PlanePoint nn{tt.x2, -tt.x1};  // right normal: points away from the interior of a CCW edge
  // Distance from the foot to the edge line along nn.
  const double h = (P.x1 - c.x1) * nn.x1 + (P.x2 - c.x2) * nn.x2;
  if (std::abs(h) < 1e-14 * len) return 0.0;
  const double sP = (P.x1 - c.x1) * tt.x1 + (P.x2 - c.x2) * tt.x2;
  const double sQ = sP + len;
  const double tP = std::atan2(sP, h), tQ = std::atan2(sQ, h);
  const double ax = std::abs(x.xn);
  const double scale = std::pow(2.0, -level);
  const double kk = k + d.frequency_shift;
  const double feature = std::min(2.0 / (kk + 1e-300), 0.5 * d.finest_scale);

  const int n_theta = std::max(1, static_cast<int>(std::ceil(std::abs(tQ - tP) / (pi / 8.0)))) << level;
  const auto& gr = gauss_legendre(order);
  cplx total = 0.0;
  const double dth = (tQ - tP) / n_theta;
  for (int it = 0; it < n_theta; ++it) {
    for (int i = 0; i < order; ++i) {
      const double th = tP + (it + 0.5) * dth + 0.5 * dth * gr.x[i];
      const double wth = 0.5 * dth * gr.w[i];
      const double ct = std::cos(th), st = std::sin(th);
      const PlanePoint dir{ct * nn.x1 + st * tt.x1, ct * nn.x2 + st * tt.x2};
      const double rho_e = h / ct;
      Rule1D rr;
      if (ax > 0 && ax < rho_e) {
        const double zero = 0.0;
        rr = singular_panel_rule(0.0, rho_e, &zero, 0.1 * ax * scale, feature * scale, order);
      } else {
        rr = composite_gauss({0.0, rho_e}, feature * scale, order);
      }
      cplx inner = 0.0;
      for (std::size_t j = 0; j < rr.size(); ++j) {
        const double rho = rr.x[j];
        const cplx f = d.value({c.x1 + rho * dir.x1, c.x2 + rho * dir.x2});
        if (f == cplx(0.0)) continue;
        cplx kr;
        if (ax == 0.0) {
          kr = std::exp(I * (k * rho)) / (4.0 * pi);
        } else {
          const double R = std::hypot(rho, ax);
          kr = std::exp(I * (k * R)) / (4.0 * pi * R) * rho;
        }
        inner += rr.w[j] * kr * f;
      }
      total += wth * inner;
    }
  }
  return total;
}

cplx direct_3d(const Density& d, double k, SpacePoint x, const ScreenGeometry& g, int level, int order) {
  const Interval rx = g.rect_x(), ry = g.rect_y();
  if (x.t.x1 >= rx.a && x.t.x1 <= rx.b && x.t.x2 >= ry.a && x.t.x2 <= ry.b) {
    const std::array<PlanePoint, 4> corners{PlanePoint{rx.a, ry.a}, PlanePoint{rx.b, ry.a}, PlanePoint{rx.b, ry.b},
                                            PlanePoint{rx.a, ry.b}};
    cplx total = 0.0;
    for (int e = 0; e < 4; ++e)
      total += polar_triangle(d, k, x, corners[e], corners[(e + 1) % 4], level, order);
    return total;
  }
  // Foot outside the screen: tensor Gauss graded toward the nearest point.
  const double scale = std::pow(2.0, -level);
  const double feature = scale * std::min(2.0 / (k + d.frequency_shift + 1e-300), 0.5 * d.finest_scale);
  const double fx = std::clamp(x.t.x1, rx.a, rx.b), fy = std::clamp(x.t.x2, ry.a, ry.b);
  const double gap = std::sqrt((x.t.x1 - fx) * (x.t.x1 - fx) + (x.t.x2 - fy) * (x.t.x2 - fy) + x.xn * x.xn);
  auto axis = [&](Interval iv, double foot, const std::vector<double>& breaks) {
    std::vector<double> br{iv.a, iv.b};
    for (double t : breaks)
      if (t > iv.a && t < iv.b) br.push_back(t);
    std::sort(br.begin(), br.end());
    Rule1D out;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double f = std::clamp(foot, br[p], br[p + 1]);
      auto r = singular_panel_rule(br[p], br[p + 1], &f, std::max(0.05 * gap * scale, 1e-14 * (br[p + 1] - br[p])), feature, order);
      out.x.insert(out.x.end(), r.x.begin(), r.x.end());
      out.w.insert(out.w.end(), r.w.begin(), r.w.end());
    }
    return out;
  };
  const auto ax_ = axis(rx, fx, d.breaks_x), ay_ = axis(ry, fy, d.breaks_y);
  cplx total = 0.0;
  for (std::size_t i = 0; i < ax_.size(); ++i)
    for (std::size_t j = 0; j < ay_.size(); ++j) {
      const cplx f = d.value({ax_.x[i], ay_.x[j]});
      if (f == cplx(0.0)) continue;
      total += ax_.w[i] * ay_.w[j] * phi(x, {{ax_.x[i], ay_.x[j]}, 0.0}, k, 3) * f;
    }
  return total;
}

}  // namespace

DirectResult direct_single_layer(const Density& d, double k, SpacePoint x, const ScreenGeometry& g,
                                 const DirectOptions& o) {
  if (!(k > 0)) throw std::invalid_argument("wavenumber must be positive");
  if (d.plane_dim != g.plane_dim()) throw std::invalid_argument("density dimension does not match the screen");
  DirectResult r;
  cplx prev = 0.0;
  for (int level = 0; level <= o.max_levels; ++level) {
    const cplx v = g.dim() == 2 ? direct_2d(d, k, x, g, level, o.order) : direct_3d(d, k, x, g, level, o.order);
    r.value = v;
    r.levels = level;
    if (level > 0) {
      r.estimated_error = std::abs(v - prev);
      if (r.estimated_error <= o.tolerance * std::max(std::abs(v), 1e-300)) {
        r.converged = true;
        break;
      }
    }
    prev = v;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Truncated kernel transform
// ---------------------------------------------------------------------------

namespace {

Rule1D radial_kernel_rule(int dim, double L, double xn, double k, double xi_max, int level) {
  const double freq = std::max({k, xi_max, 1.0 / L});
  const double half_period = pi / freq;
  const double max_len = half_period * std::pow(2.0, -level);
  const double zero = 0.0;
  const double ax = std::abs(xn);
  // Log singularity (n = 2, on plane) or near-singularity at scale |x_n|.
  double smallest;
  if (ax == 0.0)
    smallest = dim == 2 ? 1e-15 * L : L;  // n = 3 on plane: integrand e^{ikr}/(4 pi), smooth
  else
    smallest = 0.1 * ax * std::pow(2.0, -level);
  return singular_panel_rule(0.0, L, &zero, std::min(smallest, L), max_len, 16);
}

cplx radial_kernel(int dim, double r, double xn, double k) {
  const double R = std::hypot(r, xn);
  if (dim == 3) {
    if (xn == 0.0) return std::exp(I * (k * r)) / (4.0 * pi);  // already times r
    return std::exp(I * (k * R)) / (4.0 * pi * R) * r;
  }
  return phi_radial(R, k, 2);
}

double j0_any(double x) { return x == 0.0 ? 1.0 : bessel_set(x).j0; }

}  // namespace

KernelTransform truncated_kernel_transform(int dim, double L, double xn, double xi, double k, double tol) {
  if (!(L > 0)) throw std::invalid_argument("truncation radius must be positive");
  if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
  xi = std::abs(xi);
  KernelTransform out;
  cplx prev = 0.0;
  for (int level = 0; level < 8; ++level) {
    const auto rule = radial_kernel_rule(dim, L, xn, k, xi, level);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.x[i];
      const double basis = dim == 3 ? j0_any(xi * r) : std::cos(xi * r);
      sum += rule.w[i] * radial_kernel(dim, r, xn, k) * basis;
    }
    if (dim == 2) sum *= std::sqrt(2.0 / pi);
    out.value = sum;
    out.levels = level;
    if (level > 0 && std::abs(sum - prev) <= tol * std::max(std::abs(sum), 1e-300)) {
      out.converged = true;
      break;
    }
    prev = sum;
  }
  return out;
}

TruncatedKernelTable::TruncatedKernelTable(int dim, double L, double xn, double k, double xi_max, int level)
    : dim_(dim) {
  if (!(L > 0)) throw std::invalid_argument("truncation radius must be positive");
  const auto rule = radial_kernel_rule(dim, L, xn, k, xi_max, level);
  r_ = rule.x;
  a_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) a_[i] = rule.w[i] * radial_kernel(dim, rule.x[i], xn, k);
  if (dim == 2)
    for (auto& a : a_) a *= std::sqrt(2.0 / pi);
}

cplx TruncatedKernelTable::operator()(double xi) const {
  xi = std::abs(xi);
  cplx sum = 0.0;
  if (dim_ == 2) {
    for (std::size_t i = 0; i < r_.size(); ++i) sum += a_[i] * std::cos(xi * r_[i]);
  } else {
    for (std::size_t i = 0; i < r_.size(); ++i) sum += a_[i] * j0_any(xi * r_[i]);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Constant-density element potentials
// ---------------------------------------------------------------------------

cplx interval_potential(SpacePoint x, double k, Interval e) {
  const double a = e.a, b = e.b;
  const double ax = std::abs(x.xn);
  const double max_len = std::min(1.0 / k, b - a);
  const double foot = std::clamp(x.t.x1, a, b);
  const double gap = std::hypot(x.t.x1 - foot, ax);
  if (ax == 0.0) {
    // On the line: closed-form log part plus the smooth remainder.
    const auto rule = singular_panel_rule(a, b, &foot, std::max(0.05 * gap, 1e-6 * (b - a)), max_len, 16);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.w[i] * phi2_regular_part(std::abs(rule.x[i] - x.t.x1), k);
    return sum - log_moment(0, a, b, x.t.x1) / (2.0 * pi);
  }
  const Rule1D rule = gap < 4.0 * (b - a) ? singular_panel_rule(a, b, &foot, 0.05 * gap, max_len, 16)
                                          : composite_gauss({a, b}, max_len, 8);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.w[i] * phi_radial(std::hypot(rule.x[i] - x.t.x1, ax), k, 2);
  return sum;
}

cplx rectangle_potential(SpacePoint x, double k, Interval cx, Interval cy) {
  const std::array<PlanePoint, 4> v{PlanePoint{cx.a, cy.a}, PlanePoint{cx.b, cy.a}, PlanePoint{cx.b, cy.b},
                                    PlanePoint{cx.a, cy.b}};
  const double z = std::abs(x.xn);
  const double diam = std::hypot(cx.length(), cy.length());
  const double max_len = std::min(1.0 / k, diam);
  const cplx phase_z = std::exp(I * (k * z));
  cplx total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const PlanePoint P = v[e], Q = v[(e + 1) % 4];
    const double ex = Q.x1 - P.x1, ey = Q.x2 - P.x2, len = std::hypot(ex, ey);
    const PlanePoint t{ex / len, ey / len};
    // Counter-clockwise edges; h is measured along the outward normal (t2, -t1),
    // so h > 0 for a foot inside and dtheta = h ds / (h^2 + s^2).
    const double h = (P.x1 - x.t.x1) * t.x2 - (P.x2 - x.t.x2) * t.x1;
    if (std::abs(h) < 1e-15 * diam) continue;
    const double sP = (P.x1 - x.t.x1) * t.x1 + (P.x2 - x.t.x2) * t.x2, sQ = sP + len;
    const double zero = 0.0;
    const double foot = std::clamp(zero, sP, sQ);
    const double gap = std::hypot(foot, h);
    const auto rule = singular_panel_rule(sP, sQ, &foot, 0.1 * gap, max_len, 12);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.x[i];
      const double rho2 = h * h + s * s;
      const double R = std::sqrt(rho2 + z * z);
      const double delta = rho2 / (R + z);  // R - |z|
      // h/(h^2+s^2) * (e^{ikR} - e^{ik|z|})/(ik) = h e^{ik|z|} E(k delta) / (R + |z|)
      sum += rule.w[i] * h * expm1_ratio(k * delta) / (R + z);
    }
    total += sum;
  }
  return phase_z * total / (4.0 * pi);
}

}  // namespace screenbie
