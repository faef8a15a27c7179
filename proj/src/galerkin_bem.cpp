#include "screenbie/galerkin_bem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "screenbie/bio_direct.hpp"
#include "screenbie/density.hpp"
#include "screenbie/parallel.hpp"

namespace screenbie {

namespace {

const cplx I(0.0, 1.0);

// int_a^b e^{i alpha y} dy
cplx exp_integral(double alpha, Interval e) {
  const double w = alpha * e.length();
  const cplx ratio = std::abs(w) < 1e-4 ? 1.0 + I * w / 2.0 - w * w / 6.0 : (std::exp(I * w) - 1.0) / (I * w);
  return std::exp(I * (alpha * e.a)) * e.length() * ratio;
}

double gap(Interval p, Interval q) { return std::max(0.0, std::max(p.a, q.a) - std::min(p.b, q.b)); }

Rule1D element_rule(Interval e, int order) {
  Rule1D r;
  r.append(e.a, e.b, order);
  return r;
}

cplx pair_2d(const Element& ei, const Element& ej, double k, double h) {
  const Interval p = ei.x, q = ej.x;
  const double g = gap(p, q);
  if (g >= 0.5 * h) {
    const int order = g >= 2.0 * h ? 4 : 8;
    const auto rp = element_rule(p, order), rq = element_rule(q, order);
    cplx s = 0.0;
    for (std::size_t a = 0; a < rp.size(); ++a)
      for (std::size_t b = 0; b < rq.size(); ++b)
        s += rp.w[a] * rq.w[b] * phi_radial(std::abs(rp.x[a] - rq.x[b]), k, 2);
    return s;
  }
  // Near pair: Phi = R - log/(2 pi); the log part in closed form, the
  // remainder (t^2 log t at coincidence) by Gauss split at shared points.
  auto split = [](Interval e, Interval other) {
    std::vector<double> br{e.a, e.b};
    for (double t : {other.a, other.b})
      if (t > e.a && t < e.b) br.push_back(t);
    std::sort(br.begin(), br.end());
    return composite_gauss(br, e.length(), 16);
  };
  const auto rp = split(p, q), rq = split(q, p);
  cplx s = 0.0;
  for (std::size_t a = 0; a < rp.size(); ++a)
    for (std::size_t b = 0; b < rq.size(); ++b)
      s += rp.w[a] * rq.w[b] * phi2_regular_part(std::abs(rp.x[a] - rq.x[b]), k);
  return s - log_interaction(p, q) / (2.0 * pi);
}

double rect_gap(const Element& a, const Element& b) { return std::hypot(gap(a.x, b.x), gap(a.y, b.y)); }

cplx pair_3d(const Element& ei, const Element& ej, double k, double h) {
  const double g = rect_gap(ei, ej);
  if (g >= 0.5 * h) {
    const int order = g >= 2.0 * h ? 3 : 6;
    const auto px = element_rule(ei.x, order), py = element_rule(ei.y, order);
    const auto qx = element_rule(ej.x, order), qy = element_rule(ej.y, order);
    cplx s = 0.0;
    for (std::size_t a = 0; a < px.size(); ++a)
      for (std::size_t b = 0; b < py.size(); ++b)
        for (std::size_t c = 0; c < qx.size(); ++c)
          for (std::size_t d = 0; d < qy.size(); ++d)
            s += px.w[a] * py.w[b] * qx.w[c] * qy.w[d] *
                 phi_radial(std::hypot(px.x[a] - qx.x[c], py.x[b] - qy.x[d]), k, 3);
    return s;
  }
  // Near pair: exact inner integral, outer Gauss on 2x2 sub-cells.
  auto halves = [](Interval e) {
    const double m = 0.5 * (e.a + e.b);
    return composite_gauss({e.a, m, e.b}, e.length(), 8);
  };
  const auto px = halves(ei.x), py = halves(ei.y);
  cplx s = 0.0;
  for (std::size_t a = 0; a < px.size(); ++a)
    for (std::size_t b = 0; b < py.size(); ++b)
      s += px.w[a] * py.w[b] * rectangle_potential({{px.x[a], py.x[b]}, 0.0}, k, ej.x, ej.y);
  return s;
}

cplx element_potential(const ScreenMesh& mesh, std::size_t j, double k, SpacePoint x) {
  const auto& e = mesh.elements()[j];
  if (mesh.geometry().dim() == 2) return interval_potential(x, k, e.x);
  return rectangle_potential(x, k, e.x, e.y);
}

double element_distance(const ScreenMesh& mesh, SpacePoint x) {
  double best = 1e300;
  for (const auto& e : mesh.elements()) {
    const double dx = std::max({0.0, e.x.a - x.t.x1, x.t.x1 - e.x.b});
    const double dy = mesh.geometry().dim() == 3 ? std::max({0.0, e.y.a - x.t.x2, x.t.x2 - e.y.b}) : 0.0;
    best = std::min(best, std::sqrt(dx * dx + dy * dy + x.xn * x.xn));
  }
  return best;
}

void check_direction(const std::vector<double>& d, int dim) {
  if (static_cast<int>(d.size()) != dim) throw std::invalid_argument("direction has the wrong dimension");
  double n2 = 0.0;
  for (double c : d) n2 += c * c;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw std::invalid_argument("direction must be a unit vector");
}

}  // namespace

ScreenMesh ScreenMesh::uniform(const ScreenGeometry& g, int n, int ny) {
  if (n < 1) throw std::invalid_argument("mesh needs at least one element");
  ScreenMesh m;
  m.geometry_ = g;
  if (g.dim() == 2) {
    const auto& parts = g.parts();
    if (n < static_cast<int>(parts.size())) throw std::invalid_argument("fewer elements than intervals");
    // Largest-remainder split of n in proportion to length, at least one each.
    const double total = g.measure();
    std::vector<int> count(parts.size(), 1);
    int left = n - static_cast<int>(parts.size());
    std::vector<double> want(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) want[i] = std::max(0.0, n * parts[i].length() / total - 1.0);
    for (std::size_t i = 0; i < parts.size() && left > 0; ++i) {
      const int extra = std::min(left, static_cast<int>(std::floor(want[i])));
      count[i] += extra;
      left -= extra;
      want[i] -= extra;
    }
    std::vector<std::size_t> order(parts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return want[a] > want[b]; });
    for (std::size_t i = 0; left > 0; i = (i + 1) % order.size(), --left) ++count[order[i]];
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const double len = parts[i].length() / count[i];
      for (int c = 0; c < count[i]; ++c) {
        const double a = parts[i].a + c * len;
        const double b = c + 1 == count[i] ? parts[i].b : a + len;
        m.elements_.push_back({{a, b}, {}});
        m.h_ = std::max(m.h_, b - a);
      }
    }
  } else {
    if (ny <= 0) ny = n;
    const Interval rx = g.rect_x(), ry = g.rect_y();
    const double hx = rx.length() / n, hy = ry.length() / ny;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < ny; ++j) {
        const Interval cx{rx.a + i * hx, i + 1 == n ? rx.b : rx.a + (i + 1) * hx};
        const Interval cy{ry.a + j * hy, j + 1 == ny ? ry.b : ry.a + (j + 1) * hy};
        m.elements_.push_back({cx, cy});
      }
    m.h_ = std::hypot(hx, hy);
  }
  return m;
}

double ScreenMesh::measure(std::size_t i) const {
  const auto& e = elements_[i];
  return geometry_.dim() == 2 ? e.x.length() : e.x.length() * e.y.length();
}

BemSystem assemble(const ScreenMesh& mesh, double k) {
  if (!(k > 0)) throw std::invalid_argument("wavenumber must be positive");
  BemSystem sys;
  sys.mesh = mesh;
  sys.k = k;
  const std::size_t n = mesh.size();
  sys.matrix.resize(n, n);
  const auto& el = mesh.elements();
  const bool two = mesh.geometry().dim() == 2;
  const double h = mesh.element_size();
  // Upper triangle, mirrored: A is complex symmetric by construction.
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      const cplx a = two ? pair_2d(el[i], el[j], k, h) : pair_3d(el[i], el[j], k, h);
      sys.matrix(i, j) = a;
      sys.matrix(j, i) = a;
    }
  });
  return sys;
}

CVector incident_trace(const IncidentWave& wave, const ScreenMesh& mesh) {
  const int dim = mesh.geometry().dim();
  check_direction(wave.direction, dim);
  CVector f(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const auto& e = mesh.elements()[i];
    cplx v = exp_integral(wave.k * wave.direction[0], e.x);
    if (dim == 3) v *= exp_integral(wave.k * wave.direction[1], e.y);
    f[i] = -v;
  }
  return f;
}

void solve(BemSystem& sys, const CVector& rhs) {
  if (rhs.size() != sys.matrix.rows()) throw std::invalid_argument("right-hand side has the wrong length");
  sys.rhs = rhs;
  const Eigen::PartialPivLU<CMatrix> lu(-sys.matrix);
  const double rc = lu.rcond();
  sys.condition_estimate = rc > 0 ? 1.0 / rc : INFINITY;
  if (!(sys.condition_estimate <= 1e12))
    throw SolveError("Galerkin matrix is numerically singular (condition estimate " +
                     std::to_string(sys.condition_estimate) + ")");
  sys.solution = lu.solve(rhs);
}

BemSystem solve_dirichlet(const ScreenMesh& mesh, const IncidentWave& wave) {
  auto sys = assemble(mesh, wave.k);
  solve(sys, incident_trace(wave, mesh));
  return sys;
}

cplx discrete_single_layer(const ScreenMesh& mesh, const CVector& v, double k, SpacePoint x) {
  cplx u = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j)
    if (v[j] != cplx(0.0)) u -= v[j] * element_potential(mesh, j, k, x);
  return u;
}

FieldValue scattered_field(const BemSystem& sys, SpacePoint x) {
  if (sys.solution.size() != static_cast<Eigen::Index>(sys.mesh.size()))
    throw std::invalid_argument("system has not been solved");
  FieldValue out;
  out.value = discrete_single_layer(sys.mesh, sys.solution, sys.k, x);
  out.near_screen = element_distance(sys.mesh, x) < sys.mesh.element_size();
  return out;
}

std::vector<cplx> scattered_field(const BemSystem& sys, const std::vector<SpacePoint>& xs) {
  std::vector<cplx> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = scattered_field(sys, xs[i]).value; });
  return out;
}

cplx incident_field(const IncidentWave& wave, SpacePoint x) {
  double phase = wave.direction[0] * x.t.x1;
  if (wave.direction.size() == 3) phase += wave.direction[1] * x.t.x2;
  phase += wave.direction.back() * x.xn;
  return std::exp(I * (wave.k * phase));
}

cplx far_field(const BemSystem& sys, const std::vector<double>& direction) {
  const int dim = sys.mesh.geometry().dim();
  check_direction(direction, dim);
  if (sys.solution.size() != static_cast<Eigen::Index>(sys.mesh.size()))
    throw std::invalid_argument("system has not been solved");
  cplx s = 0.0;
  for (std::size_t j = 0; j < sys.mesh.size(); ++j) {
    const auto& e = sys.mesh.elements()[j];
    cplx m = exp_integral(-sys.k * direction[0], e.x);
    if (dim == 3) m *= exp_integral(-sys.k * direction[1], e.y);
    s += sys.solution[j] * m;
  }
  const cplx c = dim == 2 ? std::exp(I * (pi / 4.0)) / std::sqrt(8.0 * pi * sys.k) : cplx(1.0 / (4.0 * pi));
  return -c * s;
}

std::vector<cplx> mollified_spectrum(const ScreenMesh& mesh, const CVector& v, double delta,
                                     const SpectralQuadrature& q) {
  if (!(delta > 0)) throw std::invalid_argument("mollifier width must be positive");
  const int dim = mesh.geometry().dim();
  // M(xi) = int e^{-i xi t} m(t) dt for the unit-mass bump of half-width delta.
  // The bump is a polynomial, so one 128-point rule is exact up to the
  // oscillation of the cosine; wider arguments fall back to panels.
  const auto& g = gauss_legendre(128);
  double mass = 0.0;
  std::vector<double> wb(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    wb[i] = g.w[i] * bump_profile(g.x[i]);
    mass += wb[i];
  }
  auto M = [&](double xi) {
    const double a = std::abs(xi) * delta;
    double s = 0.0;
    if (a <= 80.0) {
      for (std::size_t i = 0; i < g.x.size(); ++i) s += wb[i] * std::cos(a * g.x[i]);
    } else {
      const auto r = composite_gauss({-1.0, 1.0}, 4.0 / a, 32);
      for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::cos(a * r.x[i]) * bump_profile(r.x[i]);
    }
    return s / mass;
  };
  const double norm = std::pow(2.0 * pi, -0.5 * (dim - 1));
  std::vector<cplx> out(q.size());
  parallel_for(q.size(), [&](std::size_t n) {
    const PlanePoint xi = q.nodes[n];
    cplx s = 0.0;
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      if (v[j] == cplx(0.0)) continue;
      const auto& e = mesh.elements()[j];
      cplx c = exp_integral(-xi.x1, e.x);
      if (dim == 3) c *= exp_integral(-xi.x2, e.y);
      s += v[j] * c;
    }
    double m = M(xi.x1);
    if (dim == 3) m *= M(xi.x2);
    out[n] = norm * m * s;
  });
  return out;
}

SpectralOptions mollified_options(double delta) {
  SpectralOptions o;
  o.finest_scale = delta;
  return o;
}

}  // namespace screenbie
