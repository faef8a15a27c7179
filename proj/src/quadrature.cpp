#include "screenbie/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace screenbie {

namespace {

GaussRule compute_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // One more evaluation of the derivative at the converged node.
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        break;
      }
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  constexpr int kMax = 128;
  if (n < 1 || n > kMax) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::array<GaussRule, kMax + 1> cache;
  static std::array<std::once_flag, kMax + 1> flags;
  std::call_once(flags[n], [n] { cache[n] = compute_gauss(n); });
  return cache[n];
}

void Rule1D::append(double a, double b, int order) {
  const auto& g = gauss_legendre(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    x.push_back(c + h * g.x[i]);
    w.push_back(h * g.w[i]);
  }
}

Rule1D composite_gauss(const std::vector<double>& breaks, double max_panel, int order) {
  Rule1D r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel - 1e-12)));
    const double h = (b - a) / m;
    for (int p = 0; p < m; ++p) r.append(a + p * h, p + 1 == m ? b : a + (p + 1) * h, order);
  }
  return r;
}

Rule1D graded_gauss(double a, double b, bool toward_a, double ratio, double smallest, int order) {
  Rule1D r;
  const double len = b - a;
  if (!(len > 0)) return r;
  std::vector<double> cuts{0.0};  // distances from the singular end
  double d = len;
  while (d * ratio > smallest) {
    d *= ratio;
    cuts.push_back(d);
  }
  cuts.push_back(len);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (toward_a)
      r.append(a + cuts[i], a + cuts[i + 1], order);
    else
      r.append(b - cuts[i + 1], b - cuts[i], order);
  }
  return r;
}

namespace {

std::vector<double> axis_breaks(Interval iv, const std::vector<double>& extra) {
  std::vector<double> br{iv.a, iv.b};
  for (double t : extra)
    if (t > iv.a && t < iv.b) br.push_back(t);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

}  // namespace

SpatialQuadrature make_spatial_quadrature(const ScreenGeometry& g, std::vector<double> breaks_x,
                                          std::vector<double> breaks_y, double max_panel, int order) {
  if (!(max_panel > 0)) throw std::invalid_argument("panel length must be positive");
  order = std::max(order, 2);
  SpatialQuadrature q{g, {}, {}, false, {}, {}};
  if (g.dim() == 2) {
    for (const auto& iv : g.parts()) {
      auto r = composite_gauss(axis_breaks(iv, breaks_x), max_panel, order);
      for (std::size_t i = 0; i < r.size(); ++i) {
        q.nodes.push_back({r.x[i], 0.0});
        q.weights.push_back(r.w[i]);
      }
    }
    q.axis_x = Rule1D{};
    for (const auto& n : q.nodes) q.axis_x.x.push_back(n.x1);
    q.axis_x.w = q.weights;
    return q;
  }
  q.tensor = true;
  q.axis_x = composite_gauss(axis_breaks(g.rect_x(), breaks_x), max_panel, order);
  q.axis_y = composite_gauss(axis_breaks(g.rect_y(), breaks_y), max_panel, order);
  q.nodes.reserve(q.axis_x.size() * q.axis_y.size());
  for (std::size_t i = 0; i < q.axis_x.size(); ++i)
    for (std::size_t j = 0; j < q.axis_y.size(); ++j) {
      q.nodes.push_back({q.axis_x.x[i], q.axis_y.x[j]});
      q.weights.push_back(q.axis_x.w[i] * q.axis_y.w[j]);
    }
  return q;
}

}  // namespace screenbie
