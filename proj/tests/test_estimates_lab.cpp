#include <cmath>

#include "doctest.h"
#include "screenbie/bio_spectral.hpp"
#include "screenbie/estimates_lab.hpp"
#include "screenbie/quadrature.hpp"

using namespace screenbie;

namespace {

const auto unit = ScreenGeometry::intervals({{0.0, 1.0}});
const auto square = ScreenGeometry::rectangle({0.0, 1.0}, {0.0, 1.0});

}  // namespace

TEST_CASE("ensemble is deterministic and well formed") {
  const auto two = ScreenGeometry::intervals({{0.0, 1.0}, {1.5, 1.8}});
  const auto a = make_ensemble(two, 7), b = make_ensemble(two, 7), c = make_ensemble(two, 8);
  REQUIRE(a.members.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.members[i].bumps.size() == 3);
    CHECK(a.members[i].modulated == (i >= 10));
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& p = a.members[i].bumps[j];
      CHECK(p.centre.x1 == b.members[i].bumps[j].centre.x1);
      CHECK(p.weight >= 0.2);
      // Supports stay inside the screen.
      CHECK(two.contains({p.centre.x1 - p.half_width.x1, 0}, 1e-12));
      CHECK(two.contains({p.centre.x1 + p.half_width.x1, 0}, 1e-12));
    }
  }
  CHECK(a.members[0].bumps[0].centre.x1 != c.members[0].bumps[0].centre.x1);
  CHECK(a.members[13].angle_deg == 90.0);
  CHECK_THROWS_AS(make_ensemble(unit, 1, 3), std::invalid_argument);

  // The 90 degree member is the unmodulated base density.
  const auto base = realize(a.members[3], 1, 9.0), mod = realize(a.members[13], 1, 9.0);
  for (double x : {0.1, 0.4, 0.77}) CHECK(base.value({x, 0}) == mod.value({x, 0}));
  // 0 degrees: a full k modulation.
  const auto m0 = realize(a.members[10], 1, 9.0), b0 = realize(a.members[0], 1, 9.0);
  const double dir = a.members[10].direction.x1;
  for (double x : {0.1, 0.4, 0.77})
    CHECK(std::abs(m0.value({x, 0}) - b0.value({x, 0}) * std::exp(cplx(0, 9.0 * dir * x))) < 1e-14);
}

TEST_CASE("slope fit") {
  std::vector<double> x{1, 2, 4, 8, 16}, y;
  for (double t : x) y.push_back(3.0 * std::pow(t, -0.5));
  auto f = fit_slope(x, y);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f.ok);
  y[2] *= 3.0;
  CHECK_FALSE(fit_slope(x, y).ok);
  CHECK_FALSE(fit_slope({1, 2, 4}, {1, 2, 4}).ok);
  CHECK_THROWS_AS(fit_slope({1, 2}, {1, -2}), std::invalid_argument);

  EstimateReport r;
  r.sweep.resize(5);
  r.fit = fit_slope(x, std::vector<double>{1, 2, 4, 8, 16});
  judge_slope(r, 0.9, 1.1);
  CHECK(r.verdict == Verdict::Pass);
  judge_slope(r, -0.1, 0.1);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(std::string(to_string(Verdict::Inconclusive)) == "inconclusive");
}

TEST_CASE("cutoff profile") {
  CHECK(cutoff_profile(0.3) == 1.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(2.5) == 0.0);
  CHECK(cutoff_profile(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double t = 1.05; t < 2.0; t += 0.1) {
    const double h = 1e-6;
    const double fd = (cutoff_profile(t + h) - cutoff_profile(t - h)) / (2 * h);
    CHECK(cutoff_derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(cutoff_profile(t) + cutoff_profile(3.0 - t) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("bound functions") {
  CHECK(p_n(2, 0.01) == doctest::Approx(0.1));
  CHECK(p_n(3, 0.01) == doctest::Approx(0.01));
  CHECK(p_n(2, 100.0) == doctest::Approx(std::sqrt(std::log(102.0))));
  const double k = 3, L = 2, d = 0.5;
  CHECK(fundamental_trace_bound(3, k, L, d) == doctest::Approx(std::sqrt(3.0) * (1 / 1.5 + std::sqrt(std::log(6.0)))));
  CHECK(corollary_bound(3, k, L, d) ==
        doctest::Approx(std::sqrt(6.0) * std::sqrt(7.0) * (1 / 1.5 + std::sqrt(std::log(6.0)))));
  CHECK(corollary_bound(2, k, L, d) == doctest::Approx(std::sqrt(7.0) * fundamental_trace_bound(2, k, L, d)));
}

TEST_CASE("screen distance") {
  const auto two = ScreenGeometry::intervals({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(screen_distance({{1.5, 0}, 0.0}, two) == doctest::Approx(0.5));
  CHECK(screen_distance({{0.5, 0}, 0.2}, two) == doctest::Approx(0.2));
  CHECK(screen_distance({{2.0, 4.0}, 0.0}, square) == doctest::Approx(std::hypot(1.0, 3.0)));
  CHECK(screen_distance({{0.5, 0.5}, -0.3}, square) == doctest::Approx(0.3));
}

TEST_CASE("Rayleigh quotients: coercivity floor, continuity ceiling, scale invariance") {
  const auto e = make_ensemble(unit, 3);
  for (double k : {2.0, 20.0}) {
    for (std::size_t i = 0; i < e.members.size(); i += 3) {
      const auto m = measure_density(realize(e.members[i], 1, k), unit, k, {}, false);
      CHECK(m.dirichlet >= 1.0 / (2.0 * std::sqrt(2.0)) - 1e-10);
      for (double h : m.hypersingular) CHECK(h <= 0.5 + 1e-10);
      CHECK(m.neumann > 0.0);
      CHECK(m.dirichlet == doctest::Approx(std::abs(m.a_D) / std::pow(sobolev_norm(
                                               spectral_sample(realize(e.members[i], 1, k), unit, k).hat, {-0.5, k},
                                               spectral_sample(realize(e.members[i], 1, k), unit, k).q), 2)));
    }
  }
  // (k, L) -> (k / c, c L) leaves every Rayleigh quotient unchanged.
  const double c = 2.5, k = 12.0;
  const auto base = e.members[11];
  auto scaled = base;
  for (auto& b : scaled.bumps) {
    b.centre.x1 *= c;
    b.half_width.x1 *= c;
  }
  const auto big = ScreenGeometry::intervals({{0.0, c}});
  const auto m1 = measure_density(realize(base, 1, k), unit, k, {}, false);
  const auto m2 = measure_density(realize(scaled, 1, k / c), big, k / c, {}, false);
  CHECK(m1.dirichlet == doctest::Approx(m2.dirichlet).epsilon(1e-6));
  CHECK(m1.neumann == doctest::Approx(m2.neumann).epsilon(1e-6));
  CHECK(m1.hypersingular[1] == doctest::Approx(m2.hypersingular[1]).epsilon(1e-6));
}

TEST_CASE("single-layer ratios through the truncated kernel") {
  // With a zero kernel the ratio vanishes; with a constant kernel it reduces
  // to a norm ratio.
  const double k = 6.0;
  const auto d = realize(sharpness_bump(unit, false), 1, k);
  const auto s = spectral_sample(d, unit, k);
  std::vector<cplx> one(s.q.size(), cplx(2.0, 0.0));
  CHECK(single_layer_ratio(s.hat, one, 0.0, 0.0, s.q) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(single_layer_ratio(s.hat, one, -0.5, 1.0, s.q) ==
        doctest::Approx(2.0 * sobolev_norm(s.hat, {0.5, k}, s.q) / sobolev_norm(s.hat, {-0.5, k}, s.q)).epsilon(1e-12));
  // The truncated multiplier tends to the full symbol (i/2)/Z away from |xi| = k
  // as L grows, in the mean.
  const auto kern = truncated_kernel_at_nodes(s.q, unit.diameter());
  const auto m = measure_density(d, unit, k);
  CHECK(m.single_layer == doctest::Approx(single_layer_ratio(s.hat, kern, -0.5, 1.0, s.q)).epsilon(1e-12));
  CHECK(m.single_layer > 0.0);
  CHECK(m.single_layer_same > 0.0);
}

TEST_CASE("plane-wave trace norm") {
  // s = 0: the modulus of chi_L e^{ik d.y} does not see k or d.
  const double L = unit.diameter();
  const auto rule = composite_gauss({-1.5, -0.5, 0.5, 1.5, 2.5}, 0.05, 16);
  double ref = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) ref += rule.w[i] * std::pow(cutoff_profile(std::abs(rule.x[i] - 0.5) / L), 2);
  ref = std::sqrt(ref);
  for (double k : {1.0, 10.0})
    for (double a : {0.0, 0.6}) {
      const double v = trace_norm_planewave({std::sin(a), -std::cos(a)}, 0.0, k, unit);
      CHECK(v == doctest::Approx(ref).epsilon(1e-6));
    }
  CHECK(trace_norm_planewave({0.0, -1.0}, 1.0, 10.0, unit) > trace_norm_planewave({0.0, -1.0}, 0.5, 10.0, unit));
  CHECK_THROWS_AS(trace_norm_planewave({1.0, 1.0}, 0.0, 1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(trace_norm_planewave({0.0, 1.0}, -0.5, 1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(trace_norm_planewave({0.0, 0.0, 1.0}, 0.0, 1.0, unit), std::invalid_argument);
}

TEST_CASE("plane-wave trace norm against the H^1_k identity") {
  // |grad(chi e^{ik d.y})|^2 = |grad chi|^2 + k^2 |d~|^2 chi^2, so
  // ||u||^2_{H^1_k} = k^2 (1 + |d~|^2) int chi^2 + int |grad chi|^2, radially.
  auto radial = [](int n, double L, double k, double dt2) {
    const auto rule = composite_gauss({0.0, L, 2.0 * L}, L / 64.0, 16);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.x[i], jac = n == 3 ? 2.0 * pi * r : 1.0;
      m0 += rule.w[i] * jac * std::pow(cutoff_profile(r / L), 2);
      m1 += rule.w[i] * jac * std::pow(cutoff_derivative(r / L) / L, 2);
    }
    if (n == 2) m0 *= 2.0, m1 *= 2.0;  // both sides of the centre
    return std::make_pair(std::sqrt(m0), std::sqrt(k * k * (1 + dt2) * m0 + m1));
  };
  for (double k : {0.7, 6.0}) {
    const auto [l2, h1] = radial(2, 1.0, k, std::pow(std::sin(0.4), 2));
    CHECK(trace_norm_planewave({std::sin(0.4), -std::cos(0.4)}, 0.0, k, unit) == doctest::Approx(l2).epsilon(1e-6));
    CHECK(trace_norm_planewave({std::sin(0.4), -std::cos(0.4)}, 1.0, k, unit) == doctest::Approx(h1).epsilon(1e-6));
    const std::vector<double> d3{0.3, 0.2, -std::sqrt(1 - 0.13)};
    const auto [l3, h3] = radial(3, square.diameter(), k, 0.13);
    CHECK(trace_norm_planewave(d3, 0.0, k, square) == doctest::Approx(l3).epsilon(1e-6));
    CHECK(trace_norm_planewave(d3, 1.0, k, square) == doctest::Approx(h3).epsilon(1e-6));
  }
}

TEST_CASE("fundamental-solution trace norm") {
  const double k = 10.0;
  double prev = 1e300;
  for (double d : {0.05, 0.2, 1.0, 5.0}) {
    const double v = trace_norm_fundamental({{0.5, 0}, d}, k, unit);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(trace_norm_fundamental({{0.5, 0}, 0.0}, k, unit), std::invalid_argument);
  const double v3 = trace_norm_fundamental({{0.5, 0.5}, 0.3}, 4.0, square);
  CHECK(std::isfinite(v3));
  CHECK(v3 > 0.0);
}

TEST_CASE("condition estimates grow with kL") {
  const auto e = make_ensemble(unit, 5, 8);
  const auto r = condition_number_study(e, OperatorKind::Hypersingular, {4.0, 16.0}, {});
  REQUIRE(r.sweep.size() == 2);
  CHECK(r.sweep[0].quantity >= 1.0);
  CHECK(r.sweep[1].quantity > r.sweep[0].quantity);
  CHECK_THROWS_AS(condition_number_study(e, OperatorKind::SingleLayer, {4.0, 2.0}, {}), std::invalid_argument);
}
