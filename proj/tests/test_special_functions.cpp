#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "screenbie/special_functions.hpp"

using namespace screenbie;
using mp = boost::multiprecision::cpp_bin_float_100;

namespace {

// Independent oracle: power series summed in 100-digit arithmetic.
struct Oracle {
  double j0, j1, y0, y1;
};

Oracle series_oracle(double xd) {
  const mp x = xd;
  const mp q = -(x * x) / 4;
  const mp gamma("0.57721566490153286060651209008240243104215933593992");
  const mp mpi = boost::math::constants::pi<mp>();
  mp t0 = 1, t1 = x / 2, j0 = t0, j1 = t1, h = 0, s0 = 0, s1 = t1;
  for (int m = 1; m < 400; ++m) {
    t0 *= q / (mp(m) * m);
    t1 *= q / (mp(m) * (m + 1));
    h += mp(1) / m;
    j0 += t0;
    j1 += t1;
    s0 += h * t0;
    s1 += (2 * h + mp(1) / (m + 1)) * t1;
    if (abs(t0) < mp("1e-80") && m > 10) break;
  }
  const mp lg = log(x / 2) + gamma;
  const mp y0 = (2 / mpi) * (lg * j0 - s0);
  const mp y1 = -2 / (mpi * x) + (2 / mpi) * lg * j1 - s1 / mpi;
  return {static_cast<double>(j0), static_cast<double>(j1), static_cast<double>(y0), static_cast<double>(y1)};
}

double envelope(double x) { return std::max(1.0, 1.0 / x) * std::sqrt(2.0 / (3.14159 * std::max(x, 1.0))); }

}  // namespace

TEST_CASE("values at x = 1") {
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(bessel_j(1, 1.0) == doctest::Approx(0.4400505857).epsilon(1e-10));
  const cplx h = hankel1(0, 1.0);
  CHECK(h.real() == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(h.imag() == doctest::Approx(0.0882569642).epsilon(1e-9));
}

TEST_CASE("small-argument limits") {
  CHECK(std::abs(bessel_j(0, 1e-8) - 1.0) < 1e-12);
  const cplx v = 1e-6 * hankel1(1, 1e-6);
  CHECK(std::abs(v - cplx(0.0, -2.0 / pi)) < 1e-5);
}

TEST_CASE("agreement with a high-precision series oracle on (0, 30]") {
  double worst = 0.0;
  for (double x = 1e-4; x <= 30.0; x *= 1.07) {
    const auto o = series_oracle(x);
    const auto b = bessel_set(x);
    const double e = envelope(x);
    worst = std::max({worst, std::abs(b.j0 - o.j0) / e, std::abs(b.j1 - o.j1) / e,
                      std::abs(b.y0 - o.y0) / std::max(e, std::abs(o.y0)),
                      std::abs(b.y1 - o.y1) / std::max(e, std::abs(o.y1))});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("agreement with the standard library for large arguments") {
  double worst = 0.0;
  for (double x = 30.0; x <= 1e4; x *= 1.13) {
    const auto b = bessel_set(x);
    const double e = std::sqrt(2.0 / (pi * x));
    worst = std::max({worst, std::abs(b.j0 - std::cyl_bessel_j(0.0, x)) / e,
                      std::abs(b.j1 - std::cyl_bessel_j(1.0, x)) / e,
                      std::abs(b.y0 - std::cyl_neumann(0.0, x)) / e, std::abs(b.y1 - std::cyl_neumann(1.0, x)) / e});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("branches agree across their boundaries") {
  double worst = 0.0;
  for (double x = kAsymptoticLimit; x <= 30.0; x += 0.37) {
    const auto a = detail::bessel_miller(x);
    const auto b = detail::bessel_asymptotic(x);
    const double e = std::sqrt(2.0 / (pi * x));
    worst = std::max({worst, std::abs(a.j0 - b.j0) / e, std::abs(a.j1 - b.j1) / e, std::abs(a.y0 - b.y0) / e,
                      std::abs(a.y1 - b.y1) / e});
  }
  CHECK(worst < 1e-12);
  worst = 0.0;
  for (double x = 0.5; x <= 1.5; x += 0.05) {
    const auto a = detail::bessel_series(x);
    const auto b = detail::bessel_miller(x);
    worst = std::max({worst, std::abs(a.j0 - b.j0), std::abs(a.j1 - b.j1), std::abs(a.y0 - b.y0),
                      std::abs(a.y1 - b.y1) / std::abs(a.y1)});
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("Wronskian") {
  double worst = 0.0;
  for (double x = 1e-3; x <= 1e3; x *= 1.05) {
    const auto b = bessel_set(x);
    const double w = b.j1 * b.y0 - b.j0 * b.y1;
    worst = std::max(worst, std::abs(w / (2.0 / (pi * x)) - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("derivative relations") {
  const double h = 1e-5;
  for (double x : {0.3, 1.7, 5.0, 19.9, 20.1, 42.0}) {
    const double dj0 = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2 * h);
    CHECK(std::abs(dj0 + bessel_j(1, x)) < 1e-6);
    const cplx dh0 = (hankel1(0, x + h) - hankel1(0, x - h)) / (2 * h);
    CHECK(std::abs(dh0 + hankel1(1, x)) < 1e-6 * std::max(1.0, std::abs(hankel1(1, x))));
    // d/dz (z B1(z)) = z B0(z)
    const cplx dzh1 = ((x + h) * hankel1(1, x + h) - (x - h) * hankel1(1, x - h)) / (2 * h);
    CHECK(std::abs(dzh1 - x * hankel1(0, x)) < 1e-6 * std::max(1.0, x));
  }
}

TEST_CASE("Hankel bounds") {
  CHECK(std::abs(hankel1(0, 2.0)) > std::abs(hankel1(0, 3.0)));
  double prev = std::abs(hankel1(0, 1e-3));
  double sup = 0.0;
  for (double z = 1.1e-3; z < 500.0; z *= 1.01) {
    const double m = std::abs(hankel1(0, z));
    CHECK(m < prev);
    prev = m;
    if (z > 1.0) sup = std::max(sup, std::sqrt(z) * m);
  }
  CHECK(sup <= 1.0);
  // |H0(z)| <= C (1 + |log z|) on (0, 1]
  double c = 0.0;
  for (double z = 1e-8; z <= 1.0; z *= 1.5) c = std::max(c, std::abs(hankel1(0, z)) / (1.0 + std::abs(std::log(z))));
  CHECK(c < 1.0);
  for (double x : {0.5, 1.0, 7.0, 100.0}) CHECK(std::abs(bessel_j(0, x)) <= 1.0);
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(bessel_j(0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j(0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hankel1(1, -2.0), std::invalid_argument);
}
