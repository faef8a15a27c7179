#include "screenbie/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace screenbie {

namespace {

void check_argument(int order, double x) {
  if (order != 0 && order != 1) throw std::invalid_argument("Bessel order must be 0 or 1, got " + std::to_string(order));
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("Bessel argument must be finite and > 0");
}

}  // namespace

namespace detail {

BesselSet bessel_series(double x) {
  const double q = -0.25 * x * x;
  // J0, J1 and the digamma-weighted sums of the logarithmic series.
  double t0 = 1.0, t1 = 0.5 * x;  // (x/2)^{2m}/(m!)^2 and (x/2)^{2m+1}/(m!(m+1)!) with signs
  double j0 = t0, j1 = t1;
  double harmonic = 0.0;          // H_m
  double sy0 = 0.0;               // sum H_m t0_m
  double sy1 = t1;                // sum (H_m + H_{m+1}) t1_m; H_0 + H_1 = 1
  for (int m = 1; m < 60; ++m) {
    t0 *= q / (double(m) * m);
    t1 *= q / (double(m) * (m + 1));
    harmonic += 1.0 / m;
    j0 += t0;
    j1 += t1;
    sy0 += harmonic * t0;
    sy1 += (2.0 * harmonic + 1.0 / (m + 1)) * t1;
    if (std::abs(t0) < 1e-18 * std::abs(j0) && std::abs(t1) < 1e-18 * std::abs(j1)) break;
  }
  const double lg = std::log(0.5 * x) + euler_gamma;
  BesselSet r;
  r.j0 = j0;
  r.j1 = j1;
  r.y0 = (2.0 / pi) * (lg * j0 - sy0);
  // psi(m+1) + psi(m+2) = -2 gamma + H_m + H_{m+1}; the -2 gamma part folds into lg.
  r.y1 = -2.0 / (pi * x) + (2.0 / pi) * lg * j1 - sy1 / pi;
  return r;
}

BesselSet bessel_miller(double x) {
  int n_start = static_cast<int>(x + 12.0 * std::cbrt(x) + 24.0);
  if (n_start % 2) ++n_start;
  double jp1 = 0.0, j = 1e-30;
  double norm = 0.0;   // J0 + 2 sum J_{2k}
  double s0 = 0.0;     // sum (-1)^k J_{2k} / k
  double s1 = 0.0;     // sum (-1)^k (J_{2k-1} - J_{2k+1}) / k
  double j1 = 0.0, j0 = 0.0;
  // At step n, j holds J_n and jp1 holds J_{n+1} (unnormalised).
  for (int n = n_start; n >= 1; --n) {
    const double jm1 = (2.0 * n / x) * j - jp1;
    if (n % 2 == 0) {
      const int k = n / 2;
      const double sign = (k % 2) ? -1.0 : 1.0;
      norm += 2.0 * j;
      s0 += sign * j / k;
      // J_{2k-1} is jm1, J_{2k+1} is jp1.
      s1 += sign * (jm1 - jp1) / k;
    }
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      const double sc = 1e-250;
      j *= sc;
      jp1 *= sc;
      norm *= sc;
      s0 *= sc;
      s1 *= sc;
    }
  }
  j0 = j;
  j1 = jp1;
  norm += j0;
  const double inv = 1.0 / norm;
  j0 *= inv;
  j1 *= inv;
  s0 *= inv;
  s1 *= inv;
  const double lg = std::log(0.5 * x) + euler_gamma;
  BesselSet r;
  r.j0 = j0;
  r.j1 = j1;
  r.y0 = (2.0 / pi) * (lg * j0 - 2.0 * s0);
  r.y1 = (2.0 / pi) * (lg * j1 - j0 / x) + (2.0 / pi) * s1;
  return r;
}

BesselSet bessel_asymptotic(double x) {
  // H_nu(x) ~ sqrt(2/(pi x)) e^{i w} sum_m i^m a_m(nu) / x^m, truncated at the smallest term.
  auto series = [x](double nu) {
    const double mu = 4.0 * nu * nu;
    cplx sum = 1.0;
    double a = 1.0;
    double last = 1.0;
    cplx im = 1.0;
    for (int m = 1; m < 80; ++m) {
      const double odd = 2.0 * m - 1.0;
      a *= (mu - odd * odd) / (m * 8.0 * x);
      im *= cplx(0.0, 1.0);
      const double mag = std::abs(a);
      if (mag > last) break;
      sum += im * a;
      last = mag;
      if (mag < 1e-17) break;
    }
    return sum;
  };
  const double amp = std::sqrt(2.0 / (pi * x));
  // Reduce x - pi/4 and x - 3pi/4 accurately.
  const double s = std::sin(x), c = std::cos(x);
  const double r2 = std::sqrt(0.5);
  const cplx e0(r2 * (c + s), r2 * (s - c));   // e^{i(x - pi/4)}
  const cplx e1(r2 * (s - c), -r2 * (c + s));  // e^{i(x - 3pi/4)}
  const cplx h0 = amp * e0 * series(0.0);
  const cplx h1 = amp * e1 * series(1.0);
  return {h0.real(), h1.real(), h0.imag(), h1.imag()};
}

}  // namespace detail

BesselSet bessel_set(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("Bessel argument must be finite and > 0");
  if (x < kSeriesLimit) return detail::bessel_series(x);
  if (x < kAsymptoticLimit) return detail::bessel_miller(x);
  return detail::bessel_asymptotic(x);
}

double bessel_j(int order, double x) {
  check_argument(order, x);
  const auto b = bessel_set(x);
  return order == 0 ? b.j0 : b.j1;
}

double bessel_y(int order, double x) {
  check_argument(order, x);
  const auto b = bessel_set(x);
  return order == 0 ? b.y0 : b.y1;
}

cplx hankel1(int order, double x) {
  check_argument(order, x);
  const auto b = bessel_set(x);
  return order == 0 ? cplx(b.j0, b.y0) : cplx(b.j1, b.y1);
}

}  // namespace screenbie
