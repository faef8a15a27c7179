#pragma once

#include "screenbie/geometry.hpp"

namespace screenbie {

// Bessel functions of the first and second kind and the Hankel function of
// the first kind, orders 0 and 1, real argument x > 0. Relative accuracy is
// about 1e-13 away from zeros of the function.
double bessel_j(int order, double x);
double bessel_y(int order, double x);
cplx hankel1(int order, double x);

// All four values at once; cheaper when both orders are needed.
struct BesselSet {
  double j0, j1, y0, y1;
};
BesselSet bessel_set(double x);

// Branch boundaries, exposed so tests can check agreement across them.
inline constexpr double kSeriesLimit = 1.0;
inline constexpr double kAsymptoticLimit = 20.0;

namespace detail {
BesselSet bessel_series(double x);      // power/log series
BesselSet bessel_miller(double x);      // backward recurrence + Neumann series
BesselSet bessel_asymptotic(double x);  // Hankel expansion
}  // namespace detail

}  // namespace screenbie
