#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "screenbie/spectral_core.hpp"

namespace screenbie {

// One element: a subinterval (n = 2, y ignored) or a rectangle cell (n = 3).
struct Element {
  Interval x, y;
  PlanePoint centre() const { return {0.5 * (x.a + x.b), 0.5 * (y.a + y.b)}; }
};

class ScreenMesh {
 public:
  // n = 2: N elements over the intervals, shared in proportion to length
  // (at least one each). n = 3: an nx-by-ny grid of cells.
  static ScreenMesh uniform(const ScreenGeometry& g, int n, int ny = 0);

  const ScreenGeometry& geometry() const { return geometry_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  double element_size() const { return h_; }
  double measure(std::size_t i) const;

 private:
  ScreenGeometry geometry_;
  std::vector<Element> elements_;
  double h_ = 0.0;
};

struct IncidentWave {
  std::vector<double> direction;  // unit vector in R^n, last entry normal to the screen
  double k = 1.0;
};

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Galerkin system for -S_k v = g_D with piecewise constants. The stored
// solution is v = [du/dn]; the scattered field is u = -S_k v.
struct BemSystem {
  ScreenMesh mesh;
  double k = 1.0;
  CMatrix matrix;  // A_ij = int int Phi chi_j chi_i
  CVector rhs;     // <g_D, chi_i>
  CVector solution;
  double condition_estimate = 0.0;  // 1 / rcond of A
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BemSystem assemble(const ScreenMesh& mesh, double k);

// Entries -int_{elem i} e^{ik d.y} dy, closed form.
CVector incident_trace(const IncidentWave& wave, const ScreenMesh& mesh);

// Dense LU solve of -A v = rhs; throws SolveError when 1/rcond > 1e12.
void solve(BemSystem& sys, const CVector& rhs);
BemSystem solve_dirichlet(const ScreenMesh& mesh, const IncidentWave& wave);

struct FieldValue {
  cplx value;
  bool near_screen = false;  // dist(x, screen) < h: element quadrature is exact but the discrete field is rough
};
FieldValue scattered_field(const BemSystem& sys, SpacePoint x);
std::vector<cplx> scattered_field(const BemSystem& sys, const std::vector<SpacePoint>& xs);

// u = -S_k v evaluated for arbitrary coefficients on the mesh.
cplx discrete_single_layer(const ScreenMesh& mesh, const CVector& v, double k, SpacePoint x);

cplx incident_field(const IncidentWave& wave, SpacePoint x);

// Far-field pattern with u^s(x) ~ e^{ikr} r^{-(n-1)/2} u_inf(x^):
//   n = 2: u_inf = -(e^{i pi/4} / sqrt(8 pi k)) sum_j v_j int e^{-ik x^.y} dy
//   n = 3: u_inf = -(1 / 4 pi) sum_j v_j int e^{-ik x^.y} dy
cplx far_field(const BemSystem& sys, const std::vector<double>& direction);

// Fourier transform of sum_j v_j (chi_j * m_delta) at the spectral nodes,
// where m_delta is the normalised (1 - t^2)^6 bump of half-width delta
// (a tensor product for n = 3).
std::vector<cplx> mollified_spectrum(const ScreenMesh& mesh, const CVector& v, double delta,
                                     const SpectralQuadrature& q);

// Spectral options fitting mollified densities of half-width delta.
SpectralOptions mollified_options(double delta);

}  // namespace screenbie
