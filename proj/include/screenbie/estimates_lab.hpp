#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "screenbie/density.hpp"

namespace screenbie {

// Test densities. A member is a positive combination of bumps, optionally
// modulated by e^{ik d~.x} with |d~| = cos(angle), angle measured from the
// screen plane (90 degrees: unmodulated limit).
struct EnsembleMember {
  std::vector<Bump> bumps;
  bool modulated = false;
  double angle_deg = 90.0;
  PlanePoint direction{1.0, 0.0};  // unit in-plane direction of d~
};

struct Ensemble {
  ScreenGeometry geometry;
  std::vector<EnsembleMember> members;
};

// 10 random 3-bump combinations plus 10 modulated copies of them at angles
// 0, 30, 60, 90 degrees (cycled). Deterministic given the seed.
Ensemble make_ensemble(const ScreenGeometry& g, std::uint64_t seed = 42, int count = 20);

Density realize(const EnsembleMember& m, int plane_dim, double k);

// The fixed bump used for the sharpness families: centred on the screen
// (the longest interval for n = 2), half-width 0.3 of its side.
EnsembleMember sharpness_bump(const ScreenGeometry& g, bool modulated);

struct ProbeOptions {
  double accuracy = 1e-8;  // spectral quadrature target
};

// Everything the probes need from one density at one k, computed from a
// single set of spectral samples.
struct DensityMeasures {
  double dirichlet = 0.0;        // |a_D(phi, phi)| / ||phi||^2_{-1/2}
  double neumann = 0.0;          // |a_N(phi, phi)| / ||phi||^2_{1/2}
  double hypersingular[3] = {};  // ||T phi||_{s-1} / ||phi||_s for s = 0, 1/2, 1
  double single_layer = 0.0;     // ||S phi||_{1/2} / ||phi||_{-1/2}
  double single_layer_same = 0.0;  // ||S phi||_0 / ||phi||_0
  cplx a_D, a_N;
};

// Spectral samples of one density at one k.
struct SpectralSample {
  SpectralQuadrature q;
  std::vector<cplx> hat;
};
SpectralSample spectral_sample(const Density& d, const ScreenGeometry& g, double k, const ProbeOptions& o = {});

// (2 pi)^{(n-1)/2} Phi_L-hat(xi, 0) at every node: the multiplier of the
// single layer with the kernel cut off at radius L.
std::vector<cplx> truncated_kernel_at_nodes(const SpectralQuadrature& q, double L);

// ||S phi||_{s+order} / ||phi||_s from samples and kernel multipliers.
double single_layer_ratio(const std::vector<cplx>& hat, const std::vector<cplx>& kernel, double s, double order,
                          const SpectralQuadrature& q);

// S phi norms go through the truncated kernel Phi_L with L the screen
// diameter, which reproduces S_k phi on the screen; set with_single_layer to
// false to skip them.
DensityMeasures measure_density(const Density& d, const ScreenGeometry& g, double k, const ProbeOptions& o = {},
                                bool with_single_layer = true);

// Rayleigh quotients from spectral samples; zero densities are rejected.
double rayleigh_dirichlet(const std::vector<cplx>& hat, const SpectralQuadrature& q);
double rayleigh_neumann(const std::vector<cplx>& hat, const SpectralQuadrature& q);
double hypersingular_ratio(const std::vector<cplx>& hat, double s, const SpectralQuadrature& q);

// ---------------------------------------------------------------------------
// Sweeps and fits

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct SweepPoint {
  double k = 0.0;
  double quantity = 0.0;
  double bound = 0.0;  // reference law evaluated at k (0 if none)
  double ratio = 0.0;  // quantity / bound (0 if none)
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log residuals
  bool ok = false;        // at least 4 points and residual < 0.1
};

// Ordinary least squares of log(quantity) on log(x).
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y, double max_residual = 0.1);

struct EstimateReport {
  std::string name;
  double length = 1.0;  // L, so the sweep variable is k L
  std::vector<SweepPoint> sweep;
  SlopeFit fit;
  double bound_constant = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  std::vector<std::string> warnings;
};

// Slope of the sweep quantity against kL must lie in [lo, hi].
void judge_slope(EstimateReport& r, double lo, double hi);

using Family = std::function<Density(double k)>;
Family family_of(const EnsembleMember& m, int plane_dim);

// Minimum Dirichlet Rayleigh quotient over the ensemble at one k.
double probe_coercivity_dirichlet(const Ensemble& e, double k, const ProbeOptions& o = {});

// ||S phi||_{s+order} / ||phi||_s along a k sweep (order 1: continuity,
// order 0: the same-order map).
EstimateReport probe_continuity_single_layer(const Family& f, const ScreenGeometry& g, double s, int order,
                                             const std::vector<double>& ks, const ProbeOptions& o = {});

// max over the family and s in {0, 1/2, 1} of ||T phi||_{s-1} / ||phi||_s.
EstimateReport probe_continuity_hypersingular(const std::vector<Family>& fs, const ScreenGeometry& g,
                                              const std::vector<double>& ks, const ProbeOptions& o = {});

// gamma_N(k) = min over the ensemble of the Neumann Rayleigh quotient; the
// sweep bound is (kL)^beta with beta = -1/2 (n = 2) or -2/3 (n = 3).
EstimateReport probe_coercivity_neumann(const Ensemble& e, const std::vector<double>& ks, const ProbeOptions& o = {});

// Rayleigh quotient of one density family along a sweep (Neumann form).
EstimateReport probe_neumann_family(const Family& f, const ScreenGeometry& g, const std::vector<double>& ks,
                                    const ProbeOptions& o = {});

// cond estimate = sup continuity ratio / min coercivity ratio over the
// ensemble, for S_k (single layer) or T_k (hypersingular).
enum class OperatorKind { SingleLayer, Hypersingular };
EstimateReport condition_number_study(const Ensemble& e, OperatorKind kind, const std::vector<double>& ks,
                                      const ProbeOptions& o = {});

// ---------------------------------------------------------------------------
// Trace norms

// Smooth cutoff: 1 for t <= 1, 0 for t >= 2.
double cutoff_profile(double t);
double cutoff_derivative(double t);

// ||chi_L e^{ik d.y}||_{H^s_k(R^{n-1})}, chi_L(y) = chi(|y - c|/L) about the
// screen centre c, an upper bound for the restricted norm on the screen.
// d in R^n with |d| <= 1, s >= 0.
double trace_norm_planewave(const std::vector<double>& d, double s, double k, const ScreenGeometry& g);

// k^{-1/2} ||chi_L Phi(x, .)||_{H^1_k(R^{n-1})} with the distance-adapted
// cutoff; bounds ||Phi(x, .)||_{H^{1/2}_k(screen)}. Rejects x on the screen.
double trace_norm_fundamental(SpacePoint x, double k, const ScreenGeometry& g);

double screen_distance(SpacePoint x, const ScreenGeometry& g);

// Right-hand sides without the constant C.
double p_n(int n, double t);
double fundamental_trace_bound(int n, double k, double L, double d);
double corollary_bound(int n, double k, double L, double d);

}  // namespace screenbie
