#pragma once

#include <span>
#include <vector>

#include "screenbie/spectral_core.hpp"

namespace screenbie {

enum class SymbolKind { SingleLayer, Hypersingular };

// (i/2)/Z for the single layer, (i/2) Z for the hypersingular operator.
cplx symbol_value(SymbolKind kind, cplx z);

struct SymbolApplication {
  std::vector<cplx> values;
  bool converged = true;  // false if refining the quadrature moved a value by more than the tolerance
  double change = 0.0;    // max relative change seen in the refinement check
};

// S_k^inf phi or T_k^inf phi at arbitrary plane points.
SymbolApplication apply_symbol(SymbolKind kind, const GridFunction& phi, double k, std::span<const PlanePoint> targets,
                               const SpectralQuadrature& q);
std::vector<cplx> apply_symbol(SymbolKind kind, std::span<const cplx> phi_hat, std::span<const PlanePoint> targets,
                               const SpectralQuadrature& q);

// As above, then repeats on a quadrature with doubled cutoff and halved
// panels and flags the result when the two disagree by more than tol.
SymbolApplication apply_symbol_checked(SymbolKind kind, const GridFunction& phi, double k,
                                       std::span<const PlanePoint> targets, const ScreenGeometry& geometry,
                                       double accuracy, SpectralOptions options, double tol);

// (i/2) sum w sigma phi^ conj(psi^) with sigma = 1/Z (a_D) or Z (a_N).
cplx sesquilinear_a_D(const GridFunction& phi, const GridFunction& psi, double k, const SpectralQuadrature& q);
cplx sesquilinear_a_N(const GridFunction& phi, const GridFunction& psi, double k, const SpectralQuadrature& q);
cplx sesquilinear_form(SymbolKind kind, std::span<const cplx> phi_hat, std::span<const cplx> psi_hat,
                       const SpectralQuadrature& q);

// Single- and double-layer potentials at points of R^n. On-plane points
// (x_n = 0) are accepted by the single layer but flagged: without the
// evanescent damping the result relies on the decay of phi^ alone.
struct PotentialValue {
  cplx value;
  bool on_plane = false;
};
PotentialValue single_layer_potential(const GridFunction& phi, double k, SpacePoint x, const SpectralQuadrature& q);
PotentialValue double_layer_potential(const GridFunction& phi, double k, SpacePoint x, const SpectralQuadrature& q);
std::vector<cplx> single_layer_potential(std::span<const cplx> phi_hat, std::span<const SpacePoint> xs,
                                         const SpectralQuadrature& q);
std::vector<cplx> double_layer_potential(std::span<const cplx> phi_hat, std::span<const SpacePoint> xs,
                                         const SpectralQuadrature& q);

}  // namespace screenbie
