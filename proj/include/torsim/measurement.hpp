#pragma once

#include <functional>

#include "torsim/phase_space.hpp"
#include "torsim/symplectic.hpp"

namespace torsim {

enum class PovmKind { photon_number, homodyne };

/// Measurement-operator Wigner function. Evaluators carry the operator
/// normalization, so Born-rule weights come out as true probabilities
/// (photon outcomes sum to 1, homodyne outcome densities integrate to 1).
struct PovmWigner {
  PovmKind kind = PovmKind::photon_number;
  int photon_m = 0;
  double efficiency = 1.0;
  double angle_phi = 0.0;
  double outcome = 0.0;
  double width_sigma = 0.05;
  /// Radial cutoff beyond which the photon evaluator is negligible.
  double support_radius = 0.0;
  std::function<double(double, double)> eval;

  double operator()(double x, double p) const { return eval(x, p); }
};

/// Photon-number-resolving POVM with efficiency eta in (0, 1].
PovmWigner povm_photon_number(int m, double eta);

/// Homodyne projector onto the rotated quadrature x cos(phi) + p sin(phi),
/// delta ridge regularized as a normalized Gaussian of width sigma.
PovmWigner povm_homodyne(double phi, double outcome_x, double sigma = 0.05);

struct ConditionalResult {
  GridWigner state;
  double success_weight = 0.0;
};

struct QuadratureOptions {
  int base_nodes = 64;
  int max_nodes = 512;
  double convergence_tol = 1e-5;
};

/// Projects mode B of the product state (kept x measured) evolved under the
/// two-mode map onto the POVM and returns the normalized mode-A state with
/// the outcome probability (photon POVM) or density (homodyne POVM):
///
///   W'(r_A) = 4 pi int d2 r_B  W_A(r0_A) W_B(r0_B) W_POVM(r_B),
///   (r0_A, r0_B) = M^{-1} (r_A, r_B).
///
/// The inner integral runs per output point on tensor Gauss-Legendre nodes
/// over the support of the POVM-state product; node counts double until the
/// result is stable to convergence_tol (NumericalError beyond max_nodes).
ConditionalResult condition_product_state(const WignerFunction& kept,
                                          const WignerFunction& measured,
                                          const SymplecticMatrix& interaction,
                                          const PovmWigner& povm,
                                          const Axis& out_x, const Axis& out_p,
                                          const QuadratureOptions& options = {});

struct GaussianConditional {
  GaussianState state;
  double weight_density = 0.0;
};

/// Exact Gaussian update after an ideal homodyne measurement of the rotated
/// quadrature of one mode of a two-mode Gaussian state.
GaussianConditional condition_gaussian_homodyne(const GaussianState& joint,
                                                int measured_mode, double phi,
                                                double outcome);

}  // namespace torsim
