#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "torsim/phase_space.hpp"

namespace torsim {

/// Truncated-Fock-space density matrix. For two modes the basis index is
/// n1 * (truncation + 1) + n2.
struct FockDensityMatrix {
  int n_modes = 1;
  int truncation = 0;
  Eigen::MatrixXcd rho;

  int dim_per_mode() const { return truncation + 1; }
  double trace_real() const { return rho.trace().real(); }
  /// Hermiticity, unit trace, positivity (spectrum checked only for small
  /// dimensions; the check is O(dim^3)).
  void validate(bool check_spectrum = true) const;
};

struct Vacuum {};
struct Fock {
  int n = 0;
};
struct Coherent {
  double alpha = 0.0;
};
struct Squeezed {
  double r = 0.0;
};
struct Thermal {
  double n_bar = 0.0;
};
struct EvenCat {
  double alpha = 0.0;
};

using StateKind = std::variant<Vacuum, Fock, Coherent, Squeezed, Thermal, EvenCat>;

/// Builds the normalized truncated state; throws TruncationError when the
/// truncated-norm deficit exceeds deficit_tol.
FockDensityMatrix build_state(const StateKind& kind, int truncation,
                              double deficit_tol = 1e-10);

/// Norm lost to truncation for the given state at the given cutoff.
double truncation_deficit(const StateKind& kind, int truncation);

FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b);

/// Conjugation by exp[theta (a^dag b - a b^dag)] with cos(theta) = sqrt(t_tap),
/// whose induced quadrature map equals beam_splitter(t_tap). Total photon
/// number blocks are rotated exactly; mass rotated beyond the per-mode cutoff
/// is dropped (TruncationError above leak_tol) and the trace renormalized.
FockDensityMatrix apply_beam_splitter(const FockDensityMatrix& two_mode,
                                      double t_tap, double leak_tol = 1e-8);

/// Photon-number POVM diagonal <k|Pi_m(eta)|k> = C(k,m) eta^m (1-eta)^{k-m}.
std::vector<double> photon_number_povm_diagonal(int m, double eta, int truncation);

struct FockConditional {
  FockDensityMatrix state;  // single mode
  double probability = 0.0;
};

/// Detects m photons (efficiency eta) on mode 2 and returns the conditional
/// mode-1 state with the outcome probability.
FockConditional apply_povm_and_condition(const FockDensityMatrix& two_mode, int m,
                                         double eta);

/// Quadrature means (x1, p1, x2, p2) of a two-mode state.
Eigen::Vector4d mode_quadrature_means(const FockDensityMatrix& two_mode);

/// Characteristic function Tr[rho D(beta)] of a single-mode state.
std::complex<double> characteristic_function(const FockDensityMatrix& single_mode,
                                             std::complex<double> beta);

/// Wigner reconstruction through the characteristic function on a beta grid
/// followed by the numeric Fourier transform. beta_max / beta_points <= 0
/// select automatic values from the truncation and target axes; raw_norm
/// receives the pre-normalization integral when given.
GridWigner wigner_reconstruct(const FockDensityMatrix& single_mode,
                              const Axis& x_axis, const Axis& p_axis,
                              double beta_max = 0.0, int beta_points = 0,
                              double* raw_norm = nullptr);

/// Raw (unnormalized) Wigner function of the photon-number POVM operator,
/// reconstructed through its characteristic function.
GridWigner povm_wigner_reconstruct(int m, double eta, int truncation,
                                   const Axis& x_axis, const Axis& p_axis);

}  // namespace torsim
