#include "torsim/fock_oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

using Complex = std::complex<double>;

void FockDensityMatrix::validate(bool check_spectrum) const {
  const auto dim = rho.rows();
  if (rho.cols() != dim || dim < 1)
    throw InvalidStateError("FockDensityMatrix: not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidStateError("FockDensityMatrix: not hermitian");
  if (std::abs(trace_real() - 1.0) > 1e-10)
    throw InvalidStateError("FockDensityMatrix: trace differs from 1");
  if (check_spectrum && dim <= 400) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    if (solver.info() != Eigen::Success)
      throw NumericalError("FockDensityMatrix: spectrum check failed");
    if (solver.eigenvalues().minCoeff() < -1e-10)
      throw InvalidStateError("FockDensityMatrix: negative eigenvalue");
  }
}

namespace {

Eigen::VectorXcd pure_amplitudes(const StateKind& kind, int truncation) {
  const int dim = truncation + 1;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  if (std::holds_alternative<Vacuum>(kind)) {
    v(0) = 1.0;
  } else if (const auto* fock = std::get_if<Fock>(&kind)) {
    if (fock->n < 0) throw InvalidParameterError("build_state: negative Fock index");
    if (fock->n > truncation)
      throw TruncationError("build_state: Fock index beyond truncation");
    v(fock->n) = 1.0;
  } else if (const auto* coh = std::get_if<Coherent>(&kind)) {
    const double a = coh->alpha;
    if (a == 0.0) {
      v(0) = 1.0;
    } else {
      const double la = std::log(std::abs(a));
      for (int n = 0; n <= truncation; ++n) {
        const double mag = std::exp(-0.5 * a * a + n * la - 0.5 * log_factorial(n));
        v(n) = (a < 0.0 && n % 2 == 1) ? -mag : mag;
      }
    }
  } else if (const auto* sq = std::get_if<Squeezed>(&kind)) {
    const double r = sq->r;
    if (r == 0.0) {
      v(0) = 1.0;
    } else {
      const double t = std::tanh(r);
      const double lt = std::log(std::abs(t));
      const double lc = 0.5 * std::log(std::cosh(r));
      for (int k = 0; 2 * k <= truncation; ++k) {
        const double mag = std::exp(k * lt + 0.5 * log_factorial(2 * k) -
                                    k * std::log(2.0) - log_factorial(k) - lc);
        v(2 * k) = (t < 0.0 && k % 2 == 1) ? -mag : mag;
      }
    }
  } else if (const auto* cat = std::get_if<EvenCat>(&kind)) {
    if (cat->alpha < 0.0)
      throw InvalidParameterError("build_state: cat alpha must be >= 0");
    const double a = cat->alpha;
    if (a == 0.0) {
      v(0) = 1.0;
    } else {
      const double la = std::log(a);
      const double true_norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * a * a)));
      for (int n = 0; n <= truncation; n += 2) {
        v(n) = 2.0 * std::exp(-0.5 * a * a + n * la - 0.5 * log_factorial(n)) /
               true_norm;
      }
    }
  } else {
    throw InvalidParameterError("build_state: not a pure kind");
  }
  return v;
}

}  // namespace

double truncation_deficit(const StateKind& kind, int truncation) {
  if (const auto* th = std::get_if<Thermal>(&kind)) {
    if (th->n_bar < 0.0) throw InvalidParameterError("thermal: n_bar must be >= 0");
    if (th->n_bar == 0.0) return 0.0;
    return std::pow(th->n_bar / (1.0 + th->n_bar), truncation + 1);
  }
  const Eigen::VectorXcd v = pure_amplitudes(kind, truncation);
  return std::max(0.0, 1.0 - v.squaredNorm());
}

FockDensityMatrix build_state(const StateKind& kind, int truncation,
                              double deficit_tol) {
  if (truncation < 0) throw InvalidParameterError("build_state: negative truncation");
  const double deficit = truncation_deficit(kind, truncation);
  if (deficit > deficit_tol)
    throw TruncationError("build_state: truncation deficit " +
                          std::to_string(deficit) + " exceeds tolerance");
  FockDensityMatrix out;
  out.n_modes = 1;
  out.truncation = truncation;
  const int dim = truncation + 1;
  if (const auto* th = std::get_if<Thermal>(&kind)) {
    out.rho = Eigen::MatrixXcd::Zero(dim, dim);
    double total = 0.0;
    for (int n = 0; n <= truncation; ++n) {
      const double p =
          std::pow(th->n_bar / (1.0 + th->n_bar), n) / (1.0 + th->n_bar);
      out.rho(n, n) = p;
      total += p;
    }
    out.rho /= total;
  } else {
    Eigen::VectorXcd v = pure_amplitudes(kind, truncation);
    v.normalize();
    out.rho = v * v.adjoint();
  }
  return out;
}

FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  if (a.n_modes != 1 || b.n_modes != 1)
    throw InvalidParameterError("tensor: single-mode operands required");
  if (a.truncation != b.truncation)
    throw InvalidParameterError("tensor: truncations must match");
  const int d = a.dim_per_mode();
  FockDensityMatrix out;
  out.n_modes = 2;
  out.truncation = a.truncation;
  out.rho.resize(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.rho.block(i * d, j * d, d, d) = a.rho(i, j) * b.rho;
  return out;
}

namespace {

/// exp(theta A_n) on the total-photon-number-n block, where A_n is the
/// antisymmetric tridiagonal generator of a^dag b - a b^dag in the basis
/// |k, n-k>, k = 0..n.
Eigen::MatrixXd block_rotation(int n, double theta) {
  const int dim = n + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Complex im(0.0, 1.0);
  for (int k = 0; k + 1 <= n; ++k) {
    const double g = std::sqrt(static_cast<double>(k + 1) * (n - k));
    h(k + 1, k) = im * g;  // H = i A is hermitian
    h(k, k + 1) = -im * g;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("block_rotation: eigensolve failed");
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i)
    phases(i) = std::exp(-im * theta * solver.eigenvalues()(i));
  const Eigen::MatrixXcd u =
      solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return u.real();
}

}  // namespace

FockDensityMatrix apply_beam_splitter(const FockDensityMatrix& two_mode,
                                      double t_tap, double leak_tol) {
  if (two_mode.n_modes != 2)
    throw InvalidParameterError("apply_beam_splitter: two-mode state required");
  if (!(t_tap >= 0.0 && t_tap <= 1.0))
    throw InvalidParameterError("apply_beam_splitter: transmittance must lie in [0, 1]");
  const int d = two_mode.dim_per_mode();
  const int nmax = two_mode.truncation;
  const double theta = std::acos(std::sqrt(t_tap));

  std::vector<Eigen::MatrixXd> rot;
  rot.reserve(2 * nmax + 1);
  for (int n = 0; n <= 2 * nmax; ++n) rot.push_back(block_rotation(n, theta));

  auto index = [d](int n1, int n2) { return n1 * d + n2; };

  FockDensityMatrix out;
  out.n_modes = 2;
  out.truncation = nmax;
  out.rho = Eigen::MatrixXcd::Zero(d * d, d * d);

  double leakage = 0.0;
  for (int n = 0; n <= 2 * nmax; ++n) {
    for (int np = 0; np <= 2 * nmax; ++np) {
      // Embed the (n, np) coherence block, rotate exactly, keep the part
      // below the per-mode cutoff.
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n + 1, np + 1);
      bool any = false;
      for (int k = std::max(0, n - nmax); k <= std::min(n, nmax); ++k) {
        for (int kp = std::max(0, np - nmax); kp <= std::min(np, nmax); ++kp) {
          const Complex v = two_mode.rho(index(k, n - k), index(kp, np - kp));
          if (v != Complex(0.0, 0.0)) any = true;
          block(k, kp) = v;
        }
      }
      if (!any) continue;
      const Eigen::MatrixXcd rotated = rot[n] * block * rot[np].transpose();
      for (int k = 0; k <= n; ++k) {
        for (int kp = 0; kp <= np; ++kp) {
          const bool valid =
              k <= nmax && n - k <= nmax && kp <= nmax && np - kp <= nmax;
          if (valid) {
            out.rho(index(k, n - k), index(kp, np - kp)) = rotated(k, kp);
          } else if (n == np && k == kp) {
            leakage += rotated(k, kp).real();
          }
        }
      }
    }
  }
  if (leakage > leak_tol)
    throw TruncationError("apply_beam_splitter: truncation leakage " +
                          std::to_string(leakage) + " exceeds tolerance");
  const double trace = out.trace_real();
  if (!(trace > 0.0)) throw NumericalError("apply_beam_splitter: trace collapsed");
  out.rho /= trace;
  return out;
}

std::vector<double> photon_number_povm_diagonal(int m, double eta, int truncation) {
  if (m < 0) throw InvalidParameterError("photon POVM: m must be >= 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw InvalidParameterError("photon POVM: efficiency must lie in (0, 1]");
  std::vector<double> diag(static_cast<size_t>(truncation) + 1, 0.0);
  for (int k = m; k <= truncation; ++k) {
    const double log_binom =
        log_factorial(k) - log_factorial(m) - log_factorial(k - m);
    double term = std::exp(log_binom + m * std::log(eta));
    if (k > m) term *= std::pow(1.0 - eta, k - m);
    diag[static_cast<size_t>(k)] = term;
  }
  return diag;
}

FockConditional apply_povm_and_condition(const FockDensityMatrix& two_mode, int m,
                                         double eta) {
  if (two_mode.n_modes != 2)
    throw InvalidParameterError("apply_povm_and_condition: two-mode state required");
  const int d = two_mode.dim_per_mode();
  const std::vector<double> povm =
      photon_number_povm_diagonal(m, eta, two_mode.truncation);

  FockConditional out;
  out.state.n_modes = 1;
  out.state.truncation = two_mode.truncation;
  out.state.rho = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int ap = 0; ap < d; ++ap) {
      Complex sum(0.0, 0.0);
      for (int k = 0; k < d; ++k) {
        const double w = povm[static_cast<size_t>(k)];
        if (w == 0.0) continue;
        sum += two_mode.rho(a * d + k, ap * d + k) * w;
      }
      out.state.rho(a, ap) = sum;
    }
  }
  out.probability = out.state.rho.trace().real();
  if (out.probability < 1e-14)
    throw NumericalError("apply_povm_and_condition: outcome probability below 1e-14");
  out.state.rho /= out.probability;
  return out;
}

Eigen::Vector4d mode_quadrature_means(const FockDensityMatrix& two_mode) {
  if (two_mode.n_modes != 2)
    throw InvalidParameterError("mode_quadrature_means: two-mode state required");
  const int d = two_mode.dim_per_mode();
  Complex a1(0.0, 0.0);
  Complex a2(0.0, 0.0);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      if (n1 > 0)
        a1 += std::sqrt(double(n1)) * two_mode.rho(n1 * d + n2, (n1 - 1) * d + n2);
      if (n2 > 0)
        a2 += std::sqrt(double(n2)) * two_mode.rho(n1 * d + n2, n1 * d + n2 - 1);
    }
  }
  Eigen::Vector4d means;
  means << 2.0 * a1.real(), 2.0 * a1.imag(), 2.0 * a2.real(), 2.0 * a2.imag();
  return means;
}

namespace {

/// Tr[rho D(beta)] for hermitian rho, accumulated by Fock-index offset with
/// the e^{-|beta|^2/2} envelope folded into the Laguerre recurrences so large
/// |beta| stays in range.
class ChiWorkspace {
 public:
  explicit ChiWorkspace(const Eigen::MatrixXcd& rho) : rho_(rho) {
    nmax_ = static_cast<int>(rho.rows()) - 1;
    prefac_.resize(nmax_ + 1, nmax_ + 1);
    offset_used_.assign(static_cast<size_t>(nmax_) + 1, false);
    for (int off = 0; off <= nmax_; ++off) {
      double peak = 0.0;
      for (int m = 0; m + off <= nmax_; ++m) {
        prefac_(off, m) =
            std::exp(0.5 * (log_factorial(m) - log_factorial(m + off)));
        peak = std::max(peak, std::abs(rho_(m, m + off)));
      }
      offset_used_[static_cast<size_t>(off)] = peak > 1e-18;
    }
  }

  Complex operator()(Complex beta) const {
    const double u = std::norm(beta);
    const double envelope = std::exp(-0.5 * u);
    Complex sum(0.0, 0.0);

    if (offset_used_[0]) {
      double l0 = envelope;
      double l1 = (1.0 - u) * envelope;
      for (int n = 0; n <= nmax_; ++n) {
        double ln;
        if (n == 0) {
          ln = l0;
        } else if (n == 1) {
          ln = l1;
        } else {
          ln = ((2.0 * (n - 1) + 1.0 - u) * l1 - (n - 1) * l0) / n;
          l0 = l1;
          l1 = ln;
        }
        sum += rho_(n, n).real() * ln;
      }
    }

    Complex beta_pow(1.0, 0.0);
    for (int off = 1; off <= nmax_; ++off) {
      beta_pow *= beta;
      if (!offset_used_[static_cast<size_t>(off)]) continue;
      const double parity = off % 2 == 0 ? 1.0 : -1.0;
      double l0 = envelope;
      double l1 = (1.0 + off - u) * envelope;
      for (int m = 0; m + off <= nmax_; ++m) {
        double lm;
        if (m == 0) {
          lm = l0;
        } else if (m == 1) {
          lm = l1;
        } else {
          lm = ((2.0 * (m - 1) + 1.0 + off - u) * l1 - (m - 1 + off) * l0) / m;
          l0 = l1;
          l1 = lm;
        }
        const Complex z = rho_(m, m + off) * beta_pow;
        sum += prefac_(off, m) * lm * (z + parity * std::conj(z));
      }
    }
    return sum;
  }

 private:
  const Eigen::MatrixXcd& rho_;
  int nmax_ = 0;
  Eigen::MatrixXd prefac_;
  std::vector<bool> offset_used_;
};

GridWigner fourier_to_grid(const Eigen::MatrixXcd& chi, double beta_max,
                           const Axis& x_axis, const Axis& p_axis) {
  const int nb = static_cast<int>(chi.rows());
  const double db = 2.0 * beta_max / (nb - 1);
  const Complex im(0.0, 1.0);

  // W(x, p) = (2 pi)^{-2} int chi(beta) exp(-i (x Im beta - p Re beta)) d2beta
  Eigen::MatrixXcd partial(x_axis.n, nb);  // Im(beta) summed out
  Eigen::VectorXcd phase(nb);
  for (int ix = 0; ix < x_axis.n; ++ix) {
    const double x = x_axis.value(ix);
    for (int ii = 0; ii < nb; ++ii) {
      const double bi = -beta_max + ii * db;
      phase(ii) = std::exp(-im * x * bi);
    }
    for (int ir = 0; ir < nb; ++ir) {
      Complex acc(0.0, 0.0);
      for (int ii = 0; ii < nb; ++ii) acc += chi(ir, ii) * phase(ii);
      partial(ix, ir) = acc * db;
    }
  }

  GridWigner w;
  w.x_axis = x_axis;
  w.p_axis = p_axis;
  w.values.resize(x_axis.n, p_axis.n);
  const double scale = 1.0 / (kTwoPi * kTwoPi);
  double max_imag = 0.0;
  for (int jp = 0; jp < p_axis.n; ++jp) {
    const double p = p_axis.value(jp);
    for (int ir = 0; ir < nb; ++ir) {
      const double br = -beta_max + ir * db;
      phase(ir) = std::exp(im * p * br);
    }
    for (int ix = 0; ix < x_axis.n; ++ix) {
      Complex acc(0.0, 0.0);
      for (int ir = 0; ir < nb; ++ir) acc += partial(ix, ir) * phase(ir);
      acc *= db * scale;
      max_imag = std::max(max_imag, std::abs(acc.imag()));
      w.values(ix, jp) = acc.real();
    }
  }
  if (max_imag > 1e-6)
    throw NumericalError("wigner_reconstruct: imaginary residue indicates aliasing");
  return w;
}

void auto_beta(const Axis& x_axis, const Axis& p_axis, int truncation,
               double& beta_max, int& beta_points) {
  if (beta_max <= 0.0)
    beta_max = 2.0 * std::sqrt(static_cast<double>(truncation)) + 8.0;
  if (beta_points <= 0) {
    const double reach = std::max({std::abs(x_axis.min), std::abs(x_axis.max),
                                   std::abs(p_axis.min), std::abs(p_axis.max)});
    // Poisson images sit 2 pi / db away; keep them past twice the grid reach.
    const double db = std::min(0.15, 1.5 / reach);
    beta_points = static_cast<int>(std::ceil(2.0 * beta_max / db)) + 1;
    if (beta_points % 2 == 0) ++beta_points;  // symmetric grid including 0
  }
}

}  // namespace

std::complex<double> characteristic_function(const FockDensityMatrix& single_mode,
                                             std::complex<double> beta) {
  if (single_mode.n_modes != 1)
    throw InvalidParameterError("characteristic_function: single-mode state required");
  return ChiWorkspace(single_mode.rho)(beta);
}

GridWigner wigner_reconstruct(const FockDensityMatrix& single_mode,
                              const Axis& x_axis, const Axis& p_axis,
                              double beta_max, int beta_points, double* raw_norm) {
  if (single_mode.n_modes != 1)
    throw InvalidParameterError("wigner_reconstruct: single-mode state required");
  auto_beta(x_axis, p_axis, single_mode.truncation, beta_max, beta_points);

  const ChiWorkspace chi_of(single_mode.rho);
  const int nb = beta_points;
  const double db = 2.0 * beta_max / (nb - 1);
  Eigen::MatrixXcd chi(nb, nb);
  for (int ir = 0; ir < nb; ++ir) {
    const double br = -beta_max + ir * db;
    for (int ii = 0; ii < nb; ++ii) {
      const double bi = -beta_max + ii * db;
      chi(ir, ii) = chi_of(Complex(br, bi));
    }
  }

  GridWigner w = fourier_to_grid(chi, beta_max, x_axis, p_axis);
  w.provenance = "oracle_reconstruction";
  const double norm = w.integral();
  if (raw_norm != nullptr) *raw_norm = norm;
  if (std::abs(norm - 1.0) > 1e-4)
    throw NumericalError("wigner_reconstruct: norm error " +
                         std::to_string(norm - 1.0) +
                         " indicates insufficient beta resolution");
  w.normalize();
  return w;
}

GridWigner povm_wigner_reconstruct(int m, double eta, int truncation,
                                   const Axis& x_axis, const Axis& p_axis) {
  const std::vector<double> diag = photon_number_povm_diagonal(m, eta, truncation);
  double beta_max = 0.0;
  int beta_points = 0;
  auto_beta(x_axis, p_axis, truncation, beta_max, beta_points);

  const int nb = beta_points;
  const double db = 2.0 * beta_max / (nb - 1);
  Eigen::MatrixXcd chi(nb, nb);
  for (int ir = 0; ir < nb; ++ir) {
    const double br = -beta_max + ir * db;
    for (int ii = 0; ii < nb; ++ii) {
      const double bi = -beta_max + ii * db;
      const double u = br * br + bi * bi;
      const double envelope = std::exp(-0.5 * u);
      // Envelope-folded Laguerre recurrence over the diagonal.
      double sum = 0.0;
      double l0 = envelope;
      double l1 = (1.0 - u) * envelope;
      for (int k = 0; k <= truncation; ++k) {
        double lk;
        if (k == 0) {
          lk = l0;
        } else if (k == 1) {
          lk = l1;
        } else {
          lk = ((2.0 * (k - 1) + 1.0 - u) * l1 - (k - 1) * l0) / k;
          l0 = l1;
          l1 = lk;
        }
        sum += diag[static_cast<size_t>(k)] * lk;
      }
      chi(ir, ii) = sum;
    }
  }
  GridWigner w = fourier_to_grid(chi, beta_max, x_axis, p_axis);
  w.provenance = "povm_oracle_reconstruction";
  w.normalized = false;
  double trace = 0.0;
  for (double v : diag) trace += v;
  if (std::abs(w.integral() - trace) > 1e-3 * std::max(1.0, trace))
    throw NumericalError("povm_wigner_reconstruct: integral drifted from operator trace");
  return w;
}

}  // namespace torsim
