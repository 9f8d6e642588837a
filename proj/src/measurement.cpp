#include "torsim/measurement.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

PovmWigner povm_photon_number(int m, double eta) {
  if (m < 0) throw InvalidParameterError("povm_photon_number: m must be >= 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw InvalidParameterError("povm_photon_number: efficiency must lie in (0, 1]");
  PovmWigner povm;
  povm.kind = PovmKind::photon_number;
  povm.photon_m = m;
  povm.efficiency = eta;
  povm.support_radius = std::sqrt(2.0 * (2.0 - eta) * 40.0 / eta) + m;
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  const double amplitude =
      sign * std::pow(eta, m) / (kTwoPi * std::pow(2.0 - eta, 1 + m));
  povm.eval = [m, eta, amplitude](double x, double p) {
    const double r2 = x * x + p * p;
    return amplitude * laguerre(m, r2 / (2.0 - eta)) *
           std::exp(-0.5 * eta * r2 / (2.0 - eta));
  };
  return povm;
}

PovmWigner povm_homodyne(double phi, double outcome_x, double sigma) {
  if (!(sigma > 0.0))
    throw InvalidParameterError("povm_homodyne: width must be positive");
  PovmWigner povm;
  povm.kind = PovmKind::homodyne;
  povm.angle_phi = phi;
  povm.outcome = outcome_x;
  povm.width_sigma = sigma;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // Normalized Gaussian ridge carrying the 1/(4 pi) operator factor.
  const double amplitude = 1.0 / (2.0 * kTwoPi * std::sqrt(kTwoPi) * sigma);
  povm.eval = [c, s, outcome_x, sigma, amplitude](double x, double p) {
    const double u = (x * c + p * s - outcome_x) / sigma;
    return amplitude * std::exp(-0.5 * u * u);
  };
  return povm;
}

namespace {

struct Interval {
  double lo = -1e9;
  double hi = 1e9;

  double width() const { return hi - lo; }
  void intersect(double a, double b) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
};

/// |c1 u1 + c2 u2 - center| <= slack.
struct Strip {
  double c1 = 0.0;
  double c2 = 0.0;
  double center = 0.0;
  double slack = 0.0;
};

constexpr double kCoeffTol = 1e-14;

/// Shrinks the (b1, b2) box with a few passes of interval propagation.
void refine_box(const std::vector<Strip>& strips, Interval& b1, Interval& b2) {
  for (int pass = 0; pass < 4; ++pass) {
    for (const Strip& strip : strips) {
      if (std::abs(strip.c1) > kCoeffTol) {
        double other_lo = 0.0, other_hi = 0.0;
        if (std::abs(strip.c2) > kCoeffTol) {
          other_lo = std::min(strip.c2 * b2.lo, strip.c2 * b2.hi);
          other_hi = std::max(strip.c2 * b2.lo, strip.c2 * b2.hi);
        }
        const double lo = (strip.center - strip.slack - other_hi) / strip.c1;
        const double hi = (strip.center + strip.slack - other_lo) / strip.c1;
        b1.intersect(std::min(lo, hi), std::max(lo, hi));
      }
      if (std::abs(strip.c2) > kCoeffTol) {
        double other_lo = 0.0, other_hi = 0.0;
        if (std::abs(strip.c1) > kCoeffTol) {
          other_lo = std::min(strip.c1 * b1.lo, strip.c1 * b1.hi);
          other_hi = std::max(strip.c1 * b1.lo, strip.c1 * b1.hi);
        }
        const double lo = (strip.center - strip.slack - other_hi) / strip.c2;
        const double hi = (strip.center + strip.slack - other_lo) / strip.c2;
        b2.intersect(std::min(lo, hi), std::max(lo, hi));
      }
    }
  }
}

struct ConditionContext {
  const WignerFunction* kept;
  const WignerFunction* measured;
  Eigen::Matrix4d minv;  // rows: a1', a2', b1', b2' in terms of (a1, a2, b1, b2)
  const PovmWigner* povm;
  Axis out_x;
  Axis out_p;
  Interval b1;
  Interval b2;
};

/// Integration box from the POVM support and the state supports, with the
/// output coordinates allowed to roam over the whole output window.
void compute_box(ConditionContext& ctx) {
  std::vector<Strip> strips;
  const double a1_max = std::max(std::abs(ctx.out_x.min), std::abs(ctx.out_x.max));
  const double a2_max = std::max(std::abs(ctx.out_p.min), std::abs(ctx.out_p.max));

  const std::array<double, 4> centers = {ctx.kept->center1, ctx.kept->center2,
                                         ctx.measured->center1,
                                         ctx.measured->center2};
  const std::array<double, 4> widths = {ctx.kept->half_width1, ctx.kept->half_width2,
                                        ctx.measured->half_width1,
                                        ctx.measured->half_width2};
  for (int row = 0; row < 4; ++row) {
    Strip strip;
    strip.c1 = ctx.minv(row, 2);
    strip.c2 = ctx.minv(row, 3);
    if (std::abs(strip.c1) < kCoeffTol && std::abs(strip.c2) < kCoeffTol) continue;
    strip.center = centers[static_cast<size_t>(row)];
    strip.slack = widths[static_cast<size_t>(row)] +
                  std::abs(ctx.minv(row, 0)) * a1_max +
                  std::abs(ctx.minv(row, 1)) * a2_max;
    strips.push_back(strip);
  }
  if (ctx.povm->kind == PovmKind::photon_number) {
    ctx.b1.intersect(-ctx.povm->support_radius, ctx.povm->support_radius);
    ctx.b2.intersect(-ctx.povm->support_radius, ctx.povm->support_radius);
  } else {
    Strip strip;
    strip.c1 = std::cos(ctx.povm->angle_phi);
    strip.c2 = std::sin(ctx.povm->angle_phi);
    strip.center = ctx.povm->outcome;
    strip.slack = 8.0 * ctx.povm->width_sigma;
    strips.push_back(strip);
  }
  refine_box(strips, ctx.b1, ctx.b2);
  if (ctx.b1.width() <= 0.0 || ctx.b2.width() <= 0.0)
    throw NumericalError("condition_product_state: empty integration domain");
  if (ctx.b1.width() > 1e3 || ctx.b2.width() > 1e3)
    throw NumericalError("condition_product_state: unbounded integration domain");
}

/// Variable indices touched by one row of the inverse map.
std::vector<int> row_vars(const Eigen::Matrix4d& m, int row) {
  std::vector<int> vars;
  for (int u = 0; u < 4; ++u) {
    if (std::abs(m(row, u)) > kCoeffTol) vars.push_back(u);
  }
  return vars;
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) return false;
  return true;
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

struct SectorSplit {
  // Row indices into minv: sector s uses rows a_row[s] (kept argument) and
  // b_row[s] (measured argument); int_var[s] is the integration coordinate
  // (2 -> b1, 3 -> b2) and out_var[s] the output coordinate (0 -> x, 1 -> p).
  std::array<int, 2> a_row;
  std::array<int, 2> b_row;
  std::array<int, 2> int_var;
  std::array<int, 2> out_var;
};

/// Checks whether the inverse map splits into two independent sectors, each
/// pairing one output coordinate with one integration coordinate. Then the
/// conditioning integral factorizes per separable term.
bool find_sectors(const Eigen::Matrix4d& minv, SectorSplit& split) {
  const std::vector<int> v0 = row_vars(minv, 0);
  const std::vector<int> v1 = row_vars(minv, 1);
  const std::vector<int> v2 = row_vars(minv, 2);
  const std::vector<int> v3 = row_vars(minv, 3);
  if (!disjoint(v0, v1) || !disjoint(v2, v3)) return false;

  for (int pairing = 0; pairing < 2; ++pairing) {
    const std::vector<int>& ba = pairing == 0 ? v2 : v3;  // B row joining v0
    const std::vector<int>& bb = pairing == 0 ? v3 : v2;
    std::vector<int> s1 = v0;
    s1.insert(s1.end(), ba.begin(), ba.end());
    std::vector<int> s2 = v1;
    s2.insert(s2.end(), bb.begin(), bb.end());
    if (!disjoint(s1, s2)) continue;
    const bool s1_has_b1 = contains(s1, 2);
    const bool s1_has_b2 = contains(s1, 3);
    const bool s2_has_b1 = contains(s2, 2);
    const bool s2_has_b2 = contains(s2, 3);
    if ((s1_has_b1 && s1_has_b2) || (s2_has_b1 && s2_has_b2)) continue;
    const bool s1_has_a1 = contains(s1, 0);
    const bool s1_has_a2 = contains(s1, 1);
    const bool s2_has_a1 = contains(s2, 0);
    const bool s2_has_a2 = contains(s2, 1);
    if ((s1_has_a1 && s1_has_a2) || (s2_has_a1 && s2_has_a2)) continue;

    split.a_row = {0, 1};
    split.b_row = {pairing == 0 ? 2 : 3, pairing == 0 ? 3 : 2};
    split.int_var = {s1_has_b1 ? 2 : 3, s2_has_b1 ? 2 : 3};
    if (split.int_var[0] == split.int_var[1]) {
      // One sector carries no integration variable; give it the unused one.
      split.int_var[s1_has_b1 || s1_has_b2 ? 1 : 0] =
          contains(s1, 2) || contains(s2, 2) ? 3 : 2;
    }
    split.out_var = {s1_has_a2 ? 1 : 0, s2_has_a2 ? 1 : 0};
    if (split.out_var[0] == split.out_var[1]) {
      split.out_var[s1_has_a1 || s1_has_a2 ? 1 : 0] =
          contains(s1, 0) || contains(s2, 0) ? 1 : 0;
    }
    return true;
  }
  return false;
}

Eigen::MatrixXd povm_matrix(const ConditionContext& ctx, const QuadratureRule& q1,
                            const QuadratureRule& q2) {
  const int n1 = static_cast<int>(q1.nodes.size());
  const int n2 = static_cast<int>(q2.nodes.size());
  Eigen::MatrixXd p(n1, n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      p(i, j) = ctx.povm->eval(q1.nodes[static_cast<size_t>(i)],
                               q2.nodes[static_cast<size_t>(j)]) *
                q1.weights[static_cast<size_t>(i)] * q2.weights[static_cast<size_t>(j)];
    }
  }
  return p;
}

/// Factorized evaluation: for each pair of separable terms the sector factors
/// are matrices over (output value, node), and the double integral becomes
/// two small matrix products.
Eigen::MatrixXd evaluate_fast(const ConditionContext& ctx, const SectorSplit& split,
                              int nodes) {
  const QuadratureRule qb1 = gauss_legendre_on(nodes, ctx.b1.lo, ctx.b1.hi);
  const QuadratureRule qb2 = gauss_legendre_on(nodes, ctx.b2.lo, ctx.b2.hi);
  const Eigen::MatrixXd povm = povm_matrix(ctx, qb1, qb2);

  const std::array<const QuadratureRule*, 2> int_rule = {
      split.int_var[0] == 2 ? &qb1 : &qb2, split.int_var[1] == 2 ? &qb1 : &qb2};
  const std::array<const Axis*, 2> out_axis = {
      split.out_var[0] == 0 ? &ctx.out_x : &ctx.out_p,
      split.out_var[1] == 0 ? &ctx.out_x : &ctx.out_p};

  auto sector_matrix = [&](int sector, const std::function<double(double)>& fa,
                           const std::function<double(double)>& fb) {
    const Axis& axis = *out_axis[static_cast<size_t>(sector)];
    const QuadratureRule& rule = *int_rule[static_cast<size_t>(sector)];
    const int a_row = split.a_row[static_cast<size_t>(sector)];
    const int b_row = split.b_row[static_cast<size_t>(sector)];
    const int out_var = split.out_var[static_cast<size_t>(sector)];
    const int int_var = split.int_var[static_cast<size_t>(sector)];
    const int n_nodes = static_cast<int>(rule.nodes.size());
    Eigen::MatrixXd m(axis.n, n_nodes);
    for (int i = 0; i < axis.n; ++i) {
      const double out_val = axis.value(i);
      const double a_fixed = ctx.minv(a_row, out_var) * out_val;
      const double b_fixed = ctx.minv(b_row, out_var) * out_val;
      for (int j = 0; j < n_nodes; ++j) {
        const double node = rule.nodes[static_cast<size_t>(j)];
        const double arg_a = a_fixed + ctx.minv(a_row, int_var) * node;
        const double arg_b = b_fixed + ctx.minv(b_row, int_var) * node;
        m(i, j) = fa(arg_a) * fb(arg_b);
      }
    }
    return m;
  };

  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(ctx.out_x.n, ctx.out_p.n);
  for (const SeparableTerm& ta : ctx.kept->separable) {
    for (const SeparableTerm& tb : ctx.measured->separable) {
      // Kept argument k (row k of A) pairs with the sector that owns row k.
      const auto& fa1 = split.a_row[0] == 0 ? ta.f1 : ta.f2;
      const auto& fa2 = split.a_row[1] == 1 ? ta.f2 : ta.f1;
      const auto& fb1 = split.b_row[0] == 2 ? tb.f1 : tb.f2;
      const auto& fb2 = split.b_row[1] == 3 ? tb.f2 : tb.f1;
      const Eigen::MatrixXd s1 = sector_matrix(0, fa1, fb1);
      const Eigen::MatrixXd s2 = sector_matrix(1, fa2, fb2);
      // povm is indexed (b1 nodes, b2 nodes).
      Eigen::MatrixXd mid;
      if (split.int_var[0] == 2) {
        mid = s1 * povm;  // (out1, b2)
      } else {
        mid = s1 * povm.transpose();  // (out1, b1)
      }
      Eigen::MatrixXd sector_result = mid * s2.transpose();  // (out1, out2)
      if (split.out_var[0] == 0) {
        result += sector_result;
      } else {
        result += sector_result.transpose();
      }
    }
  }
  return 2.0 * kTwoPi * result;  // Born factor 4 pi
}

Eigen::MatrixXd evaluate_direct(const ConditionContext& ctx, int nodes) {
  const QuadratureRule qb1 = gauss_legendre_on(nodes, ctx.b1.lo, ctx.b1.hi);
  const QuadratureRule qb2 = gauss_legendre_on(nodes, ctx.b2.lo, ctx.b2.hi);
  const Eigen::MatrixXd povm = povm_matrix(ctx, qb1, qb2);
  const Eigen::Matrix4d& minv = ctx.minv;

  Eigen::MatrixXd result(ctx.out_x.n, ctx.out_p.n);
  for (int i = 0; i < ctx.out_x.n; ++i) {
    const double a1 = ctx.out_x.value(i);
    for (int j = 0; j < ctx.out_p.n; ++j) {
      const double a2 = ctx.out_p.value(j);
      double acc = 0.0;
      for (size_t ib = 0; ib < qb1.nodes.size(); ++ib) {
        const double b1 = qb1.nodes[ib];
        for (size_t jb = 0; jb < qb2.nodes.size(); ++jb) {
          const double w = povm(static_cast<int>(ib), static_cast<int>(jb));
          if (w == 0.0) continue;
          const double b2 = qb2.nodes[jb];
          const double a1p = minv(0, 0) * a1 + minv(0, 1) * a2 + minv(0, 2) * b1 + minv(0, 3) * b2;
          const double a2p = minv(1, 0) * a1 + minv(1, 1) * a2 + minv(1, 2) * b1 + minv(1, 3) * b2;
          const double b1p = minv(2, 0) * a1 + minv(2, 1) * a2 + minv(2, 2) * b1 + minv(2, 3) * b2;
          const double b2p = minv(3, 0) * a1 + minv(3, 1) * a2 + minv(3, 2) * b1 + minv(3, 3) * b2;
          acc += ctx.kept->eval(a1p, a2p) * ctx.measured->eval(b1p, b2p) * w;
        }
      }
      result(i, j) = 2.0 * kTwoPi * acc;
    }
  }
  return result;
}

}  // namespace

ConditionalResult condition_product_state(const WignerFunction& kept,
                                          const WignerFunction& measured,
                                          const SymplecticMatrix& interaction,
                                          const PovmWigner& povm,
                                          const Axis& out_x, const Axis& out_p,
                                          const QuadratureOptions& options) {
  if (interaction.n_modes() != 2)
    throw InvalidParameterError("condition_product_state: two-mode map required");

  ConditionContext ctx;
  ctx.kept = &kept;
  ctx.measured = &measured;
  ctx.minv = interaction.inverse().matrix();
  ctx.povm = &povm;
  ctx.out_x = out_x;
  ctx.out_p = out_p;
  compute_box(ctx);

  SectorSplit split;
  const bool fast = !kept.separable.empty() && !measured.separable.empty() &&
                    find_sectors(ctx.minv, split);

  auto evaluate = [&](int nodes) {
    return fast ? evaluate_fast(ctx, split, nodes) : evaluate_direct(ctx, nodes);
  };

  int nodes = options.base_nodes;
  Eigen::MatrixXd current = evaluate(nodes);
  for (;;) {
    if (2 * nodes > options.max_nodes)
      throw NumericalError("condition_product_state: quadrature did not converge");
    const Eigen::MatrixXd refined = evaluate(2 * nodes);
    const double scale = std::max(refined.cwiseAbs().maxCoeff(), 1e-300);
    const double diff = (refined - current).cwiseAbs().maxCoeff() / scale;
    current = refined;
    nodes *= 2;
    if (diff <= options.convergence_tol) break;
  }

  ConditionalResult result;
  result.state.x_axis = out_x;
  result.state.p_axis = out_p;
  result.state.values = current;
  result.state.provenance = "conditioned";
  result.success_weight = result.state.integral();
  if (!(result.success_weight > 0.0))
    throw NumericalError("condition_product_state: non-positive outcome weight");
  // Boundary ring mass flags a clipped output window.
  double boundary = 0.0;
  for (int i = 0; i < out_x.n; ++i)
    boundary += std::abs(current(i, 0)) + std::abs(current(i, out_p.n - 1));
  for (int j = 0; j < out_p.n; ++j)
    boundary += std::abs(current(0, j)) + std::abs(current(out_x.n - 1, j));
  boundary *= result.state.dx() * result.state.dp();
  if (boundary > 1e-6 * result.success_weight)
    throw CoverageError("condition_product_state: output grid clips the state");
  result.state.normalize();
  return result;
}

GaussianConditional condition_gaussian_homodyne(const GaussianState& joint,
                                                int measured_mode, double phi,
                                                double outcome) {
  if (joint.n_modes() != 2)
    throw InvalidParameterError("condition_gaussian_homodyne: two-mode state required");
  if (measured_mode != 0 && measured_mode != 1)
    throw InvalidParameterError("condition_gaussian_homodyne: bad mode index");
  const int kept_mode = 1 - measured_mode;
  const int a0 = 2 * kept_mode;
  const int b0 = 2 * measured_mode;

  const Eigen::Matrix2d a = joint.cov().block<2, 2>(a0, a0);
  const Eigen::Matrix2d b = joint.cov().block<2, 2>(b0, b0);
  const Eigen::Matrix2d c = joint.cov().block<2, 2>(a0, b0);
  const Eigen::Vector2d e(std::cos(phi), std::sin(phi));

  const double s = e.dot(b * e);
  if (!(s > 0.0))
    throw NumericalError("condition_gaussian_homodyne: measured variance not positive");
  const Eigen::Vector2d gain = c * e / s;
  const double mean_b = e.dot(joint.mean().segment<2>(b0));

  const Eigen::Vector2d mean =
      joint.mean().segment<2>(a0) + gain * (outcome - mean_b);
  Eigen::Matrix2d cov = a - (c * e) * gain.transpose();
  cov = 0.5 * (cov + cov.transpose().eval());

  GaussianConditional out{GaussianState(mean, cov),
                          std::exp(-0.5 * (outcome - mean_b) * (outcome - mean_b) / s) /
                              std::sqrt(kTwoPi * s)};
  return out;
}

}  // namespace torsim
