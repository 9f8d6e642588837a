#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "torsim/coupling.hpp"
#include "torsim/errors.hpp"
#include "torsim/fock_oracle.hpp"
#include "torsim/io.hpp"
#include "torsim/measurement.hpp"
#include "torsim/mode_solver.hpp"
#include "torsim/numerics.hpp"
#include "torsim/params.hpp"
#include "torsim/phase_space.hpp"
#include "torsim/protocols.hpp"
#include "torsim/symplectic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace torsim;

namespace {

struct RunConfig {
  fs::path params_file;
  std::string protocol;
  fs::path output_dir = ".";
  long seed = 0;  // reserved; every computation is deterministic
  int grid_points = 401;
  double grid_span = 10.0;
  bool grid_span_explicit = false;
  int truncation = 40;
  double g_hz = kReferenceCouplingHz;
  double chi = 1.0;
  std::optional<double> n_bar;
  double temperature_k = 0.1;
  std::optional<double> n_in;
  CatPrepConfig cat;
  std::string optical_kind = "even_cat";  // mech-prep input: fock | even_cat
  int optical_fock_n = 1;
  double optical_alpha = 2.0;
  bool optical_along_p = true;
};

double require_number(const json& j, const char* key) {
  if (!j[key].is_number())
    throw ConfigError(std::string("config key is not a number: ") + key);
  return j[key].get<double>();
}

void apply_json(RunConfig& cfg, const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "params_file") cfg.params_file = value.get<std::string>();
    else if (key == "protocol") cfg.protocol = value.get<std::string>();
    else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<long>();
    else if (key == "grid_points") cfg.grid_points = value.get<int>();
    else if (key == "grid_span") { cfg.grid_span = require_number(j, "grid_span"); cfg.grid_span_explicit = true; }
    else if (key == "truncation") cfg.truncation = value.get<int>();
    else if (key == "g_hz") cfg.g_hz = require_number(j, "g_hz");
    else if (key == "chi") cfg.chi = require_number(j, "chi");
    else if (key == "n_bar") cfg.n_bar = require_number(j, "n_bar");
    else if (key == "temperature_K") cfg.temperature_k = require_number(j, "temperature_K");
    else if (key == "n_in") cfg.n_in = require_number(j, "n_in");
    else if (key == "r1") cfg.cat.r1 = require_number(j, "r1");
    else if (key == "r2") cfg.cat.r2 = require_number(j, "r2");
    else if (key == "t_tap") cfg.cat.t_tap = require_number(j, "t_tap");
    else if (key == "m") cfg.cat.subtract_m = value.get<int>();
    else if (key == "eta") cfg.cat.eta = require_number(j, "eta");
    else if (key == "v_theta") cfg.cat.v_theta = require_number(j, "v_theta");
    else if (key == "v_l") cfg.cat.v_l = require_number(j, "v_l");
    else if (key == "homodyne_outcome_p") cfg.cat.homodyne_outcome_p = require_number(j, "homodyne_outcome_p");
    else if (key == "optical_kind") cfg.optical_kind = value.get<std::string>();
    else if (key == "optical_fock_n") cfg.optical_fock_n = value.get<int>();
    else if (key == "optical_alpha") cfg.optical_alpha = require_number(j, "optical_alpha");
    else if (key == "optical_along_p") cfg.optical_along_p = value.get<bool>();
    else throw ConfigError("unknown config key: " + key);
  }
}

struct Artifacts {
  json report;
  std::string summary;
  std::vector<std::pair<std::string, GridWigner>> grids;
  std::vector<std::optional<double>> weights;
};

void add_grid(Artifacts& a, const std::string& name, const GridWigner& grid,
              std::optional<double> weight = std::nullopt) {
  a.grids.emplace_back(name, grid);
  a.weights.push_back(weight);
}

json derived_to_json(const PhysicalParams& p, const DerivedParams& d,
                     const std::vector<std::string>& warnings) {
  json j;
  j["k_t"] = d.k_t;
  j["I_eff"] = d.I_eff;
  j["theta_zp"] = d.theta_zp;
  j["delta_eps"] = d.delta_eps;
  j["g_hz"] = d.g_coupling;
  j["chi"] = d.chi;
  j["photon_threshold_chi1"] = photon_threshold(d.g_coupling, p.cavity_kappa, 1.0);
  j["warnings"] = warnings;
  return j;
}

Artifacts run_params_report(const RunConfig& cfg, const PhysicalParams& p) {
  const std::vector<std::string> warnings = p.validate();
  const DerivedParams d = derive_params(p, cfg.g_hz, cfg.n_in ? *cfg.n_in : -1.0);
  Artifacts a;
  a.report = derived_to_json(p, d, warnings);
  a.report["mode_square_integral"] =
      cosine_mode_square_integral(d.k_t, p.beam_length_L);
  a.report["n_bar_at_temperature"] =
      thermal_occupation(cfg.temperature_k, p.torsion_freq_Omega);
  a.report["temperature_K"] = cfg.temperature_k;

  std::string s;
  s += "derived parameters\n";
  s += "  k_t                 = " + format_full(d.k_t) +
       " 1/m (from Omega / c_t; the tabulated half value is inconsistent with "
       "the defining ratio)\n";
  s += "  I_eff               = " + format_full(d.I_eff) + " kg m^2\n";
  s += "  theta_zp            = " + format_full(d.theta_zp) + " rad\n";
  s += "  delta_eps           = " + format_full(d.delta_eps) + "\n";
  s += "  g                   = " + format_full(d.g_coupling) + " Hz\n";
  s += "  chi                 = " + format_full(d.chi) + "\n";
  s += "  N_in for chi = 1    = " +
       format_full(photon_threshold(d.g_coupling, p.cavity_kappa, 1.0)) + "\n";
  for (const auto& w : warnings) s += "  warning: " + w + "\n";
  a.summary = s;
  return a;
}

Artifacts run_coupling_report(const RunConfig& cfg, const PhysicalParams& p) {
  p.validate();
  const DerivedParams d = derive_params(p, cfg.g_hz, cfg.n_in ? *cfg.n_in : -1.0);
  OverlapInputs inputs;
  inputs.L = p.beam_length_L;
  inputs.beta1 = p.beta1;
  inputs.beta2 = p.beta2;
  inputs.k_t = d.k_t;
  inputs.transverse_factor = 1.0;
  const double omega = kTwoPi * kSpeedOfLight / p.wavelength_lambda;
  const double overlap =
      longitudinal_overlap_closed(inputs.L, inputs.beta1, inputs.beta2, inputs.k_t);
  const double g_estimate =
      g12ma_estimate(d.theta_zp, d.delta_eps, omega, omega, inputs);
  const CouplingBreakdown table = reference_breakdown();

  Artifacts a;
  a.report["longitudinal_overlap"] = overlap;
  a.report["g_oe_longitudinal"] =
      g_oe_longitudinal(inputs.L, inputs.beta1, inputs.beta2, inputs.k_t);
  a.report["g12ma_estimate_hz"] = g_estimate;
  a.report["g12ma_scale"] = g12ma_scale();
  a.report["breakdown_hz"] = {{"g12ma", table.g12ma}, {"g11ma", table.g11ma},
                              {"g22ma", table.g22ma}, {"g12mb", table.g12mb},
                              {"g11mb", table.g11mb}, {"g22mb", table.g22mb},
                              {"g_oe", table.g_oe}};
  a.report["chi"] = d.chi;
  a.report["photon_threshold_chi1"] =
      photon_threshold(d.g_coupling, p.cavity_kappa, 1.0);

  std::string s;
  s += "coupling report\n";
  s += "  longitudinal overlap = " + format_full(overlap) + "\n";
  s += "  g12ma estimate       = " + format_full(g_estimate) + " Hz\n";
  s += "  g12mb (carried)      = " + format_full(table.g12mb) + " Hz\n";
  s += "  g_oe                 = 0 (odd integrand)\n";
  s += "  chi                  = " + format_full(d.chi) + "\n";
  s += "  N_in for chi = 1     = " +
       format_full(photon_threshold(d.g_coupling, p.cavity_kappa, 1.0)) + "\n";
  a.summary = s;
  return a;
}

Artifacts run_squeeze(const RunConfig& cfg, const PhysicalParams& p) {
  const double n_bar = cfg.n_bar ? *cfg.n_bar
                                 : thermal_occupation(cfg.temperature_k,
                                                      p.torsion_freq_Omega);
  const SqueezeReport rep = single_pulse_squeeze(n_bar, cfg.chi);
  Artifacts a;
  a.report["n_bar"] = rep.n_bar;
  a.report["chi"] = rep.chi;
  a.report["var_theta_out"] = rep.var_theta_out;
  a.report["var_l_out"] = rep.var_l_out;
  a.report["n_eff"] = rep.n_eff;
  a.report["weight_density"] = rep.weight_density;

  const double span = std::max(cfg.grid_span, 5.0 * std::sqrt(rep.var_l_out));
  Eigen::Matrix2d cov;
  cov << rep.var_theta_out, 0.0, 0.0, rep.var_l_out;
  const GridWigner grid = gaussian_to_grid(
      GaussianState(Eigen::Vector2d::Zero(), cov),
      symmetric_axis(span, cfg.grid_points), symmetric_axis(span, cfg.grid_points));
  add_grid(a, "state_squeezed", grid, rep.weight_density);

  std::string s;
  s += "single-pulse squeezing\n";
  s += "  n_bar        = " + format_full(rep.n_bar) + "\n";
  s += "  chi          = " + format_full(rep.chi) + "\n";
  s += "  var(theta)   = " + format_full(rep.var_theta_out) + "\n";
  s += "  var(L)       = " + format_full(rep.var_l_out) + "\n";
  s += "  n_eff        = " + format_full(rep.n_eff) + "\n";
  a.summary = s;
  return a;
}

double auto_gps_span(const RunConfig& cfg) {
  const double sigma =
      std::exp(std::max(std::abs(cfg.cat.r1), std::abs(cfg.cat.r2)));
  return std::max(cfg.grid_span, std::ceil(5.5 * sigma));
}

Artifacts run_gps_cat(const RunConfig& cfg) {
  const double span = cfg.grid_span_explicit ? cfg.grid_span : auto_gps_span(cfg);
  const Axis axis = symmetric_axis(span, cfg.grid_points);
  const ConditionalResult result = gps_optical_cat(cfg.cat, axis, axis);
  Artifacts a;
  a.report["t_tap"] = cfg.cat.tap();
  a.report["m"] = cfg.cat.subtract_m;
  a.report["eta"] = cfg.cat.eta;
  a.report["success_weight"] = result.success_weight;
  a.report["negativity_volume"] = negativity_volume(result.state);
  add_grid(a, "state_gps_cat", result.state, result.success_weight);

  std::string s;
  s += "generalized photon subtraction\n";
  s += "  t_tap             = " + format_full(cfg.cat.tap()) + "\n";
  s += "  m                 = " + std::to_string(cfg.cat.subtract_m) + "\n";
  s += "  success weight    = " + format_full(result.success_weight) + "\n";
  s += "  negativity volume = " + format_full(negativity_volume(result.state)) + "\n";
  a.summary = s;
  return a;
}

WignerFunction make_optical_input(const RunConfig& cfg) {
  if (cfg.optical_kind == "fock") return WignerFunction::from_fock(cfg.optical_fock_n);
  if (cfg.optical_kind == "even_cat")
    return WignerFunction::from_even_cat(cfg.optical_alpha, cfg.optical_along_p);
  throw ConfigError("unknown config value for key optical_kind: " + cfg.optical_kind);
}

Artifacts run_mech_prep(const RunConfig& cfg) {
  const Axis axis = symmetric_axis(cfg.grid_span, cfg.grid_points);
  const ConditionalResult result =
      mechanical_state_prep(make_optical_input(cfg), cfg.cat, axis, axis);

  Artifacts a;
  a.report["success_weight"] = result.success_weight;
  a.report["negativity_volume"] = negativity_volume(result.state);
  a.report["optical_kind"] = cfg.optical_kind;

  if (cfg.optical_kind == "fock" && cfg.optical_fock_n == 1) {
    const GridWigner ref =
        closed_form_fock_transfer(cfg.cat.v_theta, cfg.cat.v_l, axis, axis);
    a.report["closed_form_linf"] =
        (result.state.values - ref.values).cwiseAbs().maxCoeff();
    a.report["closed_form_fidelity"] = fidelity_overlap(result.state, ref);
  } else if (cfg.optical_kind == "even_cat" && cfg.optical_along_p) {
    const GridWigner ref = closed_form_cat_transfer(cfg.cat.v_theta, cfg.cat.v_l,
                                                    cfg.optical_alpha, axis, axis);
    a.report["closed_form_linf"] =
        (result.state.values - ref.values).cwiseAbs().maxCoeff();
    a.report["closed_form_fidelity"] = fidelity_overlap(result.state, ref);
  }
  add_grid(a, "state_mechanical", result.state, result.success_weight);

  std::string s;
  s += "mechanical state preparation\n";
  s += "  optical input     = " + cfg.optical_kind + "\n";
  s += "  success weight    = " + format_full(result.success_weight) + "\n";
  s += "  negativity volume = " + format_full(negativity_volume(result.state)) + "\n";
  if (a.report.contains("closed_form_linf"))
    s += "  closed-form Linf  = " +
         format_full(a.report["closed_form_linf"].get<double>()) + "\n";
  a.summary = s;
  return a;
}

Artifacts run_two_pulse(const RunConfig& cfg, const PhysicalParams& p) {
  const double n_bar = cfg.n_bar ? *cfg.n_bar
                                 : thermal_occupation(cfg.temperature_k,
                                                      p.torsion_freq_Omega);
  const Axis axis = symmetric_axis(cfg.grid_span, cfg.grid_points);
  const TwoPulseResult result =
      two_pulse_protocol(n_bar, cfg.chi, cfg.cat, axis, axis, cfg.grid_points);

  Artifacts a;
  a.report["n_bar"] = n_bar;
  a.report["chi"] = cfg.chi;
  a.report["t_tap"] = result.t_tap;
  a.report["cooling"] = {{"var_theta_out", result.cooling.var_theta_out},
                         {"var_l_out", result.cooling.var_l_out},
                         {"n_eff", result.cooling.n_eff}};
  a.report["gps_weight"] = result.gps_weight;
  a.report["prep_weight"] = result.prep_weight;
  a.report["total_weight"] = result.total_weight;
  a.report["negativity_volume"] = negativity_volume(result.final_state.state);
  add_grid(a, "state_two_pulse", result.final_state.state,
           result.final_state.success_weight);

  std::string s;
  s += "two-pulse protocol\n";
  s += "  n_bar             = " + format_full(n_bar) + "\n";
  s += "  cooled n_eff      = " + format_full(result.cooling.n_eff) + "\n";
  s += "  t_tap             = " + format_full(result.t_tap) + "\n";
  s += "  negativity volume = " +
       format_full(negativity_volume(result.final_state.state)) + "\n";
  a.summary = s;
  return a;
}

Artifacts run_oracle_check(const RunConfig& cfg) {
  Artifacts a;
  json checks = json::array();
  const int n_points = std::min(cfg.grid_points, 201);

  for (int n = 0; n <= 2; ++n) {
    const Axis axis = symmetric_axis(10.0, n_points);
    const GridWigner closed = make_fock_wigner(n, n_points, 10.0);
    const GridWigner oracle =
        wigner_reconstruct(build_state(Fock{n}, cfg.truncation, 1e-9), axis, axis);
    checks.push_back(
        {{"case", "fock_" + std::to_string(n)},
         {"linf", (closed.values - oracle.values).cwiseAbs().maxCoeff()}});
  }
  {
    const double alpha = cfg.optical_alpha;
    const double span = std::max(10.0, 2.0 * alpha + 8.0);
    const Axis axis = symmetric_axis(span, n_points);
    const GridWigner closed = sample_grid(
        axis, axis,
        [alpha](double x, double p) { return even_cat_wigner(x, p, alpha); }, true,
        "even_cat");
    const GridWigner oracle =
        wigner_reconstruct(build_state(EvenCat{alpha}, cfg.truncation, 1e-9), axis, axis);
    checks.push_back(
        {{"case", "even_cat"},
         {"linf", (closed.values - oracle.values).cwiseAbs().maxCoeff()}});
  }
  for (double eta : {1.0, 0.5}) {
    const Axis axis = symmetric_axis(12.0, n_points);
    const PovmWigner povm = povm_photon_number(1, eta);
    const GridWigner closed = sample_grid(axis, axis, povm.eval, false, "povm");
    const GridWigner oracle =
        povm_wigner_reconstruct(1, eta, std::max(cfg.truncation, 60), axis, axis);
    checks.push_back(
        {{"case", "povm_m1_eta_" + format_full(eta)},
         {"linf", (closed.values - oracle.values).cwiseAbs().maxCoeff()}});
  }
  a.report["checks"] = checks;
  double worst = 0.0;
  std::string s = "oracle cross-checks\n";
  for (const auto& c : checks) {
    s += "  " + c["case"].get<std::string>() +
         " Linf = " + format_full(c["linf"].get<double>()) + "\n";
    worst = std::max(worst, c["linf"].get<double>());
  }
  a.report["worst_linf"] = worst;
  if (worst > 1e-6)
    throw NumericalError("oracle-check: closed forms deviate from reconstruction");
  a.summary = s;
  return a;
}

void write_artifacts(const RunConfig& cfg, const Artifacts& a) {
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream out(cfg.output_dir / "report.json");
    if (!out) throw ConfigError("cannot write report.json");
    out << a.report.dump(2) << "\n";
  }
  {
    std::ofstream out(cfg.output_dir / "summary.txt");
    if (!out) throw ConfigError("cannot write summary.txt");
    out << a.summary;
  }
  for (size_t i = 0; i < a.grids.size(); ++i) {
    const auto& [name, grid] = a.grids[i];
    write_grid_csv(grid, cfg.output_dir / (name + ".csv"));
    write_grid_sidecar(grid, cfg.output_dir / (name + ".json"), a.weights[i]);
  }
}

int run(const RunConfig& cfg) {
  const bool needs_params = cfg.protocol == "params-report" ||
                            cfg.protocol == "coupling-report" ||
                            cfg.protocol == "squeeze" || cfg.protocol == "two-pulse";
  PhysicalParams params;
  if (needs_params) {
    if (cfg.params_file.empty()) throw ConfigError("protocol requires a params_file");
    params = params_from_json_file(cfg.params_file);
    params.validate();
  }

  Artifacts artifacts;
  if (cfg.protocol == "params-report") artifacts = run_params_report(cfg, params);
  else if (cfg.protocol == "coupling-report") artifacts = run_coupling_report(cfg, params);
  else if (cfg.protocol == "squeeze") artifacts = run_squeeze(cfg, params);
  else if (cfg.protocol == "gps-cat") artifacts = run_gps_cat(cfg);
  else if (cfg.protocol == "mech-prep") artifacts = run_mech_prep(cfg);
  else if (cfg.protocol == "two-pulse") artifacts = run_two_pulse(cfg, params);
  else if (cfg.protocol == "oracle-check") artifacts = run_oracle_check(cfg);
  else throw ConfigError("unknown config value for key protocol: " + cfg.protocol);

  write_artifacts(cfg, artifacts);
  std::cout << artifacts.summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsed torsional optomechanics phase-space simulator"};
  std::string config_file;
  std::string protocol;
  std::string out_dir;
  int grid_points = -1;
  double grid_span = -1.0;
  int truncation = -1;
  app.add_option("--config", config_file, "JSON run configuration");
  app.add_option("--protocol", protocol,
                 "params-report | coupling-report | squeeze | gps-cat | "
                 "mech-prep | two-pulse | oracle-check");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid-points", grid_points, "grid points per axis (default 401)");
  app.add_option("--grid-span", grid_span, "grid half-span (default 10)");
  app.add_option("--truncation", truncation, "oracle truncation (default 40)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot open config: " + config_file);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
      }
      apply_json(cfg, j);
    }
    if (!protocol.empty()) cfg.protocol = protocol;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (grid_points > 0) cfg.grid_points = grid_points;
    if (grid_span > 0) {
      cfg.grid_span = grid_span;
      cfg.grid_span_explicit = true;
    }
    if (truncation > 0) cfg.truncation = truncation;
    if (cfg.protocol.empty()) throw ConfigError("missing config key: protocol");
    return run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const InvalidStateError& e) {
    std::cerr << "invalid state: " << e.what() << "\n";
    return 2;
  } catch (const GridError& e) {
    std::cerr << "grid error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
