#include "torsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "torsim/errors.hpp"

namespace torsim {

std::string format_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_grid_csv(const GridWigner& grid, const std::filesystem::path& csv_file) {
  grid.check_invariants();
  std::ofstream out(csv_file);
  if (!out) throw ConfigError("cannot write grid file: " + csv_file.string());
  out << "x,p,W\n";
  for (int i = 0; i < grid.x_axis.n; ++i) {
    const std::string x = format_full(grid.x_axis.value(i));
    for (int j = 0; j < grid.p_axis.n; ++j) {
      out << x << ',' << format_full(grid.p_axis.value(j)) << ','
          << format_full(grid.values(i, j)) << '\n';
    }
  }
}

void write_grid_sidecar(const GridWigner& grid, const std::filesystem::path& json_file,
                        std::optional<double> success_weight) {
  nlohmann::json j;
  j["x_min"] = grid.x_axis.min;
  j["x_max"] = grid.x_axis.max;
  j["x_points"] = grid.x_axis.n;
  j["p_min"] = grid.p_axis.min;
  j["p_max"] = grid.p_axis.max;
  j["p_points"] = grid.p_axis.n;
  j["normalized"] = grid.normalized;
  j["provenance"] = grid.provenance;
  if (success_weight) j["success_weight"] = *success_weight;
  std::ofstream out(json_file);
  if (!out) throw ConfigError("cannot write sidecar: " + json_file.string());
  out << j.dump(2) << "\n";
}

GridWigner read_grid_csv(const std::filesystem::path& csv_file,
                         const std::filesystem::path& json_file) {
  std::ifstream meta(json_file);
  if (!meta) throw ConfigError("cannot open sidecar: " + json_file.string());
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sidecar: ") + e.what());
  }
  GridWigner grid;
  try {
    grid.x_axis = Axis{j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                       j.at("x_points").get<int>()};
    grid.p_axis = Axis{j.at("p_min").get<double>(), j.at("p_max").get<double>(),
                       j.at("p_points").get<int>()};
    grid.normalized = j.at("normalized").get<bool>();
    grid.provenance = j.value("provenance", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sidecar missing keys: ") + e.what());
  }

  std::ifstream in(csv_file);
  if (!in) throw ConfigError("cannot open grid file: " + csv_file.string());
  grid.values.resize(grid.x_axis.n, grid.p_axis.n);
  std::string header;
  std::getline(in, header);
  for (int i = 0; i < grid.x_axis.n; ++i) {
    for (int j2 = 0; j2 < grid.p_axis.n; ++j2) {
      std::string line;
      if (!std::getline(in, line))
        throw ConfigError("grid file truncated: " + csv_file.string());
      double x, p, w;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &p, &w) != 3)
        throw ConfigError("malformed grid row: " + line);
      grid.values(i, j2) = w;
    }
  }
  grid.check_invariants();
  return grid;
}

}  // namespace torsim
