#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "torsim/phase_space.hpp"

namespace torsim {

/// Full-precision (17 significant digits) decimal rendering, so identical
/// runs produce byte-identical artifacts.
std::string format_full(double value);

/// Three-column x,p,W rows (x-major), full precision.
void write_grid_csv(const GridWigner& grid, const std::filesystem::path& csv_file);

/// Grid metadata sidecar; success_weight is included when present.
void write_grid_sidecar(const GridWigner& grid, const std::filesystem::path& json_file,
                        std::optional<double> success_weight = std::nullopt);

/// Rebuilds a grid from CSV + sidecar and checks its invariants.
GridWigner read_grid_csv(const std::filesystem::path& csv_file,
                         const std::filesystem::path& json_file);

}  // namespace torsim
