#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fvklab/angular_field.hpp"
#include "fvklab/energy.hpp"
#include "fvklab/scalelab.hpp"

namespace fvklab {

std::string version_string();

/// What produced a set of artifacts. The hash covers everything that
/// determines numeric output (command, config, seeds, version) and nothing
/// else, so it can be stamped into every file.
struct RunManifest {
  std::string command;
  std::string config;  ///< config file text after flag overrides
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  std::string version = version_string();

  std::string hash() const;
  std::string to_json() const;
};

/// Table with a commented header echoing the manifest hash and config.
/// Values are written with round-trip precision.
void write_csv(std::ostream& out, const RunManifest& manifest,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

std::string energy_json(const EnergyBreakdown& energy, const RunManifest& manifest);
std::string lemma_json(const std::vector<LemmaCheckResult>& results, const RunManifest& manifest);
std::string scaling_json(const ScalingReport& report, const RunManifest& manifest);
/// Self-contained log-log plot of the points, the fitted line and a
/// reference line with the theoretical slope.
std::string scaling_svg(const ScalingReport& report, const RunManifest& manifest);

/// Rows (r, theta, xi) on the grid nodes times n_theta equispaced angles.
std::vector<std::vector<double>> xi_samples(const SheetState& state, double R, int n_theta);

/// Reads the points back from a CSV written by write_csv with columns (h, value).
std::vector<std::pair<double, double>> read_points_csv(std::istream& in);

/// Writes text to path, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fvklab
