#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourq/matrix.hpp"

namespace fourq {

/// Bad configuration, with a "file:line: " prefix when it came from a file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { IntensitySweep, CorrelationMap, ZernikeRetrieval, FermionAperture, Custom };

std::string to_string(ScenarioKind kind);

struct EmitFlags {
  bool csv = true;
  bool json = true;
  bool pgm = true;
};

/// Parses "csv,json,pgm" (any subset, any order).
EmitFlags parse_emit(const std::string& list);

/// Resolved scenario parameters; lengths in mm, angles in radians.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::CorrelationMap;

  double wavelength_mm = 808e-6;
  double focal_length_mm = 100.0;
  double separation_mm = 0.5;
  double waist_mm = 0.5 / 8.0;
  double half_width_mm = 0.5 / 4.0;
  double half_extent_mm = 16.0;
  std::size_t n = 4096;
  int n_max = 12;

  std::vector<double> amplitudes;  // A_p
  std::vector<double> phases;      // phi
  std::vector<double> aperture_widths_mm;
  double zernike_delta = 0.0;
  double mask_origin_mm = 0.0;
  int quadrature_points = 65536;
  std::filesystem::path custom_mask_file;

  std::filesystem::path output_dir = "out";
  EmitFlags emit;

  /// Key/value echo of every resolved parameter, in key order.
  std::map<std::string, std::string> echo() const;
};

/// Parses the flat "key = value" format ('#' comments, comma-separated lists,
/// numbers may carry a "pi" suffix such as 0.86pi). Unset keys take the
/// documented defaults; relative paths resolve against the config's directory.
ScenarioConfig parse_config(const std::string& text, const std::string& source_name = "<config>",
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Parses one scalar, accepting "pi", "-pi", "0.5pi" and plain numbers.
std::optional<double> parse_number(const std::string& token);

struct HeatmapInfo {
  double max_value;
  bool all_zero;
};

/// 8-bit binary PGM, row-major, pixel = round(255 v / max). The maximum goes
/// to a sidecar "<path>.json"; an all-zero matrix yields a black image and a
/// warning in the sidecar.
HeatmapInfo emit_heatmap(const Matrix<double>& matrix, const std::filesystem::path& path);

/// Names of the files written, relative to the output directory, sorted.
struct ScenarioResult {
  std::vector<std::string> files;
};

/// Runs the configured experiment and writes its artifacts under
/// config.output_dir. Outputs depend only on the config.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace fourq
