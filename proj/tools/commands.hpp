#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kmig/imaging.hpp"

namespace kmig::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

std::string version_string();

struct GridOptions {
  double halfwidth = 0.2;   // m
  double spacing = 0.002;   // m
  double threshold = 0.5;   // local maxima, relative to the map maximum
  double min_separation = 0.02;  // m
  int pgm_bits = 8;
};

struct CommonOptions {
  std::optional<std::filesystem::path> config;  // defaults when absent
  std::vector<double> freq_ghz;
  SteeringVariant variant = SteeringVariant::Asymptotic;
  GridOptions grid;
  std::filesystem::path out_dir;
  int workers = 0;  // 0: KMIG_WORKERS or hardware concurrency
};

struct SimulateOptions {
  CommonOptions common;
  std::filesystem::path scene;
  double cell = 0.0;  // 0: default quadrature cell
  bool write_exp = false;  // also write measurements.exp
};

struct ImageOptions {
  CommonOptions common;
  std::vector<std::filesystem::path> inputs;  // MSR dumps and/or .exp files
};

struct CompareOptions {
  CommonOptions common;
  std::filesystem::path scene;
  double window = 0.06;  // m, correlation disk around each target
};

struct ResolutionOptions {
  CommonOptions common;
  double separation = 0.09;  // m
};

/// Each command writes its outputs plus manifest.json into out_dir and
/// returns the JSON report it wrote. Failures throw kmig::Error.
nlohmann::json cmd_simulate(const SimulateOptions& opts);
nlohmann::json cmd_image(const ImageOptions& opts);
nlohmann::json cmd_compare_theory(const CompareOptions& opts);
nlohmann::json cmd_resolution_study(const ResolutionOptions& opts);

/// `4` -> "f4ghz", `1.5` -> "f1p5ghz".
std::string frequency_tag(double ghz);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace kmig::cli
