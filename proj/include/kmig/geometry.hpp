#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "kmig/types.hpp"

namespace kmig {

/// Homogeneous background medium (SI units).
struct MediumParams {
  double conductivity = 0.0;              // S/m
  double permeability = 4.0 * kPi * 1e-7;  // H/m
  double permittivity = 8.854e-12;        // F/m

  void validate() const;
};

/// Emitter and receiver rings of a bistatic circular array. Angles are in
/// degrees here and converted to radians by the accessors. Station indices
/// are 1-based; receivers live on an absolute angular grid and the
/// emitter-relative aperture only enters through the measurement mask.
struct ArrayConfig {
  double emitter_radius = 0.76;   // m
  double receiver_radius = 0.72;  // m
  int emitter_count = 36;
  int receiver_count = 72;
  double emitter_step_deg = 10.0;
  double receiver_step_deg = 5.0;
  double aperture_start_deg = 60.0;  // receiver window relative to the emitter direction
  double aperture_end_deg = 300.0;

  void validate() const;

  double emitter_angle(int m) const;   // radians
  double receiver_angle(int n) const;  // radians
  Point emitter_position(int m) const;
  Point receiver_position(int n) const;

  /// Radius of the largest origin-centered disk inside both rings.
  double inner_radius() const { return std::min(emitter_radius, receiver_radius); }

  /// True when receiver n records data while emitter m transmits.
  bool in_aperture(int n, int m) const;

  bool operator==(const ArrayConfig&) const = default;
};

/// k_b = 2 pi f sqrt(eps_b mu_b).
double wavenumber(const MediumParams& medium, Frequency f);
double wavelength(const MediumParams& medium, Frequency f);

struct ArraySetup {
  ArrayConfig array;
  MediumParams medium;
};

/// Reads a JSON config. Keys mirror the struct fields; omitted keys keep
/// their defaults and unknown keys are rejected. Medium constants may be
/// given flat or inside a "medium" object.
ArraySetup parse_setup(const nlohmann::json& j);
ArraySetup load_setup(const std::filesystem::path& path);
nlohmann::json to_json(const ArraySetup& setup);

}  // namespace kmig
