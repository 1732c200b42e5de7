#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kmig/forward.hpp"
#include "kmig/geometry.hpp"
#include "kmig/types.hpp"

namespace kmig {

/// One measurement row of a Fresnel-style file. Indices are 1-based.
struct FresnelRecord {
  int emitter = 1;
  int receiver = 1;
  double frequency_hz = 0.0;
  Complex total_field;
  Complex incident_field;

  bool operator==(const FresnelRecord&) const = default;
};

/// How an angular column is interpreted; Auto picks Index when every value
/// is an integer within 1..count, Degrees otherwise.
enum class AngleColumn { Auto, Index, Degrees };

struct ParseOptions {
  AngleColumn emitter_column = AngleColumn::Auto;
  AngleColumn receiver_column = AngleColumn::Auto;
};

/// Frequencies closer than this are the same measurement frequency.
inline constexpr double kFrequencyToleranceHz = 1e6;

/// Parses whitespace-separated rows
///   emitter receiver freq_ghz re_total im_total re_incident im_incident
/// Lines starting with '#' or with a non-numeric first token are headers.
/// Degree-valued station columns (absolute angles) snap to the nearest grid
/// index and throw GeometryMismatch when more than 0.1 degree off-grid;
/// malformed rows throw ParseError naming the line.
std::vector<FresnelRecord> parse_fresnel(std::string_view text, const ArrayConfig& config,
                                         const ParseOptions& options = {});
std::vector<FresnelRecord> read_fresnel_file(const std::filesystem::path& path,
                                             const ArrayConfig& config,
                                             const ParseOptions& options = {});

/// Writes records in the same column layout (index-valued stations, 17
/// significant digits) so parse_fresnel reproduces them exactly.
std::string format_fresnel(const std::vector<FresnelRecord>& records);

/// Canonical records CSV: header `m,n,f_hz,re_tot,im_tot,re_inc,im_inc`,
/// 9 significant digits.
void write_records_csv(std::ostream& out, const std::vector<FresnelRecord>& records);
std::vector<FresnelRecord> read_records_csv(std::istream& in);

/// Distinct measurement frequencies (ascending, 1 MHz clustering).
std::vector<double> available_frequencies(const std::vector<FresnelRecord>& records);

/// Records within 1 MHz of `f`.
std::vector<FresnelRecord> select_frequency(const std::vector<FresnelRecord>& records,
                                            Frequency f);

struct FrequencyFields {
  Frequency frequency;
  FieldMap fields;  // (m, n) -> total - incident
};

/// Scattered field per record, grouped by frequency. Duplicate (m, n, f)
/// triples throw AmbiguityError.
std::vector<FrequencyFields> scattered_from_records(const std::vector<FresnelRecord>& records);

struct CalibrationResult {
  Complex factor{1.0, 0.0};
  double residual = 0.0;  // sqrt(sum |c u_inc - G|^2 / sum |G|^2), in [0, 1]
  std::size_t records_used = 0;
};

/// Complex gain c minimizing sum |c u_inc(m, n) - G(r_n, e_m)|^2 over records
/// of a single frequency. Needs at least 8 records with nonzero incident
/// field; throws CalibrationError otherwise.
CalibrationResult calibrate(const std::vector<FresnelRecord>& records,
                            const ArrayConfig& config, const MediumParams& medium);

/// Multiplies every field by the calibration factor.
FieldMap apply_calibration(const FieldMap& fields, Complex factor);

/// Builds measurement-style records from scattered fields: incident =
/// gain * G(r_n, e_m), total = gain * (G + u_scat).
std::vector<FresnelRecord> records_from_fields(const FieldMap& scattered,
                                               const ArrayConfig& config, double k,
                                               Frequency frequency,
                                               Complex gain = {1.0, 0.0});

}  // namespace kmig
