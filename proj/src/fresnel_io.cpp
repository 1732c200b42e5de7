#include "kmig/fresnel_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "kmig/error.hpp"
#include "kmig/text_format.hpp"

namespace kmig {
namespace {

constexpr double kOffGridToleranceDeg = 0.1;
constexpr std::size_t kColumns = 7;

struct RawRow {
  std::size_t line;
  double v[kColumns];
};

bool all_indices(const std::vector<RawRow>& rows, int column, int count) {
  if (rows.empty()) return true;
  return std::all_of(rows.begin(), rows.end(), [&](const RawRow& r) {
    const double x = r.v[column];
    return x == std::floor(x) && x >= 1.0 && x <= count;
  });
}

int degrees_to_index(double deg, double step_deg, int count, std::size_t line,
                     const char* what) {
  const double steps = deg / step_deg;
  const double nearest = std::round(steps);
  if (std::abs(deg - nearest * step_deg) > kOffGridToleranceDeg) {
    throw GeometryMismatch("line " + std::to_string(line) + ": " + what + " angle " +
                           format_number(deg, 9) + " deg is off the " +
                           format_number(step_deg, 9) + " deg grid");
  }
  long j = static_cast<long>(nearest) % count;
  if (j < 0) j += count;
  return static_cast<int>(j) + 1;
}

int to_index(double value, AngleColumn mode, double step_deg, int count, std::size_t line,
             const char* what) {
  if (mode == AngleColumn::Index) {
    if (value != std::floor(value) || value < 1.0 || value > count) {
      throw GeometryMismatch("line " + std::to_string(line) + ": " + what + " index " +
                             format_number(value, 9) + " outside 1.." + std::to_string(count));
    }
    return static_cast<int>(value);
  }
  return degrees_to_index(value, step_deg, count, line, what);
}

// GHz text that parses back to exactly `hz`.
double ghz_for(double hz) {
  double g = hz / 1e9;
  if (g * 1e9 == hz) return g;
  double up = g, down = g;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (up * 1e9 == hz) return up;
    if (down * 1e9 == hz) return down;
  }
  return g;
}

std::vector<std::vector<std::size_t>> cluster_by_frequency(
    const std::vector<FresnelRecord>& records) {
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].frequency_hz < records[b].frequency_hz;
  });
  std::vector<std::vector<std::size_t>> groups;
  double anchor = 0.0;
  for (std::size_t i : order) {
    const double f = records[i].frequency_hz;
    if (groups.empty() || f - anchor > kFrequencyToleranceHz) {
      groups.emplace_back();
      anchor = f;
    }
    groups.back().push_back(i);
  }
  return groups;
}

}  // namespace

std::vector<FresnelRecord> parse_fresnel(std::string_view text, const ArrayConfig& config,
                                         const ParseOptions& options) {
  config.validate();
  std::vector<RawRow> rows;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tokens = split_whitespace(t);
    if (!parse_number(tokens.front())) continue;  // header line
    if (tokens.size() != kColumns) {
      throw ParseError(lineno, "expected " + std::to_string(kColumns) + " columns, found " +
                                   std::to_string(tokens.size()));
    }
    RawRow row{lineno, {}};
    for (std::size_t i = 0; i < kColumns; ++i) {
      const auto v = parse_number(tokens[i]);
      if (!v) throw ParseError(lineno, "non-numeric token \"" + std::string(tokens[i]) + "\"");
      row.v[i] = *v;
    }
    if (!(row.v[2] > 0.0)) throw ParseError(lineno, "frequency must be positive");
    rows.push_back(row);
  }

  AngleColumn emode = options.emitter_column;
  AngleColumn rmode = options.receiver_column;
  if (emode == AngleColumn::Auto) {
    emode = all_indices(rows, 0, config.emitter_count) ? AngleColumn::Index : AngleColumn::Degrees;
  }
  if (rmode == AngleColumn::Auto) {
    rmode = all_indices(rows, 1, config.receiver_count) ? AngleColumn::Index : AngleColumn::Degrees;
  }

  std::vector<FresnelRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    FresnelRecord rec;
    rec.emitter = to_index(r.v[0], emode, config.emitter_step_deg, config.emitter_count, r.line,
                           "emitter");
    rec.receiver = to_index(r.v[1], rmode, config.receiver_step_deg, config.receiver_count,
                            r.line, "receiver");
    rec.frequency_hz = r.v[2] * 1e9;
    rec.total_field = {r.v[3], r.v[4]};
    rec.incident_field = {r.v[5], r.v[6]};
    out.push_back(rec);
  }
  return out;
}

std::vector<FresnelRecord> read_fresnel_file(const std::filesystem::path& path,
                                             const ArrayConfig& config,
                                             const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open measurement file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fresnel(ss.str(), config, options);
}

std::string format_fresnel(const std::vector<FresnelRecord>& records) {
  std::ostringstream out;
  out << "# emitter receiver freq_ghz re_total im_total re_incident im_incident\n";
  for (const auto& r : records) {
    out << r.emitter << ' ' << r.receiver << ' ' << format_number(ghz_for(r.frequency_hz)) << ' '
        << format_number(r.total_field.real()) << ' ' << format_number(r.total_field.imag())
        << ' ' << format_number(r.incident_field.real()) << ' '
        << format_number(r.incident_field.imag()) << '\n';
  }
  return out.str();
}

void write_records_csv(std::ostream& out, const std::vector<FresnelRecord>& records) {
  out << "m,n,f_hz,re_tot,im_tot,re_inc,im_inc\n";
  for (const auto& r : records) {
    out << r.emitter << ',' << r.receiver << ',' << format_number(r.frequency_hz, 9) << ','
        << format_number(r.total_field.real(), 9) << ','
        << format_number(r.total_field.imag(), 9) << ','
        << format_number(r.incident_field.real(), 9) << ','
        << format_number(r.incident_field.imag(), 9) << '\n';
  }
}

std::vector<FresnelRecord> read_records_csv(std::istream& in) {
  std::vector<FresnelRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (!header_seen) {
      if (t != "m,n,f_hz,re_tot,im_tot,re_inc,im_inc") {
        throw ParseError(lineno, "expected records CSV header");
      }
      header_seen = true;
      continue;
    }
    const auto cols = split_char(t, ',');
    if (cols.size() != kColumns) throw ParseError(lineno, "expected 7 columns");
    double v[kColumns];
    for (std::size_t i = 0; i < kColumns; ++i) {
      const auto x = parse_number(cols[i]);
      if (!x) throw ParseError(lineno, "non-numeric field \"" + std::string(cols[i]) + "\"");
      v[i] = *x;
    }
    out.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], {v[3], v[4]},
                   {v[5], v[6]}});
  }
  return out;
}

std::vector<double> available_frequencies(const std::vector<FresnelRecord>& records) {
  std::vector<double> out;
  for (const auto& g : cluster_by_frequency(records)) {
    out.push_back(records[g.front()].frequency_hz);
  }
  return out;
}

std::vector<FresnelRecord> select_frequency(const std::vector<FresnelRecord>& records,
                                            Frequency f) {
  std::vector<FresnelRecord> out;
  for (const auto& r : records) {
    if (std::abs(r.frequency_hz - f.hz) <= kFrequencyToleranceHz) out.push_back(r);
  }
  return out;
}

std::vector<FrequencyFields> scattered_from_records(const std::vector<FresnelRecord>& records) {
  std::vector<FrequencyFields> out;
  for (const auto& group : cluster_by_frequency(records)) {
    FrequencyFields ff{Frequency{records[group.front()].frequency_hz}, {}};
    for (std::size_t i : group) {
      const auto& r = records[i];
      const auto [it, inserted] =
          ff.fields.emplace(std::make_pair(r.emitter, r.receiver), r.total_field - r.incident_field);
      if (!inserted) {
        throw AmbiguityError("duplicate record for emitter " + std::to_string(r.emitter) +
                             ", receiver " + std::to_string(r.receiver) + " at " +
                             format_number(r.frequency_hz, 9) + " Hz");
      }
    }
    out.push_back(std::move(ff));
  }
  return out;
}

CalibrationResult calibrate(const std::vector<FresnelRecord>& records,
                            const ArrayConfig& config, const MediumParams& medium) {
  if (records.empty()) throw CalibrationError("no records to calibrate");
  const double f0 = records.front().frequency_hz;
  for (const auto& r : records) {
    if (std::abs(r.frequency_hz - f0) > kFrequencyToleranceHz) {
      throw CalibrationError("calibration needs records of a single frequency");
    }
  }
  const double k = wavenumber(medium, Frequency{f0});
  Complex cross{0.0, 0.0};
  double inc_energy = 0.0;
  std::vector<std::pair<Complex, Complex>> pairs;  // (measured incident, model G)
  for (const auto& r : records) {
    if (r.incident_field == Complex(0.0, 0.0)) continue;
    const Complex g =
        green(k, config.receiver_position(r.receiver), config.emitter_position(r.emitter));
    cross += std::conj(r.incident_field) * g;
    inc_energy += std::norm(r.incident_field);
    pairs.emplace_back(r.incident_field, g);
  }
  if (pairs.empty()) throw CalibrationError("all measured incident fields are zero");
  if (pairs.size() < 8) {
    throw CalibrationError("calibration needs at least 8 records with nonzero incident field, got " +
                           std::to_string(pairs.size()));
  }
  CalibrationResult res;
  res.factor = cross / inc_energy;
  res.records_used = pairs.size();
  double misfit = 0.0;
  double model_energy = 0.0;
  for (const auto& [inc, g] : pairs) {
    misfit += std::norm(res.factor * inc - g);
    model_energy += std::norm(g);
  }
  res.residual = std::clamp(std::sqrt(misfit / model_energy), 0.0, 1.0);
  return res;
}

FieldMap apply_calibration(const FieldMap& fields, Complex factor) {
  FieldMap out;
  for (const auto& [key, v] : fields) out.emplace(key, factor * v);
  return out;
}

std::vector<FresnelRecord> records_from_fields(const FieldMap& scattered,
                                               const ArrayConfig& config, double k,
                                               Frequency frequency, Complex gain) {
  std::vector<FresnelRecord> out;
  out.reserve(scattered.size());
  for (const auto& [key, u] : scattered) {
    const auto [m, n] = key;
    const Complex g = green(k, config.receiver_position(n), config.emitter_position(m));
    out.push_back({m, n, frequency.hz, gain * (g + u), gain * g});
  }
  return out;
}

}  // namespace kmig
