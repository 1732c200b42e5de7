#include "commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kmig/error.hpp"
#include "kmig/forward.hpp"
#include "kmig/fresnel_io.hpp"
#include "kmig/geometry.hpp"
#include "kmig/image_io.hpp"
#include "kmig/msr.hpp"
#include "kmig/text_format.hpp"
#include "kmig/theory.hpp"

namespace kmig::cli {
namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() {
  return std::string("kmig ") + kToolVersion + " (msr-dump v" + std::to_string(kFormatVersion) +
         ", grid v" + std::to_string(kFormatVersion) + ", manifest v" +
         std::to_string(kFormatVersion) + ")";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string frequency_tag(double ghz) {
  std::string s = format_number(ghz, 9);
  std::replace(s.begin(), s.end(), '.', 'p');
  return "f" + s + "ghz";
}

namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects outputs, writing each atomically (temp file + rename), and the
// manifest listing them with their hashes.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    if (dir_.empty()) throw ConfigError("--out-dir is required");
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string());
  }

  void write(const std::string& name, const std::string& bytes) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ConfigError("cannot write " + tmp.string());
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("cannot move " + tmp.string() + " into place");
    files_.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish(json manifest) {
    manifest["outputs"] = files_;
    const std::string bytes = manifest.dump(2) + "\n";
    const fs::path tmp = dir_ / "manifest.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw ConfigError("cannot write manifest");
    }
    fs::rename(tmp, dir_ / "manifest.json");
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  json files_ = json::array();
};

struct Inputs {
  json hashes = json::array();

  void add(const fs::path& p) {
    hashes.push_back({{"path", p.string()}, {"sha256", sha256_hex(read_bytes(p))}});
  }
};

ArraySetup setup_from(const CommonOptions& c, Inputs& inputs) {
  if (!c.config) return ArraySetup{};
  inputs.add(*c.config);
  return load_setup(*c.config);
}

json grid_spec(const GridOptions& g) {
  return {{"halfwidth_m", g.halfwidth},
          {"spacing_m", g.spacing},
          {"threshold", g.threshold},
          {"min_separation_m", g.min_separation},
          {"pgm_bits", g.pgm_bits}};
}

json base_manifest(const std::string& command, const CommonOptions& c, const Inputs& inputs) {
  return {{"tool", "kmig"},
          {"tool_version", kToolVersion},
          {"format_version", kFormatVersion},
          {"command", command},
          {"config", c.config ? json(c.config->string()) : json(nullptr)},
          {"frequencies_ghz", c.freq_ghz},
          {"variant", std::string(to_string(c.variant))},
          {"grid", grid_spec(c.grid)},
          {"out_dir", c.out_dir.string()},
          {"inputs", inputs.hashes}};
}

std::string to_text(void (*writer)(std::ostream&, const MsrMatrix&), const MsrMatrix& k) {
  std::ostringstream ss;
  writer(ss, k);
  return ss.str();
}

// Writes `<stem>.csv/.pgm/.json` for a map; returns the sidecar.
json write_map(OutputDir& out, const std::string& stem, const ImageGrid& grid,
               const GridOptions& g, json extra) {
  std::ostringstream csv;
  write_grid_csv(csv, grid);
  out.write(stem + ".csv", csv.str());
  std::ostringstream pgm;
  write_grid_pgm(pgm, grid, g.pgm_bits);
  out.write(stem + ".pgm", pgm.str());
  json side = grid_metadata(grid);
  const Peak top = argmax(grid);
  side["argmax"] = {{"x", top.position.x}, {"y", top.position.y}, {"i", top.i}, {"j", top.j}};
  side["local_maxima"] = peaks_to_json(local_maxima(grid, g.threshold, g.min_separation));
  for (auto& [key, v] : extra.items()) side[key] = v;
  out.write_json(stem + ".json", side);
  return side;
}

void check_grid(const GridOptions& g, const ArrayConfig& config) {
  if (!(g.halfwidth > 0.0)) throw ConfigError("--grid-halfwidth-m must be positive");
  if (g.halfwidth * std::sqrt(2.0) >= config.inner_radius()) {
    throw ConfigError("imaging grid must lie inside both rings");
  }
  if (!(g.spacing > 0.0)) throw ConfigError("--grid-spacing-m must be positive");
  if (!(g.threshold > 0.0 && g.threshold < 1.0)) throw ConfigError("--threshold must be in (0, 1)");
  if (g.pgm_bits != 8 && g.pgm_bits != 16) throw ConfigError("--pgm-bits must be 8 or 16");
}

std::string list_ghz(const std::vector<double>& hz) {
  std::string s;
  for (double f : hz) s += (s.empty() ? "" : ", ") + format_number(f / 1e9, 9);
  return s + " GHz";
}

}  // namespace

json cmd_simulate(const SimulateOptions& opts) {
  const CommonOptions& c = opts.common;
  Inputs inputs;
  const ArraySetup setup = setup_from(c, inputs);
  if (opts.scene.empty()) throw ConfigError("--scene is required");
  inputs.add(opts.scene);
  const Scene scene = load_scene(opts.scene);
  scene.validate(setup.array);
  if (c.freq_ghz.empty()) throw ConfigError("--freq-ghz is required");

  OutputDir out(c.out_dir);
  json report = {{"command", "simulate"}, {"frequencies", json::array()}};
  std::vector<FresnelRecord> records;
  for (double ghz : c.freq_ghz) {
    const Frequency f = Frequency::from_ghz(ghz);
    const double k = wavenumber(setup.medium, f);
    const double cell = opts.cell > 0.0 ? opts.cell : default_cell_size(k, scene);
    const FieldMap fields = synthesize_fields(scene, setup.array, k, cell);
    const MsrMatrix msr = MsrMatrix::assemble(fields, setup.array, f);
    const std::string tag = frequency_tag(ghz);
    out.write("msr_" + tag + ".csv", to_text(write_msr_csv, msr));
    out.write("msr_" + tag + ".pgm", to_text(write_msr_pgm, msr));
    out.write("mask_" + tag + ".pgm", to_text(write_mask_pgm, msr));
    report["frequencies"].push_back({{"frequency_ghz", ghz},
                                     {"rows", msr.rows()},
                                     {"cols", msr.cols()},
                                     {"measured", msr.measured_count()},
                                     {"max_abs", msr.max_abs()},
                                     {"quadrature_cell_m", scene.objects.empty() ? 0.0 : cell}});
    if (opts.write_exp) {
      const auto recs = records_from_fields(fields, setup.array, k, f);
      records.insert(records.end(), recs.begin(), recs.end());
    }
  }
  if (opts.write_exp) out.write("measurements.exp", format_fresnel(records));
  out.write_json("simulate.json", report);
  json manifest = base_manifest("simulate", c, inputs);
  manifest["scene"] = opts.scene.string();
  out.finish(manifest);
  return report;
}

namespace {

struct LoadedMatrix {
  MsrMatrix msr;
  std::optional<CalibrationResult> calibration;
  std::string source;
};

bool looks_like_msr_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return t == "n,m,re,im,measured";
  }
  return false;
}

bool wanted(const std::vector<double>& freq_ghz, double hz) {
  if (freq_ghz.empty()) return true;
  return std::any_of(freq_ghz.begin(), freq_ghz.end(), [&](double g) {
    return std::abs(g * 1e9 - hz) <= kFrequencyToleranceHz;
  });
}

}  // namespace

json cmd_image(const ImageOptions& opts) {
  const CommonOptions& c = opts.common;
  Inputs inputs;
  const ArraySetup setup = setup_from(c, inputs);
  check_grid(c.grid, setup.array);
  if (opts.inputs.empty()) throw ConfigError("--input is required");

  std::vector<LoadedMatrix> matrices;
  std::vector<double> available;
  for (const auto& path : opts.inputs) {
    inputs.add(path);
    const std::string text = read_bytes(path);
    if (looks_like_msr_dump(text)) {
      std::istringstream in(text);
      MsrMatrix msr = read_msr_csv(in, setup.array);
      available.push_back(msr.frequency().hz);
      if (wanted(c.freq_ghz, msr.frequency().hz)) {
        matrices.push_back({std::move(msr), std::nullopt, path.string()});
      }
      continue;
    }
    const auto records = parse_fresnel(text, setup.array);
    for (auto& group : scattered_from_records(records)) {
      available.push_back(group.frequency.hz);
      if (!wanted(c.freq_ghz, group.frequency.hz)) continue;
      const auto at_f = select_frequency(records, group.frequency);
      const CalibrationResult cal = calibrate(at_f, setup.array, setup.medium);
      MsrMatrix msr = MsrMatrix::assemble(apply_calibration(group.fields, cal.factor),
                                          setup.array, group.frequency);
      matrices.push_back({std::move(msr), cal, path.string()});
    }
  }
  std::sort(available.begin(), available.end());
  for (double g : c.freq_ghz) {
    if (std::none_of(available.begin(), available.end(),
                     [&](double hz) { return std::abs(g * 1e9 - hz) <= kFrequencyToleranceHz; })) {
      throw ConfigError("frequency " + format_number(g, 9) + " GHz not in input; available: " +
                        list_ghz(available));
    }
  }
  if (matrices.empty()) throw ConfigError("no input data to image; available: " + list_ghz(available));

  OutputDir out(c.out_dir);
  json report = {{"command", "image"}, {"variant", std::string(to_string(c.variant))},
                 {"frequencies", json::array()}};
  const Region region = Region::square(c.grid.halfwidth);
  for (const auto& lm : matrices) {
    const Frequency f = lm.msr.frequency();
    const double k = wavenumber(setup.medium, f);
    const ImageGrid grid = km_map(region, c.grid.spacing, lm.msr, k, c.variant, c.workers);
    json extra = {{"frequency_hz", f.hz}, {"variant", std::string(to_string(c.variant))},
                  {"source", lm.source}};
    if (lm.calibration) {
      extra["calibration"] = {{"factor", {lm.calibration->factor.real(), lm.calibration->factor.imag()}},
                              {"residual", lm.calibration->residual},
                              {"records_used", lm.calibration->records_used}};
    }
    const json side = write_map(out, "map_" + frequency_tag(f.ghz()), grid, c.grid, extra);
    json entry = {{"frequency_ghz", f.ghz()},
                  {"argmax", side["argmax"]},
                  {"local_maxima", side["local_maxima"]},
                  {"local_maxima_count", side["local_maxima"].size()},
                  {"warnings", grid.warnings}};
    if (lm.calibration) entry["calibration_residual"] = lm.calibration->residual;
    report["frequencies"].push_back(entry);
  }
  out.write_json("image.json", report);
  out.finish(base_manifest("image", c, inputs));
  return report;
}

json cmd_compare_theory(const CompareOptions& opts) {
  const CommonOptions& c = opts.common;
  Inputs inputs;
  const ArraySetup setup = setup_from(c, inputs);
  check_grid(c.grid, setup.array);
  if (opts.scene.empty()) throw ConfigError("--scene is required");
  inputs.add(opts.scene);
  const Scene scene = load_scene(opts.scene);
  if (!scene.is_point_scene()) {
    throw UnsupportedScene(
        "compare-theory needs a point-target scene: list targets under \"point_targets\" "
        "({\"center\": [x, y], \"strength\": w}) instead of disk \"objects\"");
  }
  if (scene.point_targets.empty()) throw UnsupportedScene("scene has no point targets");
  scene.validate(setup.array);
  if (c.freq_ghz.size() != 1) throw ConfigError("compare-theory takes exactly one --freq-ghz");

  const Frequency f = Frequency::from_ghz(c.freq_ghz.front());
  const double k = wavenumber(setup.medium, f);
  const Region region = Region::square(c.grid.halfwidth);
  const MsrMatrix msr =
      MsrMatrix::assemble(synthesize_fields(scene, setup.array, k), setup.array, f);
  const ImageGrid km = km_map(region, c.grid.spacing, msr, k, c.variant, c.workers);
  const auto trunc = theory::default_truncation(k, 2.0 * std::sqrt(2.0) * c.grid.halfwidth);
  const ImageGrid th = theory::theory_map(scene.point_targets, region, c.grid.spacing, k, trunc,
                                          c.workers);

  std::vector<Point> centers;
  for (const auto& t : scene.point_targets) centers.push_back(t.center);
  const auto window = disk_window(km, centers, opts.window);
  const GridComparison cmp = compare_grids(km, th, &window);

  // per-target: nearest local maximum in each map
  const auto km_peaks = local_maxima(km, c.grid.threshold, c.grid.min_separation);
  const auto th_peaks = local_maxima(th, c.grid.threshold, c.grid.min_separation);
  auto nearest = [](const std::vector<Peak>& peaks, Point p) -> std::optional<Peak> {
    std::optional<Peak> best;
    for (const auto& q : peaks) {
      if (!best || distance(q.position, p) < distance(best->position, p)) best = q;
    }
    return best;
  };
  json targets = json::array();
  for (const auto& t : scene.point_targets) {
    json entry = {{"center", {t.center.x, t.center.y}}};
    const auto a = nearest(km_peaks, t.center);
    const auto b = nearest(th_peaks, t.center);
    if (a) entry["km_peak"] = {a->position.x, a->position.y};
    if (b) entry["theory_peak"] = {b->position.x, b->position.y};
    if (a && b) entry["offset_cells"] = std::max(std::abs(a->i - b->i), std::abs(a->j - b->j));
    targets.push_back(entry);
  }

  OutputDir out(c.out_dir);
  const std::string tag = frequency_tag(f.ghz());
  const json meta = {{"frequency_hz", f.hz}, {"variant", std::string(to_string(c.variant))}};
  write_map(out, "km_" + tag, km, c.grid, meta);
  json th_meta = {{"frequency_hz", f.hz},
                  {"series_order", trunc.max_order},
                  {"tail_bound", trunc.tail_bound}};
  write_map(out, "theory_" + tag, th, c.grid, th_meta);
  json report = to_json(cmp);
  report["command"] = "compare-theory";
  report["frequency_ghz"] = f.ghz();
  report["window_m"] = opts.window;
  report["targets"] = targets;
  report["series_order"] = trunc.max_order;
  report["structure_prefactor"] = theory::structure_prefactor(setup.array);
  out.write_json("compare.json", report);
  json manifest = base_manifest("compare-theory", c, inputs);
  manifest["scene"] = opts.scene.string();
  out.finish(manifest);
  return report;
}

json cmd_resolution_study(const ResolutionOptions& opts) {
  const CommonOptions& c = opts.common;
  Inputs inputs;
  const ArraySetup setup = setup_from(c, inputs);
  check_grid(c.grid, setup.array);
  if (!(opts.separation > 0.0)) throw ConfigError("--separation-m must be positive");
  std::vector<double> freqs = c.freq_ghz;
  if (freqs.empty()) freqs = {1, 2, 3, 4, 5, 6, 7, 8};

  Scene scene;
  scene.region_halfwidth = c.grid.halfwidth;
  scene.point_targets = {{{-opts.separation / 2.0, 0.0}, {1.0, 0.0}},
                         {{opts.separation / 2.0, 0.0}, {1.0, 0.0}}};
  scene.validate(setup.array);

  OutputDir out(c.out_dir);
  const Region region = Region::square(c.grid.halfwidth);
  json rows = json::array();
  for (double ghz : freqs) {
    const Frequency f = Frequency::from_ghz(ghz);
    const double k = wavenumber(setup.medium, f);
    const MsrMatrix msr =
        MsrMatrix::assemble(synthesize_fields(scene, setup.array, k), setup.array, f);
    const ImageGrid grid = km_map(region, c.grid.spacing, msr, k, c.variant, c.workers);
    const auto peaks = local_maxima(grid, c.grid.threshold, c.grid.min_separation);
    const double half_lambda = wavelength(setup.medium, f) / 2.0;
    write_map(out, "map_" + frequency_tag(ghz), grid, c.grid,
              {{"frequency_hz", f.hz}, {"variant", std::string(to_string(c.variant))}});
    rows.push_back({{"frequency_ghz", ghz},
                    {"half_wavelength_m", half_lambda},
                    {"half_wavelength_below_separation", half_lambda < opts.separation},
                    {"local_maxima_count", peaks.size()},
                    {"local_maxima", peaks_to_json(peaks)},
                    {"distinguishable", peaks.size() == scene.point_targets.size()}});
  }
  json report = {{"command", "resolution-study"},
                 {"separation_m", opts.separation},
                 {"targets", {{-opts.separation / 2.0, 0.0}, {opts.separation / 2.0, 0.0}}},
                 {"frequencies", rows}};
  out.write_json("resolution.json", report);
  json manifest = base_manifest("resolution-study", c, inputs);
  manifest["separation_m"] = opts.separation;
  manifest["frequencies_ghz"] = freqs;
  out.finish(manifest);
  return report;
}

}  // namespace kmig::cli
