#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "kmig/error.hpp"

namespace {

void add_common(CLI::App* sub, kmig::cli::CommonOptions& c, std::string& variant, bool needs_freq) {
  sub->add_option("--config", c.config, "array/medium configuration JSON")->check(CLI::ExistingFile);
  auto* freq = sub->add_option("--freq-ghz", c.freq_ghz, "frequencies in GHz (comma separated)")
                   ->delimiter(',');
  if (needs_freq) freq->required();
  sub->add_option("--variant", variant, "steering: exact | asymptotic")->default_val("asymptotic");
  sub->add_option("--grid-halfwidth-m", c.grid.halfwidth, "imaging half-width (m)")->default_val(0.2);
  sub->add_option("--grid-spacing-m", c.grid.spacing, "pixel spacing (m)")->default_val(0.002);
  sub->add_option("--threshold", c.grid.threshold, "local maxima threshold")->default_val(0.5);
  sub->add_option("--min-sep-m", c.grid.min_separation, "local maxima separation (m)")
      ->default_val(0.02);
  sub->add_option("--pgm-bits", c.grid.pgm_bits, "PGM depth: 8 or 16")->default_val(8);
  sub->add_option("--workers", c.workers, "worker threads (0: auto)")->default_val(0);
  sub->add_option("--out-dir", c.out_dir, "output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kmig::cli;
  CLI::App app{"Kirchhoff migration imaging with limited-aperture arrays"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string sim_variant;
  auto* simulate = app.add_subcommand("simulate", "synthesize MSR matrices for a scene");
  add_common(simulate, sim.common, sim_variant, true);
  simulate->add_option("--scene", sim.scene, "scene JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--cell-m", sim.cell, "quadrature cell size (m, 0: auto)")->default_val(0.0);
  simulate->add_flag("--write-exp", sim.write_exp, "also write measurements.exp");

  ImageOptions img;
  std::string img_variant;
  auto* image = app.add_subcommand("image", "Kirchhoff migration maps from MSR dumps or .exp files");
  add_common(image, img.common, img_variant, false);
  image->add_option("--input", img.inputs, "MSR dump(s) or Fresnel .exp file(s)")
      ->required()
      ->check(CLI::ExistingFile);

  CompareOptions cmp;
  std::string cmp_variant;
  auto* compare = app.add_subcommand("compare-theory", "numerical map against the series kernel");
  add_common(compare, cmp.common, cmp_variant, true);
  compare->add_option("--scene", cmp.scene, "point-target scene JSON")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--window-m", cmp.window, "correlation window radius (m)")->default_val(0.06);

  ResolutionOptions res;
  std::string res_variant;
  auto* resolution = app.add_subcommand("resolution-study", "two-target separation sweep");
  add_common(resolution, res.common, res_variant, false);
  resolution->add_option("--separation-m", res.separation, "target separation (m)")
      ->default_val(0.09);

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json report;
    if (*simulate) {
      sim.common.variant = kmig::parse_variant(sim_variant);
      report = cmd_simulate(sim);
    } else if (*image) {
      img.common.variant = kmig::parse_variant(img_variant);
      report = cmd_image(img);
    } else if (*compare) {
      cmp.common.variant = kmig::parse_variant(cmp_variant);
      report = cmd_compare_theory(cmp);
    } else if (*resolution) {
      res.common.variant = kmig::parse_variant(res_variant);
      report = cmd_resolution_study(res);
    }
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const kmig::Error& e) {
    std::cerr << "kmig: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "kmig: internal error: " << e.what() << "\n";
    return 3;
  }
}
