#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kmig/geometry.hpp"
#include "kmig/msr.hpp"
#include "kmig/types.hpp"

namespace kmig {

/// exact-green: conjugated Green's functions G(x, station).
/// asymptotic: their far-field plane-wave form.
enum class SteeringVariant { ExactGreen, Asymptotic };

std::string_view to_string(SteeringVariant v);
/// Accepts "exact", "exact-green", "asymptotic".
SteeringVariant parse_variant(std::string_view s);

struct SteeringVectors {
  std::vector<Complex> receiver;  // N entries, conj G(x, r_n)
  std::vector<Complex> emitter;   // M entries, conj G(x, e_m)
  SteeringVariant variant = SteeringVariant::Asymptotic;
};

/// x must lie strictly inside both rings; the asymptotic variant also needs
/// k * min(R, E) >= 10. A point on a station throws SingularityError.
SteeringVectors steering(Point x, const ArrayConfig& config, double k, SteeringVariant variant);

/// Pre-modulus value G_R(x) K G_E(x), summed n-outer, m-inner.
Complex km_complex(Point x, const MsrMatrix& msr, double k, SteeringVariant variant);
/// |G_R(x) K G_E(x)|.
double km_value(Point x, const MsrMatrix& msr, double k, SteeringVariant variant);

/// Axis-aligned rectangle, meters.
struct Region {
  double x_min = -0.2;
  double x_max = 0.2;
  double y_min = -0.2;
  double y_max = 0.2;

  static Region square(double halfwidth) { return {-halfwidth, halfwidth, -halfwidth, halfwidth}; }
};

/// Pixel-center grid. Pixel (i, j) sits at origin + (i, j) * spacing; values
/// are stored row-major with j = 0 the lowest y (+x right, +y up).
struct ImageGrid {
  Point origin;
  double spacing = 0.002;
  int width = 0;
  int height = 0;
  std::vector<double> values;
  /// Maximum before normalization (0 for an identically zero map).
  double scale = 0.0;
  std::vector<std::string> warnings;

  Point position(int i, int j) const { return {origin.x + i * spacing, origin.y + j * spacing}; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
  std::size_t size() const { return values.size(); }

  double max_value() const;
  /// Divides by the global maximum; a zero map stays zero.
  void normalize();
};

/// Empty grid covering `region` with pixel centers from the lower-left
/// corner; throws ConfigError for an empty region or nonpositive spacing.
ImageGrid make_grid(const Region& region, double spacing);

/// Worker count from KMIG_WORKERS, else the hardware concurrency.
int default_worker_count();

/// Fills every pixel with fn(position). Pixels are split across workers;
/// each pixel is computed independently so the result does not depend on
/// the worker count.
void evaluate_grid(ImageGrid& grid, const std::function<double(Point)>& fn, int workers = 0);

/// Max-normalized map of km_value over `region`. Warns (in grid.warnings)
/// when the spacing exceeds lambda / 10.
ImageGrid km_map(const Region& region, double spacing, const MsrMatrix& msr, double k,
                 SteeringVariant variant, int workers = 0);

struct Peak {
  Point position;
  double value = 0.0;
  int i = 0;
  int j = 0;
};

/// Pixel with the largest value (first in storage order on ties).
Peak argmax(const ImageGrid& grid);

/// Pixels strictly greater than all existing 8-neighbours and at least
/// rel_threshold * max, greedily thinned so kept peaks are min_separation
/// apart (larger value wins). Sorted by decreasing value.
std::vector<Peak> local_maxima(const ImageGrid& grid, double rel_threshold,
                               double min_separation);

}  // namespace kmig
