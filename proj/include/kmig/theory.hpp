#pragma once

#include <vector>

#include "kmig/forward.hpp"
#include "kmig/geometry.hpp"
#include "kmig/imaging.hpp"
#include "kmig/types.hpp"

/// Bessel-series structure of the limited-aperture Kirchhoff map: for a
/// point target at y the map behaves like
///   J0(t)^2 + (3/pi) sum_{p>=1} (1/p) J_p(t)^2 sin(2 p pi / 3),  t = k |x - y|,
/// together with the partial Jacobi-Anger sums it is built from.
namespace kmig::theory {

/// Series cutoff plus a bound on the neglected tail,
///   tail_bound >= (3/pi) sum_{p>P} (1/p) |J_p(t)|^2   for all t <= max_argument,
/// from the envelope |J_p(t)| <= (t/2)^p / p!.
struct SeriesTruncation {
  int max_order = 60;
  double max_argument = 0.0;
  double tail_bound = 0.0;

  /// P = max(60, ceil(3 t_max)) capped at the Bessel order limit, unless an
  /// explicit order is given.
  static SeriesTruncation covering(double max_argument, int max_order = 0);
};

/// Default truncation for wavenumber k over a region of the given diameter.
SeriesTruncation default_truncation(double k, double diameter);

/// Upper bound on (3/pi) sum_{p>P} (1/p) ((t/2)^p / p!)^2.
double structure_tail_bound(int max_order, double t);
/// Upper bound on 4 sum_{p>P} (1/p) (|x|/2)^p / p!.
double jacobi_anger_tail_bound(int max_order, double x);

/// sin(2 p pi / 3) without rounding: +-sqrt(3)/2 or exactly 0.
double sin_two_thirds_pi(int p);

struct KernelValue {
  double value = 0.0;
  double tail_bound = 0.0;
  /// Set when P < 3 t, the empirical convergence margin.
  bool truncation_warning = false;
};

/// Bracket of the structure formula at t = k |x - y|; orders divisible by 3
/// are skipped. Equals 1 exactly at x = y.
KernelValue structure_kernel(Point x, Point y, double k, const SeriesTruncation& trunc);
KernelValue structure_kernel_at(double t, const SeriesTruncation& trunc);

/// Max-normalized |sum_s w_s kernel(x, y_s)| over the grid.
ImageGrid theory_map(const std::vector<PointTarget>& targets, const Region& region,
                     double spacing, double k, const SeriesTruncation& trunc, int workers = 0);

/// Absolute-scale prefactor 1/(24 R E) dropped by the normalized maps.
double structure_prefactor(const ArrayConfig& config);

struct SeriesValue {
  Complex value;
  double tail_bound = 0.0;
};

/// Closed form of the integral of e^{i x cos(theta - phi)} over
/// [theta_start, theta_end]:
///   (te - ts) J0(x) + 4 sum_p (i^p / p) J_p(x) cos(p (te + ts - 2 phi) / 2) sin(p (te - ts) / 2).
/// Requires 0 < te - ts <= 2 pi.
SeriesValue jacobi_anger_partial(double x, double phi, double theta_start, double theta_end,
                                 int max_order);

struct ApertureComparison {
  Complex discrete_sum;  // plain sum over the measured receivers of emitter m
  Complex series;        // closed form over the aperture window
  /// |dtheta * (discrete_sum - (f_first + f_last) / 2) - series|: the sum with
  /// trapezoid end weights, first/last being the receivers at the window edges.
  double gap = 0.0;
  /// |dtheta * discrete_sum - series|, dominated by the O(dtheta) end effect.
  double riemann_gap = 0.0;
  /// x * receiver step > pi / 2: the receiver sampling is too coarse.
  bool sampling_warning = false;
};

/// Compares sum_{n in I(m)} e^{i x cos(theta_n - phi)} with the Jacobi-Anger
/// closed form over [theta_m + aperture_start, theta_m + aperture_end].
ApertureComparison aperture_sum_vs_series(double x, double phi, const ArrayConfig& config, int m,
                                          int max_order);

}  // namespace kmig::theory
