#include "kmig/theory.hpp"

#include <algorithm>
#include <cmath>

#include "kmig/error.hpp"
#include "kmig/msr.hpp"
#include "kmig/specfun.hpp"

namespace kmig::theory {
namespace {

constexpr double kHalfSqrt3 = 0.866025403784438646763723170752936183;

// log of the envelope (t/2)^p / p!
double log_envelope(int p, double t) {
  return p * std::log(t / 2.0) - std::lgamma(p + 1.0);
}

// sum_{p>P} w(p) exp(power * log_envelope(p, t)), stopping once terms are
// decreasing and negligible.
template <typename Weight>
double envelope_tail(int max_order, double t, int power, Weight weight) {
  if (t == 0.0) return 0.0;
  double sum = 0.0;
  for (int p = max_order + 1; p < max_order + 100000; ++p) {
    const double term = weight(p) * std::exp(power * log_envelope(p, t));
    sum += term;
    if (p > t && term <= 1e-18 * sum) break;
    if (p > t && term == 0.0) break;
  }
  return sum;
}

}  // namespace

double structure_tail_bound(int max_order, double t) {
  return (3.0 / kPi) * envelope_tail(max_order, std::abs(t), 2, [](int p) { return 1.0 / p; });
}

double jacobi_anger_tail_bound(int max_order, double x) {
  return 4.0 * envelope_tail(max_order, std::abs(x), 1, [](int p) { return 1.0 / p; });
}

SeriesTruncation SeriesTruncation::covering(double max_argument, int max_order) {
  SeriesTruncation t;
  t.max_argument = std::abs(max_argument);
  if (max_order > 0) {
    t.max_order = max_order;
  } else {
    t.max_order = std::max(60, static_cast<int>(std::ceil(3.0 * t.max_argument)));
  }
  t.max_order = std::min(t.max_order, specfun::kMaxOrder);
  // the envelope bound grows with t, so the largest argument covers the range
  t.tail_bound = structure_tail_bound(t.max_order, t.max_argument);
  return t;
}

SeriesTruncation default_truncation(double k, double diameter) {
  return SeriesTruncation::covering(k * diameter);
}

double sin_two_thirds_pi(int p) {
  switch (((p % 3) + 3) % 3) {
    case 1:
      return kHalfSqrt3;
    case 2:
      return -kHalfSqrt3;
    default:
      return 0.0;
  }
}

KernelValue structure_kernel_at(double t, const SeriesTruncation& trunc) {
  KernelValue out;
  t = std::abs(t);
  if (t == 0.0) {
    out.value = 1.0;
    return out;
  }
  const int order = trunc.max_order;
  const auto j = specfun::bessel_j_row(order, t);
  double series = 0.0;
  for (int p = 1; p <= order; ++p) {
    if (p % 3 == 0) continue;
    const double jp = j[static_cast<std::size_t>(p)];
    series += sin_two_thirds_pi(p) * jp * jp / p;
  }
  out.value = j[0] * j[0] + (3.0 / kPi) * series;
  out.truncation_warning = order < 3.0 * t;
  out.tail_bound = structure_tail_bound(order, t);
  return out;
}

KernelValue structure_kernel(Point x, Point y, double k, const SeriesTruncation& trunc) {
  return structure_kernel_at(k * distance(x, y), trunc);
}

ImageGrid theory_map(const std::vector<PointTarget>& targets, const Region& region,
                     double spacing, double k, const SeriesTruncation& trunc, int workers) {
  ImageGrid grid = make_grid(region, spacing);
  bool warned = false;
  for (const auto& t : targets) {
    // farthest pixel from this target bounds the argument range
    const double dx = std::max(std::abs(region.x_min - t.center.x), std::abs(region.x_max - t.center.x));
    const double dy = std::max(std::abs(region.y_min - t.center.y), std::abs(region.y_max - t.center.y));
    if (!warned && trunc.max_order < 3.0 * k * std::hypot(dx, dy)) {
      grid.warnings.push_back("series truncation below 3 k |x - y| over part of the grid");
      warned = true;
    }
  }
  evaluate_grid(
      grid,
      [&](Point x) {
        Complex sum{0.0, 0.0};
        for (const auto& t : targets) {
          if (t.strength == Complex(0.0, 0.0)) continue;
          sum += t.strength * structure_kernel(x, t.center, k, trunc).value;
        }
        return std::abs(sum);
      },
      workers);
  grid.normalize();
  return grid;
}

double structure_prefactor(const ArrayConfig& config) {
  return 1.0 / (24.0 * config.receiver_radius * config.emitter_radius);
}

SeriesValue jacobi_anger_partial(double x, double phi, double theta_start, double theta_end,
                                 int max_order) {
  const double width = theta_end - theta_start;
  if (!(width > 0.0) || width > 2.0 * kPi + 1e-12) {
    throw DomainError("Jacobi-Anger window must satisfy 0 < end - start <= 2 pi");
  }
  if (max_order < 0) throw DomainError("series order must be nonnegative");
  SeriesValue out;
  if (x == 0.0) {
    out.value = {width, 0.0};
    return out;
  }
  const auto j = specfun::bessel_j_row(max_order, x);
  const double mid = (theta_end + theta_start - 2.0 * phi) / 2.0;
  const Complex powers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  Complex sum{0.0, 0.0};
  for (int p = 1; p <= max_order; ++p) {
    const double weight = j[static_cast<std::size_t>(p)] * std::cos(p * mid) *
                          std::sin(p * width / 2.0) / p;
    sum += powers[p % 4] * weight;
  }
  out.value = width * j[0] + 4.0 * sum;
  out.tail_bound = jacobi_anger_tail_bound(max_order, x);
  return out;
}

ApertureComparison aperture_sum_vs_series(double x, double phi, const ArrayConfig& config, int m,
                                          int max_order) {
  ApertureComparison out;
  const double dtheta = deg_to_rad(config.receiver_step_deg);
  const double theta_m = config.emitter_angle(m);
  // receivers ordered by angle relative to the emitter, so the window edges
  // are first and last even when the index set wraps past n = N
  std::vector<std::pair<double, Complex>> samples;
  for (int n : index_set(m, config)) {
    double rel = std::fmod(config.receiver_angle(n) - theta_m, 2.0 * kPi);
    if (rel < 0.0) rel += 2.0 * kPi;
    samples.emplace_back(rel, std::polar(1.0, x * std::cos(config.receiver_angle(n) - phi)));
  }
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& s : samples) out.discrete_sum += s.second;
  out.series = jacobi_anger_partial(x, phi, theta_m + deg_to_rad(config.aperture_start_deg),
                                    theta_m + deg_to_rad(config.aperture_end_deg), max_order)
                   .value;
  Complex trapezoid = out.discrete_sum;
  if (!samples.empty()) trapezoid -= 0.5 * (samples.front().second + samples.back().second);
  out.gap = std::abs(dtheta * trapezoid - out.series);
  out.riemann_gap = std::abs(dtheta * out.discrete_sum - out.series);
  out.sampling_warning = std::abs(x) * dtheta > kPi / 2.0;
  return out;
}

}  // namespace kmig::theory
