#include "kmig/specfun.hpp"

#include <cmath>
#include <string>

#include "kmig/error.hpp"

namespace kmig::specfun {
namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

void check_bessel_args(int order, double x) {
  if (order < 0 || order > kMaxOrder) {
    throw DomainError("Bessel order " + std::to_string(order) + " outside [0, " +
                      std::to_string(kMaxOrder) + "]");
  }
  if (!std::isfinite(x)) throw DomainError("Bessel argument is not finite");
  if (std::abs(x) > kMaxArgument) {
    throw DomainError("Bessel argument " + std::to_string(x) + " exceeds " +
                      std::to_string(kMaxArgument));
  }
}

// Even starting order, well past both the requested order and the argument.
int miller_start(int order, double ax) {
  const double reach = std::max(static_cast<double>(order), ax);
  int start = static_cast<int>(std::ceil(reach + 20.0 + 10.0 * std::sqrt(reach)));
  return start + (start & 1);
}

// Runs the downward recurrence from the Miller start to order 0 and calls
// keep(p, value) for p <= max_order; `rescale(f)` is called whenever the
// running values are multiplied by f. Returns the unnormalized Neumann sum.
template <typename Keep, typename Rescale>
double miller_recurrence(int max_order, double ax, Keep&& keep, Rescale&& rescale) {
  const int start = miller_start(max_order, ax);
  const double two_over_x = 2.0 / ax;
  double above = 0.0;  // J_{p+1}
  double here = 1e-30;  // J_p, arbitrary seed
  double sum = 0.0;
  for (int p = start; p > 0; --p) {
    if (p <= max_order) keep(p, here);
    if ((p & 1) == 0) sum += 2.0 * here;
    const double below = p * two_over_x * here - above;
    above = here;
    here = below;
    if (std::abs(here) > kRescaleAbove) {
      here *= kRescaleFactor;
      above *= kRescaleFactor;
      sum *= kRescaleFactor;
      rescale(kRescaleFactor);
    }
  }
  keep(0, here);
  return sum + here;
}

}  // namespace

double bessel_j(int order, double x) {
  check_bessel_args(order, x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  double value = 0.0;
  const double norm = miller_recurrence(
      order, ax,
      [&](int p, double v) {
        if (p == order) value = v;
      },
      [&](double f) { value *= f; });
  double result = value / norm;
  if (x < 0.0 && (order & 1)) result = -result;
  return result;
}

std::vector<double> bessel_j_row(int max_order, double x) {
  check_bessel_args(max_order, x);
  std::vector<double> row(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    row[0] = 1.0;
    return row;
  }
  const double ax = std::abs(x);
  const double norm = miller_recurrence(
      max_order, ax, [&](int p, double v) { row[static_cast<std::size_t>(p)] = v; },
      [&](double f) {
        for (double& v : row) v *= f;
      });
  for (std::size_t p = 0; p < row.size(); ++p) {
    row[p] /= norm;
    if (x < 0.0 && (p & 1)) row[p] = -row[p];
  }
  return row;
}

namespace {

// Y0(z) = (2/pi) [ (ln(z/2) + gamma) J0(z) + sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k / (k!)^2 ]
// summed in extended precision; the alternating terms peak near k = z/2.
double y0_power_series(double z) {
  const long double q = static_cast<long double>(z) * z / 4.0L;
  long double term = 1.0L;  // (-q)^k / (k!)^2
  long double j0 = 1.0L;
  long double harmonic = 0.0L;
  long double tail = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    j0 += term;
    tail -= harmonic * term;
    if (k > q && std::abs(term) * harmonic < 1e-24L) break;
  }
  const long double two_over_pi = 2.0L / 3.141592653589793238462643383279502884L;
  const long double log_term = std::log(static_cast<long double>(z) / 2.0L) + kEulerGamma;
  return static_cast<double>(two_over_pi * (log_term * j0 + tail));
}

// Hankel asymptotic expansion: Y0 ~ sqrt(2/(pi z)) (P sin w + Q cos w),
// w = z - pi/4, truncated at the smallest term.
double y0_asymptotic(double z) {
  double p_sum = 1.0;
  double q_sum = 0.0;
  double a = 1.0;  // a_k(0) / z^k with the alternating sign folded in below
  double last = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= -(odd * odd) / (8.0 * k * z);
    const double mag = std::abs(a);
    if (mag > last) break;
    last = mag;
    // P collects even k with sign (-1)^{k/2}; Q odd k with sign (-1)^{(k-1)/2}.
    if (k % 2 == 0) {
      p_sum += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
    } else {
      q_sum += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * a;
    }
    if (mag < 1e-17) break;
  }
  const double w = z - kPi / 4.0;
  return std::sqrt(2.0 / (kPi * z)) * (p_sum * std::sin(w) + q_sum * std::cos(w));
}

}  // namespace

double bessel_y0(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("Y0 requires a finite positive argument");
  }
  if (z > kMaxArgument) throw DomainError("Y0 argument exceeds " + std::to_string(kMaxArgument));
  return z <= kY0SeriesLimit ? y0_power_series(z) : y0_asymptotic(z);
}

Complex hankel1_0(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("H0(1) requires a finite positive argument");
  }
  return {bessel_j(0, z), bessel_y0(z)};
}

Complex hankel1_0_asymptotic(double k, Point station, Point x, double ring_radius) {
  const double k_rho = k * ring_radius;
  if (!(k_rho >= 1.0)) {
    throw DomainError("asymptotic Hankel form requires k * rho >= 1");
  }
  const double station_norm = station.norm();
  if (station_norm == 0.0) throw DomainError("station at the origin has no direction");
  const Point direction = station * (1.0 / station_norm);
  const double phase = k_rho - k * direction.dot(x);
  return Complex(1.0, -1.0) * std::polar(1.0 / std::sqrt(k_rho * kPi), phase);
}

}  // namespace kmig::specfun
