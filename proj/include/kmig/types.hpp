#pragma once

#include <cmath>
#include <complex>

namespace kmig {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Point (or displacement) in the imaging plane, meters.
struct Point {
  double x{0.0};
  double y{0.0};

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator-() const { return {-x, -y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point&) const = default;

  constexpr double dot(Point o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }

  /// Counter-clockwise rotation about the origin.
  Point rotated(double radians) const {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c * x - s * y, s * x + c * y};
  }

  static Point polar(double radius, double radians) {
    return {radius * std::cos(radians), radius * std::sin(radians)};
  }
};

inline constexpr Point operator*(double s, Point p) { return p * s; }

inline double distance(Point a, Point b) { return (a - b).norm(); }

/// Strong type for an ordinary (not angular) frequency.
struct Frequency {
  double hz{0.0};

  static constexpr Frequency from_ghz(double ghz) { return Frequency{ghz * 1e9}; }
  constexpr double ghz() const { return hz / 1e9; }
  constexpr double angular() const { return 2.0 * kPi * hz; }
};

}  // namespace kmig
