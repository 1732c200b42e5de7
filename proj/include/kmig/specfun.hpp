#pragma once

#include <vector>

#include "kmig/types.hpp"

/// Integer-order Bessel functions of the first kind and the zero-order
/// Hankel function of the first kind. All functions are pure.
namespace kmig::specfun {

inline constexpr int kMaxOrder = 256;
inline constexpr double kMaxArgument = 1e4;

/// Argument above which Y0 switches from the logarithmic power series to the
/// Hankel asymptotic expansion.
inline constexpr double kY0SeriesLimit = 15.0;

/// J_p(x) by Miller's downward recurrence, normalized with the Neumann sum
/// J0 + 2 (J2 + J4 + ...) = 1. Throws DomainError for p outside [0, 256],
/// non-finite x, or |x| > 1e4.
double bessel_j(int order, double x);

/// J_0(x) .. J_P(x) from a single downward recurrence.
std::vector<double> bessel_j_row(int max_order, double x);

/// Y_0(z), z > 0.
double bessel_y0(double z);

/// H0^(1)(z) = J0(z) + i Y0(z), z > 0. The singularity at z = 0 is the
/// caller's problem: z <= 0 throws DomainError.
Complex hankel1_0(double z);

/// Far-field plane-wave form of H0^(1)(k |x - station|) for a station on a
/// ring of radius `ring_radius`:
///   (1 - i) e^{i k rho} / sqrt(k rho pi) * e^{-i k theta_hat . x}
/// where theta_hat is the unit direction of the station. Requires
/// k * ring_radius >= 1.
Complex hankel1_0_asymptotic(double k, Point station, Point x, double ring_radius);

}  // namespace kmig::specfun
