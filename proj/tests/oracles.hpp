#pragma once

// Reference implementations independent of the library code paths.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

/// J_p(x) = sum_k (-1)^k (x/2)^(2k+p) / (k! (k+p)!), summed in 100 digits.
inline double bessel_j_series(int p, double x) {
  const Big half = Big(x) / 2;
  const Big q = half * half;
  Big term = 1;
  for (int i = 1; i <= p; ++i) term *= half / i;
  Big sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= -q / (Big(k) * (k + p));
    sum += term;
    if (term == 0 || abs(term) < abs(sum) * Big("1e-60")) break;
  }
  return static_cast<double>(sum);
}

/// Y0(x) = (2/pi)(ln(x/2) + gamma) J0(x) + (2/pi) sum_k (-1)^(k+1) H_k (x^2/4)^k / (k!)^2.
inline double bessel_y0_series(double x) {
  const Big gamma("0.57721566490153286060651209008240243104215933593992359880576723488486772677766467");
  const Big pi = boost::math::constants::pi<Big>();
  const Big q = Big(x) * x / 4;
  Big term = 1;  // (q^k)/(k!)^2 with sign
  Big j0 = 1;
  Big harmonic = 0;
  Big tail = 0;
  for (int k = 1; k < 2000; ++k) {
    term *= -q / (Big(k) * k);
    harmonic += Big(1) / k;
    j0 += term;
    tail -= term * harmonic;
    if (abs(term) * (harmonic + 1) < Big("1e-60")) break;
  }
  const Big y = 2 / pi * ((log(Big(x) / 2) + gamma) * j0 + tail);
  return static_cast<double>(y);
}

/// Adaptive Gauss-Kronrod value of the integral of e^{i x cos(theta - phi)}
/// over [a, b].
inline std::complex<double> jacobi_anger_quadrature(double x, double phi, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const auto re = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return std::cos(x * std::cos(t - phi)); }, a, b, 15, 1e-13);
  const auto im = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return std::sin(x * std::cos(t - phi)); }, a, b, 15, 1e-13);
  return {re, im};
}

/// H0^(1)(z) from the series oracles.
inline std::complex<double> hankel1_0(double z) {
  return {bessel_j_series(0, z), bessel_y0_series(z)};
}

}  // namespace oracle
