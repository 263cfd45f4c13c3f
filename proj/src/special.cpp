#include "fracpar/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracpar/quadrature.hpp"

namespace fracpar {

namespace {

bool is_integer(double v) { return v == std::floor(v); }

// Ascending series I_nu(x) = (x/2)^nu sum_k (x^2/4)^k / (k! Gamma(k+nu+1)).
// All terms positive for x > 0, nu > -1: no cancellation.
double bessel_i_series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term < sum * 1e-17 && k > 0.5 * x) break;
  }
  return sum;
}

// Asymptotic expansion of e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum (-1)^k a_k(nu)/x^k,
// a_k = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k). Truncated at the smallest
// term; for x >= 35 the truncation error is far below double precision.
double bessel_i_scaled_asym(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 60; ++k) {
    double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    term *= -f;
    if (std::abs(term) >= prev) break;  // divergence onset
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt, scaled by e^{x}.
double bessel_k_scaled_integral(double nu, double x) {
  // integrand e^{x(1 - cosh t)} cosh(nu t); effective support where
  // x (cosh t - 1) <= ~45.
  double tcut = std::acosh(1.0 + 48.0 / x);
  auto f = [&](double t) { return std::exp(x * (1.0 - std::cosh(t))) * std::cosh(nu * t); };
  return integrate_adaptive_simpson(f, 0.0, tcut, 1e-15 * std::exp(std::abs(nu) * tcut), 44);
}

}  // namespace

double bessel_i(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_i: x must be > 0");
  if (is_integer(nu) && nu != 0.0)
    throw std::domain_error("bessel_i: nonzero integer order not supported");
  if (x <= 35.0) return bessel_i_series(nu, x);
  double s = bessel_i_scaled_asym(nu, x);
  if (x > 700.0) throw std::overflow_error("bessel_i: overflow; use bessel_i_scaled");
  return s * std::exp(x);
}

double bessel_i_scaled(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_i_scaled: x must be > 0");
  if (x <= 35.0) return bessel_i_series(nu, x) * std::exp(-x);
  return bessel_i_scaled_asym(nu, x);
}

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
  nu = std::abs(nu);  // K_{-nu} = K_nu
  if (is_integer(nu))
    throw std::domain_error("bessel_k: integer order not supported");
  if (x < 2.0) {
    double inum = bessel_i_series(-nu, x) - bessel_i_series(nu, x);
    return 0.5 * M_PI * inum / std::sin(nu * M_PI);
  }
  return bessel_k_scaled_integral(nu, x) * std::exp(-x);
}

double bessel_k_scaled(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k_scaled: x must be > 0");
  nu = std::abs(nu);
  if (is_integer(nu))
    throw std::domain_error("bessel_k_scaled: integer order not supported");
  if (x < 2.0) {
    double inum = bessel_i_series(-nu, x) - bessel_i_series(nu, x);
    return 0.5 * M_PI * inum / std::sin(nu * M_PI) * std::exp(x);
  }
  return bessel_k_scaled_integral(nu, x);
}

double bessel_eval(BesselKind kind, double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_eval: x must be > 0");
  if (is_integer(nu) && !(kind == BesselKind::I && nu == 0.0))
    throw std::domain_error("bessel_eval: integer order not supported");
  return kind == BesselKind::I ? bessel_i(nu, x) : bessel_k(nu, x);
}

}  // namespace fracpar
