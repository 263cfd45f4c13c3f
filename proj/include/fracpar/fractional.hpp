#ifndef FRACPAR_FRACTIONAL_HPP
#define FRACPAR_FRACTIONAL_HPP

#include <complex>
#include <functional>
#include <memory>

#include "fracpar/eigenbasis.hpp"
#include "fracpar/spacetime.hpp"

namespace fracpar {

using cplx = std::complex<double>;

// Principal branch (lambda + i sigma)^s for lambda >= 0; the angle lies in
// [-pi/2, pi/2] and the lambda = sigma = 0 mode maps to zero. The adjoint
// flag conjugates the frequency: (lambda - i sigma)^s.
cplx fractional_power(double lambda, double sigma, double s, bool adjoint = false);

// mode multiplier callback: (lambda_k, sigma_m) -> factor
using ModeMultiplier = std::function<cplx(double, double)>;

namespace kernels {
// c(k, m) *= mult(lambda_k, sigma_m). The parallel version partitions rows;
// results are bit-identical to the serial one for any thread count.
void scale_modes_serial(const Eigen::VectorXd& lambda, const TimeGrid& tg,
                        const ModeMultiplier& mult, Eigen::MatrixXcd& c);
void scale_modes_parallel(const Eigen::VectorXd& lambda, const TimeGrid& tg,
                          const ModeMultiplier& mult, Eigen::MatrixXcd& c);
}  // namespace kernels

struct BalakrishnanRule {
  int nodes = 400;
  double tau_lo = 1e-8;
  double tau_hi = 1e4;
};

// Diagonal space-time spectral calculus over one eigenbasis + time grid.
// Coefficients c_{k,m} are with respect to v_k(x) e^{i sigma_m t}; the
// round trip to_spectral / from_spectral is exact.
class SpectralTransform {
 public:
  SpectralTransform(const EigenBasis& basis, const TimeGrid& tg);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const EigenBasis& basis() const { return *basis_; }
  const TimeGrid& time() const { return time_; }

  Eigen::MatrixXcd to_spectral(const SpaceTimeField& u) const;
  SpaceTimeField from_spectral(const Eigen::MatrixXcd& c) const;

  // generic diagonal operator
  SpaceTimeField apply_multiplier(const SpaceTimeField& u, const ModeMultiplier& mult,
                                  bool parallel = true) const;

  // H^s (adjoint: H_*^s) by the multiplier (lambda_k + i sigma_m)^s
  SpaceTimeField apply_hs(const SpaceTimeField& u, double s, bool adjoint = false) const;

  // Balakrishnan quadrature oracle: -(s / Gamma(1-s)) sum_i w_i
  // (P^H_{tau_i} u - u) / tau_i^{1+s}, with the evolutive semigroup realized
  // per coefficient as e^{-(lambda + i sigma) tau} (spatial heat semigroup
  // combined with the frequency-domain time shift e^{-i sigma tau}).
  // Log-spaced nodes; composite Simpson weights in log tau; analytic
  // corrections for both endpoints (P_tau u - u = O(tau) below tau_lo, the
  // "-u" tail above tau_hi).
  SpaceTimeField balakrishnan_apply(const SpaceTimeField& u, double s,
                                    const BalakrishnanRule& rule = {}) const;

  // ( sum_{k,m} (1 + |lambda_k + i sigma_m|^2)^{r/2} |c_{k,m}|^2 )^{1/2}
  double hs_norm(const SpaceTimeField& u, double r) const;

  void check_field(const SpaceTimeField& u) const;

 private:
  const EigenBasis* basis_;
  TimeGrid time_;
  struct Fft;
  std::unique_ptr<Fft> fft_;
};

// multiplier used by balakrishnan_apply, exposed for per-mode tests
cplx balakrishnan_multiplier(double lambda, double sigma, double s,
                             const BalakrishnanRule& rule);

}  // namespace fracpar

#endif
