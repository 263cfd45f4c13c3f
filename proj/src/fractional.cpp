#include "fracpar/fractional.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "fracpar/parallel.hpp"

namespace fracpar {

cplx fractional_power(double lambda, double sigma, double s, bool adjoint) {
  if (lambda < 0.0) throw std::domain_error("fractional_power: lambda must be >= 0");
  if (adjoint) sigma = -sigma;
  double r = std::hypot(lambda, sigma);
  if (r == 0.0) return {0.0, 0.0};
  double theta = std::atan2(sigma, lambda);
  double mag = std::pow(r, s);
  return {mag * std::cos(s * theta), mag * std::sin(s * theta)};
}

namespace kernels {

void scale_modes_serial(const Eigen::VectorXd& lambda, const TimeGrid& tg,
                        const ModeMultiplier& mult, Eigen::MatrixXcd& c) {
  const int K = static_cast<int>(c.rows()), M = static_cast<int>(c.cols());
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) c(k, m) *= mult(lambda[k], tg.sigma(m));
}

void scale_modes_parallel(const Eigen::VectorXd& lambda, const TimeGrid& tg,
                          const ModeMultiplier& mult, Eigen::MatrixXcd& c) {
  const int K = static_cast<int>(c.rows()), M = static_cast<int>(c.cols());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) c(k, m) *= mult(lambda[k], tg.sigma(m));
}

}  // namespace kernels

namespace {
std::mutex g_fftw_plan_mutex;
}

struct SpectralTransform::Fft {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  int n = 0;

  explicit Fft(int nt) : n(nt) {
    std::vector<fftw_complex> buf(nt);
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fwd = fftw_plan_dft_1d(nt, buf.data(), buf.data(), FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_1d(nt, buf.data(), buf.data(), FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
  void run(fftw_plan p, cplx* row) const {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(row),
                     reinterpret_cast<fftw_complex*>(row));
  }
};

SpectralTransform::SpectralTransform(const EigenBasis& basis, const TimeGrid& tg)
    : basis_(&basis), time_(tg), fft_(std::make_unique<Fft>(tg.n)) {}

SpectralTransform::~SpectralTransform() = default;

void SpectralTransform::check_field(const SpaceTimeField& u) const {
  if (u.nspace() != basis_->size())
    throw std::invalid_argument("spectral transform: field size does not match the basis");
  if (!(u.time == time_))
    throw std::invalid_argument("spectral transform: time grid mismatch");
}

Eigen::MatrixXcd SpectralTransform::to_spectral(const SpaceTimeField& u) const {
  check_field(u);
  const int ns = u.nspace(), nt = u.nt();
  // spatial projection first (nmodes x nt), then per-mode time DFT
  Eigen::MatrixXcd c = basis_->vectors().transpose() * (basis_->cell_weight() * u.data);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ns; ++k) {
    std::vector<cplx> row(nt);
    for (int j = 0; j < nt; ++j) row[j] = c(k, j);
    fft_->run(fft_->fwd, row.data());
    // c_m = (-1)^m FFT_m / n   (phase from t_0 = -T_pad)
    for (int m = 0; m < nt; ++m) c(k, m) = row[m] * ((m & 1) ? -1.0 : 1.0) / double(nt);
  }
  return c;
}

SpaceTimeField SpectralTransform::from_spectral(const Eigen::MatrixXcd& c) const {
  const int ns = static_cast<int>(c.rows()), nt = static_cast<int>(c.cols());
  if (ns != basis_->size() || nt != time_.n)
    throw std::invalid_argument("from_spectral: coefficient layout mismatch");
  Eigen::MatrixXcd g(ns, nt);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ns; ++k) {
    std::vector<cplx> row(nt);
    for (int m = 0; m < nt; ++m) row[m] = c(k, m) * ((m & 1) ? -1.0 : 1.0);
    fft_->run(fft_->bwd, row.data());
    for (int j = 0; j < nt; ++j) g(k, j) = row[j];
  }
  SpaceTimeField u(ns, time_, 0);
  u.data = basis_->vectors() * g;
  return u;
}

SpaceTimeField SpectralTransform::apply_multiplier(const SpaceTimeField& u,
                                                   const ModeMultiplier& mult,
                                                   bool parallel) const {
  Eigen::MatrixXcd c = to_spectral(u);
  if (parallel)
    kernels::scale_modes_parallel(basis_->lambdas(), time_, mult, c);
  else
    kernels::scale_modes_serial(basis_->lambdas(), time_, mult, c);
  SpaceTimeField out = from_spectral(c);
  out.grid_hash = u.grid_hash;
  return out;
}

SpaceTimeField SpectralTransform::apply_hs(const SpaceTimeField& u, double s,
                                           bool adjoint) const {
  return apply_multiplier(
      u, [s, adjoint](double l, double sg) { return fractional_power(l, sg, s, adjoint); });
}

namespace {

struct LogSimpsonRule {
  std::vector<double> tau;
  std::vector<double> w;  // weights in u = log tau, Simpson composite
};

LogSimpsonRule make_log_simpson(const BalakrishnanRule& r) {
  if (r.nodes < 8) throw std::invalid_argument("balakrishnan: need at least 8 nodes");
  if (!(r.tau_lo > 0.0 && r.tau_hi > r.tau_lo))
    throw std::domain_error("balakrishnan: tau range must be positive and ordered");
  LogSimpsonRule rule;
  const int n = r.nodes;
  rule.tau.resize(n);
  rule.w.assign(n, 0.0);
  const double ua = std::log(r.tau_lo), ub = std::log(r.tau_hi);
  const double h = (ub - ua) / (n - 1);
  for (int i = 0; i < n; ++i) rule.tau[i] = std::exp(ua + i * h);
  // composite Simpson over an even panel count, 3/8 rule on the remainder
  int m = (n % 2 == 1) ? n : n - 3;  // nodes covered by plain Simpson
  rule.w[0] += h / 3.0;
  for (int i = 1; i < m - 1; ++i) rule.w[i] += (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  rule.w[m - 1] += h / 3.0;
  if (n % 2 == 0) {
    rule.w[m - 1] += 3.0 * h / 8.0;
    rule.w[m] += 9.0 * h / 8.0;
    rule.w[m + 1] += 9.0 * h / 8.0;
    rule.w[m + 2] += 3.0 * h / 8.0;
  }
  return rule;
}

}  // namespace

cplx balakrishnan_multiplier(double lambda, double sigma, double s,
                             const BalakrishnanRule& rule) {
  static thread_local LogSimpsonRule cached;
  static thread_local BalakrishnanRule cached_for{-1, 0, 0};
  if (cached_for.nodes != rule.nodes || cached_for.tau_lo != rule.tau_lo ||
      cached_for.tau_hi != rule.tau_hi) {
    cached = make_log_simpson(rule);
    cached_for = rule;
  }
  const cplx mu(lambda, sigma);
  cplx I = 0.0;
  for (std::size_t i = 0; i < cached.tau.size(); ++i) {
    double tau = cached.tau[i];
    // integrand (e^{-mu tau} - 1) tau^{-1-s}, times the log-substitution
    // jacobian tau
    cplx e = std::exp(-mu * tau) - 1.0;
    I += cached.w[i] * e * std::pow(tau, -s);
  }
  // small-tau Taylor correction of int_0^{tau_lo} (e^{-mu t} - 1) t^{-1-s} dt
  double tl = rule.tau_lo;
  I += -mu * std::pow(tl, 1.0 - s) / (1.0 - s) +
       mu * mu * std::pow(tl, 2.0 - s) / (2.0 * (2.0 - s)) -
       mu * mu * mu * std::pow(tl, 3.0 - s) / (6.0 * (3.0 - s));
  // large-tau tail of the "-1" term; e^{-mu tau} is negligible there as long
  // as lambda tau_hi >> 1 (Dirichlet truncation keeps lambda > 0)
  I += -std::pow(rule.tau_hi, -s) / s;
  return -(s / std::tgamma(1.0 - s)) * I;
}

SpaceTimeField SpectralTransform::balakrishnan_apply(const SpaceTimeField& u, double s,
                                                     const BalakrishnanRule& rule) const {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("balakrishnan: s must be in (0,1)");
  return apply_multiplier(
      u, [s, &rule](double l, double sg) { return balakrishnan_multiplier(l, sg, s, rule); });
}

double SpectralTransform::hs_norm(const SpaceTimeField& u, double r) const {
  Eigen::MatrixXcd c = to_spectral(u);
  double acc = 0.0;
  for (int k = 0; k < c.rows(); ++k) {
    double l = basis_->lambdas()[k];
    for (int m = 0; m < c.cols(); ++m) {
      double sg = time_.sigma(m);
      double w = std::pow(1.0 + l * l + sg * sg, 0.5 * r);
      acc += w * std::norm(c(k, m));
    }
  }
  return std::sqrt(acc);
}

}  // namespace fracpar
