#ifndef FRACPAR_EIGENBASIS_HPP
#define FRACPAR_EIGENBASIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "fracpar/elliptic.hpp"

namespace fracpar {

// Discrete spectral resolution of -div(A grad): eigenvalues ascending,
// eigenvectors orthonormal in the grid inner product h^d sum.
class EigenBasis {
 public:
  EigenBasis() = default;

  const Eigen::VectorXd& lambdas() const { return lambda_; }
  const Eigen::MatrixXd& vectors() const { return v_; }  // columns = modes
  int size() const { return static_cast<int>(lambda_.size()); }
  double cell_weight() const { return weight_; }          // h^d
  Boundary boundary() const { return boundary_; }
  std::uint64_t key() const { return key_; }              // grid+coeff+bc hash

  // coefficients c_k = <v_k, u>_grid
  Eigen::VectorXd project(const Eigen::VectorXd& u) const { return v_.transpose() * (weight_ * u); }
  Eigen::VectorXd synthesize(const Eigen::VectorXd& c) const { return v_ * c; }

  // e^{-tau L} u via eigen-coefficients; tau >= 0
  Eigen::VectorXd apply_semigroup(const Eigen::VectorXd& u, double tau) const;
  // p(x, y, tau) = sum_k e^{-lambda_k tau} v_k(x) v_k(y); node indices
  double heat_kernel(int x, int y, double tau) const;

  friend EigenBasis eigendecompose(const DiscreteElliptic&, const Grid&,
                                   const CoefficientField&, int);

  // binary cache round trip (versioned header + key check). load returns
  // false on miss: absent file, version mismatch, stale key, short read.
  void cache_store(const std::string& path) const;
  static bool cache_load(const std::string& path, std::uint64_t expected_key,
                         EigenBasis* out, std::string* why = nullptr);

 private:
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd v_;
  double weight_ = 1.0;
  Boundary boundary_ = Boundary::Dirichlet;
  std::uint64_t key_ = 0;
};

// Dense eigendecomposition, capped (default 4096 unknowns).
EigenBasis eigendecompose(const DiscreteElliptic& op, const Grid& grid,
                          const CoefficientField& a, int dense_cap = 4096);

std::uint64_t eigenbasis_key(const Grid& grid, const CoefficientField& a, Boundary bc);

}  // namespace fracpar

#endif
