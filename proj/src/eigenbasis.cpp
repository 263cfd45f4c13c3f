#include "fracpar/eigenbasis.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace fracpar {

namespace {
constexpr char kCacheMagic[8] = {'F', 'P', 'E', 'B', '0', '0', '0', '1'};
}

std::uint64_t eigenbasis_key(const Grid& grid, const CoefficientField& a, Boundary bc) {
  std::uint64_t h = grid.hash() ^ (a.hash(grid) * 0x9e3779b97f4a7c15ULL);
  h ^= (bc == Boundary::Neumann) ? 0x5bd1e9955bd1e995ULL : 0;
  return h;
}

EigenBasis eigendecompose(const DiscreteElliptic& op, const Grid& grid,
                          const CoefficientField& a, int dense_cap) {
  const int n = static_cast<int>(op.matrix.rows());
  if (n > dense_cap)
    throw std::invalid_argument(
        "eigendecompose: problem size exceeds the dense-eigensolve cap; lower the "
        "resolution or raise the cap");

  Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix);
  double asym = (dense - dense.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff()))
    throw std::runtime_error("eigendecompose: operator matrix not symmetric");
  dense = 0.5 * (dense + dense.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver failed");

  EigenBasis b;
  b.lambda_ = es.eigenvalues();
  b.v_ = es.eigenvectors();
  b.weight_ = std::pow(grid.spacing(), grid.dimension());
  b.v_ /= std::sqrt(b.weight_);  // orthonormal w.r.t. h^d sum
  b.boundary_ = op.boundary;
  b.key_ = eigenbasis_key(grid, a, op.boundary);
  // clamp tiny negative roundoff (Neumann kernel mode)
  for (int i = 0; i < b.lambda_.size(); ++i)
    if (b.lambda_[i] < 0.0 && b.lambda_[i] > -1e-10) b.lambda_[i] = 0.0;
  return b;
}

Eigen::VectorXd EigenBasis::apply_semigroup(const Eigen::VectorXd& u, double tau) const {
  if (tau < 0.0) throw std::domain_error("apply_semigroup: tau must be >= 0");
  Eigen::VectorXd c = project(u);
  for (int k = 0; k < c.size(); ++k) c[k] *= std::exp(-lambda_[k] * tau);
  return synthesize(c);
}

double EigenBasis::heat_kernel(int x, int y, double tau) const {
  if (tau < 0.0) throw std::domain_error("heat_kernel: tau must be >= 0");
  double s = 0.0;
  for (int k = 0; k < lambda_.size(); ++k)
    s += std::exp(-lambda_[k] * tau) * v_(x, k) * v_(y, k);
  return s;
}

void EigenBasis::cache_store(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cache_store: cannot open " + path);
  std::int64_t n = lambda_.size();
  std::int32_t bc = boundary_ == Boundary::Neumann ? 1 : 0;
  bool ok = std::fwrite(kCacheMagic, 1, 8, f) == 8 &&
            std::fwrite(&key_, sizeof key_, 1, f) == 1 &&
            std::fwrite(&n, sizeof n, 1, f) == 1 &&
            std::fwrite(&weight_, sizeof weight_, 1, f) == 1 &&
            std::fwrite(&bc, sizeof bc, 1, f) == 1 &&
            std::fwrite(lambda_.data(), sizeof(double), n, f) == static_cast<std::size_t>(n) &&
            std::fwrite(v_.data(), sizeof(double), n * n, f) == static_cast<std::size_t>(n * n);
  std::fclose(f);
  if (!ok) throw std::runtime_error("cache_store: short write to " + path);
}

bool EigenBasis::cache_load(const std::string& path, std::uint64_t expected_key,
                            EigenBasis* out, std::string* why) {
  auto miss = [&](const char* reason) {
    if (why) *why = reason;
    return false;
  };
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return miss("cache file absent");
  char magic[8];
  std::uint64_t key = 0;
  std::int64_t n = 0;
  double weight = 1.0;
  std::int32_t bc = 0;
  bool head = std::fread(magic, 1, 8, f) == 8 && std::fread(&key, sizeof key, 1, f) == 1 &&
              std::fread(&n, sizeof n, 1, f) == 1 &&
              std::fread(&weight, sizeof weight, 1, f) == 1 &&
              std::fread(&bc, sizeof bc, 1, f) == 1;
  if (!head || std::memcmp(magic, kCacheMagic, 8) != 0) {
    std::fclose(f);
    return miss("cache header unreadable or version mismatch");
  }
  if (key != expected_key) {
    std::fclose(f);
    return miss("cache key stale (grid or coefficients changed)");
  }
  if (n <= 0 || n > 100000) {
    std::fclose(f);
    return miss("cache size implausible");
  }
  EigenBasis b;
  b.lambda_.resize(n);
  b.v_.resize(n, n);
  bool body = std::fread(b.lambda_.data(), sizeof(double), n, f) == static_cast<std::size_t>(n) &&
              std::fread(b.v_.data(), sizeof(double), n * n, f) == static_cast<std::size_t>(n * n);
  std::fclose(f);
  if (!body) return miss("cache payload truncated");
  b.weight_ = weight;
  b.boundary_ = bc ? Boundary::Neumann : Boundary::Dirichlet;
  b.key_ = key;
  *out = std::move(b);
  return true;
}

}  // namespace fracpar
