#include "fracpar/coeff.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fracpar {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

// eigenvalues of the d x d block; in 1d only a11 is live
std::array<double, 2> sym_eigs(const MatSample& m, int d) {
  if (d == 1) return {m[0], m[0]};
  double tr = m[0] + m[1];
  double det = m[0] * m[1] - m[2] * m[2];
  double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

double mat_dist(const MatSample& p, const MatSample& q, int d) {
  if (d == 1) return std::abs(p[0] - q[0]);
  // spectral-norm bound via Frobenius with the off-diagonal counted twice
  double d0 = p[0] - q[0], d1 = p[1] - q[1], d2 = p[2] - q[2];
  return std::sqrt(d0 * d0 + d1 * d1 + 2.0 * d2 * d2);
}

}  // namespace

CoefficientField CoefficientField::identity() {
  return CoefficientField([](double, double) { return MatSample{1.0, 1.0, 0.0}; },
                          1.0, 0.0, "identity");
}

CoefficientField CoefficientField::sinusoidal(double amp, double freq) {
  if (!(std::abs(amp) < 1.0))
    throw std::invalid_argument("sinusoidal coefficients need |amp| < 1");
  auto f = [amp, freq](double x, double y) {
    double v = (1.0 + amp * std::sin(freq * x)) * (1.0 + amp * std::sin(freq * y));
    return MatSample{v, v, 0.0};
  };
  double lam = 1.0 / std::pow(1.0 - std::abs(amp), 2);
  // |d/dx (1+a sin fx)(1+a sin fy)| <= |a| f (1+|a|); crude two-factor bound
  double lip = 2.0 * std::abs(amp) * std::abs(freq) * (1.0 + std::abs(amp));
  std::ostringstream tag;
  tag << "sinusoidal(" << amp << "," << freq << ")";
  return CoefficientField(f, lam, lip, tag.str());
}

CoefficientField CoefficientField::piecewise(double level, double width) {
  if (!(level > 0.0)) throw std::invalid_argument("piecewise level must be > 0");
  if (!(width > 0.0)) throw std::invalid_argument("piecewise width must be > 0");
  auto f = [level, width](double x, double) {
    double v = 1.0 + (level - 1.0) * 0.5 * (1.0 + std::tanh(x / width));
    return MatSample{v, v, 0.0};
  };
  double lam = std::max(level, 1.0 / level) * 1.0000001;
  double lip = std::abs(level - 1.0) * 0.5 / width;
  std::ostringstream tag;
  tag << "piecewise(" << level << "," << width << ")";
  return CoefficientField(f, std::max(lam, 1.0 + 1e-9), lip, tag.str());
}

std::uint64_t CoefficientField::hash(const Grid& grid) const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv1a(tag_.data(), tag_.size(), h);
  // sample a few midpoints so numerically distinct fields with equal tags
  // still separate
  int n = grid.nodes_per_axis();
  for (int i = 0; i <= n; i += std::max(1, n / 16)) {
    double x = -grid.half_width() + (i + 0.5) * grid.spacing();
    MatSample m = eval_(x, grid.dimension() == 2 ? 0.3 * x : 0.0);
    h = fnv1a(m.data(), sizeof(double) * 3, h);
  }
  return h;
}

CoefficientReport validate_coefficients(const CoefficientField& a, const Grid& grid) {
  const int n = grid.nodes_per_axis();
  const double h = grid.spacing(), L = grid.half_width();
  const int d = grid.dimension();
  const int ncells = n + 1;  // per axis: cells between consecutive nodes incl. boundary

  CoefficientReport rep;
  double lam_hi = 1.0;  // max over samples of max(eig_max, 1/eig_min)
  double lip = 0.0;

  auto midpoint = [&](int c) { return -L + (c + 0.5) * h; };

  auto check = [&](double x, double y) {
    MatSample m = a(x, y);
    auto eig = sym_eigs(m, d);
    if (eig[0] <= 0.0) {
      std::ostringstream os;
      os << "coefficient sample not positive definite at (" << x << ", " << y << ")";
      throw std::runtime_error(os.str());
    }
    lam_hi = std::max({lam_hi, eig[1], 1.0 / eig[0]});
    return m;
  };

  if (d == 1) {
    MatSample prev = check(midpoint(0), 0.0);
    for (int c = 1; c < ncells; ++c) {
      MatSample cur = check(midpoint(c), 0.0);
      lip = std::max(lip, mat_dist(cur, prev, d) / h);
      prev = cur;
    }
  } else {
    std::vector<MatSample> row(ncells), prow(ncells);
    for (int cy = 0; cy < ncells; ++cy) {
      for (int cx = 0; cx < ncells; ++cx) {
        row[cx] = check(midpoint(cx), midpoint(cy));
        if (cx > 0) lip = std::max(lip, mat_dist(row[cx], row[cx - 1], d) / h);
        if (cy > 0) lip = std::max(lip, mat_dist(row[cx], prow[cx], d) / h);
      }
      std::swap(row, prow);
    }
  }

  rep.lambda_observed = lam_hi;
  rep.lipschitz_observed = lip;
  // small slack: the Lipschitz constant is estimated from finite differences
  rep.pass = lam_hi <= a.declared_lambda() * (1.0 + 1e-12) + 1e-12 &&
             lip <= a.declared_lipschitz() * (1.0 + 1e-9) + 1e-12;
  return rep;
}

}  // namespace fracpar
