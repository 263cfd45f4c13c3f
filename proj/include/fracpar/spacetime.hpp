#ifndef FRACPAR_SPACETIME_HPP
#define FRACPAR_SPACETIME_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

namespace fracpar {

// Uniform padded time window [-T_pad, T_pad), T_pad = kappa * T, with a
// power-of-two node count. Discrete frequencies sigma_m = pi m / T_pad.
struct TimeGrid {
  double horizon = 1.0;   // T
  double kappa = 2.0;     // padding factor, >= 2
  int n = 128;            // power of two

  TimeGrid() = default;
  TimeGrid(double T, double kap, int nt);

  double pad() const { return horizon * kappa; }
  double dt() const { return 2.0 * pad() / n; }
  double node(int j) const { return -pad() + j * dt(); }
  // signed frequency of DFT bin m
  double sigma(int m) const {
    int mm = m <= n / 2 ? m : m - n;
    return M_PI * mm / pad();
  }
  // indices with -T < t_j < T (the open trial window)
  std::vector<int> open_window_indices() const;
  bool operator==(const TimeGrid& o) const {
    return horizon == o.horizon && kappa == o.kappa && n == o.n;
  }
};

// Complex field on grid nodes x time nodes. Rows = flattened space nodes,
// cols = time nodes.
struct SpaceTimeField {
  Eigen::MatrixXcd data;   // (nspace, nt)
  TimeGrid time;
  std::uint64_t grid_hash = 0;

  SpaceTimeField() = default;
  SpaceTimeField(int nspace, const TimeGrid& tg, std::uint64_t ghash)
      : data(Eigen::MatrixXcd::Zero(nspace, tg.n)), time(tg), grid_hash(ghash) {}

  int nspace() const { return static_cast<int>(data.rows()); }
  int nt() const { return static_cast<int>(data.cols()); }

  // u(x, -t) through the periodic index reversal j -> (n - j) mod n
  SpaceTimeField reversed() const;
  // multiplication by the indicator of [-T, T] (closed) on time nodes
  SpaceTimeField cutoff(double T) const;

  double max_abs() const { return data.cwiseAbs().maxCoeff(); }
  double max_imag() const { return data.imag().cwiseAbs().maxCoeff(); }
  // max |u| over nodes with t <= -T (the causal-zero margin)
  double causal_violation() const;

  // binary round trip with a self-describing header
  void save(const std::string& path) const;
  static SpaceTimeField load(const std::string& path);
  // CSV of the real part (1d slice layout: rows = space nodes)
  void export_csv(const std::string& path, const std::string& comment = "") const;
};

// pointwise space-time inner product (h^d / n_t) sum u conj(v)
std::complex<double> st_inner(const SpaceTimeField& u, const SpaceTimeField& v,
                              double cell_weight);
double st_norm(const SpaceTimeField& u, double cell_weight);

}  // namespace fracpar

#endif
