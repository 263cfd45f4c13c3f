#ifndef FRACPAR_GRID_HPP
#define FRACPAR_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fracpar {

// Axis-aligned open box used to carve node masks out of the grid.
struct Box {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
};

struct GridSpec {
  int dimension = 1;          // 1 or 2
  double half_width = 4.0;    // box (-L, L)^d
  int nodes_per_axis = 63;
  Box omega;                  // interior region
  Box w1;                     // exterior control window
  Box w2;                     // exterior measurement window
};

// Tensor grid on (-L, L)^d excluding the boundary: nodes x_i = -L + (i+1) h,
// h = 2L/(n+1). Masks are node index sets; flattened index = ix + n*iy.
class Grid {
 public:
  static Grid build(const GridSpec& spec);

  int dimension() const { return dim_; }
  double half_width() const { return half_width_; }
  int nodes_per_axis() const { return n_; }
  double spacing() const { return h_; }
  int num_nodes() const { return dim_ == 1 ? n_ : n_ * n_; }

  double coord(int axis_index) const { return -half_width_ + (axis_index + 1) * h_; }
  // coordinates of flattened node
  std::array<double, 2> node(int flat) const;

  const std::vector<int>& omega_nodes() const { return omega_; }
  const std::vector<int>& w1_nodes() const { return w1_; }
  const std::vector<int>& w2_nodes() const { return w2_; }
  // nodes in none of the three masks
  std::vector<int> buffer_nodes() const;

  bool in_omega(int flat) const { return mask_[flat] == 1; }
  bool in_w1(int flat) const { return mask_[flat] == 2; }
  bool in_w2(int flat) const { return mask_[flat] == 3; }

  std::uint64_t hash() const;

 private:
  int dim_ = 1;
  double half_width_ = 0.0;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<int> omega_, w1_, w2_;
  std::vector<std::uint8_t> mask_;  // 0 buffer, 1 omega, 2 w1, 3 w2
};

}  // namespace fracpar

#endif
