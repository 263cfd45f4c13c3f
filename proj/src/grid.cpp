#include "fracpar/grid.hpp"

#include <cmath>
#include <cstring>
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

}  // namespace

Grid Grid::build(const GridSpec& spec) {
  if (spec.dimension != 1 && spec.dimension != 2)
    throw std::invalid_argument("grid: dimension must be 1 or 2");
  if (spec.nodes_per_axis < 4)
    throw std::invalid_argument("grid: need at least 4 nodes per axis");
  if (!(spec.half_width > 0.0))
    throw std::invalid_argument("grid: half_width must be positive");

  Grid g;
  g.dim_ = spec.dimension;
  g.half_width_ = spec.half_width;
  g.n_ = spec.nodes_per_axis;
  g.h_ = 2.0 * spec.half_width / (spec.nodes_per_axis + 1);
  g.mask_.assign(g.num_nodes(), 0);

  struct Named {
    const char* name;
    const Box* box;
    std::vector<int>* out;
    std::uint8_t tag;
  };
  Named regions[3] = {{"omega", &spec.omega, &g.omega_, 1},
                      {"w1", &spec.w1, &g.w1_, 2},
                      {"w2", &spec.w2, &g.w2_, 3}};

  auto inside = [&](const Box& b, int flat) {
    auto xy = g.node(flat);
    for (int a = 0; a < g.dim_; ++a)
      if (!(xy[a] > b.lo[a] && xy[a] < b.hi[a])) return false;
    return true;
  };

  for (auto& r : regions) {
    for (int flat = 0; flat < g.num_nodes(); ++flat) {
      if (!inside(*r.box, flat)) continue;
      if (g.mask_[flat] != 0)
        throw std::invalid_argument(std::string("grid: overlapping masks: ") +
                                    regions[g.mask_[flat] - 1].name + " and " + r.name);
      g.mask_[flat] = r.tag;
      r.out->push_back(flat);
    }
  }

  // separation checks: >= 1 free node between any two masks, and between any
  // mask and the outer box boundary.
  auto axis_indices = [&](int flat) {
    return std::array<int, 2>{flat % g.n_, g.dim_ == 2 ? flat / g.n_ : 0};
  };
  for (auto& r : regions) {
    for (int flat : *r.out) {
      auto ij = axis_indices(flat);
      for (int a = 0; a < g.dim_; ++a) {
        if (ij[a] == 0 || ij[a] == g.n_ - 1)
          throw std::invalid_argument(std::string("grid: mask touches outer boundary: ") + r.name);
      }
      // neighbours (including diagonals in 2d) must not belong to another mask
      const int di_lo = -1, di_hi = 1;
      for (int dj = (g.dim_ == 2 ? -1 : 0); dj <= (g.dim_ == 2 ? 1 : 0); ++dj) {
        for (int di = di_lo; di <= di_hi; ++di) {
          if (di == 0 && dj == 0) continue;
          int ni = ij[0] + di, nj = ij[1] + dj;
          if (ni < 0 || ni >= g.n_ || nj < 0 || nj >= g.n_) continue;
          int nflat = ni + (g.dim_ == 2 ? g.n_ * nj : 0);
          if (g.mask_[nflat] != 0 && g.mask_[nflat] != r.tag)
            throw std::invalid_argument(std::string("grid: masks not separated: ") + r.name +
                                        " and " + regions[g.mask_[nflat] - 1].name);
        }
      }
    }
  }
  return g;
}

std::array<double, 2> Grid::node(int flat) const {
  if (dim_ == 1) return {coord(flat), 0.0};
  return {coord(flat % n_), coord(flat / n_)};
}

std::vector<int> Grid::buffer_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < num_nodes(); ++i)
    if (mask_[i] == 0) out.push_back(i);
  return out;
}

std::uint64_t Grid::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv1a(&dim_, sizeof dim_, h);
  h = fnv1a(&half_width_, sizeof half_width_, h);
  h = fnv1a(&n_, sizeof n_, h);
  h = fnv1a(mask_.data(), mask_.size(), h);
  return h;
}

}  // namespace fracpar
