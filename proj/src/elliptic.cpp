#include "fracpar/elliptic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fracpar {

namespace {
using Trip = Eigen::Triplet<double>;

// 1d flux stencil: (L u)_i = -[a_{i+1/2}(u_{i+1}-u_i) - a_{i-1/2}(u_i-u_{i-1})]/h^2.
// Dirichlet: ghost values zero (faces at the boundary carry flux);
// Neumann: boundary faces carry no flux.
void assemble_1d(const Grid& g, const CoefficientField& a, Boundary bc,
                 std::vector<Trip>& trips) {
  const int n = g.nodes_per_axis();
  const double h = g.spacing(), L = g.half_width();
  const double ih2 = 1.0 / (h * h);
  auto face = [&](int f) { return a(-L + (f + 0.5) * h, 0.0)[0]; };
  for (int i = 0; i < n; ++i) {
    double al = face(i);      // face between i-1 and i
    double ar = face(i + 1);  // face between i and i+1
    if (bc == Boundary::Neumann) {
      if (i == 0) al = 0.0;
      if (i == n - 1) ar = 0.0;
    }
    trips.emplace_back(i, i, (al + ar) * ih2);
    if (i > 0) trips.emplace_back(i, i - 1, -al * ih2);
    if (i + 1 < n) trips.emplace_back(i, i + 1, -ar * ih2);
  }
}

void assemble_2d(const Grid& g, const CoefficientField& a, Boundary bc,
                 std::vector<Trip>& trips) {
  const int n = g.nodes_per_axis();
  const double h = g.spacing(), L = g.half_width();
  const double ih2 = 1.0 / (h * h);
  auto at = [&](int i, int j) { return i + n * j; };
  auto coord = [&](int i) { return -L + (i + 1) * h; };

  bool has_mixed = false;
  for (int i = 0; i <= n && !has_mixed; i += std::max(1, n / 7))
    for (int j = 0; j <= n && !has_mixed; j += std::max(1, n / 7))
      if (std::abs(a(-L + (i + 0.5) * h, -L + (j + 0.5) * h)[2]) > 0.0) has_mixed = true;
  if (has_mixed && bc == Boundary::Neumann)
    throw std::invalid_argument(
        "assemble_elliptic: Neumann truncation supports diagonal coefficient fields only");

  // diagonal part: flux differences per axis, coefficient at edge midpoints
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double axl = a(-L + (i + 0.5) * h, coord(j))[0];
      double axr = a(-L + (i + 1.5) * h, coord(j))[0];
      double ayl = a(coord(i), -L + (j + 0.5) * h)[1];
      double ayr = a(coord(i), -L + (j + 1.5) * h)[1];
      if (bc == Boundary::Neumann) {
        if (i == 0) axl = 0.0;
        if (i == n - 1) axr = 0.0;
        if (j == 0) ayl = 0.0;
        if (j == n - 1) ayr = 0.0;
      }
      int r = at(i, j);
      trips.emplace_back(r, r, (axl + axr + ayl + ayr) * ih2);
      if (i > 0) trips.emplace_back(r, at(i - 1, j), -axl * ih2);
      if (i + 1 < n) trips.emplace_back(r, at(i + 1, j), -axr * ih2);
      if (j > 0) trips.emplace_back(r, at(i, j - 1), -ayl * ih2);
      if (j + 1 < n) trips.emplace_back(r, at(i, j + 1), -ayr * ih2);
    }
  }

  if (!has_mixed) return;

  // mixed term -d_x(a12 d_y u) - d_y(a12 d_x u) as Dx^T C Dy + Dy^T C Dx with
  // centered differences (Dirichlet ghosts) and nodal a12; symmetric by
  // construction.
  const double i2h = 1.0 / (2.0 * h);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double c = a(coord(i), coord(j))[2];
      if (c == 0.0) continue;
      // contribution of node (i,j)'s a12 value: quadratic form
      // 2 c (Dx u)(Dy u) at that node -> matrix entries
      int xs[2] = {i - 1, i + 1};
      int ys[2] = {j - 1, j + 1};
      double sx[2] = {-i2h, i2h};
      double sy[2] = {-i2h, i2h};
      for (int p = 0; p < 2; ++p) {
        if (xs[p] < 0 || xs[p] >= n) continue;
        for (int q = 0; q < 2; ++q) {
          if (ys[q] < 0 || ys[q] >= n) continue;
          double v = c * sx[p] * sy[q];
          trips.emplace_back(at(xs[p], j), at(i, ys[q]), v);
          trips.emplace_back(at(i, ys[q]), at(xs[p], j), v);
        }
      }
    }
  }
}

}  // namespace

DiscreteElliptic assemble_elliptic(const Grid& grid, const CoefficientField& a,
                                   Boundary boundary) {
  std::vector<Trip> trips;
  if (grid.dimension() == 1)
    assemble_1d(grid, a, boundary, trips);
  else
    assemble_2d(grid, a, boundary, trips);

  DiscreteElliptic op;
  op.boundary = boundary;
  op.matrix.resize(grid.num_nodes(), grid.num_nodes());
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

}  // namespace fracpar
