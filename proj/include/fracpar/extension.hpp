#ifndef FRACPAR_EXTENSION_HPP
#define FRACPAR_EXTENSION_HPP

#include <vector>

#include "fracpar/fractional.hpp"
#include "fracpar/grid.hpp"

namespace fracpar {

// U(x, t, z) on positive z-levels; a = 1 - 2s.
struct ExtensionField {
  std::vector<Eigen::MatrixXcd> levels;  // per z: (nspace, nt)
  std::vector<double> z;
  double s = 0.5;
  double a = 0.0;
  TimeGrid time;
  std::uint64_t grid_hash = 0;

  int num_levels() const { return static_cast<int>(z.size()); }
  // 2^{-a} Gamma(s) / Gamma(1-s)
  double neumann_constant() const;

  // per-level CSV slices + manifest listing z-levels and s
  void export_csv(const std::string& dir, const std::string& stem) const;
};

enum class QuadScheme { LogAxis, DoubleExponential };

// Fourier-side extension multiplier
//   m(lambda, sigma, z) = z^{2s}/(4^s Gamma(s)) int_0^inf e^{-z^2/(4 tau)}
//                         e^{-(lambda + i sigma) tau} tau^{-(1+s)} dtau,
// evaluated in the difference form m = 1 + ... (exact at z -> 0+) by
// adaptive real-tau quadrature. No complex-argument Bessel evaluation.
cplx extension_multiplier(double lambda, double sigma, double z, double s,
                          QuadScheme scheme = QuadScheme::LogAxis,
                          double rtol = 1e-11);

// closed form at sigma = 0: m = (2/Gamma(s)) (z sqrt(lambda)/2)^s K_s(z sqrt(lambda))
double extension_multiplier_bessel(double lambda, double z, double s);

// Weighted Neumann trace multiplier with the sign fixed so that the z -> 0
// limit is +(lambda + i sigma)^s, matching apply_hs:
//   n(lambda, sigma, z) = (lambda + i sigma)^s / Gamma(1-s) *
//                         int_0^inf theta^{-s} e^{-theta}
//                         e^{-(lambda + i sigma) z^2/(4 theta)} d theta.
// (This equals -c_s^N z^a d/dz m; the identity carries a leading minus.)
cplx extension_trace_multiplier(double lambda, double sigma, double z, double s,
                                double rtol = 1e-11);

// closed form at sigma = 0 via K_{1-s}
double extension_trace_multiplier_bessel(double lambda, double z, double s);

// solution of the extension problem on the given z-levels
ExtensionField extend(const SpectralTransform& xf, const SpaceTimeField& u,
                      const std::vector<double>& z_levels, double s);

// c_s^N z^a dU/dz at one level, sign as above (limit = apply_hs(u, s))
SpaceTimeField neumann_trace(const SpectralTransform& xf, const SpaceTimeField& u,
                             double z, double s);

// weighted energy int z^a (|U|^2 + |grad_x U|^2 + |dU/dz|^2) over z in (0, M],
// Gauss-Legendre in z with the z^a weight absorbed by substitution
struct ExtensionEnergy {
  double total = 0.0;
  double l2 = 0.0;
  double grad_x = 0.0;
  double grad_z = 0.0;
};
ExtensionEnergy extension_energy(const SpectralTransform& xf, const Grid& grid,
                                 const SpaceTimeField& u, double s, double M,
                                 int z_panels = 8);

// fundamental solution of the Bessel operator d^2/dx^2 + (a/x) d/dx with the
// x^a measure; x_plus >= 0, y_plus > 0, t > 0
double bessel_heat_kernel_pa(double x_plus, double y_plus, double t, double a);

// G(Y, X, t) = p(y, x, t) * p_a(x_{n+1}, y_{n+1}, t); spatial points are node
// indices of the basis grid
double fundamental_solution_g(const EigenBasis& basis, int node_y, int node_x,
                              double y_plus, double x_plus, double t, double a);

}  // namespace fracpar

#endif
