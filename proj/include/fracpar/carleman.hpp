#ifndef FRACPAR_CARLEMAN_HPP
#define FRACPAR_CARLEMAN_HPP

#include <functional>
#include <string>
#include <vector>

#include "fracpar/extension.hpp"

namespace fracpar {

// theta(t) = sqrt(t) (log 1/t)^{3/2} on (0, 1)
double carleman_theta(double t);

// Weight data on a graded grid of the window 0 < lambda_c t <= 1:
// sigma solves d/dt log(sigma / (t sigma')) = theta(lambda_c t) / t with
// sigma(0) = 0, sigma'(0) = 1 (asymptotic start at t0 = 1e-8 / lambda_c).
struct CarlemanWeight {
  double lambda_c = 0.0;   // alpha / delta^2
  double alpha = 0.0;
  double delta = 0.0;
  std::vector<double> t;       // graded toward 0
  std::vector<double> log_sigma;
  std::vector<double> g;       // log(sigma / (t sigma'))
  double sigma(int i) const { return std::exp(log_sigma[i]); }
  double sigma_prime(int i) const { return std::exp(log_sigma[i] - g[i]) / t[i]; }
  int size() const { return static_cast<int>(t.size()); }
};

CarlemanWeight solve_sigma_ode(double lambda_c, int grid_points = 2000,
                               double alpha = 0.0, double delta = 0.0);

struct SigmaProperties {
  double n_rep = 0.0;       // smallest N satisfying properties (1)-(4)
  double n1 = 0.0, n2 = 0.0, n3 = 0.0, n4 = 0.0;  // per-property requirements
  bool sigma_below_t = false;       // sigma(t) <= t everywhere
  bool sigma_monotone = false;      // sigma' > 0 everywhere
  bool found = false;               // n_rep <= 1e3
};
SigmaProperties check_sigma_properties(const CarlemanWeight& w);

struct LogInequalityResult {
  double c_m = 0.0;
  int violations = 0;       // on the dense verification grid
  double worst_margin = 0.0;
};
// C_m = sup y^m e^{-y} / (eps + (log 1/eps)^m e^{-y}) over a grid of
// y in [0, 200], eps in (1e-8, 1); verified on a denser, shifted grid.
LogInequalityResult log_inequality_constant(double m, int y_grid = 2001, int eps_grid = 161);

struct InequalityReport {
  std::string name;
  int samples = 0;
  int violations = 0;
  int skipped = 0;          // quadrature non-convergence
  double worst_margin = 0.0;          // min over samples of (rhs - lhs)/rhs
  std::vector<double> margins;
  std::vector<std::pair<std::string, double>> extras;
  unsigned seed = 0;
  bool pass = false;
};

// Hardy inequality in the Gaussian half-space measure: for random test
// functions (sums of <= 5 gaussian x polynomial terms), checks
//   int x_+^a h^2 |X|^2/(8b) W dX <= 2b int x_+^a |grad h|^2 W dX
//   + (n+1+a)/2 int x_+^a h^2 W dX,  W = e^{-|X|^2/(4b)}.
// Gradients by fourth-order finite differences with a Richardson check;
// tensor Gauss quadrature with the x_+^a weight absorbed by substitution.
InequalityReport hardy_check(int samples, double b, int n, double a, unsigned seed);

// Carleman-estimate functionals for one test function and one alpha.
struct CarlemanFunctionals {
  double lhs_zero_order = 0.0;   // alpha^2 int x^a sigma^{-2a} w^2 G
  double lhs_gradient = 0.0;     // alpha   int x^a sigma^{1-2a} |grad w|^2 G
  double rhs_operator = 0.0;     // int sigma^{1-2a} x^{-a} |Hw|^2 G
  double rhs_sup_log10 = 0.0;    // log10 of the alpha^{alpha} sup-term relative weight
  double rhs_boundary = 0.0;     // t = c boundary bracket
  double ratio = 0.0;            // LHS / RHS (common sigma(c)^{-2 alpha} factor removed)
  double richardson_dev = 0.0;   // FD consistency indicator for H~ w
};

// analytic test function w(x, x_plus, t) (x_plus-even); A given as a callable
// (n+1)x(n+1) block with the last row/column = identity
struct CarlemanTestCase {
  std::function<double(double, double, double)> w;   // (x, x_plus, t)
  std::function<MatSample(double, double, double)> a_upper;  // a11 entry (n=1) as [a11,*,*]
  double support_radius = 4.0;
  double a = 0.0;   // weight exponent
};

CarlemanFunctionals carleman_functionals(const CarlemanTestCase& tc,
                                         const CarlemanWeight& weight, double alpha,
                                         double c_time);

// Monotonicity (Lemma-style) and conditional doubling diagnostics for an
// extension field interpreted as a backward solution (time already flipped;
// index j0 is t = 0).
struct MonotonicityReport {
  bool assumption_ok = false;   // denominator > 0
  double theta = 0.0;           // space-time to initial energy ratio
  double n_min = 0.0;           // minimal N from the bisection
  double t_window = 0.0;        // 1 / (N log(N theta))
  std::vector<double> doubling_r;        // radii checked
  std::vector<double> doubling_ratio_i;  // space-only ratio at t = 0
  std::vector<double> doubling_ratio_ii;
  std::vector<double> doubling_ratio_iii;
  double doubling_bound = 0.0;  // exp(N log(N theta) log(N log(N theta)))
  bool conclusion_holds = false;
};

MonotonicityReport monotonicity_and_doubling_check(const ExtensionField& u,
                                                   const Grid& grid, int j0,
                                                   double r_unit);

}  // namespace fracpar

#endif
