#ifndef FRACPAR_QUADRATURE_HPP
#define FRACPAR_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace fracpar {

using cplx = std::complex<double>;

struct QuadResult {
  cplx value{0.0, 0.0};
  bool converged = false;
  int levels = 0;      // refinement levels used
  std::size_t evals = 0;
};

// Integral of f over (0, inf) via the substitution tau = e^u and uniform
// trapezoid panels in u, refined (halving h) until the relative change of
// successive levels drops below rtol. u-window [ua, ub] must cover the
// integrand's support; the caller guarantees decay outside it.
QuadResult integrate_log_axis(const std::function<cplx(double)>& f,
                              double tau_lo, double tau_hi,
                              double rtol = 1e-10, int max_nodes_log2 = 16);

// Double-exponential (tanh-sinh style, one-sided exp-exp) rule for
// integrals over (0, inf): tau = exp(a sinh u). Used as an independent
// cross-check scheme for the extension multiplier.
QuadResult integrate_double_exponential(const std::function<cplx(double)>& f,
                                        double scale = 1.0,
                                        double rtol = 1e-10,
                                        int max_nodes_log2 = 16);

// Adaptive Simpson on a finite interval (real integrand).
double integrate_adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol = 1e-12,
                                  int max_depth = 48);

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// Legendre polynomials; deterministic, cached per n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Panel-composite Gauss-Legendre over [a, b] with given panel count.
double integrate_gauss_panels(const std::function<double(double)>& f,
                              double a, double b, int panels, int order = 16);

}  // namespace fracpar

#endif
