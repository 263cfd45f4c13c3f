#ifndef FRACPAR_FORWARD_HPP
#define FRACPAR_FORWARD_HPP

#include <optional>
#include <utility>
#include <vector>

#include "fracpar/fractional.hpp"
#include "fracpar/grid.hpp"

namespace fracpar {

// Coefficients and data of the initial-exterior problem
//   (H^s + <b, grad_x> + q - lambda_shift) u = F in Q = Omega x (-T, T),
//   u = f in the exterior, u = 0 for t <= -T.
// All fields are real-valued; complex input is rejected at this layer.
struct ProblemSpec {
  const Grid* grid = nullptr;
  double s = 0.5;
  TimeGrid time;
  SpaceTimeField q;            // supported on Q nodes
  SpaceTimeField drift_x;      // optional; requires s > 1/2
  SpaceTimeField drift_y;      // 2d only
  bool has_drift = false;
  SpaceTimeField f;            // exterior data
  SpaceTimeField F;            // interior source
  bool has_source = false;
  double mu_shift = 0.0;       // coercivity shift (diagnostics only)
  double lambda_shift = 0.0;   // resolvent-family shift

  void validate() const;       // support/reality checks
};

struct WeakSolution {
  SpaceTimeField u;            // u_T (zero outside the open window plus f)
  double residual = 0.0;       // relative linear-system residual
  double condition_estimate = 0.0;
  int iterations = 0;          // 0 for the direct path
};

// Galerkin solver on node indicators over Omega x {-T < t < T}. The H^s
// block is assembled column-by-column through the spectral transform
// (matrix-free per column) and cached per (basis, s, time grid, mask).
class ForwardSolver {
 public:
  ForwardSolver(const SpectralTransform& xf, const ProblemSpec& spec);

  // trial/test nodes as (flat space index, time index)
  const std::vector<std::pair<int, int>>& trial_nodes() const { return nodes_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  // Solve with exterior data f and optional interior source F. f is first
  // reduced to its canonical representative (zeroed on trial nodes and
  // outside the open time window), so the output depends on f only through
  // its exterior restriction.
  WeakSolution solve(const SpaceTimeField& f, const SpaceTimeField* F = nullptr) const;

  // gather a field's values at the trial nodes / scatter back
  Eigen::VectorXd gather(const SpaceTimeField& u) const;
  void scatter_add(const Eigen::VectorXd& v, SpaceTimeField* u) const;
  SpaceTimeField canonical_exterior(const SpaceTimeField& f) const;

  double smallest_singular_value() const;
  double largest_singular_value() const;
  // relative reciprocal-condition estimate via inverse iteration on the LU
  double condition_estimate() const;

  // apply (H^s + q + <b,grad> - lambda) to an arbitrary field (used for
  // residual checks and right-hand sides)
  SpaceTimeField apply_operator(const SpaceTimeField& u) const;

 private:
  const SpectralTransform* xf_;
  const ProblemSpec* spec_;
  std::vector<std::pair<int, int>> nodes_;
  Eigen::MatrixXi lookup_;  // (nspace, nt) -> trial index or -1
  Eigen::MatrixXd m_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  mutable double smin_ = -1.0, smax_ = -1.0;
  void compute_svd_extremes() const;
};

WeakSolution solve_forward(const SpectralTransform& xf, const ProblemSpec& spec);

// Adjoint (future-exterior) problem H_*^s u* + q u* - div(b u*) = 0 with
// exterior data g, vanishing for t >= T; realized by time reversal of the
// forward solve.
WeakSolution solve_adjoint(const SpectralTransform& xf, const ProblemSpec& spec,
                           const SpaceTimeField& g);

// B_q(u, v) (or B_{b,q}): <H^{s/2} u, H_*^{s/2} v> + int_Q q u conj(v)
// + int_Q <b, grad u> conj(v)
cplx bilinear_form(const SpectralTransform& xf, const ProblemSpec& spec,
                   const SpaceTimeField& u, const SpaceTimeField& v);

struct EigenvalueCondition {
  bool pass = false;
  double margin = 0.0;  // sigma_min / sigma_max
};
EigenvalueCondition check_eigenvalue_condition(const SpectralTransform& xf,
                                               const ProblemSpec& spec);

struct CoercivityBound {
  double mu_min = 0.0;
  bool verified = false;   // shifted form positive on all sampled w
  double worst_margin = 0.0;
  double drift_constant = 0.0;  // empirical C_b when drift present
};
CoercivityBound coercivity_shift_bound(const SpectralTransform& xf,
                                       const ProblemSpec& spec,
                                       int samples = 100, unsigned seed = 1234);

// matrix-free BiCGSTAB with diagonal preconditioning (>cap fallback and a
// cross-check for the direct path)
struct IterativeResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};
IterativeResult bicgstab_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                               const Eigen::VectorXd& rhs, const Eigen::VectorXd& diag,
                               double rtol = 1e-10, int max_iter = 2000);

}  // namespace fracpar

#endif
