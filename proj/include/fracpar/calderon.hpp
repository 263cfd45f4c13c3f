#ifndef FRACPAR_CALDERON_HPP
#define FRACPAR_CALDERON_HPP

#include <string>
#include <vector>

#include "fracpar/forward.hpp"

namespace fracpar {

// Node-indicator atoms on an exterior window x the open time window.
struct ExteriorBasis {
  std::vector<std::pair<int, int>> atoms;  // (flat space index, time index)

  static ExteriorBasis node_indicators(const Grid& grid, const std::vector<int>& window_nodes,
                                       const TimeGrid& tg);
  int size() const { return static_cast<int>(atoms.size()); }
  // scatter a coefficient vector into an exterior data field
  SpaceTimeField assemble(const Eigen::VectorXd& coeffs, int nspace, const TimeGrid& tg,
                          std::uint64_t grid_hash) const;
};

std::uint64_t problem_hash(const ProblemSpec& spec);

// Discrete DN matrix D[j, i] = B(u_{f_i}, g_j) over input atoms f_i on W1 and
// test atoms g_j on W2.
struct DNMatrix {
  Eigen::MatrixXd d;  // (n_out, n_in)
  ExteriorBasis in_basis, out_basis;
  std::uint64_t spec_hash = 0;

  void export_csv(const std::string& path) const;
};

// One forward solve per column; optionally returns the traces of u_{f_i} at
// the solver's trial nodes (rows) per atom (columns).
DNMatrix assemble_dn(const SpectralTransform& xf, const ProblemSpec& spec,
                     const ExteriorBasis& in_basis, const ExteriorBasis& out_basis,
                     Eigen::MatrixXd* traces = nullptr);

// adjoint solutions' traces for the out-basis atoms (columns)
Eigen::MatrixXd adjoint_traces(const SpectralTransform& xf, const ProblemSpec& spec,
                               const ExteriorBasis& out_basis);

// |<(L1 - L2) f, g> - int (q1 - q2) u_f u*_g - int <b1 - b2, grad u_f> u*_g|,
// normalized by the identity's magnitude.
double alessandrini_residual(const SpectralTransform& xf, const ProblemSpec& spec1,
                             const ProblemSpec& spec2, const SpaceTimeField& f,
                             const SpaceTimeField& g);

struct RungeResult {
  Eigen::VectorXd coeffs;    // atom coefficients of the exterior datum
  SpaceTimeField f;          // the exterior datum itself
  SpaceTimeField achieved;   // (u_f - f) restricted to the trial nodes
  double residual = 0.0;     // relative L2(Q) residual vs the target
};

// Tikhonov-regularized least squares for min || (u_f - f)|_Q - phi ||^2 +
// eps ||f||^2 over f in the atom span. adjoint = true targets the adjoint
// problem (u*_g - g ~ phi) instead.
RungeResult runge_approximate(const SpectralTransform& xf, const ProblemSpec& spec,
                              const SpaceTimeField& target, const ExteriorBasis& watoms,
                              double eps, bool adjoint = false);

enum class RecoveryMode { Linearized, FixedPoint, Constructive };

struct RecoveryOptions {
  double tikhonov_factor = 1e-8;  // times ||A^T A||_F
  int max_iterations = 15;        // fixed-point mode
  double misfit_tol = 1e-10;
  int profile_degree = 8;         // constructive mode: Chebyshev profile size
  int probes = 12;                // constructive mode: adjoint probe count
  double svd_threshold = 1e-5;    // constructive mode: truncation (relative)
  double runge_eps = 1e-9;        // constructive mode: Runge regularization
};

struct RecoveryResult {
  SpaceTimeField q_hat;
  SpaceTimeField b_hat;           // x-component; empty unless drift recovered
  std::vector<double> misfit_history;
  double epsilon = 0.0;
  RecoveryMode mode = RecoveryMode::Linearized;
  int effective_rank = -1;
};

// q-recovery against a reference spec0 (known q0, no drift).
RecoveryResult recover_potential(const SpectralTransform& xf, const ProblemSpec& spec0,
                                 const DNMatrix& observed, RecoveryMode mode,
                                 const RecoveryOptions& opt = {});

// (b, q)-recovery at s > 1/2; constructive mode mirrors the uniqueness
// proof's target pairs: a plateau (drift pairing drops where its gradient
// vanishes) for q and x * cutoff for the drift component, with the moment
// system solved over smooth space profiles.
RecoveryResult recover_drift_and_potential(const SpectralTransform& xf,
                                           const ProblemSpec& spec0,
                                           const DNMatrix& observed,
                                           const RecoveryOptions& opt = {});

}  // namespace fracpar

#endif
