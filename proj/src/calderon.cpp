#include "fracpar/calderon.hpp"

#include <cmath>
#include <cstdio>
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

std::uint64_t field_hash(const SpaceTimeField& u, std::uint64_t seed) {
  if (u.data.size() == 0) return seed;
  return fnv1a(u.data.data(), sizeof(cplx) * u.data.size(), seed);
}

}  // namespace

ExteriorBasis ExteriorBasis::node_indicators(const Grid& grid,
                                             const std::vector<int>& window_nodes,
                                             const TimeGrid& tg) {
  ExteriorBasis b;
  for (int fl : window_nodes)
    for (int j : tg.open_window_indices()) b.atoms.emplace_back(fl, j);
  if (b.atoms.empty()) throw std::invalid_argument("exterior basis: empty atom set");
  return b;
}

SpaceTimeField ExteriorBasis::assemble(const Eigen::VectorXd& coeffs, int nspace,
                                       const TimeGrid& tg, std::uint64_t grid_hash) const {
  if (coeffs.size() != size())
    throw std::invalid_argument("exterior basis: coefficient count mismatch");
  SpaceTimeField f(nspace, tg, grid_hash);
  for (int a = 0; a < size(); ++a) f.data(atoms[a].first, atoms[a].second) += coeffs[a];
  return f;
}

std::uint64_t problem_hash(const ProblemSpec& spec) {
  std::uint64_t h = spec.grid->hash();
  h = fnv1a(&spec.s, sizeof spec.s, h);
  h = fnv1a(&spec.time.horizon, sizeof(double), h);
  h = fnv1a(&spec.time.kappa, sizeof(double), h);
  h = fnv1a(&spec.time.n, sizeof(int), h);
  h = fnv1a(&spec.lambda_shift, sizeof(double), h);
  h = field_hash(spec.q, h);
  if (spec.has_drift) {
    h = field_hash(spec.drift_x, h);
    h = field_hash(spec.drift_y, h);
  }
  return h;
}

void DNMatrix::export_csv(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("DNMatrix::export_csv: cannot open " + path);
  std::fprintf(f, "# spec_hash,%llu\n", static_cast<unsigned long long>(spec_hash));
  std::fprintf(f, "# columns: input atoms (node,time); rows: output atoms (node,time)\n");
  std::fprintf(f, "out_node,out_time");
  for (const auto& a : in_basis.atoms) std::fprintf(f, ",in_%d_%d", a.first, a.second);
  std::fprintf(f, "\n");
  for (int r = 0; r < d.rows(); ++r) {
    std::fprintf(f, "%d,%d", out_basis.atoms[r].first, out_basis.atoms[r].second);
    for (int c = 0; c < d.cols(); ++c) std::fprintf(f, ",%.17g", d(r, c));
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

DNMatrix assemble_dn(const SpectralTransform& xf, const ProblemSpec& spec,
                     const ExteriorBasis& in_basis, const ExteriorBasis& out_basis,
                     Eigen::MatrixXd* traces) {
  ForwardSolver solver(xf, spec);
  const Grid& g = *spec.grid;
  const double w = xf.basis().cell_weight() / spec.time.n;

  DNMatrix dn;
  dn.in_basis = in_basis;
  dn.out_basis = out_basis;
  dn.spec_hash = problem_hash(spec);
  dn.d.resize(out_basis.size(), in_basis.size());
  if (traces) traces->resize(solver.trial_nodes().size(), in_basis.size());

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < in_basis.size(); ++c) {
    SpaceTimeField f(g.num_nodes(), spec.time, g.hash());
    f.data(in_basis.atoms[c].first, in_basis.atoms[c].second) = 1.0;
    WeakSolution sol = solver.solve(f);
    // g_j exterior: the q/drift terms of B vanish on its support, so
    // B(u_f, g_j) reduces to the grid pairing <H^s u_f, g_j>
    SpaceTimeField hu = xf.apply_hs(sol.u, spec.s, false);
    for (int r = 0; r < out_basis.size(); ++r)
      dn.d(r, c) = hu.data(out_basis.atoms[r].first, out_basis.atoms[r].second).real() * w;
    if (traces) traces->col(c) = solver.gather(sol.u);
  }
  return dn;
}

Eigen::MatrixXd adjoint_traces(const SpectralTransform& xf, const ProblemSpec& spec,
                               const ExteriorBasis& out_basis) {
  ForwardSolver probe(xf, spec);  // only for the trial-node layout
  const Grid& g = *spec.grid;
  Eigen::MatrixXd tr(probe.trial_nodes().size(), out_basis.size());
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < out_basis.size(); ++c) {
    SpaceTimeField gfield(g.num_nodes(), spec.time, g.hash());
    gfield.data(out_basis.atoms[c].first, out_basis.atoms[c].second) = 1.0;
    WeakSolution sol = solve_adjoint(xf, spec, gfield);
    tr.col(c) = probe.gather(sol.u);
  }
  return tr;
}

double alessandrini_residual(const SpectralTransform& xf, const ProblemSpec& spec1,
                             const ProblemSpec& spec2, const SpaceTimeField& f,
                             const SpaceTimeField& g) {
  if (spec1.grid != spec2.grid || spec1.s != spec2.s || !(spec1.time == spec2.time))
    throw std::invalid_argument("alessandrini_residual: specs must share grid, s, T");
  const Grid& gr = *spec1.grid;
  WeakSolution u1 = ForwardSolver(xf, spec1).solve(f);
  WeakSolution u2 = ForwardSolver(xf, spec2).solve(f);
  WeakSolution us2 = solve_adjoint(xf, spec2, g);

  cplx lhs = bilinear_form(xf, spec1, u1.u, g) - bilinear_form(xf, spec2, u2.u, g);

  // interior integrals with the true-coefficient solution u1 and the
  // reference adjoint us2
  const double w = xf.basis().cell_weight() / spec1.time.n;
  cplx rhs = 0.0;
  const int nx = gr.nodes_per_axis();
  const double i2h = 1.0 / (2.0 * gr.spacing());
  for (int j = 0; j < u1.u.nt(); ++j) {
    for (int fl = 0; fl < gr.num_nodes(); ++fl) {
      double dq = (spec1.q.data.size() ? spec1.q.data(fl, j).real() : 0.0) -
                  (spec2.q.data.size() ? spec2.q.data(fl, j).real() : 0.0);
      if (dq != 0.0) rhs += dq * u1.u.data(fl, j) * us2.u.data(fl, j) * w;
      double dbx = (spec1.has_drift && spec1.drift_x.data.size()
                        ? spec1.drift_x.data(fl, j).real() : 0.0) -
                   (spec2.has_drift && spec2.drift_x.data.size()
                        ? spec2.drift_x.data(fl, j).real() : 0.0);
      if (dbx != 0.0) {
        int ix = fl % nx;
        cplx gx = ((ix + 1 < nx ? u1.u.data(fl + 1, j) : cplx(0)) -
                   (ix > 0 ? u1.u.data(fl - 1, j) : cplx(0))) * i2h;
        rhs += dbx * gx * us2.u.data(fl, j) * w;
      }
      if (gr.dimension() == 2) {
        double dby = (spec1.has_drift && spec1.drift_y.data.size()
                          ? spec1.drift_y.data(fl, j).real() : 0.0) -
                     (spec2.has_drift && spec2.drift_y.data.size()
                          ? spec2.drift_y.data(fl, j).real() : 0.0);
        if (dby != 0.0) {
          int iy = fl / nx;
          cplx gy = ((iy + 1 < nx ? u1.u.data(fl + nx, j) : cplx(0)) -
                     (iy > 0 ? u1.u.data(fl - nx, j) : cplx(0))) * i2h;
          rhs += dby * gy * us2.u.data(fl, j) * w;
        }
      }
    }
  }
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

RungeResult runge_approximate(const SpectralTransform& xf, const ProblemSpec& spec,
                              const SpaceTimeField& target, const ExteriorBasis& watoms,
                              double eps, bool adjoint) {
  if (!(eps > 0.0))
    throw std::domain_error(
        "runge_approximate: the Tikhonov weight must be positive (the unregularized "
        "least-squares problem is ill-posed at fixed resolution)");

  // the adjoint problem is the time reversal of a forward problem; fit the
  // reversed target with reversed coefficients and undo the flip afterwards
  ProblemSpec fwd_spec = spec;
  SpaceTimeField tgt = target;
  ExteriorBasis atoms = watoms;
  if (adjoint) {
    if (spec.q.data.size()) fwd_spec.q = spec.q.reversed();
    if (spec.has_drift)
      throw std::invalid_argument("runge_approximate: adjoint drift targets go through "
                                  "recover_drift_and_potential");
    tgt = target.reversed();
    const int n = spec.time.n;
    for (auto& a : atoms.atoms) a.second = (n - a.second) % n;
  }
  fwd_spec.f = SpaceTimeField();
  fwd_spec.F = SpaceTimeField();
  fwd_spec.has_source = false;

  ForwardSolver solver(xf, fwd_spec);
  const Grid& g = *spec.grid;
  const int ntrial = static_cast<int>(solver.trial_nodes().size());

  Eigen::MatrixXd R(ntrial, atoms.size());
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < atoms.size(); ++c) {
    SpaceTimeField f(g.num_nodes(), spec.time, g.hash());
    f.data(atoms.atoms[c].first, atoms.atoms[c].second) = 1.0;
    WeakSolution sol = solver.solve(f);
    SpaceTimeField diff = sol.u;
    diff.data -= f.data;
    R.col(c) = solver.gather(diff);
  }

  Eigen::VectorXd phi = solver.gather(tgt);
  Eigen::MatrixXd gram = R.transpose() * R;
  gram.diagonal().array() += eps;
  Eigen::VectorXd coeffs = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(R.transpose() * phi);

  RungeResult out;
  Eigen::VectorXd ach = R * coeffs;
  double pn = phi.norm();
  out.residual = pn > 0 ? (ach - phi).norm() / pn : ach.norm();
  if (adjoint) {
    // map back to the physical time orientation
    const int n = spec.time.n;
    ExteriorBasis orig = watoms;
    out.f = SpaceTimeField(g.num_nodes(), spec.time, g.hash());
    for (int a = 0; a < atoms.size(); ++a) {
      auto& at = orig.atoms[a];
      out.f.data(at.first, at.second) += coeffs[a];
    }
    (void)n;
  } else {
    out.f = atoms.assemble(coeffs, g.num_nodes(), spec.time, g.hash());
  }
  out.coeffs = coeffs;
  SpaceTimeField achieved(g.num_nodes(), spec.time, g.hash());
  for (int i = 0; i < ntrial; ++i) {
    auto [fl, j] = solver.trial_nodes()[i];
    achieved.data(fl, j) = ach[i];
  }
  out.achieved = adjoint ? achieved.reversed() : achieved;
  return out;
}

namespace {

// Tikhonov-regularized linearized update: solve for dq on the trial nodes
// from the DN misfit Y against the product kernels u_i(n) us_j(n).
Eigen::VectorXd linearized_update(const Eigen::MatrixXd& tr_fwd,
                                  const Eigen::MatrixXd& tr_adj,
                                  const Eigen::MatrixXd& mis, double w,
                                  double tik_factor, double* eps_out,
                                  int* rank_out) {
  // A[(j,i), n] = w u_i(n) us_j(n); normal equations via the Gram structure
  Eigen::MatrixXd g1 = tr_fwd * tr_fwd.transpose();  // (n, n)
  Eigen::MatrixXd g2 = tr_adj * tr_adj.transpose();
  Eigen::MatrixXd ata = (g1.array() * g2.array()).matrix() * (w * w);
  Eigen::VectorXd aty =
      (((tr_fwd * mis.transpose()).array() * tr_adj.array()).rowwise().sum()).matrix() * w;
  double eps = tik_factor * ata.norm();  // Frobenius
  if (eps_out) *eps_out = eps;
  ata.diagonal().array() += eps;
  if (rank_out) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ata);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > 2.0 * eps) ++r;
    *rank_out = r;
  }
  return Eigen::LDLT<Eigen::MatrixXd>(ata).solve(aty);
}

}  // namespace

RecoveryResult recover_potential(const SpectralTransform& xf, const ProblemSpec& spec0,
                                 const DNMatrix& observed, RecoveryMode mode,
                                 const RecoveryOptions& opt) {
  if (spec0.has_drift)
    throw std::invalid_argument("recover_potential: reference spec must be drift-free");
  const Grid& g = *spec0.grid;
  const double w = xf.basis().cell_weight() / spec0.time.n;

  RecoveryResult out;
  out.mode = mode;
  out.q_hat = SpaceTimeField(g.num_nodes(), spec0.time, g.hash());
  if (spec0.q.data.size()) out.q_hat.data = spec0.q.data;

  ProblemSpec cur = spec0;
  double dn_norm = observed.d.norm();

  int iters = (mode == RecoveryMode::Linearized) ? 1 : opt.max_iterations;
  double lm = (mode == RecoveryMode::Linearized) ? opt.tikhonov_factor : 1e-3;
  double prev_misfit = -1.0;

  for (int it = 0; it < iters; ++it) {
    cur.q = out.q_hat;
    Eigen::MatrixXd tr_fwd;
    DNMatrix dk = assemble_dn(xf, cur, observed.in_basis, observed.out_basis, &tr_fwd);
    Eigen::MatrixXd tr_adj = adjoint_traces(xf, cur, observed.out_basis);
    Eigen::MatrixXd mis = observed.d - dk.d;
    double misfit = dn_norm > 0 ? mis.norm() / dn_norm : mis.norm();
    out.misfit_history.push_back(misfit);
    if (misfit < opt.misfit_tol) break;
    if (mode == RecoveryMode::Linearized) {
      Eigen::VectorXd dq = linearized_update(tr_fwd, tr_adj, mis, w, opt.tikhonov_factor,
                                             &out.epsilon, &out.effective_rank);
      ForwardSolver probe(xf, cur);
      probe.scatter_add(dq, &out.q_hat);
      break;
    }
    // fixed-point with Levenberg-style damping: accept only misfit decreases
    if (prev_misfit >= 0.0 && misfit >= prev_misfit) {
      // should not happen (candidates are pre-checked), keep history honest
      out.misfit_history.pop_back();
      break;
    }
    prev_misfit = misfit;
    bool accepted = false;
    for (int trial = 0; trial < 8 && !accepted; ++trial) {
      Eigen::VectorXd dq =
          linearized_update(tr_fwd, tr_adj, mis, w, lm, &out.epsilon, nullptr);
      SpaceTimeField cand = out.q_hat;
      ForwardSolver probe(xf, cur);
      probe.scatter_add(dq, &cand);
      ProblemSpec cspec = spec0;
      cspec.q = cand;
      DNMatrix dc = assemble_dn(xf, cspec, observed.in_basis, observed.out_basis);
      double cm = (observed.d - dc.d).norm() / std::max(dn_norm, 1e-300);
      if (cm < misfit) {
        out.q_hat = cand;
        lm = std::max(lm / 3.0, 1e-9);
        accepted = true;
      } else {
        lm *= 10.0;
      }
    }
    if (!accepted) break;  // stalled
  }
  if (out.epsilon == 0.0) out.epsilon = opt.tikhonov_factor;
  return out;
}

namespace {

// smooth plateau: 1 on |v| <= flat, cosine decay to 0 at |v| >= edge
double plateau(double v, double flat, double edge) {
  double av = std::abs(v);
  if (av <= flat) return 1.0;
  if (av >= edge) return 0.0;
  double t = (av - flat) / (edge - flat);
  return 0.5 * (1.0 + std::cos(M_PI * t));
}

}  // namespace

RecoveryResult recover_drift_and_potential(const SpectralTransform& xf,
                                           const ProblemSpec& spec0,
                                           const DNMatrix& observed,
                                           const RecoveryOptions& opt) {
  if (!(spec0.s > 0.5))
    throw std::invalid_argument("recover_drift_and_potential: requires s > 1/2");
  if (spec0.grid->dimension() != 1)
    throw std::invalid_argument(
        "recover_drift_and_potential: constructive mode implemented for 1d grids");
  const Grid& g = *spec0.grid;
  const TimeGrid& tg = spec0.time;
  const double w = xf.basis().cell_weight() / tg.n;
  const double T = tg.horizon;

  // reference DN and solver
  ProblemSpec ref = spec0;
  ref.f = SpaceTimeField();
  ref.F = SpaceTimeField();
  ref.has_source = false;
  DNMatrix d0 = assemble_dn(xf, ref, observed.in_basis, observed.out_basis);
  ForwardSolver solver(xf, ref);

  // Omega extent for profile normalization
  double xo_lo = 1e300, xo_hi = -1e300;
  for (int fl : g.omega_nodes()) {
    double x = g.node(fl)[0];
    xo_lo = std::min(xo_lo, x);
    xo_hi = std::max(xo_hi, x);
  }
  double xmid = 0.5 * (xo_lo + xo_hi), xhw = 0.5 * (xo_hi - xo_lo);

  auto make_target = [&](const std::function<double(double)>& profile, double tflat,
                         double tedge) {
    SpaceTimeField u(g.num_nodes(), tg, g.hash());
    for (int fl : g.omega_nodes()) {
      double x = g.node(fl)[0];
      for (int j : tg.open_window_indices()) {
        double t = tg.node(j) / T;
        u.data(fl, j) = profile(x) * plateau(t, tflat, tedge);
      }
    }
    return u;
  };

  // forward targets: plateau psi (gradient vanishes where the probes live)
  // and x * cutoff for the drift row of the moment system
  double pl_flat = xmid + 0.75 * xhw;  // in absolute x via lambda below
  SpaceTimeField psi_t = make_target(
      [&](double x) { return plateau((x - xmid) / xhw, 0.75, 0.98); }, 0.7, 0.97);
  SpaceTimeField x_t = make_target(
      [&](double x) { return x * plateau((x - xmid) / xhw, 0.8, 0.98); }, 0.7, 0.97);
  (void)pl_flat;

  RungeResult r_psi =
      runge_approximate(xf, ref, psi_t, observed.in_basis, opt.runge_eps, false);
  RungeResult r_x = runge_approximate(xf, ref, x_t, observed.in_basis, opt.runge_eps, false);

  // adjoint probes on W2: bumps sweeping Omega, two widths for diversity
  std::vector<SpaceTimeField> probe_g;
  std::vector<Eigen::VectorXd> probe_coeffs;
  int n_narrow = (2 * opt.probes) / 3;
  int n_wide = opt.probes - n_narrow;
  auto add_probe = [&](double xc, double wx, double wt) {
    SpaceTimeField ph(g.num_nodes(), tg, g.hash());
    for (int fl : g.omega_nodes()) {
      double x = g.node(fl)[0];
      for (int j : tg.open_window_indices()) {
        double t = tg.node(j) / T;
        double xr = (x - xmid) / xhw;
        ph.data(fl, j) = std::exp(-(x - xc) * (x - xc) / wx) * plateau(xr, 0.75, 0.95) *
                         std::exp(-t * t / wt) * plateau(t, 0.65, 0.95);
      }
    }
    RungeResult rr = runge_approximate(xf, ref, ph, observed.out_basis, opt.runge_eps, true);
    probe_g.push_back(rr.f);
    probe_coeffs.push_back(rr.coeffs);
  };
  for (int p = 0; p < n_narrow; ++p) {
    double xc = xmid + xhw * (-0.75 + 1.5 * p / std::max(1, n_narrow - 1));
    add_probe(xc, 0.08 * xhw * xhw, 0.4);
  }
  for (int p = 0; p < n_wide; ++p) {
    double xc = xmid + xhw * (-0.6 + 1.2 * p / std::max(1, n_wide - 1));
    add_probe(xc, 0.25 * xhw * xhw, 0.6);
  }

  // achieved reference fields
  WeakSolution u_psi = solver.solve(r_psi.f);
  WeakSolution u_x = solver.solve(r_x.f);
  std::vector<SpaceTimeField> us;
  us.reserve(probe_g.size());
  for (const auto& gp : probe_g) us.push_back(solve_adjoint(xf, ref, gp).u);

  // moments from the DN data: m = g_coeff^T (D_obs - D_0) f_coeff
  auto moment = [&](const Eigen::VectorXd& fc, const Eigen::VectorXd& gc) {
    return gc.dot((observed.d - d0.d) * fc);
  };

  // moment system over Chebyshev space profiles
  const int nb = opt.profile_degree;
  const auto omega = g.omega_nodes();
  const auto window = tg.open_window_indices();
  Eigen::MatrixXd basis(omega.size(), nb);
  for (std::size_t r = 0; r < omega.size(); ++r) {
    double xr = std::clamp((g.node(omega[r])[0] - xmid) / xhw, -1.0, 1.0);
    for (int c = 0; c < nb; ++c) basis(r, c) = std::cos(c * std::acos(xr));
  }
  const int np = static_cast<int>(probe_g.size());
  const int nx = g.nodes_per_axis();
  const double i2h = 1.0 / (2.0 * g.spacing());

  auto kernel_rows = [&](const SpaceTimeField& uf, bool gradient, Eigen::MatrixXd& mout) {
    mout.resize(np, nb);
    for (int p = 0; p < np; ++p) {
      Eigen::VectorXd kt = Eigen::VectorXd::Zero(omega.size());
      for (std::size_t r = 0; r < omega.size(); ++r) {
        int fl = omega[r];
        double acc = 0.0;
        for (int j : window) {
          double uval;
          if (gradient) {
            int ix = fl % nx;
            double lo = ix > 0 ? uf.data(fl - 1, j).real() : 0.0;
            double hi = ix + 1 < nx ? uf.data(fl + 1, j).real() : 0.0;
            uval = (hi - lo) * i2h;
          } else {
            uval = uf.data(fl, j).real();
          }
          acc += uval * us[p].data(fl, j).real();
        }
        kt[r] = acc * w;
      }
      mout.row(p) = (kt.transpose() * basis);
    }
  };

  Eigen::MatrixXd mq1, mb1, mq2, mb2;
  kernel_rows(u_psi.u, false, mq1);
  kernel_rows(u_psi.u, true, mb1);
  kernel_rows(u_x.u, false, mq2);
  kernel_rows(u_x.u, true, mb2);

  Eigen::MatrixXd joint(2 * np, 2 * nb);
  joint << mq1, mb1, mq2, mb2;
  Eigen::VectorXd rhs(2 * np);
  for (int p = 0; p < np; ++p) {
    rhs[p] = moment(r_psi.coeffs, probe_coeffs[p]);
    rhs[np + p] = moment(r_x.coeffs, probe_coeffs[p]);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(joint, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(opt.svd_threshold);
  Eigen::VectorXd sol = svd.solve(rhs);

  RecoveryResult out;
  out.mode = RecoveryMode::Constructive;
  out.epsilon = opt.svd_threshold;
  out.effective_rank = static_cast<int>(svd.rank());
  out.misfit_history.push_back((joint * sol - rhs).norm() /
                               std::max(rhs.norm(), 1e-300));
  out.q_hat = SpaceTimeField(g.num_nodes(), tg, g.hash());
  out.b_hat = SpaceTimeField(g.num_nodes(), tg, g.hash());
  for (std::size_t r = 0; r < omega.size(); ++r) {
    double qv = basis.row(r).dot(sol.head(nb));
    double bv = basis.row(r).dot(sol.tail(nb));
    for (int j : window) {
      out.q_hat.data(omega[r], j) = qv + (spec0.q.data.size()
                                              ? spec0.q.data(omega[r], j).real() : 0.0);
      out.b_hat.data(omega[r], j) =
          bv + (spec0.has_drift && spec0.drift_x.data.size()
                    ? spec0.drift_x.data(omega[r], j).real() : 0.0);
    }
  }
  return out;
}

}  // namespace fracpar
