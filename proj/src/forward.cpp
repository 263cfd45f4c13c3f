#include "fracpar/forward.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "fracpar/parallel.hpp"

namespace fracpar {

namespace {

void require_real(const SpaceTimeField& u, const char* what) {
  if (u.data.size() == 0) return;
  if (u.max_imag() > 1e-12 * std::max(1.0, u.max_abs()))
    throw std::invalid_argument(std::string(what) + ": field must be real-valued");
}

void require_support(const SpaceTimeField& u, const Grid& grid, double T,
                     bool omega_only, const char* what) {
  if (u.data.size() == 0) return;
  const double eps = 1e-12 * u.time.pad();
  for (int j = 0; j < u.nt(); ++j) {
    double t = u.time.node(j);
    bool in_window = t > -T + eps && t < T - eps;
    for (int i = 0; i < u.nspace(); ++i) {
      if (std::abs(u.data(i, j)) == 0.0) continue;
      if (!in_window)
        throw std::invalid_argument(std::string(what) + ": support leaks outside (-T, T)");
      if (omega_only && !grid.in_omega(i))
        throw std::invalid_argument(std::string(what) + ": support leaks outside Omega");
    }
  }
}

// cache of assembled H^s blocks, keyed by basis/time/s/mask
struct HsBlockKey {
  std::uint64_t basis = 0;
  double s = 0.0;
  double T = 0.0, kappa = 0.0;
  int nt = 0;
  bool operator<(const HsBlockKey& o) const {
    return std::tie(basis, s, T, kappa, nt) < std::tie(o.basis, o.s, o.T, o.kappa, o.nt);
  }
};
std::map<HsBlockKey, Eigen::MatrixXd> g_hs_cache;
std::mutex g_hs_mutex;

}  // namespace

void ProblemSpec::validate() const {
  if (!grid) throw std::invalid_argument("problem spec: grid missing");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("problem spec: s must be in (0,1)");
  if (has_drift && !(s > 0.5))
    throw std::invalid_argument(
        "problem spec: drift terms require s > 1/2 (well-posedness of the drift problem)");
  require_real(q, "q");
  require_real(f, "f");
  require_real(F, "F");
  require_real(drift_x, "drift");
  require_real(drift_y, "drift");
  require_support(q, *grid, time.horizon, true, "q");
  require_support(F, *grid, time.horizon, true, "F");
  if (has_drift) {
    require_support(drift_x, *grid, time.horizon, true, "drift");
    if (grid->dimension() == 2) require_support(drift_y, *grid, time.horizon, true, "drift");
  }
  // exterior data must avoid Omega
  if (f.data.size() != 0) {
    for (int j = 0; j < f.nt(); ++j)
      for (int i = 0; i < f.nspace(); ++i)
        if (std::abs(f.data(i, j)) != 0.0 && grid->in_omega(i))
          throw std::invalid_argument("problem spec: exterior data supported inside Omega");
  }
}

ForwardSolver::ForwardSolver(const SpectralTransform& xf, const ProblemSpec& spec)
    : xf_(&xf), spec_(&spec) {
  spec.validate();
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;
  if (!(tg == xf.time())) throw std::invalid_argument("forward solver: time grid mismatch");

  const auto window = tg.open_window_indices();
  lookup_ = Eigen::MatrixXi::Constant(g.num_nodes(), tg.n, -1);
  for (int fl : g.omega_nodes())
    for (int j : window) {
      lookup_(fl, j) = static_cast<int>(nodes_.size());
      nodes_.emplace_back(fl, j);
    }
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw std::invalid_argument("forward solver: empty trial space");

  // H^s block, cached
  HsBlockKey key{xf.basis().key(), spec.s, tg.horizon, tg.kappa, tg.n};
  Eigen::MatrixXd base;
  {
    std::lock_guard<std::mutex> lock(g_hs_mutex);
    auto it = g_hs_cache.find(key);
    if (it != g_hs_cache.end()) base = it->second;
  }
  if (base.size() == 0) {
    base.resize(n, n);
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n; ++c) {
      SpaceTimeField phi(g.num_nodes(), tg, g.hash());
      phi.data(nodes_[c].first, nodes_[c].second) = 1.0;
      SpaceTimeField w = xf.apply_hs(phi, spec.s, false);
      for (int r = 0; r < n; ++r) base(r, c) = w.data(nodes_[r].first, nodes_[r].second).real();
    }
    std::lock_guard<std::mutex> lock(g_hs_mutex);
    g_hs_cache.emplace(key, base);
  }

  m_ = std::move(base);
  // potential and resolvent shift on the diagonal
  for (int c = 0; c < n; ++c) {
    double qv = spec.q.data.size() ? spec.q.data(nodes_[c].first, nodes_[c].second).real() : 0.0;
    m_(c, c) += qv - spec.lambda_shift;
  }
  // drift: <b, grad u>(test) couples x-neighbours of the trial node
  if (spec.has_drift) {
    const int nx = g.nodes_per_axis();
    const double i2h = 1.0 / (2.0 * g.spacing());
    auto add_axis = [&](const SpaceTimeField& b, int stride) {
      if (b.data.size() == 0) return;
      for (int c = 0; c < n; ++c) {
        auto [fl, j] = nodes_[c];
        int ix = stride == 1 ? fl % nx : fl / nx;
        if (ix > 0 && lookup_(fl - stride, j) >= 0)
          m_(lookup_(fl - stride, j), c) += b.data(fl - stride, j).real() * i2h;
        if (ix + 1 < nx && lookup_(fl + stride, j) >= 0)
          m_(lookup_(fl + stride, j), c) -= b.data(fl + stride, j).real() * i2h;
      }
    };
    add_axis(spec.drift_x, 1);
    if (g.dimension() == 2) add_axis(spec.drift_y, nx);
  }
  lu_.compute(m_);
}

Eigen::VectorXd ForwardSolver::gather(const SpaceTimeField& u) const {
  Eigen::VectorXd v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    v[i] = u.data(nodes_[i].first, nodes_[i].second).real();
  return v;
}

void ForwardSolver::scatter_add(const Eigen::VectorXd& v, SpaceTimeField* u) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    u->data(nodes_[i].first, nodes_[i].second) += v[i];
}

SpaceTimeField ForwardSolver::canonical_exterior(const SpaceTimeField& f) const {
  SpaceTimeField g = f.cutoff(spec_->time.horizon);
  const double eps = 1e-12 * g.time.pad();
  for (int j = 0; j < g.nt(); ++j) {
    double t = g.time.node(j);
    if (!(t > -spec_->time.horizon + eps && t < spec_->time.horizon - eps)) {
      g.data.col(j).setZero();
      continue;
    }
    for (int fl : spec_->grid->omega_nodes()) g.data(fl, j) = 0.0;
  }
  return g;
}

SpaceTimeField ForwardSolver::apply_operator(const SpaceTimeField& u) const {
  SpaceTimeField w = xf_->apply_hs(u, spec_->s, false);
  if (spec_->q.data.size()) w.data += spec_->q.data.cwiseProduct(u.data);
  if (spec_->lambda_shift != 0.0) w.data -= spec_->lambda_shift * u.data;
  if (spec_->has_drift) {
    const Grid& g = *spec_->grid;
    const int nx = g.nodes_per_axis();
    const double i2h = 1.0 / (2.0 * g.spacing());
    auto add_axis = [&](const SpaceTimeField& b, int stride) {
      if (b.data.size() == 0) return;
      for (int j = 0; j < u.nt(); ++j)
        for (int fl = 0; fl < g.num_nodes(); ++fl) {
          double bv = b.data(fl, j).real();
          if (bv == 0.0) continue;
          int ix = stride == 1 ? fl % nx : fl / nx;
          cplx lo = ix > 0 ? u.data(fl - stride, j) : 0.0;
          cplx hi = ix + 1 < nx ? u.data(fl + stride, j) : 0.0;
          w.data(fl, j) += bv * (hi - lo) * i2h;
        }
    };
    add_axis(spec_->drift_x, 1);
    if (g.dimension() == 2) add_axis(spec_->drift_y, nx);
  }
  return w;
}

WeakSolution ForwardSolver::solve(const SpaceTimeField& f, const SpaceTimeField* F) const {
  SpaceTimeField fc = canonical_exterior(f);
  SpaceTimeField lf = apply_operator(fc);
  Eigen::VectorXd rhs = -gather(lf);
  if (F) rhs += gather(*F);
  else if (spec_->has_source && spec_->F.data.size()) rhs += gather(spec_->F);

  Eigen::VectorXd v = lu_.solve(rhs);

  WeakSolution sol;
  sol.u = fc;
  scatter_add(v, &sol.u);
  double rhsn = rhs.norm();
  sol.residual = rhsn > 0 ? (m_ * v - rhs).norm() / rhsn : 0.0;
  sol.condition_estimate = condition_estimate();
  if (sol.condition_estimate > 1e12)
    throw std::runtime_error(
        "solve_forward: eigenvalue condition violated or near-violated (condition estimate "
        "above 1e12)");
  return sol;
}

void ForwardSolver::compute_svd_extremes() const {
  if (smin_ >= 0.0) return;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m_);
  smin_ = svd.singularValues().tail(1)(0);
  smax_ = svd.singularValues()(0);
}

double ForwardSolver::smallest_singular_value() const {
  compute_svd_extremes();
  return smin_;
}

double ForwardSolver::largest_singular_value() const {
  compute_svd_extremes();
  return smax_;
}

double ForwardSolver::condition_estimate() const {
  // inverse iteration with the LU factor: cheap sigma_min estimate
  const int n = static_cast<int>(nodes_.size());
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double nrm = 1.0;
  for (int it = 0; it < 8; ++it) {
    x = lu_.solve(x);
    nrm = x.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return 1e300;
    x /= nrm;
  }
  double smin_est = 1.0 / nrm;
  double scale = m_.cwiseAbs().rowwise().sum().maxCoeff();  // ||M||_inf
  return scale / smin_est;
}

WeakSolution solve_forward(const SpectralTransform& xf, const ProblemSpec& spec) {
  ForwardSolver solver(xf, spec);
  return solver.solve(spec.f, spec.has_source ? &spec.F : nullptr);
}

namespace {

// time-reversed copy of a coefficient field
SpaceTimeField rev(const SpaceTimeField& u) { return u.reversed(); }

ProblemSpec adjoint_as_forward(const ProblemSpec& spec) {
  ProblemSpec r = spec;
  r.f = SpaceTimeField();
  r.F = SpaceTimeField();
  r.has_source = false;
  if (spec.q.data.size()) r.q = rev(spec.q);
  if (spec.has_drift) {
    // H_*^s u* + q u* - div(b u*) = 0 becomes, after t -> -t,
    // H^s w + (q~ - div b~) w - <b~, grad w> = 0
    const Grid& g = *spec.grid;
    const int nx = g.nodes_per_axis();
    const double i2h = 1.0 / (2.0 * g.spacing());
    SpaceTimeField bxr = rev(spec.drift_x);
    SpaceTimeField divb(bxr.nspace(), bxr.time, bxr.grid_hash);
    for (int j = 0; j < bxr.nt(); ++j)
      for (int fl = 0; fl < g.num_nodes(); ++fl) {
        int ix = fl % nx;
        cplx lo = ix > 0 ? bxr.data(fl - 1, j) : 0.0;
        cplx hi = ix + 1 < nx ? bxr.data(fl + 1, j) : 0.0;
        divb.data(fl, j) = (hi - lo) * i2h;
      }
    SpaceTimeField byr;
    if (g.dimension() == 2 && spec.drift_y.data.size()) {
      byr = rev(spec.drift_y);
      for (int j = 0; j < byr.nt(); ++j)
        for (int fl = 0; fl < g.num_nodes(); ++fl) {
          int iy = fl / nx;
          cplx lo = iy > 0 ? byr.data(fl - nx, j) : 0.0;
          cplx hi = iy + 1 < nx ? byr.data(fl + nx, j) : 0.0;
          divb.data(fl, j) += (hi - lo) * i2h;
        }
    }
    if (r.q.data.size() == 0) {
      r.q = divb;
      r.q.data = -divb.data;
    } else {
      r.q.data -= divb.data;
    }
    r.drift_x = bxr;
    r.drift_x.data = -bxr.data;
    if (byr.data.size()) {
      r.drift_y = byr;
      r.drift_y.data = -byr.data;
    }
  }
  return r;
}

}  // namespace

WeakSolution solve_adjoint(const SpectralTransform& xf, const ProblemSpec& spec,
                           const SpaceTimeField& g) {
  ProblemSpec fwd = adjoint_as_forward(spec);
  ForwardSolver solver(xf, fwd);
  WeakSolution sol = solver.solve(g.reversed(), nullptr);
  sol.u = sol.u.reversed();
  return sol;
}

cplx bilinear_form(const SpectralTransform& xf, const ProblemSpec& spec,
                   const SpaceTimeField& u, const SpaceTimeField& v) {
  if (spec.has_drift && !(spec.s > 0.5))
    throw std::invalid_argument("bilinear form: drift terms require s > 1/2");
  SpaceTimeField hu = xf.apply_hs(u, 0.5 * spec.s, false);
  SpaceTimeField hv = xf.apply_hs(v, 0.5 * spec.s, true);
  cplx out = st_inner(hu, hv, xf.basis().cell_weight());
  const double w = xf.basis().cell_weight() / u.nt();
  if (spec.q.data.size()) {
    cplx acc = 0.0;
    for (int j = 0; j < u.nt(); ++j)
      for (int i = 0; i < u.nspace(); ++i)
        acc += spec.q.data(i, j).real() * u.data(i, j) * std::conj(v.data(i, j));
    out += acc * w;
  }
  if (spec.has_drift) {
    const Grid& g = *spec.grid;
    const int nx = g.nodes_per_axis();
    const double i2h = 1.0 / (2.0 * g.spacing());
    cplx acc = 0.0;
    for (int j = 0; j < u.nt(); ++j)
      for (int fl = 0; fl < g.num_nodes(); ++fl) {
        double bx = spec.drift_x.data.size() ? spec.drift_x.data(fl, j).real() : 0.0;
        double by = (g.dimension() == 2 && spec.drift_y.data.size())
                        ? spec.drift_y.data(fl, j).real()
                        : 0.0;
        if (bx == 0.0 && by == 0.0) continue;
        int ix = fl % nx;
        cplx gx = ((ix + 1 < nx ? u.data(fl + 1, j) : cplx(0)) -
                   (ix > 0 ? u.data(fl - 1, j) : cplx(0))) * i2h;
        cplx gv = bx * gx;
        if (by != 0.0) {
          int iy = fl / nx;
          cplx gy = ((iy + 1 < nx ? u.data(fl + nx, j) : cplx(0)) -
                     (iy > 0 ? u.data(fl - nx, j) : cplx(0))) * i2h;
          gv += by * gy;
        }
        acc += gv * std::conj(v.data(fl, j));
      }
    out += acc * w;
  }
  return out;
}

EigenvalueCondition check_eigenvalue_condition(const SpectralTransform& xf,
                                               const ProblemSpec& spec) {
  ForwardSolver solver(xf, spec);
  EigenvalueCondition c;
  double smin = solver.smallest_singular_value();
  double smax = solver.largest_singular_value();
  c.margin = smax > 0 ? smin / smax : 0.0;
  c.pass = c.margin > 1e-8;
  return c;
}

CoercivityBound coercivity_shift_bound(const SpectralTransform& xf,
                                       const ProblemSpec& spec, int samples,
                                       unsigned seed) {
  CoercivityBound out;
  double qmin = 0.0;
  if (spec.q.data.size()) qmin = std::min(0.0, spec.q.data.real().minCoeff());
  out.mu_min = -qmin;  // || min(q, 0) ||_inf

  const double cs = std::cos(0.5 * spec.s * M_PI);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;

  if (spec.has_drift) {
    // empirical C_b in |int <b,grad w> w| <= C_b ||w||_L2^{(2s-1)/s} ||w||_{H^s}^{1/s},
    // then Young: <= eps ||w||_{H^s}^2 + C_eps ||w||_L2^2 with eps = c_s/4.
    double cb = 0.0;
    ProblemSpec drift_only = spec;
    drift_only.q = SpaceTimeField();
    for (int it = 0; it < samples; ++it) {
      SpaceTimeField w(spec.grid->num_nodes(), spec.time, spec.grid->hash());
      for (int fl : spec.grid->omega_nodes())
        for (int j : spec.time.open_window_indices()) w.data(fl, j) = nd(gen);
      cplx d = bilinear_form(xf, drift_only, w, w) -
               st_inner(xf.apply_hs(w, 0.5 * spec.s, false),
                        xf.apply_hs(w, 0.5 * spec.s, true), xf.basis().cell_weight());
      double l2 = st_norm(w, xf.basis().cell_weight());
      double hs = xf.hs_norm(w, spec.s);
      double denom = std::pow(l2, (2.0 * spec.s - 1.0) / spec.s) * std::pow(hs, 1.0 / spec.s);
      if (denom > 0) cb = std::max(cb, std::abs(d) / denom);
    }
    out.drift_constant = cb;
    double alpha = 1.0 / (2.0 * spec.s);
    double eps = 0.25 * cs;
    // A^alpha B^{1-alpha} <= alpha delta A + (1-alpha) delta^{-alpha/(1-alpha)} B
    double delta = eps / (alpha * std::max(cb, 1e-300));
    double ceps = cb * (1.0 - alpha) * std::pow(delta, -alpha / (1.0 - alpha));
    double qmax = spec.q.data.size() ? spec.q.data.real().cwiseAbs().maxCoeff() : 0.0;
    out.mu_min = ceps + qmax;
  }

  // verification on random w supported on the trial window
  double worst = 1e300;
  for (int it = 0; it < samples; ++it) {
    SpaceTimeField w(spec.grid->num_nodes(), spec.time, spec.grid->hash());
    for (int fl : spec.grid->omega_nodes())
      for (int j : spec.time.open_window_indices()) w.data(fl, j) = nd(gen);
    cplx b = bilinear_form(xf, spec, w, w);
    double l2 = st_norm(w, xf.basis().cell_weight());
    double lhs = b.real() + out.mu_min * l2 * l2;
    // spectral seminorm sum |lambda + i sigma|^s |c|^2
    Eigen::MatrixXcd c = xf.to_spectral(w);
    double semi = 0.0;
    for (int k = 0; k < c.rows(); ++k)
      for (int m = 0; m < c.cols(); ++m)
        semi += std::abs(fractional_power(xf.basis().lambdas()[k], xf.time().sigma(m), spec.s)) *
                std::norm(c(k, m));
    double margin = lhs - (spec.has_drift ? 0.5 : 1.0) * cs * semi;
    worst = std::min(worst, margin / std::max(semi, 1e-300));
  }
  out.worst_margin = worst;
  out.verified = worst >= -1e-10;
  return out;
}

IterativeResult bicgstab_solve(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const Eigen::VectorXd& rhs, const Eigen::VectorXd& diag, double rtol, int max_iter) {
  IterativeResult res;
  const int n = static_cast<int>(rhs.size());
  Eigen::VectorXd pinv = diag.unaryExpr([](double d) {
    return std::abs(d) > 1e-300 ? 1.0 / d : 1.0;
  });
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd r0 = r, p = r, v = Eigen::VectorXd::Zero(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rhsn = rhs.norm();
  if (rhsn == 0.0) {
    res.x = x;
    res.converged = true;
    return res;
  }
  rho = r0.dot(r);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd ph = pinv.cwiseProduct(p);
    v = apply(ph);
    alpha = rho / r0.dot(v);
    Eigen::VectorXd sv = r - alpha * v;
    if (sv.norm() / rhsn < rtol) {
      x += alpha * ph;
      res.x = x;
      res.iterations = it;
      res.residual = sv.norm() / rhsn;
      res.converged = true;
      return res;
    }
    Eigen::VectorXd sh = pinv.cwiseProduct(sv);
    Eigen::VectorXd t = apply(sh);
    omega = t.dot(sv) / t.dot(t);
    x += alpha * ph + omega * sh;
    r = sv - omega * t;
    res.residual = r.norm() / rhsn;
    res.iterations = it;
    if (res.residual < rtol) {
      res.x = x;
      res.converged = true;
      return res;
    }
    double rho_new = r0.dot(r);
    double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
  }
  res.x = x;
  return res;
}

}  // namespace fracpar
