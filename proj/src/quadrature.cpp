#include "fracpar/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracpar {

QuadResult integrate_log_axis(const std::function<cplx(double)>& f,
                              double tau_lo, double tau_hi,
                              double rtol, int max_nodes_log2) {
  if (!(tau_lo > 0.0) || !(tau_hi > tau_lo))
    throw std::domain_error("integrate_log_axis: need 0 < tau_lo < tau_hi");
  const double ua = std::log(tau_lo), ub = std::log(tau_hi);

  // g(u) = f(e^u) e^u; trapezoid with doubling. Reuse previous evaluations:
  // level k has 2^k panels.
  QuadResult res;
  int n = 16;
  double h = (ub - ua) / n;
  cplx sum = 0.5 * (f(std::exp(ua)) * std::exp(ua) + f(std::exp(ub)) * std::exp(ub));
  for (int i = 1; i < n; ++i) {
    double u = ua + i * h;
    sum += f(std::exp(u)) * std::exp(u);
  }
  res.evals = n + 1;
  cplx prev = sum * h;
  while (true) {
    // add midpoints
    cplx mids = 0.0;
    for (int i = 0; i < n; ++i) {
      double u = ua + (i + 0.5) * h;
      mids += f(std::exp(u)) * std::exp(u);
    }
    res.evals += n;
    n *= 2;
    h *= 0.5;
    sum += mids;
    cplx cur = sum * h;
    ++res.levels;
    double ref = std::max(std::abs(cur), std::abs(prev));
    if (ref == 0.0 || std::abs(cur - prev) <= rtol * ref) {
      res.value = cur;
      res.converged = true;
      return res;
    }
    if (n >= (1 << max_nodes_log2)) {
      res.value = cur;
      res.converged = false;
      return res;
    }
    prev = cur;
  }
}

QuadResult integrate_double_exponential(const std::function<cplx(double)>& f,
                                        double scale, double rtol,
                                        int max_nodes_log2) {
  // tau = scale * exp(c sinh u), dtau = scale * c cosh(u) exp(c sinh u) du
  const double c = 2.0;
  const double ua = -4.0, ub = 4.0;
  auto g = [&](double u) {
    double tau = scale * std::exp(c * std::sinh(u));
    double jac = scale * c * std::cosh(u) * std::exp(c * std::sinh(u));
    if (!(tau > 0.0) || !std::isfinite(jac)) return cplx(0.0, 0.0);
    return f(tau) * jac;
  };
  QuadResult res;
  int n = 16;
  double h = (ub - ua) / n;
  cplx sum = 0.5 * (g(ua) + g(ub));
  for (int i = 1; i < n; ++i) sum += g(ua + i * h);
  res.evals = n + 1;
  cplx prev = sum * h;
  while (true) {
    cplx mids = 0.0;
    for (int i = 0; i < n; ++i) mids += g(ua + (i + 0.5) * h);
    res.evals += n;
    n *= 2;
    h *= 0.5;
    sum += mids;
    cplx cur = sum * h;
    ++res.levels;
    double ref = std::max(std::abs(cur), std::abs(prev));
    if (ref == 0.0 || std::abs(cur - prev) <= rtol * ref) {
      res.value = cur;
      res.converged = true;
      return res;
    }
    if (n >= (1 << max_nodes_log2)) {
      res.value = cur;
      res.converged = false;
      return res;
    }
    prev = cur;
  }
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol,
               int depth, int max_depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth >= max_depth) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}
}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol,
                                  int max_depth) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double eps = 1e-15;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < eps) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  auto [ins, ok] = cache.emplace(n, std::move(r));
  return ins->second;
}

double integrate_gauss_panels(const std::function<double(double)>& f,
                              double a, double b, int panels, int order) {
  const GaussRule& g = gauss_legendre(order);
  double total = 0.0;
  double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double pa = a + p * w;
    double c = pa + 0.5 * w, s = 0.5 * w;
    for (int i = 0; i < order; ++i) total += g.weights[i] * s * f(c + s * g.nodes[i]);
  }
  return total;
}

}  // namespace fracpar
