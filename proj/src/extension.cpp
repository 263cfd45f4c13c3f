#include "fracpar/extension.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "fracpar/quadrature.hpp"
#include "fracpar/special.hpp"

namespace fracpar {

double ExtensionField::neumann_constant() const {
  return std::pow(2.0, -a) * std::tgamma(s) / std::tgamma(1.0 - s);
}

void ExtensionField::export_csv(const std::string& dir, const std::string& stem) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string manifest = dir + "/" + stem + "_levels.csv";
  std::FILE* mf = std::fopen(manifest.c_str(), "w");
  if (!mf) throw std::runtime_error("ExtensionField::export_csv: cannot open " + manifest);
  std::fprintf(mf, "level,z,s,a,file\n");
  for (int l = 0; l < num_levels(); ++l) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_z%02d.csv", stem.c_str(), l);
    std::fprintf(mf, "%d,%.17g,%.17g,%.17g,%s\n", l, z[l], s, a, name);
    std::string path = dir + "/" + name;
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
      std::fclose(mf);
      throw std::runtime_error("ExtensionField::export_csv: cannot open " + path);
    }
    std::fprintf(f, "node_index");
    for (int j = 0; j < time.n; ++j)
      std::fprintf(f, ",re_t%.10g,im_t%.10g", time.node(j), time.node(j));
    std::fprintf(f, "\n");
    const auto& mtx = levels[l];
    for (int i = 0; i < mtx.rows(); ++i) {
      std::fprintf(f, "%d", i);
      for (int j = 0; j < mtx.cols(); ++j)
        std::fprintf(f, ",%.17g,%.17g", mtx(i, j).real(), mtx(i, j).imag());
      std::fprintf(f, "\n");
    }
    std::fclose(f);
  }
  std::fclose(mf);
}

namespace {

// Integration window for tau-integrals damped by e^{-lambda tau} at infinity
// and (optionally) e^{-z^2/(4 tau)} at zero.
struct Window {
  double lo, hi;
  bool taylor_low;  // low endpoint handled by the Taylor correction instead
};

Window multiplier_window(double lambda, double z) {
  Window w;
  double lo_damp = z * z / 190.0;  // e^{-z^2/(4 tau)} ~ e^{-47.5}
  if (lo_damp > 1e-12) {
    w.lo = lo_damp;
    w.taylor_low = false;
  } else {
    w.lo = 1e-12;
    w.taylor_low = true;
  }
  double lam = std::max(lambda, 1e-8);
  w.hi = std::max({48.0 / lam, 3.0 * z * z, 10.0});
  return w;
}

}  // namespace

cplx extension_multiplier(double lambda, double sigma, double z, double s,
                          QuadScheme scheme, double rtol) {
  if (!(z > 0.0)) throw std::domain_error("extension_multiplier: z must be > 0");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("extension_multiplier: s in (0,1)");
  if (lambda < 0.0) throw std::domain_error("extension_multiplier: lambda >= 0");
  const cplx mu(lambda, sigma);
  const double z2q = 0.25 * z * z;
  const double pref = std::pow(z, 2.0 * s) / (std::pow(4.0, s) * std::tgamma(s));

  // difference form: m = 1 + pref * I with
  // I = int e^{-z^2/4tau} (e^{-mu tau} - 1) tau^{-1-s} dtau; the identity
  // int e^{-z^2/4tau} tau^{-1-s} dtau = Gamma(s) (z^2/4)^{-s} supplies the 1.
  auto f = [&](double tau) {
    cplx e = std::exp(-mu * tau) - 1.0;
    return std::exp(-z2q / tau) * e * std::pow(tau, -1.0 - s);
  };
  Window w = multiplier_window(lambda, z);
  cplx I;
  if (scheme == QuadScheme::LogAxis) {
    I = integrate_log_axis(f, w.lo, w.hi, rtol).value;
  } else {
    I = integrate_double_exponential(f, std::sqrt(w.lo * w.hi), rtol).value;
  }
  if (w.taylor_low) {
    // below w.lo the z-damping is negligible and e^{-mu tau} - 1 = -mu tau + ...
    I += -mu * std::pow(w.lo, 1.0 - s) / (1.0 - s) +
         mu * mu * std::pow(w.lo, 2.0 - s) / (2.0 * (2.0 - s));
  }
  // tail of the "-1" part above w.hi (e^{-mu tau} negligible there):
  // -int_hi^inf e^{-z^2/4tau} tau^{-1-s} dtau, expanded in z^2/(4 tau)
  double hi = w.hi;
  I += -(std::pow(hi, -s) / s - z2q * std::pow(hi, -1.0 - s) / (1.0 + s) +
         0.5 * z2q * z2q * std::pow(hi, -2.0 - s) / (2.0 + s));
  return 1.0 + pref * I;
}

double extension_multiplier_bessel(double lambda, double z, double s) {
  if (!(lambda > 0.0)) throw std::domain_error("multiplier closed form needs lambda > 0");
  double w = z * std::sqrt(lambda);
  return 2.0 / std::tgamma(s) * std::pow(0.5 * w, s) * bessel_k(s, w);
}

cplx extension_trace_multiplier(double lambda, double sigma, double z, double s,
                                double rtol) {
  if (!(z > 0.0)) throw std::domain_error("extension_trace_multiplier: z must be > 0");
  const cplx mu(lambda, sigma);
  const double c = 0.25 * z * z;
  // J = int_0^inf theta^{-s} e^{-theta} e^{-mu c / theta} dtheta; integrable
  // power singularity at 0, e^{-theta} decay at infinity, modulus of the
  // mu-factor <= 1 (lambda >= 0). The log-axis rule resolves the power decay;
  // the cut below theta_lo is controlled by theta^{1-s} and by the
  // e^{-lambda c/theta} suppression where lambda c is not tiny.
  const double lo = std::max(1e-26, lambda * c / 200.0);
  const double hi = 50.0;
  auto f = [&](double th) {
    return std::pow(th, -s) * std::exp(-th) * std::exp(-mu * (c / th));
  };
  cplx J = integrate_log_axis(f, lo, hi, rtol).value;
  if (lambda * c / 200.0 < 1e-26 && std::abs(mu) * c / lo < 1e-3) {
    // cut not protected by the e^{-lambda c/theta} damping, but the mu-factor
    // is ~1 below it: add the power-law remainder of theta^{-s} e^{-theta}.
    // (For lambda ~ 0 with sigma c >> lo the remainder is instead bounded by
    // oscillatory cancellation and is left out; only the Neumann zero mode
    // can reach that corner.)
    J += std::pow(lo, 1.0 - s) / (1.0 - s) - std::pow(lo, 2.0 - s) / (2.0 - s);
  }
  return fractional_power(lambda, sigma, s) * J / std::tgamma(1.0 - s);
}

double extension_trace_multiplier_bessel(double lambda, double z, double s) {
  if (!(lambda > 0.0)) throw std::domain_error("trace closed form needs lambda > 0");
  double w = z * std::sqrt(lambda);
  double J = 2.0 * std::pow(0.5 * w, 1.0 - s) * bessel_k(1.0 - s, w);
  return std::pow(lambda, s) * J / std::tgamma(1.0 - s);
}

ExtensionField extend(const SpectralTransform& xf, const SpaceTimeField& u,
                      const std::vector<double>& z_levels, double s) {
  if (z_levels.empty()) throw std::invalid_argument("extend: empty z-level list");
  for (std::size_t i = 0; i < z_levels.size(); ++i) {
    if (!(z_levels[i] > 0.0)) throw std::invalid_argument("extend: z-levels must be positive");
    if (i > 0 && !(z_levels[i] > z_levels[i - 1]))
      throw std::invalid_argument("extend: z-levels must be strictly increasing");
  }
  if (u.max_imag() > 1e-10 * std::max(1.0, u.max_abs()))
    throw std::invalid_argument("extend: input field must be real-valued");

  ExtensionField ext;
  ext.z = z_levels;
  ext.s = s;
  ext.a = 1.0 - 2.0 * s;
  ext.time = u.time;
  ext.grid_hash = u.grid_hash;
  ext.levels.reserve(z_levels.size());
  for (double z : z_levels) {
    SpaceTimeField lvl = xf.apply_multiplier(
        u, [z, s](double l, double sg) { return extension_multiplier(l, sg, z, s); });
    ext.levels.push_back(std::move(lvl.data));
  }
  return ext;
}

SpaceTimeField neumann_trace(const SpectralTransform& xf, const SpaceTimeField& u,
                             double z, double s) {
  if (!(z > 0.0)) throw std::domain_error("neumann_trace: z must be > 0");
  return xf.apply_multiplier(
      u, [z, s](double l, double sg) { return extension_trace_multiplier(l, sg, z, s); });
}

ExtensionEnergy extension_energy(const SpectralTransform& xf, const Grid& grid,
                                 const SpaceTimeField& u, double s, double M,
                                 int z_panels) {
  // z-quadrature of z^a g(z) via the substitution z = v^{2/(1+a)} when a < 0
  // (integrable weight) or plain panels otherwise; here we use the
  // substitution uniformly: z = v^p, p = 2/(1+a), z^a dz = p v^{p(1+a)-1} dv
  // with p(1+a) - 1 = 1, i.e. z^a dz = p v dv. Smooth in v on [0, M^{1/p}].
  const double a = 1.0 - 2.0 * s;
  const double p = 2.0 / (1.0 + a);
  const double vmax = std::pow(M, 1.0 / p);
  const double csn = std::pow(2.0, -a) * std::tgamma(s) / std::tgamma(1.0 - s);
  ExtensionEnergy en;

  const GaussRule& gr = gauss_legendre(12);
  const double h = grid.spacing();
  for (int panel = 0; panel < z_panels; ++panel) {
    double va = vmax * panel / z_panels, vb = vmax * (panel + 1) / z_panels;
    double c = 0.5 * (va + vb), r = 0.5 * (vb - va);
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
      double v = c + r * gr.nodes[i];
      if (v <= 0.0) continue;
      double z = std::pow(v, p);
      double wq = gr.weights[i] * r * p * v;  // z^a dz
      SpaceTimeField U = xf.apply_multiplier(u, [z, s](double l, double sg) {
        return extension_multiplier(l, sg, z, s, QuadScheme::LogAxis, 1e-6);
      });
      // dU/dz from the trace multiplier: c_s^N z^a dm/dz = -n(z)
      SpaceTimeField dU = xf.apply_multiplier(u, [z, s, a, csn](double l, double sg) {
        return -extension_trace_multiplier(l, sg, z, s, 1e-6) / (csn * std::pow(z, a));
      });
      double l2 = st_norm(U, xf.basis().cell_weight());
      double gz = st_norm(dU, xf.basis().cell_weight());
      // centered x-gradient per level
      double gx2 = 0.0;
      const int n = grid.nodes_per_axis(), d = grid.dimension();
      const auto& dat = U.data;
      for (int j = 0; j < U.nt(); ++j) {
        for (int fl = 0; fl < grid.num_nodes(); ++fl) {
          int ix = fl % n, iy = d == 2 ? fl / n : 0;
          cplx xl = ix > 0 ? dat(fl - 1, j) : 0.0, xr = ix + 1 < n ? dat(fl + 1, j) : 0.0;
          cplx gxv = (xr - xl) / (2.0 * h);
          gx2 += std::norm(gxv);
          if (d == 2) {
            cplx yl = iy > 0 ? dat(fl - n, j) : 0.0, yr = iy + 1 < n ? dat(fl + n, j) : 0.0;
            cplx gyv = (yr - yl) / (2.0 * h);
            gx2 += std::norm(gyv);
          }
        }
      }
      gx2 *= xf.basis().cell_weight() / U.nt();
      en.l2 += wq * l2 * l2;
      en.grad_z += wq * gz * gz;
      en.grad_x += wq * gx2;
    }
  }
  en.total = en.l2 + en.grad_x + en.grad_z;
  return en;
}

double bessel_heat_kernel_pa(double x_plus, double y_plus, double t, double a) {
  if (!(t > 0.0)) throw std::domain_error("bessel_heat_kernel_pa: t must be > 0");
  if (!(y_plus > 0.0)) throw std::domain_error("bessel_heat_kernel_pa: y_plus must be > 0");
  if (x_plus < 0.0) throw std::domain_error("bessel_heat_kernel_pa: x_plus must be >= 0");
  const double nu = 0.5 * (a - 1.0);
  const double pref = std::pow(2.0 * t, -0.5 * (1.0 + a));
  if (x_plus == 0.0) {
    // w^{(1-a)/2} I_nu(w) -> 2^{(1-a)/2} / Gamma((1+a)/2) as w -> 0
    return pref * std::pow(2.0, 0.5 * (1.0 - a)) / std::tgamma(0.5 * (1.0 + a)) *
           std::exp(-y_plus * y_plus / (4.0 * t));
  }
  const double w = x_plus * y_plus / (2.0 * t);
  // scaled I keeps e^{w} inside the Gaussian: e^{-(x^2+y^2)/4t + w} =
  // e^{-(x-y)^2/4t}
  return pref * std::pow(w, 0.5 * (1.0 - a)) * bessel_i_scaled(nu, w) *
         std::exp(-(x_plus - y_plus) * (x_plus - y_plus) / (4.0 * t));
}

double fundamental_solution_g(const EigenBasis& basis, int node_y, int node_x,
                              double y_plus, double x_plus, double t, double a) {
  if (!(t > 0.0)) throw std::domain_error("fundamental_solution_g: t must be > 0");
  return basis.heat_kernel(node_y, node_x, t) * bessel_heat_kernel_pa(x_plus, y_plus, t, a);
}

}  // namespace fracpar
