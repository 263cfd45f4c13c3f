#include "fracpar/spacetime.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace fracpar {

TimeGrid::TimeGrid(double T, double kap, int nt) : horizon(T), kappa(kap), n(nt) {
  if (!(T > 0.0)) throw std::invalid_argument("time grid: horizon must be > 0");
  if (!(kap >= 2.0)) throw std::invalid_argument("time grid: padding factor must be >= 2");
  if (nt < 4 || (nt & (nt - 1)) != 0)
    throw std::invalid_argument("time grid: node count must be a power of two");
}

std::vector<int> TimeGrid::open_window_indices() const {
  std::vector<int> out;
  const double eps = 1e-12 * pad();
  for (int j = 0; j < n; ++j) {
    double t = node(j);
    if (t > -horizon + eps && t < horizon - eps) out.push_back(j);
  }
  return out;
}

SpaceTimeField SpaceTimeField::reversed() const {
  SpaceTimeField r(nspace(), time, grid_hash);
  for (int j = 0; j < nt(); ++j) r.data.col(j) = data.col((nt() - j) % nt());
  return r;
}

SpaceTimeField SpaceTimeField::cutoff(double T) const {
  if (T > time.pad() + 1e-12)
    throw std::invalid_argument("cutoff: T exceeds the padded window");
  SpaceTimeField r = *this;
  const double eps = 1e-12 * time.pad();
  for (int j = 0; j < nt(); ++j)
    if (std::abs(time.node(j)) > T + eps) r.data.col(j).setZero();
  return r;
}

double SpaceTimeField::causal_violation() const {
  double m = 0.0;
  const double eps = 1e-12 * time.pad();
  for (int j = 0; j < nt(); ++j)
    if (time.node(j) <= -time.horizon + eps)
      m = std::max(m, data.col(j).cwiseAbs().maxCoeff());
  return m;
}

namespace {
constexpr char kMagic[8] = {'F', 'P', 'S', 'T', '0', '0', '0', '1'};
}

void SpaceTimeField::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("SpaceTimeField::save: cannot open " + path);
  std::int64_t ns = nspace(), ntn = nt();
  bool ok = std::fwrite(kMagic, 1, 8, f) == 8 && std::fwrite(&ns, sizeof ns, 1, f) == 1 &&
            std::fwrite(&ntn, sizeof ntn, 1, f) == 1 &&
            std::fwrite(&time.horizon, sizeof(double), 1, f) == 1 &&
            std::fwrite(&time.kappa, sizeof(double), 1, f) == 1 &&
            std::fwrite(&grid_hash, sizeof grid_hash, 1, f) == 1 &&
            std::fwrite(data.data(), sizeof(std::complex<double>), ns * ntn, f) ==
                static_cast<std::size_t>(ns * ntn);
  std::fclose(f);
  if (!ok) throw std::runtime_error("SpaceTimeField::save: short write");
}

SpaceTimeField SpaceTimeField::load(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("SpaceTimeField::load: cannot open " + path);
  char magic[8];
  std::int64_t ns = 0, ntn = 0;
  double T = 0, kap = 0;
  std::uint64_t gh = 0;
  bool head = std::fread(magic, 1, 8, f) == 8 && std::fread(&ns, sizeof ns, 1, f) == 1 &&
              std::fread(&ntn, sizeof ntn, 1, f) == 1 &&
              std::fread(&T, sizeof T, 1, f) == 1 && std::fread(&kap, sizeof kap, 1, f) == 1 &&
              std::fread(&gh, sizeof gh, 1, f) == 1;
  if (!head || std::memcmp(magic, kMagic, 8) != 0) {
    std::fclose(f);
    throw std::runtime_error("SpaceTimeField::load: bad header in " + path);
  }
  SpaceTimeField u(static_cast<int>(ns), TimeGrid(T, kap, static_cast<int>(ntn)), gh);
  bool body = std::fread(u.data.data(), sizeof(std::complex<double>), ns * ntn, f) ==
              static_cast<std::size_t>(ns * ntn);
  std::fclose(f);
  if (!body) throw std::runtime_error("SpaceTimeField::load: payload truncated in " + path);
  return u;
}

void SpaceTimeField::export_csv(const std::string& path, const std::string& comment) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("SpaceTimeField::export_csv: cannot open " + path);
  if (!comment.empty()) std::fprintf(f, "# %s\n", comment.c_str());
  std::fprintf(f, "node_index");
  for (int j = 0; j < nt(); ++j)
    std::fprintf(f, ",re_t%.10g,im_t%.10g", time.node(j), time.node(j));
  std::fprintf(f, "\n");
  for (int i = 0; i < nspace(); ++i) {
    std::fprintf(f, "%d", i);
    for (int j = 0; j < nt(); ++j)
      std::fprintf(f, ",%.17g,%.17g", data(i, j).real(), data(i, j).imag());
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

std::complex<double> st_inner(const SpaceTimeField& u, const SpaceTimeField& v,
                              double cell_weight) {
  if (u.nspace() != v.nspace() || !(u.time == v.time))
    throw std::invalid_argument("st_inner: field layout mismatch");
  std::complex<double> s = 0.0;
  for (int j = 0; j < u.nt(); ++j)
    for (int i = 0; i < u.nspace(); ++i) s += u.data(i, j) * std::conj(v.data(i, j));
  return s * (cell_weight / u.nt());
}

double st_norm(const SpaceTimeField& u, double cell_weight) {
  return std::sqrt(std::abs(st_inner(u, u, cell_weight)));
}

}  // namespace fracpar
