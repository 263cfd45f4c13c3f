#ifndef FRACPAR_COEFF_HPP
#define FRACPAR_COEFF_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "fracpar/grid.hpp"

namespace fracpar {

// Symmetric d x d matrix sample: [a11, a22, a12].
using MatSample = std::array<double, 3>;

// Coefficient field A(x) with declared ellipticity Lambda and Lipschitz
// constant K. The evaluator is sampled wherever the discretization needs it
// (edge midpoints, nodes); validation runs over all cell midpoints.
class CoefficientField {
 public:
  using Eval = std::function<MatSample(double, double)>;

  CoefficientField() = default;
  CoefficientField(Eval eval, double lambda_decl, double lipschitz_decl,
                   std::string tag)
      : eval_(std::move(eval)), lambda_(lambda_decl), lipschitz_(lipschitz_decl),
        tag_(std::move(tag)) {}

  static CoefficientField identity();
  // (1 + amp sin(freq x)) (1 + amp sin(freq y)) * I, |amp| < 1
  static CoefficientField sinusoidal(double amp, double freq);
  // smoothed two-level profile along x: value jumps from 1 to level across a
  // tanh layer of the given width at x = 0
  static CoefficientField piecewise(double level, double width);

  MatSample operator()(double x, double y = 0.0) const { return eval_(x, y); }
  double declared_lambda() const { return lambda_; }
  double declared_lipschitz() const { return lipschitz_; }
  const std::string& tag() const { return tag_; }

  std::uint64_t hash(const Grid& grid) const;

 private:
  Eval eval_;
  double lambda_ = 1.0;
  double lipschitz_ = 0.0;
  std::string tag_ = "identity";
};

struct CoefficientReport {
  double lambda_observed = 1.0;    // tightest two-sided ellipticity bound
  double lipschitz_observed = 0.0; // max |A(p)-A(q)| / |p-q| over adjacent cells
  bool pass = false;
};

// Validates A over all cell midpoints of the grid. Throws on a non-symmetric
// or non-positive-definite sample (with its location); otherwise reports the
// observed constants and pass = (observed within declared bounds).
CoefficientReport validate_coefficients(const CoefficientField& a, const Grid& grid);

}  // namespace fracpar

#endif
