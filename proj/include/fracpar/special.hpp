#ifndef FRACPAR_SPECIAL_HPP
#define FRACPAR_SPECIAL_HPP

namespace fracpar {

// Modified Bessel functions of real order nu in (-1, 1) (half-integers
// included), positive real argument. Targets ~1e-12 relative accuracy on
// (0, 50] and overflow-safe scaled variants for large arguments.
//
// Routes:
//   I_nu : ascending power series for x <= 35, uniform asymptotic
//          expansion (scaled) beyond.
//   K_nu : reflection difference pi (I_{-nu} - I_nu) / (2 sin(pi nu)) for
//          x < 2 (no cancellation there); quadrature of the standard
//          integral representation K_nu(x) = int_0^inf e^{-x cosh t}
//          cosh(nu t) dt for x >= 2. The difference formula loses
//          ~e^{2x} eps in doubles for mid-range x, so the integral route
//          takes over where it would fall under target accuracy.
// Integer nu is rejected (reflection formula pole); callers keep the
// order inside (-1, 1) except for the half-integer closed-form checks.

double bessel_i(double nu, double x);
// e^{-x} I_nu(x); safe for arguments far beyond overflow of I itself.
double bessel_i_scaled(double nu, double x);

double bessel_k(double nu, double x);
// e^{x} K_nu(x).
double bessel_k_scaled(double nu, double x);

enum class BesselKind { I, K };
// Spec-facing entry point: kind-dispatched evaluation with domain checks.
double bessel_eval(BesselKind kind, double nu, double x);

}  // namespace fracpar

#endif
