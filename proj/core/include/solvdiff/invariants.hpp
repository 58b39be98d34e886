#ifndef SOLVDIFF_INVARIANTS_HPP
#define SOLVDIFF_INVARIANTS_HPP

#include "solvdiff/processes.hpp"

#include <functional>
#include <optional>

namespace solvdiff {
namespace inv {

using Fn = std::function<double(double)>;

// Natural-coordinate view of a diffusion: z solves dx/dz = sigma(x) anchored
// at x(0) = x_anchor, and j_of_z is the potential of the canonical form
// (1/2) d^2/dz^2 + J(z).
struct BoseInvariant {
    Fn j_of_z;
    Fn x_of_z;
    Fn z_of_x;
    double z_lo = 0.0; // reachable z-range (interior, with margin)
    double z_hi = 0.0;
};

// Bose invariant of the operator a(x) f'' + b(x) f' + c(x) f at x, with
// derivatives of the coefficients taken by central differences.
double bose_I(const Fn& a, const Fn& b, const Fn& c, double x);

// Potential I_X(x) of the diffusion's canonical form, from drift/vol alone.
double diffusion_potential(const proc::DiffusionSpec& spec, double x);

// Default anchor: domain midpoint when bounded, lo+1 on half-lines, 0 on R.
double default_anchor(const proc::DiffusionSpec& spec);

BoseInvariant make_bose(const proc::DiffusionSpec& spec, double x_anchor);

// Convenience single-point evaluation with the default anchor.
double invariant_J(const proc::DiffusionSpec& spec, double z);

// Schwarzian derivative {y,x} by Richardson-extrapolated differences.
double schwarzian(const Fn& y_map, double x, double step);

// Liouville transformation of a potential: J_new(x) = (1/2){y,x} + y'(x)^2 J(y(x)).
double liouville_potential(const Fn& J, const Fn& y_map, double x);

// Tests whether spec_b is reachable from spec_a by a stochastic
// transformation: returns rho with J_b(z) = J_a(z) - rho when the difference
// is constant on the grid (after translation/orientation alignment of z),
// nullopt otherwise.
std::optional<double> equivalent(const proc::DiffusionSpec& spec_a,
                                 const proc::DiffusionSpec& spec_b, int grid_n = 64,
                                 double tol = 1e-4);

struct RPolynomial {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    double operator()(double x) const { return r0 + x * (r1 + x * r2); }
};

struct ConfluentParams {
    double a;
    double b;
    double w = 1.0;
};

struct HypergeomParams {
    double alpha;
    double beta;
    double gamma;
};

// Volatility of an R-family member at x: C sqrt(A) W / (c1 F1 + c2 F2)^2 *
// sqrt(A/R), with C = 1 (the scale is free and fixed by callers).
double r_family_sigma_confluent(const RPolynomial& R, double c1, double c2,
                                const ConfluentParams& params, double x);
double r_family_sigma_hypergeom(const RPolynomial& R, double c1, double c2,
                                const HypergeomParams& params, double x);

enum class RKind { Confluent, Hypergeometric };

// Generator process of the R-family: dX = (a+bX) A(X)/R(X) dt + A(X)/sqrt(R(X)) dW.
proc::DiffusionSpec r_family_process(RKind kind, const RPolynomial& R, double a, double b);

} // namespace inv
} // namespace solvdiff

#endif
