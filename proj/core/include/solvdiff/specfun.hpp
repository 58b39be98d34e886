#ifndef SOLVDIFF_SPECFUN_HPP
#define SOLVDIFF_SPECFUN_HPP

#include <variant>

namespace solvdiff {
namespace specfun {

// Termination control for all power series in this module. A series stops
// once |term| < rel_tol*|partial sum| for three consecutive terms, which
// guards against alternating-sign stalls.
struct SeriesControl {
    double rel_tol = 1e-13;
    int max_terms = 10000;
};

struct Hermite {};
struct Laguerre {
    double alpha; // > -1
};
struct JacobiPoly {
    double alpha; // > -1
    double beta;  // > -1
};
using PolyFamily = std::variant<Hermite, Laguerre, JacobiPoly>;

struct LogGamma {
    double value; // ln|Gamma(x)|
    int sign;     // sign of Gamma(x), +1 or -1
};

// Gauss hypergeometric 2F1(a,b;c;z) on |z| < 1.
double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

// Kummer confluent hypergeometric M(a,b,z).
double kummer_m(double a, double b, double z, const SeriesControl& ctl = {});

// Tricomi function U(a,b,z) for z > 0, through the Gamma/sine connection
// formula; integer b is handled by averaging across b +- 1e-6.
double tricomi_u(double a, double b, double z, const SeriesControl& ctl = {});

// Orthogonal polynomial value by forward three-term recurrence.
double orth_poly(const PolyFamily& family, int n, double x);

// Modified Bessel function of the first kind, ascending series.
double bessel_i(double nu, double z, const SeriesControl& ctl = {});

// ln|Gamma(x)| with sign, Lanczos approximation plus reflection for x < 0.5.
LogGamma log_gamma(double x);

// 1/Gamma(x); returns 0 at the poles (non-positive integers).
double rgamma(double x);

// Rising factorial (x)_n.
double pochhammer(double x, int n);

} // namespace specfun
} // namespace solvdiff

#endif
