#ifndef SOLVDIFF_PROCESSES_HPP
#define SOLVDIFF_PROCESSES_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace solvdiff {
namespace proc {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains_interior(double x) const { return x > lo && x < hi; }
    double width() const { return hi - lo; }
};

// Canonical solvable base processes. Parameter bounds beyond sigma/b/A
// positivity are enforced by the operations that rely on them, so that the
// boundary classifier can probe the full parameter tables.
struct BM {};

struct Bessel {
    double a;
    double sigma;
    double alpha() const { return 2.0 * a / (sigma * sigma) - 1.0; }
};

struct OU {
    double a;
    double b;
    double sigma;
};

struct CIR {
    double a;
    double b;
    double sigma;
    double alpha() const { return 2.0 * a / (sigma * sigma) - 1.0; }
    double theta() const { return 2.0 * b / (sigma * sigma); }
};

struct Jacobi {
    double a;
    double b;
    double sigma;
    double A;
    double alpha() const { return 2.0 * b / (sigma * sigma) - 2.0 * a / (sigma * sigma * A) - 1.0; }
    double beta() const { return 2.0 * a / (sigma * sigma * A) - 1.0; }
};

using BaseProcess = std::variant<BM, Bessel, OU, CIR, Jacobi>;

// Drift, volatility and state interval of a diffusion with zero interior
// killing. vol(x) > 0 in the interior.
struct DiffusionSpec {
    std::function<double(double)> drift;
    std::function<double(double)> vol;
    Interval domain;
};

// Throws InvalidParameter when structural bounds (sigma > 0, b > 0, A > 0,
// Bessel alpha > 0) are violated.
void validate(const BaseProcess& p);

std::string kind_name(const BaseProcess& p);
Interval domain_of(const BaseProcess& p);
DiffusionSpec to_spec(const BaseProcess& p);

// Speed density m(x) and scale density s'(x). OU/CIR/Jacobi use the
// normalized closed forms (m integrates to 1); BM and Bessel carry the
// generic 2 sigma^-2 e^B and e^-B forms.
double speed_density(const BaseProcess& p, double x);
double scale_density(const BaseProcess& p, double x);

// Spectral data; throws NoSpectrum for BM and Bessel.
double eigenvalue(const BaseProcess& p, int n);
double eigenfunction(const BaseProcess& p, int n, double x);
double norm_sq(const BaseProcess& p, int n);

struct SeriesDiag {
    double last_term = 0.0;     // magnitude of the last included term
    bool truncation_ok = true;  // last term below tolerance of partial sum
};

// Spectral expansion of the transition kernel with respect to m(dx1),
// truncated at N terms.
double density_series(const BaseProcess& p, double t, double x0, double x1, int n_terms = 80,
                      SeriesDiag* diag = nullptr);

// Closed-form transition kernel with respect to m(dx1); BM, OU and CIR only.
double density_closed(const BaseProcess& p, double t, double x0, double x1);

} // namespace proc
} // namespace solvdiff

#endif
