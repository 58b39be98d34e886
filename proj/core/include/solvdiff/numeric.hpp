#ifndef SOLVDIFF_NUMERIC_HPP
#define SOLVDIFF_NUMERIC_HPP

#include <functional>
#include <vector>

namespace solvdiff {
namespace num {

// Compensated (Kahan) accumulator in extended precision.
class KahanSum {
  public:
    void add(long double term) {
        long double y = term - comp_;
        long double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    long double value() const { return sum_; }

  private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

using Fn = std::function<double(double)>;

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
double integrate(const Fn& f, double a, double b, const QuadOptions& opt = {});

// Integral over [a, +inf) via the substitution x = a + t/(1-t).
double integrate_to_inf(const Fn& f, double a, const QuadOptions& opt = {});

// Integral over (-inf, b].
double integrate_from_inf(const Fn& f, double b, const QuadOptions& opt = {});

// Integral over the whole real line.
double integrate_real_line(const Fn& f, const QuadOptions& opt = {});

// Richardson-extrapolated central differences. `h0` is the starting step;
// `levels` halvings of the step feed the extrapolation tableau.
double deriv1(const Fn& f, double x, double h0, int levels = 3);
double deriv2(const Fn& f, double x, double h0, int levels = 3);
double deriv3(const Fn& f, double x, double h0, int levels = 2);

// Bisection for a strictly monotone function; requires f(lo), f(hi) to
// bracket zero. Tolerance is on the x-interval width.
double bisect(const Fn& f, double lo, double hi, double x_tol, int max_iter = 200);

// Golden-section minimisation of a unimodal function on [lo, hi].
double golden_min(const Fn& f, double lo, double hi, double x_tol);

std::vector<double> linspace(double a, double b, int n);

} // namespace num
} // namespace solvdiff

#endif
