#ifndef SOLVDIFF_TEST_ORACLES_HPP
#define SOLVDIFF_TEST_ORACLES_HPP

#include "solvdiff/specfun.hpp"

// Independent reference implementations used only by tests. They share no
// code with the library paths they check: terms are built from explicit
// Pochhammer products, gamma factors come from std::lgamma, and everything
// accumulates in long double.
namespace oracles {

// 200-term compensated power series.
long double gauss_2f1_series(double a, double b, double c, double z);
long double kummer_m_series(double a, double b, double z);

// Gamma/sine connection formula on top of kummer_m_series.
long double tricomi_u_connection(double a, double b, double z);

// Forward three-term recurrences in extended precision.
long double hermite(int n, long double x);
long double laguerre(long double alpha, int n, long double x);
long double jacobi(long double alpha, long double beta, int n, long double x);

long double poly(const solvdiff::specfun::PolyFamily& family, int n, double x);

} // namespace oracles

#endif
