#ifndef SOLVDIFF_FUNDAMENTAL_HPP
#define SOLVDIFF_FUNDAMENTAL_HPP

#include "solvdiff/processes.hpp"

#include <functional>

namespace solvdiff {
namespace fund {

// Increasing/decreasing solutions of L(phi) = lambda*phi together with their
// x-derivatives and the (constant) Wronskian with respect to d/ds.
struct FundamentalPair {
    double lambda = 0.0;
    std::function<double(double)> phi_plus;
    std::function<double(double)> phi_minus;
    std::function<double(double)> dphi_plus;
    std::function<double(double)> dphi_minus;
    double w_lambda = 0.0;
};

// Builds the pair for a base process at rate lambda >= 0. At lambda = 0 the
// solution space degenerates for BM/OU/CIR/Jacobi and the pair {scale, 1}
// (or {1, x^-alpha} for Bessel) is substituted. Bessel only supports
// lambda = 0.
FundamentalPair fundamental_pair(const proc::BaseProcess& p, double lambda);

// Resolvent kernel with respect to m(dx): w^-1 phi+(x /\ y) phi-(x \/ y).
double green_function(const proc::BaseProcess& p, double lambda, double x0, double x1);

// E_x[exp(-lambda H_z)] as the ratio of fundamental solutions.
double hitting_laplace(const proc::BaseProcess& p, double lambda, double x, double z);

} // namespace fund
} // namespace solvdiff

#endif
