#ifndef SOLVDIFF_TRANSFORM_HPP
#define SOLVDIFF_TRANSFORM_HPP

#include "solvdiff/fundamental.hpp"
#include "solvdiff/processes.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace solvdiff {
namespace xform {

struct TargetDomain {
    proc::Interval interval;
    bool bounded = false;
};

// A stochastic transformation {rho, h, Y} of a base process:
//   h(x) = c1 phi+ + c2 phi-,   Y(x) = (c3 phi+ + c4 phi-) / h(x),
// with c1,c2 >= 0 not both zero and c1 c4 - c2 c3 != 0. Immutable and cheap
// to copy.
class StochasticTransform {
  public:
    const proc::BaseProcess& base() const;
    double rho() const;
    double c1() const;
    double c2() const;
    double c3() const;
    double c4() const;
    const fund::FundamentalPair& pair() const;
    proc::Interval x_domain() const;
    bool increasing() const;

    double h(double x) const;
    double map_y(double x) const;
    // Numerical inversion of the monotone Y by bisection.
    double invert_y(double y) const;
    // dY/dx = (c2 c3 - c1 c4) w_rho s'(x) / h(x)^2.
    double dy_dx(double x) const;

    double sigma_y(double y) const;
    // Pushforward speed density: m_Y(Y(x)) = h^2(x) m_X(x) / |Y'(x)|.
    double m_y(double y) const;
    TargetDomain domain_y() const;

    // Transition kernel of Y with respect to m_Y(dy1):
    //   p_Y(t,y0,y1) = exp(-rho t) p_X(t,x0,x1) / (h(x0) h(x1)).
    double density_y(double t, double y0, double y1, proc::SeriesDiag* diag = nullptr) const;
    double green_y(double lambda, double y0, double y1) const;

    // Law of the almost-sure limit Y_infinity for bounded conservative
    // targets (BM/OU bases): returns (P[Y_inf = lo], P[Y_inf = hi]).
    std::pair<double, double> y_infinity_law(double y0) const;

    // Driftless spec of the target process (vol = sigma_y).
    proc::DiffusionSpec target_spec() const;
    proc::DiffusionSpec base_spec() const;

  private:
    friend StochasticTransform build_transform(const proc::BaseProcess&, double, double, double,
                                               double, double);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

StochasticTransform build_transform(const proc::BaseProcess& base, double rho, double c1,
                                    double c2, double c3, double c4);

// Composable view of a transformation: forward/inverse coordinate maps, the
// measure-change gauge on the source coordinates, and the density relation
// factor rho.
struct TransformRecord {
    double rho = 0.0;
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::function<double(double)> h;
    proc::DiffusionSpec source_spec;
    proc::DiffusionSpec target_spec;
};

TransformRecord record_of(const StochasticTransform& t);

// Inverse transformation {-rho, 1/h(X(y)), X(y)} acting on the target side.
TransformRecord inverse_transform(const StochasticTransform& t);

// Composition {rho1+rho2, h1(x) h2(Y(x)), Z(Y(x))}; throws BaseMismatch when
// t2's source does not match t1's target (checked on the domain and the Bose
// invariant).
TransformRecord compose(const TransformRecord& t1, const TransformRecord& t2);

} // namespace xform
} // namespace solvdiff

#endif
