#ifndef SOLVDIFF_BOUNDARY_HPP
#define SOLVDIFF_BOUNDARY_HPP

#include "solvdiff/processes.hpp"
#include "solvdiff/transform.hpp"

#include <functional>
#include <optional>
#include <string>

namespace solvdiff {
namespace bnd {

enum class BoundaryClass { Regular, Exit, Entrance, Natural };

// Refined taxonomy for h-transformed processes.
enum class TransformedClass { Killing, Exit, Natural };

enum class Side { Lo, Hi };

std::string to_string(BoundaryClass c);
std::string to_string(TransformedClass c);

// Speed/scale data up to multiplicative constants, enough for the L1 tests.
struct SpeedScale {
    std::function<double(double)> m;
    std::function<double(double)> s_prime;
    proc::Interval domain;
};

struct ClassifyDetail {
    bool q_integrable = false;
    bool r_integrable = false;
    double q_sum = 0.0; // accumulated window integrals (diagnostics)
    double r_sum = 0.0;
};

// Feller classification of an endpoint by numerically testing
// Q = |s - s(d)| m and R = |m((d,.))| s' for integrability near the endpoint
// over dyadically refined windows.
BoundaryClass classify_speed_scale(const SpeedScale& ss, Side side,
                                   ClassifyDetail* detail = nullptr);

// Classification of a base-process endpoint; the numeric verdict is
// cross-checked against the closed-form table where one exists.
BoundaryClass classify_endpoint(const proc::BaseProcess& p, Side side,
                                ClassifyDetail* detail = nullptr);

// Closed-form table (all catalog processes have one).
BoundaryClass table_class(const proc::BaseProcess& p, Side side);

struct TransformedBoundary {
    TransformedClass cls;
    bool via_fallback = false; // outside the printed lemmas; Feller test on h^2 m, s'/h^2
    std::optional<BoundaryClass> feller; // underlying class when the fallback ran
};

TransformedBoundary classify_transformed(const xform::StochasticTransform& t, Side side);

// The generic fallback on its own: Feller test of the h-transformed speed
// and scale (h^2 m, s'/h^2) with the killing flag taken from c1/c2.
TransformedBoundary classify_transformed_generic(const xform::StochasticTransform& t, Side side);

} // namespace bnd
} // namespace solvdiff

#endif
