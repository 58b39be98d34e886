#include "solvdiff/transform.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/invariants.hpp"
#include "solvdiff/numeric.hpp"

#include <cmath>
#include <vector>

namespace solvdiff {
namespace xform {

using proc::BaseProcess;
using proc::Interval;

struct StochasticTransform::Impl {
    BaseProcess base;
    double rho;
    double c1, c2, c3, c4;
    fund::FundamentalPair pair;
    Interval xdom;
    double det2;          // c2 c3 - c1 c4, sign of Y'
    bool scale_pair;      // lambda = 0 substitute pair {s(x), 1} in use
    double x_probe_lo, x_probe_hi; // interior probe range used for validation
};

namespace {

// Interior validation range: wide enough to see the boundary behaviour of h
// without leaving the domain.
std::pair<double, double> probe_range(const BaseProcess& p) {
    if (const auto* q = std::get_if<proc::OU>(&p)) {
        double c = q->a / q->b;
        double s = q->sigma / std::sqrt(2.0 * q->b);
        return {c - 8.0 * s, c + 8.0 * s};
    }
    if (const auto* q = std::get_if<proc::Jacobi>(&p)) return {1e-4 * q->A, (1.0 - 1e-4) * q->A};
    if (const auto* q = std::get_if<proc::CIR>(&p)) {
        double scale = std::max(q->a / q->b, 1.0 / q->theta());
        return {1e-4 * scale, 30.0 * scale};
    }
    if (std::holds_alternative<proc::Bessel>(p)) return {1e-4, 50.0};
    return {-10.0, 10.0}; // BM
}

void require_inaccessible(const BaseProcess& p) {
    if (const auto* q = std::get_if<proc::CIR>(&p)) {
        if (q->alpha() < 0.0)
            throw HypothesisViolated("transform: CIR base needs alpha >= 0 (inaccessible origin)");
    } else if (const auto* q = std::get_if<proc::Jacobi>(&p)) {
        if (!(q->alpha() > 0.0 && q->beta() > 0.0))
            throw HypothesisViolated("transform: Jacobi base needs alpha, beta > 0");
    }
    // BM and OU have natural boundaries; Bessel validation enforces alpha > 0.
}

} // namespace

StochasticTransform build_transform(const BaseProcess& base, double rho, double c1, double c2,
                                    double c3, double c4) {
    if (!(rho >= 0.0)) throw InvalidParameter("build_transform: rho must be >= 0");
    if (c1 < 0.0 || c2 < 0.0)
        throw InvalidCoefficients("build_transform: c1 and c2 must be non-negative");
    if (c1 == 0.0 && c2 == 0.0)
        throw InvalidCoefficients("build_transform: c1 and c2 must not both vanish");
    double det = c1 * c4 - c2 * c3;
    if (det == 0.0) throw InvalidCoefficients("build_transform: c1 c4 - c2 c3 must be nonzero");

    auto impl = std::make_shared<StochasticTransform::Impl>();
    impl->base = base;
    impl->rho = rho;
    impl->c1 = c1;
    impl->c2 = c2;
    impl->c3 = c3;
    impl->c4 = c4;
    impl->pair = fund::fundamental_pair(base, rho);
    impl->xdom = proc::domain_of(base);
    impl->det2 = c2 * c3 - c1 * c4;
    impl->scale_pair =
        rho == 0.0 && !std::holds_alternative<proc::Bessel>(base); // {s,1} substitute

    auto [plo, phi] = probe_range(base);
    impl->x_probe_lo = plo;
    impl->x_probe_hi = phi;

    // h > 0 on a validation grid spanning the probe range (log-spaced on
    // half-lines to reach near the finite endpoint).
    std::vector<double> grid;
    if (std::isfinite(impl->xdom.lo) && !std::isfinite(impl->xdom.hi)) {
        double l0 = std::log(plo - impl->xdom.lo), l1 = std::log(phi - impl->xdom.lo);
        for (double t : num::linspace(l0, l1, 100)) grid.push_back(impl->xdom.lo + std::exp(t));
    } else {
        grid = num::linspace(plo, phi, 100);
    }
    for (double x : grid) {
        double hv = c1 * impl->pair.phi_plus(x) + c2 * impl->pair.phi_minus(x);
        if (!(hv > 0.0) || !std::isfinite(hv))
            throw NonPositiveH("build_transform: h(x) <= 0 on the validation grid");
    }

    // Y' from the exact Wronskian expression, cross-checked once against a
    // finite difference.
    StochasticTransform t;
    t.impl_ = impl;
    double xm = grid[grid.size() / 2];
    double fd = num::deriv1([&](double x) { return t.map_y(x); }, xm,
                            1e-4 * std::max(1.0, std::abs(xm)), 2);
    double an = t.dy_dx(xm);
    if (std::abs(fd - an) > 1e-5 * std::max(std::abs(an), 1e-12))
        throw NonConvergence("build_transform: analytic Y' disagrees with finite difference");
    return t;
}

const BaseProcess& StochasticTransform::base() const { return impl_->base; }
double StochasticTransform::rho() const { return impl_->rho; }
double StochasticTransform::c1() const { return impl_->c1; }
double StochasticTransform::c2() const { return impl_->c2; }
double StochasticTransform::c3() const { return impl_->c3; }
double StochasticTransform::c4() const { return impl_->c4; }
const fund::FundamentalPair& StochasticTransform::pair() const { return impl_->pair; }
proc::Interval StochasticTransform::x_domain() const { return impl_->xdom; }
bool StochasticTransform::increasing() const { return impl_->det2 > 0.0; }

double StochasticTransform::h(double x) const {
    return impl_->c1 * impl_->pair.phi_plus(x) + impl_->c2 * impl_->pair.phi_minus(x);
}

namespace {

// Y-limit at an endpoint, from the asymptotic dominance of phi+/phi-.
double y_limit(double c1, double c2, double c3, double c4, bool scale_pair, bool at_hi) {
    const double inf = proc::kInf;
    if (scale_pair) return (c3 > 0) == at_hi ? inf : -inf;
    if (at_hi) return c1 > 0.0 ? c3 / c1 : (c3 / c2 > 0 ? inf : -inf);
    return c2 > 0.0 ? c4 / c2 : (c4 / c1 > 0 ? inf : -inf);
}

} // namespace

double StochasticTransform::map_y(double x) const {
    if (!impl_->xdom.contains_interior(x)) throw OutOfDomain("map_y: x outside the interior");
    double phi_p, phi_m;
    try {
        phi_p = impl_->pair.phi_plus(x);
        phi_m = impl_->pair.phi_minus(x);
    } catch (const Error&) {
        // phi overflowed deep in a tail: Y has already reached its endpoint
        // limit to machine precision there.
        bool at_hi = !std::isfinite(impl_->xdom.hi) ? x > 0.0
                                                    : (x - impl_->xdom.lo > impl_->xdom.hi - x);
        return y_limit(impl_->c1, impl_->c2, impl_->c3, impl_->c4, impl_->scale_pair, at_hi);
    }
    double num = impl_->c3 * phi_p + impl_->c4 * phi_m;
    double den = impl_->c1 * phi_p + impl_->c2 * phi_m;
    if (!std::isfinite(num) || !std::isfinite(den)) {
        bool at_hi = phi_p > phi_m ? true : false;
        return y_limit(impl_->c1, impl_->c2, impl_->c3, impl_->c4, impl_->scale_pair, at_hi);
    }
    return num / den;
}

double StochasticTransform::dy_dx(double x) const {
    double hv = h(x);
    return impl_->det2 * impl_->pair.w_lambda * proc::scale_density(impl_->base, x) / (hv * hv);
}

double StochasticTransform::invert_y(double y) const {
    auto dom = domain_y();
    if (!dom.interval.contains_interior(y)) throw OutOfDomain("invert_y: y outside the target");
    bool inc = increasing();
    // residual with the sign of an increasing map
    auto f = [&](double x) { return inc ? map_y(x) - y : y - map_y(x); };

    double lo = impl_->x_probe_lo, hi = impl_->x_probe_hi;
    auto toward_lo = [&](double x) {
        return std::isfinite(impl_->xdom.lo) ? impl_->xdom.lo + (x - impl_->xdom.lo) / 8.0
                                             : x - 8.0 * std::max(1.0, std::abs(x));
    };
    auto toward_hi = [&](double x) {
        return std::isfinite(impl_->xdom.hi) ? impl_->xdom.hi - (impl_->xdom.hi - x) / 8.0
                                             : x + 8.0 * std::max(1.0, std::abs(x));
    };
    int guard = 0;
    while (f(lo) > 0.0) {
        lo = toward_lo(lo);
        if (++guard > 200) throw OutOfDomain("invert_y: failed to bracket from below");
    }
    guard = 0;
    while (f(hi) < 0.0) {
        hi = toward_hi(hi);
        if (++guard > 200) throw OutOfDomain("invert_y: failed to bracket from above");
    }
    double x_tol = 1e-15 * std::max({std::abs(lo), std::abs(hi), 1.0});
    return num::bisect(f, lo, hi, x_tol, 200);
}

double StochasticTransform::sigma_y(double y) const {
    double x = invert_y(y);
    return std::abs(dy_dx(x)) * proc::to_spec(impl_->base).vol(x);
}

double StochasticTransform::m_y(double y) const {
    double x = invert_y(y);
    double hv = h(x);
    return hv * hv * proc::speed_density(impl_->base, x) / std::abs(dy_dx(x));
}

TargetDomain StochasticTransform::domain_y() const {
    require_inaccessible(impl_->base);
    const double inf = proc::kInf;
    double at_lo, at_hi;
    if (impl_->scale_pair) {
        // pair {s, 1}: positivity of h forces c1 = 0, Y = (c3 s + c4)/c2 and
        // the scale map is onto R for these bases.
        at_lo = impl_->c3 > 0 ? -inf : inf;
        at_hi = impl_->c3 > 0 ? inf : -inf;
    } else {
        at_lo = impl_->c2 > 0.0 ? impl_->c4 / impl_->c2 : (impl_->c4 / impl_->c1 > 0 ? inf : -inf);
        at_hi = impl_->c1 > 0.0 ? impl_->c3 / impl_->c1 : (impl_->c3 / impl_->c2 > 0 ? inf : -inf);
    }
    TargetDomain dom;
    dom.interval = {std::min(at_lo, at_hi), std::max(at_lo, at_hi)};
    dom.bounded = dom.interval.bounded();
    return dom;
}

double StochasticTransform::density_y(double t, double y0, double y1,
                                      proc::SeriesDiag* diag) const {
    if (!(t > 0.0)) throw InvalidParameter("density_y: t must be > 0");
    double x0 = invert_y(y0);
    double x1 = invert_y(y1);
    double px;
    if (std::holds_alternative<proc::Jacobi>(impl_->base)) {
        px = proc::density_series(impl_->base, t, x0, x1, 80, diag);
    } else {
        px = proc::density_closed(impl_->base, t, x0, x1);
        if (diag) *diag = {};
    }
    return std::exp(-impl_->rho * t) / (h(x0) * h(x1)) * px;
}

double StochasticTransform::green_y(double lambda, double y0, double y1) const {
    if (!(lambda > 0.0)) throw InvalidParameter("green_y: lambda must be > 0");
    double x0 = invert_y(y0);
    double x1 = invert_y(y1);
    return fund::green_function(impl_->base, impl_->rho + lambda, x0, x1) / (h(x0) * h(x1));
}

std::pair<double, double> StochasticTransform::y_infinity_law(double y0) const {
    if (!(std::holds_alternative<proc::BM>(impl_->base) ||
          std::holds_alternative<proc::OU>(impl_->base)))
        throw HypothesisViolated("y_infinity_law: needs a conservative (BM/OU) base");
    auto dom = domain_y();
    if (!dom.bounded) throw HypothesisViolated("y_infinity_law: target domain must be bounded");
    if (!(y0 >= dom.interval.lo && y0 <= dom.interval.hi))
        throw OutOfDomain("y_infinity_law: y0 outside the target domain");
    double p_hi = (y0 - dom.interval.lo) / dom.interval.width();
    return {1.0 - p_hi, p_hi};
}

proc::DiffusionSpec StochasticTransform::target_spec() const {
    proc::DiffusionSpec spec;
    spec.domain = domain_y().interval;
    StochasticTransform copy = *this; // shared impl keeps lambdas alive
    spec.drift = [](double) { return 0.0; };
    spec.vol = [copy](double y) { return copy.sigma_y(y); };
    return spec;
}

proc::DiffusionSpec StochasticTransform::base_spec() const { return proc::to_spec(impl_->base); }

TransformRecord record_of(const StochasticTransform& t) {
    TransformRecord rec;
    rec.rho = t.rho();
    rec.forward = [t](double x) { return t.map_y(x); };
    rec.inverse = [t](double y) { return t.invert_y(y); };
    rec.h = [t](double x) { return t.h(x); };
    rec.source_spec = t.base_spec();
    rec.target_spec = t.target_spec();
    return rec;
}

TransformRecord inverse_transform(const StochasticTransform& t) {
    TransformRecord rec;
    rec.rho = -t.rho();
    rec.forward = [t](double y) { return t.invert_y(y); };
    rec.inverse = [t](double x) { return t.map_y(x); };
    rec.h = [t](double y) { return 1.0 / t.h(t.invert_y(y)); };
    rec.source_spec = t.target_spec();
    rec.target_spec = t.base_spec();
    return rec;
}

TransformRecord compose(const TransformRecord& t1, const TransformRecord& t2) {
    // t2 must act on t1's target process. Domain agreement first, then Bose
    // invariant agreement with zero offset.
    const auto& d1 = t1.target_spec.domain;
    const auto& d2 = t2.source_spec.domain;
    auto ends_match = [](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    if (!ends_match(d1.lo, d2.lo) || !ends_match(d1.hi, d2.hi))
        throw BaseMismatch("compose: state intervals of t1 target and t2 source differ");

    auto sample_point = [](const Interval& d, double f) {
        if (d.bounded()) return d.lo + f * d.width();
        if (std::isfinite(d.lo)) return d.lo + f / (1.0 - f);
        if (std::isfinite(d.hi)) return d.hi - f / (1.0 - f);
        return std::tan(M_PI * (f - 0.5));
    };
    bool same_sigma = true;
    for (double f : {0.15, 0.35, 0.5, 0.65, 0.85}) {
        double x = sample_point(d1, f);
        double va = t1.target_spec.vol(x);
        double vb = t2.source_spec.vol(x);
        if (std::abs(va - vb) > 1e-6 * std::max({1.0, std::abs(va), std::abs(vb)})) {
            same_sigma = false;
            break;
        }
    }
    if (!same_sigma) {
        auto rho = inv::equivalent(t1.target_spec, t2.source_spec, 64, 1e-4);
        if (!rho || std::abs(*rho) > 1e-4)
            throw BaseMismatch("compose: Bose invariants of t1 target and t2 source disagree");
    }

    TransformRecord rec;
    rec.rho = t1.rho + t2.rho;
    rec.forward = [f1 = t1.forward, f2 = t2.forward](double x) { return f2(f1(x)); };
    rec.inverse = [g1 = t1.inverse, g2 = t2.inverse](double z) { return g1(g2(z)); };
    rec.h = [h1 = t1.h, h2 = t2.h, f1 = t1.forward](double x) { return h1(x) * h2(f1(x)); };
    rec.source_spec = t1.source_spec;
    rec.target_spec = t2.target_spec;
    return rec;
}

} // namespace xform
} // namespace solvdiff
