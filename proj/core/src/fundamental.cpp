#include "solvdiff/fundamental.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/specfun.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace solvdiff {
namespace fund {

using proc::BaseProcess;
using specfun::gauss_2f1;
using specfun::kummer_m;
using specfun::tricomi_u;

namespace {

std::vector<double> wronskian_probes(const BaseProcess& p) {
    if (const auto* q = std::get_if<proc::OU>(&p)) {
        double c = q->a / q->b;
        return {c - 2.0, c - 1.0, c + 0.3, c + 1.0, c + 2.0, c + 3.0};
    }
    if (const auto* q = std::get_if<proc::Jacobi>(&p)) {
        std::vector<double> v;
        for (double f : {0.1, 0.25, 0.45, 0.6, 0.8, 0.9}) v.push_back(f * q->A);
        return v;
    }
    if (std::holds_alternative<proc::BM>(p)) return {-2.0, -1.0, 0.3, 1.0, 2.0, 3.0};
    return {0.3, 0.7, 1.2, 2.0, 3.0, 4.5};
}

// Scale function anchored at an interior point, used for the lambda = 0
// substitute pair.
std::function<double(double)> anchored_scale(const BaseProcess& p, double anchor) {
    return [p, anchor](double x) {
        return num::integrate([&](double u) { return proc::scale_density(p, u); }, anchor, x,
                              {1e-12, 1e-300, 4000});
    };
}

FundamentalPair degenerate_scale_pair(const BaseProcess& p, double anchor) {
    FundamentalPair pair;
    pair.lambda = 0.0;
    pair.phi_plus = anchored_scale(p, anchor);
    pair.phi_minus = [](double) { return 1.0; };
    pair.dphi_plus = [p](double x) { return proc::scale_density(p, x); };
    pair.dphi_minus = [](double) { return 0.0; };
    pair.w_lambda = 1.0;
    return pair;
}

FundamentalPair pair_bm(double lambda) {
    FundamentalPair pair;
    pair.lambda = lambda;
    if (lambda == 0.0) {
        pair.phi_plus = [](double x) { return x; };
        pair.phi_minus = [](double) { return 1.0; };
        pair.dphi_plus = [](double) { return 1.0; };
        pair.dphi_minus = [](double) { return 0.0; };
        pair.w_lambda = 1.0;
        return pair;
    }
    double g = std::sqrt(2.0 * lambda);
    pair.phi_plus = [g](double x) { return std::exp(g * x); };
    pair.phi_minus = [g](double x) { return std::exp(-g * x); };
    pair.dphi_plus = [g](double x) { return g * std::exp(g * x); };
    pair.dphi_minus = [g](double x) { return -g * std::exp(-g * x); };
    return pair;
}

FundamentalPair pair_bessel(const proc::Bessel& q, double lambda) {
    if (lambda != 0.0)
        throw Unsupported("fundamental_pair: Bessel base supports lambda = 0 only");
    double al = q.alpha();
    FundamentalPair pair;
    pair.lambda = 0.0;
    pair.phi_plus = [](double) { return 1.0; };
    pair.phi_minus = [al](double x) { return std::pow(x, -al); };
    pair.dphi_plus = [](double) { return 0.0; };
    pair.dphi_minus = [al](double x) { return -al * std::pow(x, -al - 1.0); };
    pair.w_lambda = al;
    return pair;
}

// OU decreasing solution for the centred process (a = 0), as a function of
// the centred coordinate u. For u > 0 this is U(k, 1/2, q u^2); for u <= 0
// the two-term M combination (no cancellation on that side).
struct OuPhiMinus {
    double k;     // lambda / (2b)
    double q;     // b / sigma^2
    double inv_gamma_k_half;
    double inv_gamma_k;

    double value(double u) const {
        double z = q * u * u;
        if (u > 0.0) return tricomi_u(k, 0.5, z);
        double m1 = kummer_m(k, 0.5, z);
        double m2 = kummer_m(k + 0.5, 1.5, z);
        return std::sqrt(M_PI) *
               (m1 * inv_gamma_k_half - 2.0 * std::sqrt(q) * u * m2 * inv_gamma_k);
    }
    double deriv(double u) const {
        double z = q * u * u;
        if (u > 0.0) return 2.0 * q * u * (-k) * tricomi_u(k + 1.0, 1.5, z);
        double m2 = kummer_m(k + 0.5, 1.5, z);
        double dm1 = 2.0 * q * u * (k / 0.5) * kummer_m(k + 1.0, 1.5, z);
        double dm2_part = m2 + u * 2.0 * q * u * ((k + 0.5) / 1.5) * kummer_m(k + 1.5, 2.5, z);
        return std::sqrt(M_PI) *
               (dm1 * inv_gamma_k_half - 2.0 * std::sqrt(q) * dm2_part * inv_gamma_k);
    }
};

FundamentalPair pair_ou(const proc::OU& q, double lambda) {
    double shift = q.a / q.b;
    if (lambda == 0.0) return degenerate_scale_pair(BaseProcess{q}, shift);
    auto core = std::make_shared<OuPhiMinus>();
    core->k = lambda / (2.0 * q.b);
    core->q = q.b / (q.sigma * q.sigma);
    core->inv_gamma_k_half = specfun::rgamma(core->k + 0.5);
    core->inv_gamma_k = specfun::rgamma(core->k);
    FundamentalPair pair;
    pair.lambda = lambda;
    pair.phi_minus = [core, shift](double x) { return core->value(x - shift); };
    pair.phi_plus = [core, shift](double x) { return core->value(shift - x); };
    pair.dphi_minus = [core, shift](double x) { return core->deriv(x - shift); };
    pair.dphi_plus = [core, shift](double x) { return -core->deriv(shift - x); };
    return pair;
}

FundamentalPair pair_cir(const proc::CIR& q, double lambda) {
    double al = q.alpha(), th = q.theta();
    if (!(al > -1.0)) throw InvalidParameter("fundamental_pair: CIR needs alpha > -1");
    if (lambda == 0.0) return degenerate_scale_pair(BaseProcess{q}, 1.0);
    double k = lambda / q.b;
    FundamentalPair pair;
    pair.lambda = lambda;
    pair.phi_plus = [k, al, th](double x) { return kummer_m(k, al + 1.0, th * x); };
    pair.phi_minus = [k, al, th](double x) { return tricomi_u(k, al + 1.0, th * x); };
    pair.dphi_plus = [k, al, th](double x) {
        return th * k / (al + 1.0) * kummer_m(k + 1.0, al + 2.0, th * x);
    };
    pair.dphi_minus = [k, al, th](double x) {
        return -th * k * tricomi_u(k + 1.0, al + 2.0, th * x);
    };
    return pair;
}

FundamentalPair pair_jacobi(const proc::Jacobi& q, double lambda) {
    double al = q.alpha(), be = q.beta();
    if (!(al > -1.0 && be > -1.0))
        throw InvalidParameter("fundamental_pair: Jacobi needs alpha, beta > -1");
    if (lambda == 0.0) return degenerate_scale_pair(BaseProcess{q}, 0.5 * q.A);
    double s2 = q.sigma * q.sigma;
    double sum = 2.0 * q.b / s2 - 1.0;     // alpha1 + alpha2
    double prod = 2.0 * lambda / s2;       // alpha1 * alpha2
    double disc = sum * sum - 4.0 * prod;
    if (disc < 0.0)
        throw InvalidParameter(
            "fundamental_pair: Jacobi hypergeometric indices are complex for this lambda");
    double a1 = 0.5 * (sum - std::sqrt(disc));
    double a2 = 0.5 * (sum + std::sqrt(disc));
    double b1 = 2.0 * q.a / (q.A * s2);          // = beta + 1
    double c2 = a1 + a2 + 1.0 - b1;              // = alpha + 1
    double A = q.A;
    FundamentalPair pair;
    pair.lambda = lambda;
    pair.phi_plus = [a1, a2, b1, A](double x) { return gauss_2f1(a1, a2, b1, x / A); };
    pair.phi_minus = [a1, a2, c2, A](double x) { return gauss_2f1(a1, a2, c2, 1.0 - x / A); };
    pair.dphi_plus = [a1, a2, b1, A](double x) {
        return a1 * a2 / (b1 * A) * gauss_2f1(a1 + 1.0, a2 + 1.0, b1 + 1.0, x / A);
    };
    pair.dphi_minus = [a1, a2, c2, A](double x) {
        return -a1 * a2 / (c2 * A) * gauss_2f1(a1 + 1.0, a2 + 1.0, c2 + 1.0, 1.0 - x / A);
    };
    return pair;
}

} // namespace

FundamentalPair fundamental_pair(const BaseProcess& p, double lambda) {
    if (lambda < 0.0) throw InvalidParameter("fundamental_pair: lambda must be >= 0");
    proc::validate(p);

    FundamentalPair pair;
    if (std::holds_alternative<proc::BM>(p)) {
        pair = pair_bm(lambda);
    } else if (const auto* q = std::get_if<proc::Bessel>(&p)) {
        pair = pair_bessel(*q, lambda);
    } else if (const auto* q = std::get_if<proc::OU>(&p)) {
        pair = pair_ou(*q, lambda);
    } else if (const auto* q = std::get_if<proc::CIR>(&p)) {
        pair = pair_cir(*q, lambda);
    } else {
        pair = pair_jacobi(std::get<proc::Jacobi>(p), lambda);
    }

    // Evaluate the scale-Wronskian at one probe point and confirm constancy
    // at the rest.
    auto w_at = [&](double x) {
        double sp = proc::scale_density(p, x);
        return (pair.dphi_plus(x) * pair.phi_minus(x) - pair.phi_plus(x) * pair.dphi_minus(x)) /
               sp;
    };
    auto probes = wronskian_probes(p);
    double w0 = w_at(probes.front());
    for (std::size_t i = 1; i < probes.size(); ++i) {
        double wi = w_at(probes[i]);
        if (std::abs(wi - w0) > 1e-6 * std::max(std::abs(w0), 1e-30))
            throw NonConvergence("fundamental_pair: scale-Wronskian is not constant");
    }
    if (!(w0 > 0.0)) throw NonConvergence("fundamental_pair: non-positive Wronskian");
    pair.w_lambda = w0;
    return pair;
}

double green_function(const proc::BaseProcess& p, double lambda, double x0, double x1) {
    if (!(lambda > 0.0)) throw InvalidParameter("green_function: lambda must be > 0");
    auto dom = proc::domain_of(p);
    if (!dom.contains_interior(x0) || !dom.contains_interior(x1))
        throw OutOfDomain("green_function: points must be interior");
    auto pair = fundamental_pair(p, lambda);
    // The resolvent kernel with respect to the module's speed density m
    // needs the Wronskian taken against the scale dual to that m, i.e.
    // d/ds with s' = 2/(sigma^2 m). For BM/Bessel this equals w_lambda; for
    // the normalized OU/CIR/Jacobi forms it differs by the (constant)
    // normalization of m s' sigma^2 / 2.
    double x_ref = wronskian_probes(p)[2];
    double sig = proc::to_spec(p).vol(x_ref);
    double w_m =
        (pair.dphi_plus(x_ref) * pair.phi_minus(x_ref) -
         pair.phi_plus(x_ref) * pair.dphi_minus(x_ref)) *
        0.5 * sig * sig * proc::speed_density(p, x_ref);
    double lo = std::min(x0, x1), hi = std::max(x0, x1);
    return pair.phi_plus(lo) * pair.phi_minus(hi) / w_m;
}

double hitting_laplace(const proc::BaseProcess& p, double lambda, double x, double z) {
    if (!(lambda > 0.0)) throw InvalidParameter("hitting_laplace: lambda must be > 0");
    auto dom = proc::domain_of(p);
    if (!dom.contains_interior(x) || !dom.contains_interior(z))
        throw OutOfDomain("hitting_laplace: points must be interior");
    auto pair = fundamental_pair(p, lambda);
    if (x == z) return 1.0;
    if (x < z) return pair.phi_plus(x) / pair.phi_plus(z);
    return pair.phi_minus(x) / pair.phi_minus(z);
}

} // namespace fund
} // namespace solvdiff
