#include "acceptance/criteria.hpp"

#include "solvdiff/boundary.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/fundamental.hpp"
#include "solvdiff/invariants.hpp"
#include "solvdiff/montecarlo.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/processes.hpp"
#include "solvdiff/specfun.hpp"
#include "solvdiff/transform.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

namespace solvdiff {
namespace accept {

namespace {

using proc::BaseProcess;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

void report_max(const Reporter& report, const std::string& name, double worst, double tol,
                int n_checks) {
    std::ostringstream os;
    os << "max err " << worst << " vs tol " << tol << " over " << n_checks << " checks";
    report({name, worst <= tol, os.str()});
}

void report_flag(const Reporter& report, const std::string& name, bool ok,
                 const std::string& detail) {
    report({name, ok, detail});
}

// ---- independent oracles (no shared code with the library paths) ----------

long double poch(long double x, int n) {
    long double p = 1.0L;
    for (int k = 0; k < n; ++k) p *= x + k;
    return p;
}

long double fact(int n) {
    long double f = 1.0L;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

template <typename Term>
long double kahan200(Term term) {
    long double s = 0.0L, c = 0.0L;
    for (int n = 0; n < 200; ++n) {
        long double y = term(n) - c;
        long double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

long double oracle_2f1(double a, double b, double cc, double z) {
    return kahan200([&](int n) {
        return poch(a, n) * poch(b, n) / (poch(cc, n) * fact(n)) * std::pow((long double)z, n);
    });
}

long double oracle_m(double a, double b, double z) {
    return kahan200(
        [&](int n) { return poch(a, n) / (poch(b, n) * fact(n)) * std::pow((long double)z, n); });
}

int gamma_sign_neg(long double x) {
    long long fl = (long long)std::floor((double)x);
    return (fl % 2 == 0) ? 1 : -1;
}

long double oracle_rgamma(double x) {
    if (x <= 0.0 && std::abs(x - std::nearbyint(x)) < 1e-12) return 0.0L;
    long double lg = lgammal((long double)x);
    int sign = x > 0 ? 1 : gamma_sign_neg((long double)x);
    return sign * std::exp(-lg);
}

long double oracle_u(double a, double b, double z) {
    const long double pi = 3.14159265358979323846264338328L;
    long double t1 = oracle_m(a, b, z) * oracle_rgamma(1.0 + a - b) * oracle_rgamma(b);
    long double t2 = std::pow((long double)z, (long double)(1.0 - b)) *
                     oracle_m(1.0 + a - b, 2.0 - b, z) * oracle_rgamma(a) * oracle_rgamma(2.0 - b);
    return pi / std::sin(pi * (long double)b) * (t1 - t2);
}

// RK4 pair for F'' + J F = 0, used by the Schwarz-identity check.
struct OdePair {
    std::function<double(double)> J;
    std::vector<double> xs, f1, f2, d1, d2;

    static void step(const std::function<double(double)>& J, double x, double h, double& y,
                     double& p) {
        auto acc = [&](double u, double v) { return -J(u) * v; };
        double k1y = p, k1p = acc(x, y);
        double k2y = p + 0.5 * h * k1p, k2p = acc(x + 0.5 * h, y + 0.5 * h * k1y);
        double k3y = p + 0.5 * h * k2p, k3p = acc(x + 0.5 * h, y + 0.5 * h * k2y);
        double k4y = p + h * k3p, k4p = acc(x + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    }

    static OdePair integrate(std::function<double(double)> J, double x0, double x1, int n) {
        OdePair out;
        out.J = J;
        double h = (x1 - x0) / n;
        double y1 = 1.0, p1 = 0.0, y2 = 0.0, p2 = 1.0;
        out.xs.push_back(x0);
        out.f1.push_back(y1);
        out.f2.push_back(y2);
        out.d1.push_back(p1);
        out.d2.push_back(p2);
        for (int i = 0; i < n; ++i) {
            double x = x0 + i * h;
            step(J, x, h, y1, p1);
            step(J, x, h, y2, p2);
            out.xs.push_back(x0 + (i + 1) * h);
            out.f1.push_back(y1);
            out.f2.push_back(y2);
            out.d1.push_back(p1);
            out.d2.push_back(p2);
        }
        return out;
    }

    std::pair<double, double> values(double x) const {
        double h = xs[1] - xs[0];
        int i = (int)std::floor((x - xs[0]) / h);
        i = std::max(0, std::min<int>(i, (int)xs.size() - 1));
        double y1 = f1[i], p1 = d1[i], y2 = f2[i], p2 = d2[i];
        double dx = x - xs[i];
        if (dx != 0.0) {
            step(J, xs[i], dx, y1, p1);
            step(J, xs[i], dx, y2, p2);
        }
        return {y1, y2};
    }
};

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double sample_se(const std::vector<double>& v) {
    double m = sample_mean(v), s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return std::sqrt(s2 / (v.size() - 1.0) / v.size());
}

// CIR process with given alpha (sigma = 1, b = 1).
proc::CIR cir_alpha(double alpha) { return proc::CIR{(alpha + 1.0) / 2.0, 1.0, 1.0}; }

// Jacobi on [0,2] with given (alpha, beta), sigma = 1.
proc::Jacobi jacobi_ab(double alpha, double beta) {
    double A = 2.0;
    return proc::Jacobi{(beta + 1.0) * A / 2.0, (alpha + beta + 2.0) / 2.0, 1.0, A};
}

} // namespace

// ===========================================================================
// Criterion 1: special-function kernel vs independent oracles
// ===========================================================================
void criterion1_special_functions(const Reporter& report) {
    {
        double worst = 0.0;
        int n = 0;
        for (double a : {-0.5, 0.7, 1.3, 2.2})
            for (double b : {0.4, 1.1, 2.6})
                for (double c : {0.9, 1.7, 2.8})
                    for (double z : {-0.7, -0.3, 0.25, 0.6}) {
                        double got = specfun::gauss_2f1(a, b, c, z);
                        double want = (double)oracle_2f1(a, b, c, z);
                        worst = std::max(worst, rel_err(got, want));
                        ++n;
                    }
        report_max(report, "1.1 gauss_2f1 vs 200-term oracle", worst, 1e-10, n);
    }
    {
        double worst = 0.0;
        int n = 0;
        for (double a : {-0.6, 0.5, 1.4, 2.3})
            for (double b : {0.7, 1.6, 2.9})
                for (double z : {-3.0, -1.0, 0.8, 2.5, 6.0}) {
                    double got = specfun::kummer_m(a, b, z);
                    double want = (double)oracle_m(a, b, z);
                    worst = std::max(worst, rel_err(got, want));
                    ++n;
                }
        report_max(report, "1.2 kummer_m vs 200-term oracle", worst, 1e-10, n);
    }
    {
        double worst = 0.0;
        int n = 0;
        for (double a : {0.3, 0.8, 1.4, 2.1})
            for (double b : {0.25, 0.6, 1.15, 1.7})
                for (double z : {0.5, 1.5, 3.2, 6.0}) {
                    double got = specfun::tricomi_u(a, b, z);
                    double want = (double)oracle_u(a, b, z);
                    worst = std::max(worst, rel_err(got, want));
                    ++n;
                }
        report_max(report, "1.3 tricomi_u vs connection oracle", worst, 1e-10, n);
    }
    {
        double worst = 0.0;
        int n = 0;
        for (double a : {0.5, 1.3})
            for (double b : {0.8, 1.7})
                for (double z : {-1.0, 0.7, 2.0}) {
                    double fd =
                        num::deriv1([&](double u) { return specfun::kummer_m(a, b, u); }, z,
                                    1e-2, 3);
                    worst = std::max(
                        worst, rel_err(fd, a / b * specfun::kummer_m(a + 1, b + 1, z)));
                    ++n;
                }
        for (double a : {0.6, 1.2})
            for (double b : {0.9, 2.1})
                for (double c : {1.4, 2.3})
                    for (double z : {-0.4, 0.3, 0.6}) {
                        double fd = num::deriv1(
                            [&](double u) { return specfun::gauss_2f1(a, b, c, u); }, z, 5e-3,
                            3);
                        worst = std::max(worst, rel_err(fd, a * b / c *
                                                                specfun::gauss_2f1(
                                                                    a + 1, b + 1, c + 1, z)));
                        ++n;
                    }
        report_max(report, "1.4 derivative identities vs finite differences", worst, 1e-6, n);
    }
}

// ===========================================================================
// Criterion 2: spectral suite
// ===========================================================================
void criterion2_spectral(const Reporter& report) {
    std::vector<BaseProcess> procs = {BaseProcess{proc::OU{0.2, 1.0, 0.9}},
                                      BaseProcess{proc::CIR{1.2, 1.0, 1.0}},
                                      BaseProcess{proc::Jacobi{1.2, 2.2, 1.0, 2.0}}};
    {
        double worst = 0.0;
        int n_checks = 0;
        for (const auto& p : procs) {
            double lo, hi;
            if (const auto* q = std::get_if<proc::OU>(&p)) {
                lo = q->a / q->b - 10.0 * q->sigma / std::sqrt(q->b);
                hi = q->a / q->b + 10.0 * q->sigma / std::sqrt(q->b);
            } else if (std::holds_alternative<proc::CIR>(p)) {
                lo = 1e-12;
                hi = 70.0;
            } else {
                lo = 1e-12;
                hi = std::get<proc::Jacobi>(p).A - 1e-12;
            }
            for (int n = 0; n <= 10; ++n) {
                for (int m = n; m <= 10; ++m) {
                    double val = num::integrate(
                        [&](double x) {
                            return proc::eigenfunction(p, n, x) * proc::eigenfunction(p, m, x) *
                                   proc::speed_density(p, x);
                        },
                        lo, hi, {1e-11, 1e-14, 8000});
                    double want = (n == m) ? proc::norm_sq(p, n) : 0.0;
                    worst = std::max(worst, std::abs(val - want) /
                                                std::max(1.0, std::abs(want)));
                    ++n_checks;
                }
            }
        }
        report_max(report, "2.1 orthogonality with printed constants (n,m<=10)", worst, 1e-6,
                   n_checks);
    }
    {
        double worst = 0.0;
        int n_checks = 0;
        for (const auto& p : {BaseProcess{proc::OU{0.0, 1.0, 1.0}},
                              BaseProcess{proc::CIR{1.2, 1.0, 1.0}}}) {
            bool is_cir = std::holds_alternative<proc::CIR>(p);
            auto xs = is_cir ? num::linspace(0.4, 3.2, 5) : num::linspace(-1.6, 1.6, 5);
            for (double t : {0.25, 1.0, 4.0}) {
                for (double x0 : xs)
                    for (double x1 : xs) {
                        double ser = proc::density_series(p, t, x0, x1, 80);
                        double clo = proc::density_closed(p, t, x0, x1);
                        worst = std::max(worst, rel_err(ser, clo));
                        ++n_checks;
                    }
            }
        }
        report_max(report, "2.2 series density vs closed form (OU, CIR)", worst, 1e-6, n_checks);
    }
    {
        double worst = 0.0;
        int n_checks = 0;
        {
            BaseProcess ou = proc::OU{0.0, 1.0, 1.0};
            double s = 0.4, t = 0.8, x0 = 0.3, x1 = -0.9;
            double conv = num::integrate(
                [&](double z) {
                    return proc::density_closed(ou, s, x0, z) *
                           proc::density_closed(ou, t, z, x1) * proc::speed_density(ou, z);
                },
                -10.0, 10.0, {1e-10, 1e-14, 8000});
            worst = std::max(worst, rel_err(conv, proc::density_closed(ou, s + t, x0, x1)));
            ++n_checks;
        }
        {
            BaseProcess cir = proc::CIR{1.2, 1.0, 1.0};
            double s = 0.4, t = 0.7, x0 = 0.9, x1 = 1.4;
            double conv = num::integrate(
                [&](double z) {
                    return proc::density_closed(cir, s, x0, z) *
                           proc::density_closed(cir, t, z, x1) * proc::speed_density(cir, z);
                },
                1e-10, 35.0, {1e-10, 1e-14, 8000});
            worst = std::max(worst, rel_err(conv, proc::density_closed(cir, s + t, x0, x1)));
            ++n_checks;
        }
        report_max(report, "2.3 Chapman-Kolmogorov", worst, 1e-5, n_checks);
    }
}

// ===========================================================================
// Criterion 3: fundamental solutions
// ===========================================================================
void criterion3_fundamental(const Reporter& report) {
    struct Entry {
        BaseProcess p;
        std::vector<double> lambdas;
        std::vector<double> xs;
    };
    std::vector<Entry> entries = {
        {BaseProcess{proc::BM{}}, {0.5, 1.0, 2.0}, {-1.6, -0.4, 0.5, 1.3}},
        {BaseProcess{proc::OU{0.0, 1.0, 1.0}}, {0.5, 1.0, 2.0}, {-1.6, -0.4, 0.5, 1.3}},
        {BaseProcess{proc::CIR{0.75, 1.0, 1.0}}, {0.5, 1.0, 2.0}, {0.35, 0.8, 1.6, 2.7}},
        {BaseProcess{proc::Jacobi{2.5, 3.0, 1.0, 2.0}}, {0.5, 1.0, 2.0}, {0.3, 0.7, 1.1, 1.6}},
        // the sqrt-volatility base admits the rate-zero pair only
        {BaseProcess{proc::Bessel{1.5, 1.0}}, {0.0}, {0.35, 0.8, 1.6, 2.7}},
    };
    {
        double worst = 0.0;
        int n_checks = 0;
        for (const auto& e : entries) {
            auto spec = proc::to_spec(e.p);
            for (double lam : e.lambdas) {
                auto pair = fund::fundamental_pair(e.p, lam);
                for (double x : e.xs) {
                    for (const auto* phi : {&pair.phi_plus, &pair.phi_minus}) {
                        double h = 1e-3 * std::max(1.0, std::abs(x));
                        double d1 = num::deriv1(*phi, x, h, 2);
                        double d2 = num::deriv2(*phi, x, h, 2);
                        double s = spec.vol(x);
                        double lhs = spec.drift(x) * d1 + 0.5 * s * s * d2;
                        double rhs = lam * (*phi)(x);
                        double scale = std::max({std::abs(rhs), std::abs((*phi)(x)), 1.0});
                        worst = std::max(worst, std::abs(lhs - rhs) / scale);
                        ++n_checks;
                    }
                }
            }
        }
        report_max(report, "3.1 generator residual of fundamental pairs", worst, 1e-5, n_checks);
    }
    {
        double worst = 0.0;
        int n_checks = 0;
        for (const auto& e : entries) {
            if (e.lambdas.size() == 1) continue; // rate-zero pair is exact
            std::vector<double> probes = e.xs;
            probes.push_back(0.5 * (e.xs[0] + e.xs[1]));
            probes.push_back(0.5 * (e.xs[2] + e.xs[3]));
            for (double lam : e.lambdas) {
                auto pair = fund::fundamental_pair(e.p, lam);
                double w0 = 0.0;
                for (std::size_t i = 0; i < probes.size(); ++i) {
                    double x = probes[i];
                    double w = (pair.dphi_plus(x) * pair.phi_minus(x) -
                                pair.phi_plus(x) * pair.dphi_minus(x)) /
                               proc::scale_density(e.p, x);
                    if (i == 0) {
                        w0 = w;
                    } else {
                        worst = std::max(worst, std::abs(w - w0) / std::abs(w0));
                    }
                    ++n_checks;
                }
            }
        }
        report_max(report, "3.2 scale-Wronskian constancy across 6 points", worst, 1e-6,
                   n_checks);
    }
    {
        double worst = 0.0;
        int n_checks = 0;
        {
            BaseProcess ou = proc::OU{0.0, 1.0, 1.0};
            for (double lam : {0.8, 1.5}) {
                double x0 = 0.2, x1 = 1.1;
                double quad = num::integrate_to_inf(
                    [&](double t) {
                        return t <= 0.0 ? 0.0
                                        : std::exp(-lam * t) * proc::density_closed(ou, t, x0, x1);
                    },
                    1e-9, {1e-9, 1e-13, 8000});
                worst = std::max(worst, rel_err(fund::green_function(ou, lam, x0, x1), quad));
                ++n_checks;
            }
        }
        {
            BaseProcess cir = proc::CIR{0.75, 1.0, 1.0};
            for (double lam : {0.8, 1.5}) {
                double x0 = 0.6, x1 = 1.7;
                double quad = num::integrate_to_inf(
                    [&](double t) {
                        return t <= 0.0
                                   ? 0.0
                                   : std::exp(-lam * t) * proc::density_closed(cir, t, x0, x1);
                    },
                    1e-9, {1e-9, 1e-13, 8000});
                worst = std::max(worst, rel_err(fund::green_function(cir, lam, x0, x1), quad));
                ++n_checks;
            }
        }
        report_max(report, "3.3 Green function vs time-quadrature of the density", worst, 1e-4,
                   n_checks);
    }
}

// ===========================================================================
// Criterion 4: boundary classification tables
// ===========================================================================
void criterion4_boundary(const Reporter& report) {
    using bnd::BoundaryClass;
    using bnd::Side;
    int bad = 0, total = 0;
    auto expect = [&](BaseProcess p, Side side, BoundaryClass want) {
        ++total;
        try {
            if (bnd::classify_endpoint(p, side) != want) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    };
    expect(BaseProcess{cir_alpha(-1.5)}, Side::Lo, BoundaryClass::Exit);
    expect(BaseProcess{cir_alpha(-1.0)}, Side::Lo, BoundaryClass::Exit);
    expect(BaseProcess{cir_alpha(-0.5)}, Side::Lo, BoundaryClass::Regular);
    expect(BaseProcess{cir_alpha(-0.25)}, Side::Lo, BoundaryClass::Regular);
    expect(BaseProcess{cir_alpha(0.0)}, Side::Lo, BoundaryClass::Entrance);
    expect(BaseProcess{cir_alpha(1.5)}, Side::Lo, BoundaryClass::Entrance);
    expect(BaseProcess{cir_alpha(0.5)}, Side::Hi, BoundaryClass::Natural);
    expect(BaseProcess{cir_alpha(-0.5)}, Side::Hi, BoundaryClass::Natural);
    expect(BaseProcess{jacobi_ab(1.0, -1.5)}, Side::Lo, BoundaryClass::Exit);
    expect(BaseProcess{jacobi_ab(1.0, -1.0)}, Side::Lo, BoundaryClass::Exit);
    expect(BaseProcess{jacobi_ab(1.0, -0.5)}, Side::Lo, BoundaryClass::Regular);
    expect(BaseProcess{jacobi_ab(1.0, -0.25)}, Side::Lo, BoundaryClass::Regular);
    expect(BaseProcess{jacobi_ab(1.0, 0.5)}, Side::Lo, BoundaryClass::Entrance);
    expect(BaseProcess{jacobi_ab(1.0, 2.0)}, Side::Lo, BoundaryClass::Entrance);
    expect(BaseProcess{jacobi_ab(-1.5, 1.0)}, Side::Hi, BoundaryClass::Exit);
    expect(BaseProcess{jacobi_ab(-1.0, 1.0)}, Side::Hi, BoundaryClass::Exit);
    expect(BaseProcess{jacobi_ab(-0.5, 1.0)}, Side::Hi, BoundaryClass::Regular);
    expect(BaseProcess{jacobi_ab(-0.25, 1.0)}, Side::Hi, BoundaryClass::Regular);
    expect(BaseProcess{jacobi_ab(0.5, 1.0)}, Side::Hi, BoundaryClass::Entrance);
    expect(BaseProcess{jacobi_ab(2.0, 1.0)}, Side::Hi, BoundaryClass::Entrance);
    expect(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, Side::Lo, BoundaryClass::Natural);
    expect(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, Side::Hi, BoundaryClass::Natural);
    expect(BaseProcess{proc::OU{0.5, 2.0, 0.7}}, Side::Lo, BoundaryClass::Natural);
    expect(BaseProcess{proc::OU{0.5, 2.0, 0.7}}, Side::Hi, BoundaryClass::Natural);
    expect(BaseProcess{proc::BM{}}, Side::Lo, BoundaryClass::Natural);
    expect(BaseProcess{proc::BM{}}, Side::Hi, BoundaryClass::Natural);
    expect(BaseProcess{proc::Bessel{1.5, 1.0}}, Side::Lo, BoundaryClass::Entrance);
    expect(BaseProcess{proc::Bessel{1.5, 1.0}}, Side::Hi, BoundaryClass::Natural);
    {
        std::ostringstream os;
        os << bad << " mismatches over " << total << " table entries";
        report_flag(report, "4.1 Feller tables (CIR, Jacobi, OU, BM, Bessel)", bad == 0,
                    os.str());
    }

    using bnd::TransformedClass;
    int bad2 = 0, total2 = 0;
    auto expect_t = [&](BaseProcess p, Side side, TransformedClass want) {
        ++total2;
        try {
            auto t = xform::build_transform(p, 1.0, 1.0, 1.0, 0.0, 1.0);
            if (bnd::classify_transformed(t, side).cls != want) ++bad2;
        } catch (const Error&) {
            ++bad2;
        }
    };
    expect_t(BaseProcess{cir_alpha(0.5)}, Side::Lo, TransformedClass::Killing);
    expect_t(BaseProcess{cir_alpha(0.75)}, Side::Lo, TransformedClass::Killing);
    expect_t(BaseProcess{cir_alpha(1.5)}, Side::Lo, TransformedClass::Exit);
    expect_t(BaseProcess{cir_alpha(2.5)}, Side::Lo, TransformedClass::Exit);
    expect_t(BaseProcess{cir_alpha(0.5)}, Side::Hi, TransformedClass::Natural);
    expect_t(BaseProcess{jacobi_ab(1.5, 0.5)}, Side::Lo, TransformedClass::Killing);
    expect_t(BaseProcess{jacobi_ab(1.5, 0.5)}, Side::Hi, TransformedClass::Exit);
    expect_t(BaseProcess{jacobi_ab(0.5, 1.5)}, Side::Lo, TransformedClass::Exit);
    expect_t(BaseProcess{jacobi_ab(0.5, 1.5)}, Side::Hi, TransformedClass::Killing);
    {
        auto t = xform::build_transform(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, 1.0, 1.0, 1.0,
                                        1.0, -1.0);
        ++total2;
        if (bnd::classify_transformed(t, Side::Lo).cls != TransformedClass::Natural) ++bad2;
        ++total2;
        if (bnd::classify_transformed(t, Side::Hi).cls != TransformedClass::Natural) ++bad2;
    }
    {
        std::ostringstream os;
        os << bad2 << " mismatches over " << total2 << " transformed classes";
        report_flag(report, "4.2 transformed classes match the refined taxonomy", bad2 == 0,
                    os.str());
    }
}

// ===========================================================================
// Criterion 5: transform suite
// ===========================================================================
void criterion5_transform(const Reporter& report) {
    {
        double worst = 0.0;
        int n_checks = 0;
        {
            // BM, h = phi-: linear sigma_Y = C (y - y1)
            auto t = xform::build_transform(BaseProcess{proc::BM{}}, 0.5, 0.0, 1.0, 0.7, 0.3);
            double y1 = 0.3;
            double c_fit = t.sigma_y(1.3) / (1.3 - y1);
            for (double y : {0.6, 1.0, 2.5, 7.0}) {
                worst = std::max(worst, rel_err(t.sigma_y(y), c_fit * (y - y1)));
                ++n_checks;
            }
        }
        {
            // BM, all coefficients positive: sigma_Y = C (y2-y)(y-y1)
            auto t = xform::build_transform(BaseProcess{proc::BM{}}, 0.5, 1.0, 1.0, 0.0, 1.0);
            double c_fit = t.sigma_y(0.5) / (0.5 * 0.5);
            for (double y : {0.1, 0.3, 0.65, 0.9}) {
                worst = std::max(worst, rel_err(t.sigma_y(y), c_fit * (1.0 - y) * y));
                ++n_checks;
            }
        }
        {
            // CEV from the sqrt-volatility base: exponent 1 - 1/(2 alpha) = 3/4
            auto t = xform::build_transform(BaseProcess{proc::Bessel{1.5, 1.0}}, 0.0, 0.0, 1.0,
                                            1.0, 2.0);
            double c_fit = t.sigma_y(3.0);
            for (double y : {2.2, 2.7, 4.5, 8.0}) {
                worst = std::max(worst, rel_err(t.sigma_y(y), c_fit * std::pow(y - 2.0, 0.75)));
                ++n_checks;
            }
        }
        {
            // CIR family: C sqrt(x) x^{-alpha-1} e^{theta x} / h^2
            proc::CIR cir{0.75, 1.0, 1.0};
            auto t = xform::build_transform(BaseProcess{cir}, 1.0, 1.0, 1.0, 0.0, 1.0);
            double al = cir.alpha(), th = cir.theta();
            auto family = [&](double x) {
                double h = t.h(x);
                return std::sqrt(x) * std::pow(x, -al - 1.0) * std::exp(th * x) / (h * h);
            };
            double x_ref = 0.9;
            double c_fit = t.sigma_y(t.map_y(x_ref)) / family(x_ref);
            for (double x : {0.4, 0.7, 1.3, 2.1}) {
                worst = std::max(worst, rel_err(t.sigma_y(t.map_y(x)), c_fit * family(x)));
                ++n_checks;
            }
        }
        {
            // Jacobi family: C sqrt(x(A-x)) x^{-beta-1} (A-x)^{-alpha-1} / h^2
            // (exponents consistent with the module's scale density)
            proc::Jacobi jac{1.2, 2.2, 1.0, 2.0};
            auto t = xform::build_transform(BaseProcess{jac}, 1.0, 1.0, 1.0, 0.0, 1.0);
            double al = jac.alpha(), be = jac.beta(), A = jac.A;
            auto family = [&](double x) {
                double h = t.h(x);
                return std::sqrt(x * (A - x)) * std::pow(x, -be - 1.0) *
                       std::pow(A - x, -al - 1.0) / (h * h);
            };
            double x_ref = 1.0;
            double c_fit = t.sigma_y(t.map_y(x_ref)) / family(x_ref);
            for (double x : {0.3, 0.8, 1.4, 1.7}) {
                worst = std::max(worst, rel_err(t.sigma_y(t.map_y(x)), c_fit * family(x)));
                ++n_checks;
            }
        }
        report_max(report, "5.1 sigma_Y general formula vs family forms", worst, 1e-8, n_checks);
    }
    {
        double worst_density = 0.0, worst_map = 0.0;
        auto t = xform::build_transform(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, 1.0, 1.0, 1.0,
                                        1.0, -1.0);
        for (double x0 : {-0.8, 0.2, 0.9}) {
            for (double x1 : {-0.5, 0.4}) {
                double tt = 0.7;
                double p_y = t.density_y(tt, t.map_y(x0), t.map_y(x1));
                double back = std::exp(t.rho() * tt) * t.h(x0) * t.h(x1) * p_y;
                worst_density = std::max(
                    worst_density, rel_err(back, proc::density_closed(t.base(), tt, x0, x1)));
            }
        }
        auto fwd = xform::record_of(t);
        auto inv_rec = xform::inverse_transform(t);
        auto ident = xform::compose(fwd, inv_rec);
        for (double x : num::linspace(-1.4, 1.4, 15)) {
            worst_map = std::max(worst_map, std::abs(ident.forward(x) - x));
        }
        report_max(report, "5.2 density relation round trip", worst_density, 1e-10, 6);
        report_max(report, "5.3 transform o inverse = identity", worst_map, 1e-9, 15);
    }
    {
        // KS test of the simulated terminal law of the bounded quadratic
        // member against the closed-form CDF: n = 1e5 paths, dt = 1e-3
        double gamma = 1.0, tt = 1.0;
        auto t = xform::build_transform(BaseProcess{proc::BM{}}, 0.5, 1.0, 1.0, 0.0, 1.0);
        double x0 = 0.0, y0 = t.map_y(x0); // 0.5
        proc::DiffusionSpec spec;
        spec.domain = {0.0, 1.0};
        spec.drift = [](double) { return 0.0; };
        spec.vol = [](double y) { return 2.0 * std::max(0.0, y * (1.0 - y)); };
        mc::SimConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_paths = 100000;
        cfg.horizon = tt;
        cfg.seed = 90210;
        cfg.boundary_policy = mc::BoundaryPolicy::ReflectNever;
        auto res = mc::simulate(spec, y0, cfg);
        auto h = [&](double x) { return std::exp(gamma * x) + std::exp(-gamma * x); };
        auto Phi = [](double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); };
        auto cdf = [&](double y) {
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            double X = 0.5 * std::log(1.0 / y - 1.0); // Y decreasing
            double sq = std::sqrt(tt);
            double val = 1.0 - (std::exp(gamma * x0) * Phi((X - x0 - gamma * tt) / sq) +
                                std::exp(-gamma * x0) * Phi((X - x0 + gamma * tt) / sq)) /
                                   h(x0);
            return std::min(1.0, std::max(0.0, val));
        };
        double d = mc::ks_statistic(res.terminal_values, cdf);
        double threshold = 1.63 / std::sqrt((double)cfg.n_paths);
        std::ostringstream os;
        os << "KS = " << d << " vs 1.63/sqrt(n) = " << threshold;
        report_flag(report, "5.4 simulated Y_t law vs analytic CDF (KS)", d < threshold,
                    os.str());
    }
    {
        // Y-infinity law: start at y1 + 0.3 (y2 - y1), expect p_hi = 0.3
        double rho = 2.0, gamma = std::sqrt(2.0 * rho);
        auto t = xform::build_transform(BaseProcess{proc::BM{}}, rho, 1.0, 1.0, 0.0, 1.0);
        double y_target = 0.3;
        auto law = t.y_infinity_law(y_target);
        bool exact_ok = std::abs(law.second - 0.3) < 1e-12;
        proc::DiffusionSpec spec;
        spec.domain = {0.0, 1.0};
        spec.drift = [](double) { return 0.0; };
        spec.vol = [gamma](double y) { return gamma * std::max(0.0, 2.0 * y * (1.0 - y)); };
        mc::SimConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_paths = 20000;
        cfg.horizon = 4.0;
        cfg.seed = 777001;
        cfg.boundary_policy = mc::BoundaryPolicy::ReflectNever;
        auto res = mc::simulate(spec, y_target, cfg);
        long hi = 0;
        for (double v : res.terminal_values)
            if (v > 0.5) ++hi;
        double frac = (double)hi / cfg.n_paths;
        double se = std::sqrt(0.3 * 0.7 / cfg.n_paths);
        std::ostringstream os;
        os << "MC frequency " << frac << " vs 0.3 (3 se = " << 3.0 * se << ")";
        report_flag(report, "5.5 Y-infinity law (p_hi = 0.3)",
                    exact_ok && std::abs(frac - 0.3) < 3.0 * se, os.str());
    }
    {
        // martingale property of the bounded member: E Y_t = y0 within 3 se
        double gamma = 1.0;
        proc::DiffusionSpec spec;
        spec.domain = {0.0, 1.0};
        spec.drift = [](double) { return 0.0; };
        spec.vol = [gamma](double y) { return gamma * std::max(0.0, 2.0 * y * (1.0 - y)); };
        bool ok = true;
        std::ostringstream os;
        for (double tt : {0.5, 2.0}) {
            mc::SimConfig cfg;
            cfg.dt = 1e-3;
            cfg.n_paths = 20000;
            cfg.horizon = tt;
            cfg.seed = 424242;
            cfg.boundary_policy = mc::BoundaryPolicy::ReflectNever;
            auto res = mc::simulate(spec, 0.35, cfg);
            double mean = sample_mean(res.terminal_values);
            double se = sample_se(res.terminal_values);
            os << "t=" << tt << ": mean " << mean << " (3 se = " << 3.0 * se << ") ";
            if (std::abs(mean - 0.35) > 3.0 * se) ok = false;
        }
        report_flag(report, "5.6 martingale property of bounded members", ok, os.str());
    }
}

// ===========================================================================
// Criterion 6: invariant suite
// ===========================================================================
void criterion6_invariants(const Reporter& report) {
    {
        auto bm_spec = proc::to_spec(BaseProcess{proc::BM{}});
        double worst_bm = 0.0;
        for (double z : num::linspace(-4.0, 4.0, 9))
            worst_bm = std::max(worst_bm, std::abs(inv::invariant_J(bm_spec, z)));
        report_max(report, "6.1 J of Brownian motion is zero", worst_bm, 1e-5, 9);

        proc::DiffusionSpec quad;
        quad.domain = {0.0, 1.0};
        quad.drift = [](double) { return 0.0; };
        quad.vol = [](double y) { return 2.0 * y * (1.0 - y); };
        auto bi = inv::make_bose(quad, 0.5);
        double worst_q = 0.0;
        for (double z : num::linspace(-6.0, 6.0, 9))
            worst_q = std::max(worst_q, std::abs(bi.j_of_z(z) + 0.5));
        report_max(report, "6.2 J of quadratic volatility is the constant -rho", worst_q, 1e-5,
                   9);
    }
    {
        double a = 1.5;
        auto spec = proc::to_spec(BaseProcess{proc::Bessel{a, 1.0}});
        auto bi = inv::make_bose(spec, 1.0);
        double K = -2.0 * a * a + 2.0 * a - 3.0 / 8.0;
        double z_shift = 2.0; // z(anchor = 1) relative to the origin
        double worst = 0.0;
        for (double z : num::linspace(-0.9, 4.0, 9)) {
            double zp = z + z_shift;
            worst = std::max(worst, rel_err(bi.j_of_z(z), K / (zp * zp)));
        }
        report_max(report, "6.3 J of the sqrt-volatility base is K/z^2", worst, 1e-5, 9);
    }
    {
        double a = 1.5, theta = 1.0 - 1.0 / (2.0 * (2.0 * a - 1.0));
        auto bes = proc::to_spec(BaseProcess{proc::Bessel{a, 1.0}});
        proc::DiffusionSpec cev;
        cev.domain = {0.0, proc::kInf};
        cev.drift = [](double) { return 0.0; };
        cev.vol = [theta](double y) { return std::pow(y, theta); };
        auto rho = inv::equivalent(bes, cev);
        std::ostringstream os;
        if (rho)
            os << "recovered rho = " << *rho;
        else
            os << "not detected as equivalent";
        report_flag(report, "6.4 Bessel ~ CEV at the matched exponent",
                    rho.has_value() && std::abs(*rho) < 1e-4, os.str());
    }
    {
        struct Pair {
            std::string name;
            proc::DiffusionSpec base;
            xform::StochasticTransform t;
        };
        std::vector<Pair> pairs;
        pairs.push_back({"BM->linear", proc::to_spec(BaseProcess{proc::BM{}}),
                         xform::build_transform(BaseProcess{proc::BM{}}, 0.5, 0.0, 1.0, 0.7,
                                                0.3)});
        pairs.push_back({"BM->quadratic", proc::to_spec(BaseProcess{proc::BM{}}),
                         xform::build_transform(BaseProcess{proc::BM{}}, 0.5, 1.0, 1.0, 0.0,
                                                1.0)});
        pairs.push_back({"Bessel->CEV", proc::to_spec(BaseProcess{proc::Bessel{1.5, 1.0}}),
                         xform::build_transform(BaseProcess{proc::Bessel{1.5, 1.0}}, 0.0, 0.0,
                                                1.0, 1.0, 2.0)});
        pairs.push_back({"OU->member", proc::to_spec(BaseProcess{proc::OU{0.0, 1.0, 1.0}}),
                         xform::build_transform(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, 1.0, 1.0,
                                                1.0, 1.0, -1.0)});
        pairs.push_back({"CIR->member", proc::to_spec(BaseProcess{cir_alpha(0.5)}),
                         xform::build_transform(BaseProcess{cir_alpha(0.5)}, 1.0, 1.0, 1.0,
                                                0.0, 1.0)});
        pairs.push_back({"Jacobi->member",
                         proc::to_spec(BaseProcess{proc::Jacobi{1.2, 2.2, 1.0, 2.0}}),
                         xform::build_transform(BaseProcess{proc::Jacobi{1.2, 2.2, 1.0, 2.0}},
                                                1.0, 1.0, 1.0, 0.0, 1.0)});
        bool ok = true;
        std::ostringstream os;
        for (auto& pr : pairs) {
            auto rho = inv::equivalent(pr.base, pr.t.target_spec());
            if (!rho || std::abs(*rho - pr.t.rho()) > 1e-4) {
                ok = false;
                os << pr.name << ": "
                   << (rho ? "rho off by " + std::to_string(std::abs(*rho - pr.t.rho()))
                           : std::string("not equivalent"))
                   << "; ";
            } else {
                os << pr.name << ": rho ok; ";
            }
        }
        report_flag(report, "6.5 equivalence recovers rho on constructed pairs", ok, os.str());
    }
    {
        auto cir = proc::to_spec(BaseProcess{cir_alpha(0.5)});
        auto jac = proc::to_spec(BaseProcess{proc::Jacobi{2.0, 3.0, 1.0, 2.0}});
        auto rho = inv::equivalent(cir, jac);
        report_flag(report, "6.6 negative control: CIR vs Jacobi not equivalent",
                    !rho.has_value(), rho ? "spurious equivalence" : "correctly rejected");
    }
    {
        double al = 0.7, be = 1.3, ga = 1.1;
        auto J = [=](double x) {
            double q = (1.0 - (al - be) * (al - be)) * x * x +
                       (2.0 * ga * (al + be - 1.0) - 4.0 * al * be) * x + ga * (2.0 - ga);
            return q / (4.0 * x * x * (1.0 - x) * (1.0 - x));
        };
        auto ode = OdePair::integrate(J, 0.2, 0.8, 4000);
        auto ratio = [&](double x) {
            auto [f1, f2] = ode.values(x);
            return (0.2 * f1 + 1.0 * f2) / (1.0 * f1 + 0.4 * f2);
        };
        double worst = 0.0;
        for (double x : {0.3, 0.42, 0.55, 0.68}) {
            worst = std::max(worst, std::abs(0.5 * inv::schwarzian(ratio, x, 2e-3) - J(x)) /
                                        std::max(1.0, std::abs(J(x))));
        }
        report_max(report, "6.7 Schwarz identity (1/2){ratio,x} = J", worst, 1e-4, 4);
    }
    {
        double worst = 0.0;
        int n_checks = 0;
        {
            proc::CIR cir{0.75, 1.0, 1.0};
            double rho = 1.0;
            auto t = xform::build_transform(BaseProcess{cir}, rho, 1.0, 0.0, 0.0, 1.0);
            inv::RPolynomial R{0.0, 1.0, 0.0};
            inv::ConfluentParams cp{rho / cir.b, cir.alpha() + 1.0, cir.theta()};
            double x_ref = 0.8;
            double scale = std::abs(t.dy_dx(x_ref)) * std::sqrt(x_ref) /
                           inv::r_family_sigma_confluent(R, 1.0, 0.0, cp, x_ref);
            for (double x : {0.3, 0.6, 1.1, 1.9, 3.2}) {
                double sig_t = std::abs(t.dy_dx(x)) * std::sqrt(x);
                double sig_f = scale * inv::r_family_sigma_confluent(R, 1.0, 0.0, cp, x);
                worst = std::max(worst, rel_err(sig_f, sig_t));
                ++n_checks;
            }
        }
        {
            proc::Jacobi jac{1.2, 2.2, 1.0, 1.0};
            double rho = 1.0, s2 = 1.0;
            auto t = xform::build_transform(BaseProcess{jac}, rho, 1.0, 0.0, 0.0, 1.0);
            double sum = 2.0 * jac.b / s2 - 1.0, prod = 2.0 * rho / s2;
            double disc = std::sqrt(sum * sum - 4.0 * prod);
            inv::HypergeomParams hp{0.5 * (sum - disc), 0.5 * (sum + disc),
                                    2.0 * jac.a / (jac.A * s2)};
            inv::RPolynomial R{0.0, 1.0, -1.0};
            auto spec = proc::to_spec(BaseProcess{jac});
            double x_ref = 0.5;
            double scale = std::abs(t.dy_dx(x_ref)) * spec.vol(x_ref) /
                           inv::r_family_sigma_hypergeom(R, 1.0, 0.0, hp, x_ref);
            for (double x : {0.15, 0.35, 0.62, 0.85}) {
                double sig_t = std::abs(t.dy_dx(x)) * spec.vol(x);
                double sig_f = scale * inv::r_family_sigma_hypergeom(R, 1.0, 0.0, hp, x);
                worst = std::max(worst, rel_err(sig_f, sig_t));
                ++n_checks;
            }
        }
        report_max(report, "6.8 R-family sigma with R = A matches sigma_Y", worst, 1e-8,
                   n_checks);
    }
    {
        auto base = inv::r_family_process(inv::RKind::Confluent,
                                          inv::RPolynomial{0.0, 1.0, 0.0}, 1.0, -1.0);
        auto other = inv::r_family_process(inv::RKind::Confluent,
                                           inv::RPolynomial{1.0, 1.0, 0.0}, 1.0, -1.0);
        auto rho = inv::equivalent(base, other);
        report_flag(report, "6.9 R != A family is not a constant-offset relative", !rho,
                    rho ? "unexpected equivalence" : "J differs non-constantly");
    }
}

// ===========================================================================
// Criterion 7: mass conservation and killing
// ===========================================================================
void criterion7_mass_conservation(const Reporter& report) {
    {
        auto t = xform::build_transform(BaseProcess{proc::OU{0.0, 1.0, 1.0}}, 1.0, 1.0, 1.0,
                                        1.0, -1.0);
        double worst = 0.0;
        for (double tt : {0.5, 1.0}) {
            for (double x0 : {0.2, -0.7}) {
                double mass = num::integrate(
                    [&](double x) {
                        return std::exp(-t.rho() * tt) / t.h(x0) *
                               proc::density_closed(t.base(), tt, x0, x) * t.h(x) *
                               proc::speed_density(t.base(), x);
                    },
                    -15.0, 15.0, {1e-10, 1e-14, 8000});
                worst = std::max(worst, std::abs(mass - 1.0));
            }
        }
        report_max(report, "7.1 OU-family mass conservation", worst, 1e-5, 4);
    }
    {
        proc::CIR cir = cir_alpha(0.5);
        auto t = xform::build_transform(BaseProcess{cir}, 1.0, 1.0, 1.0, 0.0, 1.0);
        double tt = 1.0, x0 = 1.0;
        double y0 = t.map_y(x0);
        double mass = num::integrate(
            [&](double x) {
                return std::exp(-t.rho() * tt) / t.h(x0) *
                       proc::density_closed(t.base(), tt, x0, x) * t.h(x) *
                       proc::speed_density(t.base(), x);
            },
            1e-11, 45.0, {1e-10, 1e-14, 8000});

        // tabulated sigma_Y for the Euler loop (the exact map is too slow to
        // call 1e7 times; 4001 nodes keep the interpolation bias well below
        // the 2e-2 band)
        const int n_tab = 4001;
        std::vector<double> ys(n_tab), sig(n_tab);
        for (int i = 0; i < n_tab; ++i) {
            double y = (i + 0.5) / n_tab;
            ys[i] = y;
            sig[i] = t.sigma_y(y);
        }
        proc::DiffusionSpec spec;
        spec.domain = {0.0, 1.0};
        spec.drift = [](double) { return 0.0; };
        spec.vol = [ys, sig, n_tab](double y) {
            if (y <= ys.front()) return sig.front();
            if (y >= ys.back()) return sig.back();
            double u = (y - ys.front()) / (ys.back() - ys.front()) * (n_tab - 1);
            int i = std::min((int)u, n_tab - 2);
            double f = u - i;
            return (1.0 - f) * sig[i] + f * sig[i + 1];
        };
        mc::SimConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_paths = 10000;
        cfg.horizon = tt;
        cfg.seed = 31337;
        cfg.boundary_policy = mc::BoundaryPolicy::AbsorbAtBoundary;
        cfg.absorb_lo = false; // y = 0 is the natural (inaccessible) end
        auto res = mc::simulate(spec, y0, cfg);
        double absorbed = res.absorbed_fraction_lo + res.absorbed_fraction_hi;
        double total = mass + absorbed;
        std::ostringstream os;
        os << "quadrature mass " << mass << " + MC absorbed " << absorbed << " = " << total;
        report_flag(report, "7.2 CIR-family mass + absorbed fraction",
                    std::abs(total - 1.0) < 2e-2, os.str());
    }
}

int run_acceptance(int only) {
    struct Suite {
        int id;
        const char* name;
        void (*fn)(const Reporter&);
    };
    const Suite suites[] = {
        {1, "special functions", criterion1_special_functions},
        {2, "spectral", criterion2_spectral},
        {3, "fundamental solutions", criterion3_fundamental},
        {4, "boundary classification", criterion4_boundary},
        {5, "transformations", criterion5_transform},
        {6, "invariants", criterion6_invariants},
        {7, "mass conservation", criterion7_mass_conservation},
    };
    int failures = 0;
    for (const auto& suite : suites) {
        if (only != 0 && suite.id != only) continue;
        std::printf("== criterion %d: %s ==\n", suite.id, suite.name);
        std::fflush(stdout);
        Reporter reporter = [&](const CheckResult& res) {
            std::printf("%s  %s  [%s]\n", res.passed ? "PASS" : "FAIL", res.name.c_str(),
                        res.detail.c_str());
            std::fflush(stdout);
            if (!res.passed) ++failures;
        };
        try {
            suite.fn(reporter);
        } catch (const std::exception& e) {
            std::printf("FAIL  criterion %d aborted  [%s]\n", suite.id, e.what());
            std::fflush(stdout);
            ++failures;
        }
    }
    return failures;
}

} // namespace accept
} // namespace solvdiff
