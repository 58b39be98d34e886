#include <doctest.h>

#include "solvdiff/errors.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/processes.hpp"

#include <cmath>

using namespace solvdiff;
using namespace solvdiff::proc;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Generator applied through 5-point central differences.
double apply_generator(const DiffusionSpec& spec, const std::function<double(double)>& f,
                       double x, double h) {
    double d1 = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    double d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
                (12 * h * h);
    double s = spec.vol(x);
    return spec.drift(x) * d1 + 0.5 * s * s * d2;
}

} // namespace

TEST_CASE("to_spec drift, vol and domains match the catalog") {
    BaseProcess ou = OU{0.0, 1.0, 1.0};
    auto s = to_spec(ou);
    CHECK(s.drift(2.0) == doctest::Approx(-2.0));
    CHECK(s.vol(5.0) == 1.0);
    CHECK(s.domain.lo == -kInf);
    CHECK(s.domain.hi == kInf);

    CIR cir{1.0, 1.0, std::sqrt(2.0)};
    CHECK(cir.alpha() == doctest::Approx(0.0));
    CHECK(cir.theta() == doctest::Approx(1.0));
    CHECK(domain_of(BaseProcess{cir}).lo == 0.0);

    Jacobi jac{1.0, 2.0, 1.0, 2.0};
    CHECK(jac.beta() == doctest::Approx(0.0));
    CHECK(jac.alpha() == doctest::Approx(2.0));
    auto js = to_spec(BaseProcess{jac});
    CHECK(js.domain.hi == 2.0);
    CHECK(js.vol(1.0) == doctest::Approx(1.0)); // sigma sqrt(x(A-x)) = 1 at x=1

    CHECK_THROWS_AS(to_spec(BaseProcess{OU{0.0, -1.0, 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(to_spec(BaseProcess{Bessel{0.4, 1.0}}), InvalidParameter); // alpha < 0
}

TEST_CASE("speed and scale densities") {
    BaseProcess ou = OU{0.0, 1.0, 1.0};
    CHECK(rel_err(speed_density(ou, 0.0), 1.0 / std::sqrt(M_PI)) < 1e-13);

    BaseProcess cir = CIR{1.0, 1.0, std::sqrt(2.0)}; // alpha=0, theta=1
    CHECK(rel_err(speed_density(cir, 1.0), std::exp(-1.0)) < 1e-13);

    BaseProcess bm = BM{};
    CHECK(speed_density(bm, 3.0) == 2.0);
    CHECK(scale_density(bm, 3.0) == 1.0);

    CHECK_THROWS_AS(speed_density(cir, -1.0), OutOfDomain);
}

TEST_CASE("normalized speed densities integrate to one") {
    BaseProcess ou = OU{0.5, 1.0, 1.0};
    double m_ou = num::integrate([&](double x) { return speed_density(ou, x); }, -9.5, 10.5);
    CHECK(std::abs(m_ou - 1.0) < 1e-9);

    BaseProcess cir = CIR{1.0, 1.0, 1.0}; // alpha=1, theta=2
    double m_cir = num::integrate([&](double x) { return speed_density(cir, x); }, 1e-12, 40.0);
    CHECK(std::abs(m_cir - 1.0) < 1e-8);

    BaseProcess jac = Jacobi{1.0, 2.0, 1.0, 2.0}; // beta=0, alpha=2
    double m_jac =
        num::integrate([&](double x) { return speed_density(jac, x); }, 1e-12, 2.0 - 1e-12);
    CHECK(std::abs(m_jac - 1.0) < 1e-8);
}

TEST_CASE("m s' sigma^2/2 is independent of x") {
    BaseProcess procs[] = {BM{}, Bessel{1.5, 1.0}, OU{0.3, 1.2, 0.8}, CIR{1.0, 1.0, 1.0},
                           Jacobi{1.0, 2.0, 1.0, 2.0}};
    for (const auto& p : procs) {
        auto spec = to_spec(p);
        double xs_real[] = {-1.3, -0.2, 0.7, 1.4};
        double xs_pos[] = {0.2, 0.7, 1.1, 1.7};
        bool on_line = !std::isfinite(spec.domain.lo);
        double ref = 0.0;
        bool first = true;
        for (double x : (on_line ? xs_real : xs_pos)) {
            double s = spec.vol(x);
            double v = speed_density(p, x) * scale_density(p, x) * s * s / 2.0;
            if (first) {
                ref = v;
                first = false;
            } else {
                CHECK(rel_err(v, ref) < 1e-10);
            }
        }
        // BM and Bessel carry the unnormalized general forms: constant is 1
        if (std::holds_alternative<BM>(p) || std::holds_alternative<Bessel>(p))
            CHECK(rel_err(ref, 1.0) < 1e-12);
    }
}

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(BaseProcess{OU{0.0, 1.0, 1.0}}, 0) == 0.0);
    CHECK(eigenvalue(BaseProcess{CIR{1.0, 2.0, 1.0}}, 3) == doctest::Approx(-6.0));
    CHECK(eigenvalue(BaseProcess{Jacobi{1.0, 1.0, 1.0, 2.0}}, 1) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(eigenvalue(BaseProcess{BM{}}, 1), NoSpectrum);
    CHECK_THROWS_AS(eigenvalue(BaseProcess{Bessel{1.5, 1.0}}, 0), NoSpectrum);
}

TEST_CASE("eigenfunctions and norms") {
    BaseProcess ou = OU{0.0, 1.0, 1.0};
    CHECK(eigenfunction(ou, 0, 0.37) == 1.0);
    CHECK(norm_sq(ou, 0) == 1.0);
    CHECK(eigenfunction(ou, 2, 1.0) == doctest::Approx(2.0)); // H_2(1)
    CHECK(norm_sq(ou, 3) == doctest::Approx(48.0));           // 2^3 3!

    BaseProcess cir = CIR{1.0, 1.0, std::sqrt(2.0)}; // alpha = 0
    CHECK(norm_sq(cir, 4) == doctest::Approx(1.0));  // (1)_4/4!

    BaseProcess jac = Jacobi{1.0, 2.0, 1.0, 2.0};
    CHECK(norm_sq(jac, 0) == doctest::Approx(1.0));
}

TEST_CASE("orthogonality against quadrature (spot checks)") {
    BaseProcess procs[] = {BaseProcess{OU{0.2, 1.0, 0.9}}, BaseProcess{CIR{1.2, 1.0, 1.0}},
                           BaseProcess{Jacobi{1.0, 2.0, 1.0, 2.0}}};
    for (const auto& p : procs) {
        double lo, hi;
        if (std::holds_alternative<OU>(p)) {
            const auto& q = std::get<OU>(p);
            lo = q.a / q.b - 10.0 * q.sigma / std::sqrt(q.b);
            hi = q.a / q.b + 10.0 * q.sigma / std::sqrt(q.b);
        } else if (std::holds_alternative<CIR>(p)) {
            lo = 1e-12;
            hi = 60.0;
        } else {
            lo = 1e-12;
            hi = std::get<Jacobi>(p).A - 1e-12;
        }
        for (int n = 0; n <= 6; ++n) {
            for (int m = n; m <= 6; m += 2) {
                double val = num::integrate(
                    [&](double x) {
                        return eigenfunction(p, n, x) * eigenfunction(p, m, x) *
                               speed_density(p, x);
                    },
                    lo, hi, {1e-11, 1e-13, 6000});
                double want = (n == m) ? norm_sq(p, n) : 0.0;
                CHECK(std::abs(val - want) < 1e-6 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("generator residual on eigenpairs") {
    BaseProcess procs[] = {BaseProcess{OU{0.0, 1.0, 1.0}}, BaseProcess{CIR{1.2, 1.0, 1.0}},
                           BaseProcess{Jacobi{1.0, 2.0, 1.0, 2.0}}};
    double xs[] = {0.4, 0.9, 1.5};
    for (const auto& p : procs) {
        auto spec = to_spec(p);
        for (int n : {1, 3, 5}) {
            double lam = eigenvalue(p, n);
            for (double x : xs) {
                double lhs = apply_generator(
                    spec, [&](double u) { return eigenfunction(p, n, u); }, x, 1e-3);
                double rhs = lam * eigenfunction(p, n, x);
                CHECK(std::abs(lhs - rhs) < 1e-5 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("series density basics") {
    BaseProcess cir = CIR{1.0, 1.0, std::sqrt(2.0)}; // alpha=0, theta=1
    // long horizon: stationary w.r.t. m means the kernel tends to 1
    CHECK(rel_err(density_series(cir, 60.0, 0.7, 1.3, 40), 1.0) < 1e-10);
    // symmetry
    double a = density_series(cir, 0.8, 0.5, 1.7, 60);
    double b = density_series(cir, 0.8, 1.7, 0.5, 60);
    CHECK(rel_err(a, b) < 1e-12);
    // against the closed form
    proc::SeriesDiag diag;
    double ser = density_series(cir, 0.5, 1.0, 1.0, 60, &diag);
    double clo = density_closed(cir, 0.5, 1.0, 1.0);
    CHECK(rel_err(ser, clo) < 1e-8);
    CHECK(diag.truncation_ok);
    CHECK_THROWS_AS(density_series(BaseProcess{BM{}}, 1.0, 0.0, 0.0, 10), NoSpectrum);
}

TEST_CASE("series density truncation diagnostics flag small t") {
    BaseProcess ou = OU{0.0, 1.0, 1.0};
    proc::SeriesDiag diag;
    density_series(ou, 0.01, 0.3, 0.4, 10, &diag); // hopeless truncation at tiny t
    CHECK_FALSE(diag.truncation_ok);
}

TEST_CASE("closed densities") {
    BaseProcess ou = OU{0.0, 1.0, 1.0};
    // total mass one
    double mass = num::integrate(
        [&](double y) { return density_closed(ou, 1.0, 0.3, y) * speed_density(ou, y); }, -10.0,
        10.0);
    CHECK(std::abs(mass - 1.0) < 1e-9);
    // t=1, x0=0: p*m is N(0, (1-e^{-2})/2)
    double var = (1.0 - std::exp(-2.0)) / 2.0;
    for (double y : {-1.0, -0.2, 0.5, 1.3}) {
        double got = density_closed(ou, 1.0, 0.0, y) * speed_density(ou, y);
        double want = std::exp(-0.5 * y * y / var) / std::sqrt(2 * M_PI * var);
        CHECK(rel_err(got, want) < 1e-12);
    }
    // BM kernel with respect to m = 2 dx
    BaseProcess bm = BM{};
    double bm_mass = num::integrate(
        [&](double y) { return density_closed(bm, 0.7, 0.1, y) * 2.0; }, -12.0, 12.0);
    CHECK(std::abs(bm_mass - 1.0) < 1e-9);

    CHECK_THROWS_AS(density_closed(BaseProcess{Jacobi{1, 2, 1, 2}}, 1.0, 0.5, 0.7), Unsupported);
}

TEST_CASE("CIR Chapman-Kolmogorov") {
    BaseProcess cir = CIR{1.2, 1.0, 1.0}; // alpha=1.4, theta=2
    double s = 0.4, t = 0.7, x0 = 0.9, x1 = 1.4;
    double conv = num::integrate(
        [&](double z) {
            return density_closed(cir, s, x0, z) * density_closed(cir, t, z, x1) *
                   speed_density(cir, z);
        },
        1e-10, 30.0, {1e-10, 1e-14, 6000});
    double direct = density_closed(cir, s + t, x0, x1);
    CHECK(rel_err(conv, direct) < 1e-6);
}
