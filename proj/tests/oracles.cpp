#include "oracles.hpp"

#include <cmath>
#include <variant>

namespace oracles {

namespace {

long double pochhammer_ld(long double x, int n) {
    long double p = 1.0L;
    for (int k = 0; k < n; ++k) p *= x + k;
    return p;
}

long double factorial_ld(int n) {
    long double f = 1.0L;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// sign of Gamma(x) for non-pole x
int gamma_sign(long double x) {
    if (x > 0) return 1;
    long long fl = static_cast<long long>(std::floor(x));
    return (fl % 2 == 0) ? 1 : -1;
}

long double rgamma_ld(long double x) {
    if (x <= 0.0L && std::abs(x - std::llround(x)) < 1e-12L) return 0.0L;
    return gamma_sign(x) * std::exp(-std::lgamma(static_cast<double>(x))) *
           1.0L; // double lgamma is enough for an independent cross-check
}

template <typename Term>
long double kahan_200(Term term_at) {
    long double sum = 0.0L, comp = 0.0L;
    for (int n = 0; n < 200; ++n) {
        long double t = term_at(n);
        long double y = t - comp;
        long double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

} // namespace

long double gauss_2f1_series(double a, double b, double c, double z) {
    return kahan_200([&](int n) {
        return pochhammer_ld(a, n) * pochhammer_ld(b, n) /
               (pochhammer_ld(c, n) * factorial_ld(n)) * std::pow((long double)z, n);
    });
}

long double kummer_m_series(double a, double b, double z) {
    return kahan_200([&](int n) {
        return pochhammer_ld(a, n) / (pochhammer_ld(b, n) * factorial_ld(n)) *
               std::pow((long double)z, n);
    });
}

long double tricomi_u_connection(double a, double b, double z) {
    long double pi = 3.14159265358979323846264338328L;
    long double m1 = kummer_m_series(a, b, z);
    long double m2 = kummer_m_series(1.0 + a - b, 2.0 - b, z);
    long double t1 = m1 * rgamma_ld(1.0L + a - b) * rgamma_ld(b);
    long double t2 = std::pow((long double)z, 1.0L - b) * m2 * rgamma_ld(a) * rgamma_ld(2.0L - b);
    return pi / std::sin(pi * (long double)b) * (t1 - t2);
}

long double hermite(int n, long double x) {
    if (n == 0) return 1.0L;
    long double pm = 1.0L, p = 2.0L * x;
    for (int k = 1; k < n; ++k) {
        long double next = 2.0L * x * p - 2.0L * k * pm;
        pm = p;
        p = next;
    }
    return p;
}

long double laguerre(long double alpha, int n, long double x) {
    if (n == 0) return 1.0L;
    long double pm = 1.0L, p = 1.0L + alpha - x;
    for (int k = 1; k < n; ++k) {
        long double next = ((2.0L * k + alpha + 1.0L - x) * p - (k + alpha) * pm) / (k + 1.0L);
        pm = p;
        p = next;
    }
    return p;
}

long double jacobi(long double alpha, long double beta, int n, long double x) {
    if (n == 0) return 1.0L;
    long double pm = 1.0L;
    long double p = 0.5L * ((alpha + beta + 2.0L) * x + (alpha - beta));
    for (int k = 1; k < n; ++k) {
        long double s = 2.0L * k + alpha + beta;
        long double c_next = 2.0L * (k + 1.0L) * (k + alpha + beta + 1.0L) / ((s + 1.0L) * (s + 2.0L));
        long double c_mid = (beta * beta - alpha * alpha) / (s * (s + 2.0L));
        long double c_prev = 2.0L * (k + alpha) * (k + beta) / (s * (s + 1.0L));
        long double next = ((x - c_mid) * p - c_prev * pm) / c_next;
        pm = p;
        p = next;
    }
    return p;
}

long double poly(const solvdiff::specfun::PolyFamily& family, int n, double x) {
    using namespace solvdiff::specfun;
    if (std::holds_alternative<Hermite>(family)) return hermite(n, x);
    if (const auto* l = std::get_if<Laguerre>(&family)) return laguerre(l->alpha, n, x);
    const auto& j = std::get<JacobiPoly>(family);
    return jacobi(j.alpha, j.beta, n, x);
}

} // namespace oracles
