#include "solvdiff/processes.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/specfun.hpp"

#include <cmath>

namespace solvdiff {
namespace proc {

namespace {

void require_interior(const BaseProcess& p, double x, const char* where) {
    if (!domain_of(p).contains_interior(x))
        throw OutOfDomain(std::string(where) + ": x outside the interior of the state interval");
}

double normal_pdf(double x, double mean, double var) {
    double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

} // namespace

void validate(const BaseProcess& p) {
    if (const auto* q = std::get_if<Bessel>(&p)) {
        if (!(q->sigma > 0.0)) throw InvalidParameter("Bessel: sigma must be > 0");
        if (!(q->alpha() > 0.0)) throw InvalidParameter("Bessel: requires 2a/sigma^2 - 1 > 0");
    } else if (const auto* q = std::get_if<OU>(&p)) {
        if (!(q->b > 0.0 && q->sigma > 0.0)) throw InvalidParameter("OU: b and sigma must be > 0");
    } else if (const auto* q = std::get_if<CIR>(&p)) {
        if (!(q->b > 0.0 && q->sigma > 0.0)) throw InvalidParameter("CIR: b and sigma must be > 0");
    } else if (const auto* q = std::get_if<Jacobi>(&p)) {
        if (!(q->b > 0.0 && q->sigma > 0.0 && q->A > 0.0))
            throw InvalidParameter("Jacobi: b, sigma and A must be > 0");
    }
}

std::string kind_name(const BaseProcess& p) {
    if (std::holds_alternative<BM>(p)) return "BM";
    if (std::holds_alternative<Bessel>(p)) return "Bessel";
    if (std::holds_alternative<OU>(p)) return "OU";
    if (std::holds_alternative<CIR>(p)) return "CIR";
    return "Jacobi";
}

Interval domain_of(const BaseProcess& p) {
    if (std::holds_alternative<BM>(p) || std::holds_alternative<OU>(p)) return {-kInf, kInf};
    if (const auto* q = std::get_if<Jacobi>(&p)) return {0.0, q->A};
    return {0.0, kInf};
}

DiffusionSpec to_spec(const BaseProcess& p) {
    validate(p);
    DiffusionSpec spec;
    spec.domain = domain_of(p);
    if (std::holds_alternative<BM>(p)) {
        spec.drift = [](double) { return 0.0; };
        spec.vol = [](double) { return 1.0; };
    } else if (const auto* q = std::get_if<Bessel>(&p)) {
        double a = q->a, s = q->sigma;
        spec.drift = [a](double) { return a; };
        spec.vol = [s](double x) { return s * std::sqrt(x); };
    } else if (const auto* q = std::get_if<OU>(&p)) {
        double a = q->a, b = q->b, s = q->sigma;
        spec.drift = [a, b](double x) { return a - b * x; };
        spec.vol = [s](double) { return s; };
    } else if (const auto* q = std::get_if<CIR>(&p)) {
        double a = q->a, b = q->b, s = q->sigma;
        spec.drift = [a, b](double x) { return a - b * x; };
        spec.vol = [s](double x) { return s * std::sqrt(x); };
    } else {
        const auto& jq = std::get<Jacobi>(p);
        double a = jq.a, b = jq.b, s = jq.sigma, A = jq.A;
        spec.drift = [a, b](double x) { return a - b * x; };
        spec.vol = [s, A](double x) { return s * std::sqrt(x * (A - x)); };
    }
    return spec;
}

double speed_density(const BaseProcess& p, double x) {
    require_interior(p, x, "speed_density");
    if (std::holds_alternative<BM>(p)) return 2.0;
    if (const auto* q = std::get_if<Bessel>(&p)) {
        return 2.0 / (q->sigma * q->sigma) * std::pow(x, q->alpha());
    }
    if (const auto* q = std::get_if<OU>(&p)) {
        double qq = q->b / (q->sigma * q->sigma);
        double u = x - q->a / q->b;
        return std::exp(-qq * u * u) / std::sqrt(M_PI / qq);
    }
    if (const auto* q = std::get_if<CIR>(&p)) {
        double al = q->alpha(), th = q->theta();
        if (!(al > -1.0))
            throw InvalidParameter("speed_density: normalized CIR form needs alpha > -1");
        auto lg = specfun::log_gamma(al + 1.0);
        return std::exp((al + 1.0) * std::log(th) - lg.value + al * std::log(x) - th * x);
    }
    const auto& q = std::get<Jacobi>(p);
    double al = q.alpha(), be = q.beta();
    if (!(al > -1.0 && be > -1.0))
        throw InvalidParameter("speed_density: normalized Jacobi form needs alpha, beta > -1");
    double log_beta_fn = specfun::log_gamma(al + 1.0).value + specfun::log_gamma(be + 1.0).value -
                         specfun::log_gamma(al + be + 2.0).value;
    return std::exp(be * std::log(x) + al * std::log(q.A - x) -
                    (al + be + 1.0) * std::log(q.A) - log_beta_fn);
}

double scale_density(const BaseProcess& p, double x) {
    require_interior(p, x, "scale_density");
    if (std::holds_alternative<BM>(p)) return 1.0;
    if (const auto* q = std::get_if<Bessel>(&p)) return std::pow(x, -q->alpha() - 1.0);
    if (const auto* q = std::get_if<OU>(&p)) {
        double qq = q->b / (q->sigma * q->sigma);
        double u = x - q->a / q->b;
        return std::exp(qq * u * u);
    }
    if (const auto* q = std::get_if<CIR>(&p)) {
        return std::exp((-q->alpha() - 1.0) * std::log(x) + q->theta() * x);
    }
    const auto& q = std::get<Jacobi>(p);
    return std::exp((-q.beta() - 1.0) * std::log(x) + (-q.alpha() - 1.0) * std::log(q.A - x));
}

double eigenvalue(const BaseProcess& p, int n) {
    if (n < 0) throw InvalidParameter("eigenvalue: n must be >= 0");
    validate(p);
    if (const auto* q = std::get_if<OU>(&p)) return -q->b * n;
    if (const auto* q = std::get_if<CIR>(&p)) return -q->b * n;
    if (const auto* q = std::get_if<Jacobi>(&p)) {
        double s2 = q->sigma * q->sigma;
        return -0.5 * s2 * n * (n - 1.0 + 2.0 * q->b / s2);
    }
    throw NoSpectrum("eigenvalue: " + kind_name(p) + " has no discrete spectrum");
}

double eigenfunction(const BaseProcess& p, int n, double x) {
    if (n < 0) throw InvalidParameter("eigenfunction: n must be >= 0");
    validate(p);
    if (const auto* q = std::get_if<OU>(&p)) {
        double y = std::sqrt(q->b) / q->sigma * (x - q->a / q->b);
        return specfun::orth_poly(specfun::Hermite{}, n, y);
    }
    if (const auto* q = std::get_if<CIR>(&p)) {
        require_interior(p, x, "eigenfunction");
        return specfun::orth_poly(specfun::Laguerre{q->alpha()}, n, q->theta() * x);
    }
    if (const auto* q = std::get_if<Jacobi>(&p)) {
        require_interior(p, x, "eigenfunction");
        double y = 2.0 * x / q->A - 1.0;
        return specfun::orth_poly(specfun::JacobiPoly{q->alpha(), q->beta()}, n, y);
    }
    throw NoSpectrum("eigenfunction: " + kind_name(p) + " has no discrete spectrum");
}

double norm_sq(const BaseProcess& p, int n) {
    if (n < 0) throw InvalidParameter("norm_sq: n must be >= 0");
    validate(p);
    if (std::get_if<OU>(&p)) {
        long double v = 1.0L;
        for (int k = 1; k <= n; ++k) v *= 2.0L * k;
        return static_cast<double>(v);
    }
    if (const auto* q = std::get_if<CIR>(&p)) {
        double al = q->alpha();
        if (!(al > -1.0)) throw InvalidParameter("norm_sq: CIR needs alpha > -1");
        long double v = 1.0L;
        for (int k = 0; k < n; ++k) v *= (al + 1.0L + k) / (k + 1.0L);
        return static_cast<double>(v);
    }
    if (const auto* q = std::get_if<Jacobi>(&p)) {
        double al = q->alpha(), be = q->beta();
        if (!(al > -1.0 && be > -1.0)) throw InvalidParameter("norm_sq: Jacobi needs alpha, beta > -1");
        // Gamma-ratio form of the printed constant; regular at n = 0 where it
        // reduces to 1 (psi_0 = 1 against the normalized speed density).
        using specfun::log_gamma;
        double s = al + be;
        double lg = log_gamma(n + al + 1.0).value + log_gamma(n + be + 1.0).value +
                    log_gamma(s + 2.0).value - log_gamma(al + 1.0).value -
                    log_gamma(be + 1.0).value - log_gamma(n + s + 1.0).value -
                    log_gamma(n + 1.0).value;
        return std::exp(lg) / (2.0 * n + s + 1.0);
    }
    throw NoSpectrum("norm_sq: " + kind_name(p) + " has no discrete spectrum");
}

double density_series(const BaseProcess& p, double t, double x0, double x1, int n_terms,
                      SeriesDiag* diag) {
    if (!(t > 0.0)) throw InvalidParameter("density_series: t must be > 0");
    if (n_terms < 0) throw InvalidParameter("density_series: negative truncation");
    require_interior(p, x0, "density_series");
    require_interior(p, x1, "density_series");
    eigenvalue(p, 0); // spectral variant check

    num::KahanSum sum;
    double last = 0.0;
    for (int n = 0; n <= n_terms; ++n) {
        double term = std::exp(eigenvalue(p, n) * t) / norm_sq(p, n) *
                      eigenfunction(p, n, x0) * eigenfunction(p, n, x1);
        if (!std::isfinite(term))
            throw NonConvergence("density_series: non-finite term at n=" + std::to_string(n));
        sum.add(term);
        last = std::abs(term);
    }
    double value = static_cast<double>(sum.value());
    if (diag) {
        diag->last_term = last;
        diag->truncation_ok = last <= 1e-10 * std::max(1.0, std::abs(value));
    }
    return value;
}

double density_closed(const BaseProcess& p, double t, double x0, double x1) {
    if (!(t > 0.0)) throw InvalidParameter("density_closed: t must be > 0");
    require_interior(p, x0, "density_closed");
    require_interior(p, x1, "density_closed");
    if (std::holds_alternative<BM>(p)) {
        return normal_pdf(x1, x0, t) / 2.0;
    }
    if (const auto* q = std::get_if<OU>(&p)) {
        double b = q->b, s2 = q->sigma * q->sigma;
        double mean = x0 * std::exp(-b * t) + q->a / b * (1.0 - std::exp(-b * t));
        double var = s2 * (1.0 - std::exp(-2.0 * b * t)) / (2.0 * b);
        return normal_pdf(x1, mean, var) / speed_density(p, x1);
    }
    if (const auto* q = std::get_if<CIR>(&p)) {
        double al = q->alpha();
        if (!(al > -1.0)) throw InvalidParameter("density_closed: CIR needs alpha > -1");
        if (!(x0 > 0.0)) throw OutOfDomain("density_closed: CIR needs x0 > 0");
        double b = q->b, s2 = q->sigma * q->sigma;
        double ct = 2.0 * b / (s2 * (1.0 - std::exp(-b * t)));
        double arg = 2.0 * ct * std::sqrt(x0 * x1 * std::exp(-b * t));
        // (x1 e^{bt}/x0)^{al/2} I_al(arg) = (ct x1)^al S(arg) with
        // S(z) = I_al(z)/(z/2)^al; the e^{bt} growth cancels exactly, so the
        // kernel stays representable at large t.
        num::KahanSum s_sum;
        long double term = specfun::rgamma(al + 1.0);
        s_sum.add(term);
        long double q4 = 0.25L * static_cast<long double>(arg) * arg;
        for (int k = 0; k < 10000; ++k) {
            term *= q4 / ((k + 1.0L) * (al + k + 1.0L));
            s_sum.add(term);
            if (std::abs(static_cast<double>(term)) <
                1e-17 * std::abs(static_cast<double>(s_sum.value())))
                break;
        }
        double pm = ct * std::pow(ct * x1, al) *
                    std::exp(-ct * (x0 * std::exp(-b * t) + x1)) *
                    static_cast<double>(s_sum.value());
        return pm / speed_density(p, x1);
    }
    throw Unsupported("density_closed: no closed form for " + kind_name(p));
}

} // namespace proc
} // namespace solvdiff
