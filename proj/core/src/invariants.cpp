#include "solvdiff/invariants.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace solvdiff {
namespace inv {

namespace {

double fd_step(const proc::Interval& dom, double x) {
    double h = 2e-3 * std::max(1.0, std::abs(x));
    if (std::isfinite(dom.lo)) h = std::min(h, 0.2 * (x - dom.lo));
    if (std::isfinite(dom.hi)) h = std::min(h, 0.2 * (dom.hi - x));
    return h;
}

// Dense natural-coordinate table built by RK4 on dx/dz = sigma(x), with the
// sigma values kept for cubic Hermite interpolation.
struct NaturalGrid {
    std::vector<double> z, x, sig; // increasing in z
    std::size_t anchor_index = 0;

    double x_at(double zq) const {
        auto it = std::upper_bound(z.begin(), z.end(), zq);
        std::size_t i = it == z.begin() ? 0 : static_cast<std::size_t>(it - z.begin()) - 1;
        if (i + 1 >= z.size()) i = z.size() - 2;
        double h = z[i + 1] - z[i];
        double t = (zq - z[i]) / h;
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        double h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t);
        double h11 = t * t * (t - 1);
        return h00 * x[i] + h10 * h * sig[i] + h01 * x[i + 1] + h11 * h * sig[i + 1];
    }

    double z_at(double xq) const {
        auto it = std::upper_bound(x.begin(), x.end(), xq);
        std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        if (i + 1 >= x.size()) i = x.size() - 2;
        // Invert the Hermite interpolant on the bracketing cell by Newton,
        // so z_of_x and x_of_z agree to interpolation accuracy.
        double zq = z[i] + (xq - x[i]) / sig[i];
        double lo = z[i], hi = z[i + 1];
        for (int it2 = 0; it2 < 60; ++it2) {
            double xm = x_at(zq);
            double err = xm - xq;
            if (std::abs(err) < 1e-14 * std::max(1.0, std::abs(xq))) break;
            (err > 0 ? hi : lo) = zq;
            double step = err / sig[i];
            double cand = zq - step;
            zq = (cand > lo && cand < hi) ? cand : 0.5 * (lo + hi);
        }
        return zq;
    }
};

std::shared_ptr<NaturalGrid> build_grid(const proc::DiffusionSpec& spec, double x_anchor) {
    if (!spec.domain.contains_interior(x_anchor))
        throw OutOfDomain("make_bose: anchor must be interior");
    const double h = 1e-2;
    const double z_cap = 20.0;
    auto safe_sigma = [&](double x) -> double {
        if (!spec.domain.contains_interior(x)) return -1.0;
        double s;
        try {
            s = spec.vol(x);
        } catch (const Error&) {
            return -1.0; // vol not evaluable this far out: stop the march here
        }
        if (!std::isfinite(s) || s <= 0.0) return -1.0;
        return s;
    };

    auto march = [&](double dir) {
        std::vector<double> zs, xs, ss;
        double z = 0.0, x = x_anchor;
        double s = safe_sigma(x);
        while (std::abs(z) < z_cap) {
            double k1 = safe_sigma(x);
            if (k1 <= 0.0) break;
            double k2 = safe_sigma(x + dir * 0.5 * h * k1);
            if (k2 <= 0.0) break;
            double k3 = safe_sigma(x + dir * 0.5 * h * k2);
            if (k3 <= 0.0) break;
            double k4 = safe_sigma(x + dir * h * k3);
            if (k4 <= 0.0) break;
            double x_next = x + dir * h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            double s_next = safe_sigma(x_next);
            if (s_next <= 0.0) break;
            z += dir * h;
            x = x_next;
            s = s_next;
            zs.push_back(z);
            xs.push_back(x);
            ss.push_back(s);
        }
        (void)s;
        return std::make_tuple(zs, xs, ss);
    };

    auto [zu, xu, su] = march(+1.0);
    auto [zd, xd, sd] = march(-1.0);

    auto grid = std::make_shared<NaturalGrid>();
    for (std::size_t i = zd.size(); i-- > 0;) {
        grid->z.push_back(zd[i]);
        grid->x.push_back(xd[i]);
        grid->sig.push_back(sd[i]);
    }
    grid->anchor_index = grid->z.size();
    grid->z.push_back(0.0);
    grid->x.push_back(x_anchor);
    grid->sig.push_back(spec.vol(x_anchor));
    for (std::size_t i = 0; i < zu.size(); ++i) {
        grid->z.push_back(zu[i]);
        grid->x.push_back(xu[i]);
        grid->sig.push_back(su[i]);
    }
    if (grid->z.size() < 8)
        throw NonConvergence("make_bose: natural-coordinate march collapsed near the anchor");
    return grid;
}

} // namespace

double bose_I(const Fn& a, const Fn& b, const Fn& c, double x) {
    double ax = a(x);
    if (ax == 0.0) throw DivisionByZero("bose_I: a(x) = 0");
    double h = 1e-3 * std::max(1.0, std::abs(x));
    double da = num::deriv1(a, x, h, 2);
    double db = num::deriv1(b, x, h, 2);
    double bx = b(x);
    double cx = c(x);
    return (2.0 * bx * da - 2.0 * ax * db - bx * bx + 4.0 * ax * cx) / (4.0 * ax * ax);
}

double diffusion_potential(const proc::DiffusionSpec& spec, double x) {
    if (!spec.domain.contains_interior(x))
        throw OutOfDomain("diffusion_potential: x outside the interior");
    double h = fd_step(spec.domain, x);
    double s = spec.vol(x);
    if (!(s > 0.0)) throw DegenerateDerivative("diffusion_potential: sigma(x) <= 0");
    double s1 = num::deriv1(spec.vol, x, h, 2);
    double s2 = num::deriv2(spec.vol, x, h, 2);
    double b = spec.drift(x);
    double b1 = num::deriv1(spec.drift, x, h, 2);
    return 0.25 * (s * s2 - 0.5 * s1 * s1 + 2.0 * (2.0 * b * s1 / s - b1 - b * b / (s * s)));
}

double default_anchor(const proc::DiffusionSpec& spec) {
    const auto& d = spec.domain;
    if (d.bounded()) return 0.5 * (d.lo + d.hi);
    if (std::isfinite(d.lo)) return d.lo + 1.0;
    if (std::isfinite(d.hi)) return d.hi - 1.0;
    return 0.0;
}

BoseInvariant make_bose(const proc::DiffusionSpec& spec, double x_anchor) {
    auto grid = build_grid(spec, x_anchor);
    BoseInvariant bi;
    double margin = 0.02 * (grid->z.back() - grid->z.front());
    bi.z_lo = grid->z.front() + margin;
    bi.z_hi = grid->z.back() - margin;
    bi.x_of_z = [grid](double z) { return grid->x_at(z); };
    bi.z_of_x = [grid](double x) { return grid->z_at(x); };
    bi.j_of_z = [grid, spec](double z) { return diffusion_potential(spec, grid->x_at(z)); };
    return bi;
}

double invariant_J(const proc::DiffusionSpec& spec, double z) {
    auto bi = make_bose(spec, default_anchor(spec));
    if (z < bi.z_lo || z > bi.z_hi)
        throw OutOfDomain("invariant_J: z outside the reachable natural-coordinate range");
    return bi.j_of_z(z);
}

double schwarzian(const Fn& y_map, double x, double step) {
    double d1 = num::deriv1(y_map, x, step, 2);
    double d2 = num::deriv2(y_map, x, step, 2);
    double d3 = num::deriv3(y_map, x, step, 2);
    if (std::abs(d1) < 1e-12 * std::max(1.0, std::abs(d2)))
        throw DegenerateDerivative("schwarzian: y'(x) vanishes");
    double r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

double liouville_potential(const Fn& J, const Fn& y_map, double x) {
    // third-derivative noise floor sits near eps/h^3: a ~5e-3 step balances it
    double step = 5e-3 * std::max(1.0, std::abs(x));
    double d1 = num::deriv1(y_map, x, step, 2);
    if (std::abs(d1) < 1e-14) throw DegenerateDerivative("liouville_potential: y'(x) vanishes");
    return 0.5 * schwarzian(y_map, x, step) + d1 * d1 * J(y_map(x));
}

namespace {

struct AlignResult {
    double spread = std::numeric_limits<double>::infinity();
    double mean = 0.0;
    double shift = 0.0;
};

// Uniformly sampled J of the candidate target, for cheap interpolation
// during the translation search.
struct SampledJ {
    double z0 = 0.0, dz = 0.0;
    std::vector<double> j;

    double at(double z) const {
        double t = (z - z0) / dz;
        int i = static_cast<int>(std::floor(t));
        if (i < 0 || i + 1 >= static_cast<int>(j.size()))
            return std::numeric_limits<double>::quiet_NaN();
        double frac = t - i;
        return (1.0 - frac) * j[i] + frac * j[i + 1];
    }
};

AlignResult align(const std::vector<double>& zs, const std::vector<double>& ja,
                  const SampledJ& jb, double orient, double s_lo, double s_hi) {
    auto objective = [&](double s) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        double acc = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            double d = ja[i] - jb.at(orient * zs[i] + s);
            if (!std::isfinite(d)) return AlignResult{};
            mn = std::min(mn, d);
            mx = std::max(mx, d);
            acc += d;
        }
        double mean = acc / zs.size();
        return AlignResult{std::max(mx - mean, mean - mn), mean, s};
    };

    AlignResult best;
    const int n_scan = 81;
    for (int i = 0; i < n_scan; ++i) {
        double s = s_lo + (s_hi - s_lo) * i / (n_scan - 1);
        auto r = objective(s);
        if (r.spread < best.spread) best = r;
    }
    if (!std::isfinite(best.spread)) return best;
    double ds = std::max((s_hi - s_lo) / (n_scan - 1), 1e-6);
    double refined = num::golden_min(
        [&](double s) {
            auto r = objective(s);
            return std::isfinite(r.spread) ? r.spread : 1e100;
        },
        best.shift - ds, best.shift + ds, 1e-9 * std::max(1.0, std::abs(best.shift)));
    auto r = objective(refined);
    if (r.spread < best.spread) best = r;
    return best;
}

} // namespace

std::optional<double> equivalent(const proc::DiffusionSpec& spec_a,
                                 const proc::DiffusionSpec& spec_b, int grid_n, double tol) {
    if (grid_n < 8) throw InvalidParameter("equivalent: grid too small");
    auto ba = make_bose(spec_a, default_anchor(spec_a));
    auto bb = make_bose(spec_b, default_anchor(spec_b));

    double wa = ba.z_hi - ba.z_lo;
    double wb = bb.z_hi - bb.z_lo;
    double w = std::min({wa, 0.8 * wb, 16.0});
    double mid = 0.5 * (ba.z_lo + ba.z_hi);
    double g_lo = mid - 0.5 * w, g_hi = mid + 0.5 * w;

    auto zs = num::linspace(g_lo, g_hi, grid_n);
    std::vector<double> ja(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        ja[i] = ba.j_of_z(zs[i]);
        if (!std::isfinite(ja[i])) throw NonConvergence("equivalent: J of spec_a not finite");
    }

    SampledJ jb;
    {
        const int n_fine = 2049;
        jb.z0 = bb.z_lo;
        jb.dz = (bb.z_hi - bb.z_lo) / (n_fine - 1);
        jb.j.resize(n_fine);
        for (int i = 0; i < n_fine; ++i) {
            double z = bb.z_lo + i * jb.dz;
            double v;
            try {
                v = bb.j_of_z(z);
            } catch (const Error&) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            jb.j[i] = v;
        }
    }

    AlignResult best;
    for (double orient : {+1.0, -1.0}) {
        // shift range keeping orient*z + s inside spec_b's reachable window
        double lo_img = std::min(orient * g_lo, orient * g_hi);
        double hi_img = std::max(orient * g_lo, orient * g_hi);
        double s_lo = bb.z_lo - lo_img;
        double s_hi = bb.z_hi - hi_img;
        if (s_lo > s_hi) continue;
        auto r = align(zs, ja, jb, orient, s_lo, s_hi);
        if (r.spread < best.spread) best = r;
    }
    if (!std::isfinite(best.spread)) return std::nullopt;
    if (best.spread <= tol * (1.0 + std::abs(best.mean))) return best.mean;
    return std::nullopt;
}

double r_family_sigma_confluent(const RPolynomial& R, double c1, double c2,
                                const ConfluentParams& params, double x) {
    if (!(x > 0.0)) throw OutOfDomain("r_family_sigma_confluent: x must be > 0");
    double r = R(x);
    if (!(r > 0.0)) throw InvalidR("r_family_sigma_confluent: R(x) must be positive on (0,inf)");
    double wx = params.w * x;
    double f1 = specfun::kummer_m(params.a, params.b, wx);
    double f2 = std::pow(wx, 1.0 - params.b) *
                specfun::kummer_m(1.0 + params.a - params.b, 2.0 - params.b, wx);
    double denom = c1 * f1 + c2 * f2;
    double wronsk = std::pow(x, -params.b) * std::exp(wx);
    return wronsk * x / (denom * denom * std::sqrt(r));
}

double r_family_sigma_hypergeom(const RPolynomial& R, double c1, double c2,
                                const HypergeomParams& params, double x) {
    if (!(x > 0.0 && x < 1.0)) throw OutOfDomain("r_family_sigma_hypergeom: x must be in (0,1)");
    double r = R(x);
    if (!(r > 0.0)) throw InvalidR("r_family_sigma_hypergeom: R(x) must be positive on (0,1)");
    double f1 = specfun::gauss_2f1(params.alpha, params.beta, params.gamma, x);
    double f2 = std::pow(x, 1.0 - params.gamma) *
                specfun::gauss_2f1(params.alpha - params.gamma + 1.0,
                                   params.beta - params.gamma + 1.0, 2.0 - params.gamma, x);
    double denom = c1 * f1 + c2 * f2;
    double wronsk = std::pow(x, -params.gamma) *
                    std::pow(1.0 - x, params.gamma - params.alpha - params.beta - 1.0);
    return wronsk * x * (1.0 - x) / (denom * denom * std::sqrt(r));
}

proc::DiffusionSpec r_family_process(RKind kind, const RPolynomial& R, double a, double b) {
    proc::DiffusionSpec spec;
    if (kind == RKind::Confluent) {
        spec.domain = {0.0, proc::kInf};
        for (double x : {0.01, 0.1, 1.0, 5.0, 25.0, 125.0})
            if (!(R(x) > 0.0)) throw InvalidR("r_family_process: R must be positive on (0,inf)");
        spec.drift = [R, a, b](double x) { return (a + b * x) * x / R(x); };
        spec.vol = [R](double x) { return x / std::sqrt(R(x)); };
    } else {
        spec.domain = {0.0, 1.0};
        for (double x : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99})
            if (!(R(x) > 0.0)) throw InvalidR("r_family_process: R must be positive on (0,1)");
        spec.drift = [R, a, b](double x) { return (a + b * x) * x * (1.0 - x) / R(x); };
        spec.vol = [R](double x) { return x * (1.0 - x) / std::sqrt(R(x)); };
    }
    return spec;
}

} // namespace inv
} // namespace solvdiff
