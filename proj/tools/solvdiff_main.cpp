// solvdiff: batch front-end for building solvable driftless diffusions by
// stochastic transformation, evaluating their densities and Green functions,
// classifying boundaries, comparing Bose invariants, and Monte Carlo checks.
//
// Exit codes: 0 success, 1 domain/input error, 2 numeric non-convergence.

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "solvdiff/boundary.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/fundamental.hpp"
#include "solvdiff/invariants.hpp"
#include "solvdiff/io.hpp"
#include "solvdiff/montecarlo.hpp"
#include "solvdiff/numeric.hpp"
#include "solvdiff/processes.hpp"
#include "solvdiff/specfun.hpp"
#include "solvdiff/transform.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace solvdiff;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot open '" + path + "' for writing");
    return out;
}

// --- specfun eval -----------------------------------------------------------

struct SpecfunArgs {
    std::string fn;
    double a = 0, b = 0, c = 0, z = 0, nu = 0, x = 0, alpha = 0, beta = 0;
    int n = 0;
    double rel_tol = 1e-13;
    int max_terms = 10000;
};

int run_specfun(const SpecfunArgs& args) {
    specfun::SeriesControl ctl{args.rel_tol, args.max_terms};
    double value;
    if (args.fn == "2f1") {
        value = specfun::gauss_2f1(args.a, args.b, args.c, args.z, ctl);
    } else if (args.fn == "m") {
        value = specfun::kummer_m(args.a, args.b, args.z, ctl);
    } else if (args.fn == "u") {
        value = specfun::tricomi_u(args.a, args.b, args.z, ctl);
    } else if (args.fn == "besseli") {
        value = specfun::bessel_i(args.nu, args.z, ctl);
    } else if (args.fn == "loggamma") {
        auto lg = specfun::log_gamma(args.x);
        std::printf("%s sign=%d\n", io::g17(lg.value).c_str(), lg.sign);
        return 0;
    } else if (args.fn == "hermite") {
        value = specfun::orth_poly(specfun::Hermite{}, args.n, args.x);
    } else if (args.fn == "laguerre") {
        value = specfun::orth_poly(specfun::Laguerre{args.alpha}, args.n, args.x);
    } else if (args.fn == "jacobi") {
        value = specfun::orth_poly(specfun::JacobiPoly{args.alpha, args.beta}, args.n, args.x);
    } else {
        throw InvalidParameter("specfun eval: unknown --fn '" + args.fn + "'");
    }
    std::printf("%s\n", io::g17(value).c_str());
    return 0;
}

// --- process ----------------------------------------------------------------

int run_process_info(const std::string& in) {
    auto p = io::load_process(in);
    auto spec = proc::to_spec(p);
    std::printf("kind: %s\n", proc::kind_name(p).c_str());
    std::printf("domain: [%s, %s]\n", io::g17(spec.domain.lo).c_str(),
                io::g17(spec.domain.hi).c_str());
    if (const auto* q = std::get_if<proc::CIR>(&p))
        std::printf("alpha: %s  theta: %s\n", io::g17(q->alpha()).c_str(),
                    io::g17(q->theta()).c_str());
    if (const auto* q = std::get_if<proc::Jacobi>(&p))
        std::printf("alpha: %s  beta: %s\n", io::g17(q->alpha()).c_str(),
                    io::g17(q->beta()).c_str());
    if (const auto* q = std::get_if<proc::Bessel>(&p))
        std::printf("alpha: %s\n", io::g17(q->alpha()).c_str());
    return 0;
}

int run_process_density(const std::string& in, double t, double x0, int grid_n,
                        const std::string& out_path, bool series, int n_terms) {
    auto p = io::load_process(in);
    auto dom = proc::domain_of(p);
    double lo = std::isfinite(dom.lo) ? dom.lo + 1e-6 * (1.0 + std::abs(dom.lo)) : x0 - 6.0;
    double hi = std::isfinite(dom.hi) ? dom.hi - 1e-6 * (1.0 + std::abs(dom.hi)) : x0 + 6.0;
    if (!std::isfinite(dom.hi) && std::isfinite(dom.lo)) hi = x0 + 8.0;
    auto xs = num::linspace(lo, hi, grid_n);
    auto out = open_out(out_path);
    out << "t,x0,x1,p\n";
    for (double x1 : xs) {
        double v = series ? proc::density_series(p, t, x0, x1, n_terms)
                          : proc::density_closed(p, t, x0, x1);
        out << io::g17(t) << "," << io::g17(x0) << "," << io::g17(x1) << "," << io::g17(v)
            << "\n";
    }
    std::printf("wrote %d rows to %s\n", grid_n, out_path.c_str());
    return 0;
}

// --- classify ----------------------------------------------------------------

int run_classify(const std::string& in, const std::string& transform_path) {
    if (!transform_path.empty()) {
        auto t = io::load_transform(transform_path);
        std::printf("%-9s %-9s %s\n", "endpoint", "class", "via");
        for (auto side : {bnd::Side::Lo, bnd::Side::Hi}) {
            auto res = bnd::classify_transformed(t, side);
            std::printf("%-9s %-9s %s\n", side == bnd::Side::Lo ? "lo" : "hi",
                        bnd::to_string(res.cls).c_str(),
                        res.via_fallback ? "integrability-test" : "lemma");
        }
        return 0;
    }
    auto p = io::load_process(in);
    std::printf("%-9s %-9s %-22s %-22s\n", "endpoint", "class", "Q-window-sum", "R-window-sum");
    for (auto side : {bnd::Side::Lo, bnd::Side::Hi}) {
        bnd::ClassifyDetail det;
        auto cls = bnd::classify_endpoint(p, side, &det);
        std::printf("%-9s %-9s %-22s %-22s\n", side == bnd::Side::Lo ? "lo" : "hi",
                    bnd::to_string(cls).c_str(), io::g17(det.q_sum).c_str(),
                    io::g17(det.r_sum).c_str());
    }
    return 0;
}

// --- transform ----------------------------------------------------------------

int run_transform_build(const std::string& in, const std::string& out_path) {
    auto t = io::load_transform(in); // build_transform validates
    auto dom = t.domain_y();
    std::printf("valid transform: rho=%s, target=[%s, %s], %s\n", io::g17(t.rho()).c_str(),
                io::g17(dom.interval.lo).c_str(), io::g17(dom.interval.hi).c_str(),
                t.increasing() ? "increasing" : "decreasing");
    if (!out_path.empty()) io::save_json(out_path, io::to_json(t));
    return 0;
}

int run_transform_eval(const std::string& in, double x) {
    auto t = io::load_transform(in);
    double y = t.map_y(x);
    std::printf("y=%s h=%s sigma_y=%s\n", io::g17(y).c_str(), io::g17(t.h(x)).c_str(),
                io::g17(t.sigma_y(y)).c_str());
    return 0;
}

int run_transform_domain(const std::string& in) {
    auto t = io::load_transform(in);
    auto dom = t.domain_y();
    std::printf("[%s, %s] %s\n", io::g17(dom.interval.lo).c_str(),
                io::g17(dom.interval.hi).c_str(), dom.bounded ? "bounded" : "unbounded");
    return 0;
}

int run_transform_density(const std::string& in, double t_time, int grid_n,
                          const std::string& out_path, bool lebesgue) {
    auto t = io::load_transform(in);
    auto dom = t.domain_y().interval;
    double span = dom.bounded() ? dom.width() : 12.0;
    double lo = std::isfinite(dom.lo) ? dom.lo + 1e-4 * span : -6.0;
    double hi = std::isfinite(dom.hi) ? dom.hi - 1e-4 * span : 6.0;
    if (!std::isfinite(dom.hi) && std::isfinite(dom.lo)) hi = lo + 12.0;
    if (!std::isfinite(dom.lo) && std::isfinite(dom.hi)) lo = hi - 12.0;
    auto ys = num::linspace(lo, hi, grid_n);
    auto out = open_out(out_path);
    out << "t,y0,y1,p\n";
    for (double y0 : ys) {
        for (double y1 : ys) {
            double v = t.density_y(t_time, y0, y1);
            if (lebesgue) v *= t.m_y(y1);
            out << io::g17(t_time) << "," << io::g17(y0) << "," << io::g17(y1) << ","
                << io::g17(v) << "\n";
        }
    }
    std::printf("wrote %dx%d grid to %s\n", grid_n, grid_n, out_path.c_str());
    return 0;
}

// --- invariant ----------------------------------------------------------------

proc::DiffusionSpec spec_from_file(const std::string& path) {
    return proc::to_spec(io::load_process(path));
}

int run_invariant_compute(const std::string& in, double z_lo, double z_hi, int n,
                          const std::string& out_path) {
    auto spec = spec_from_file(in);
    auto bi = inv::make_bose(spec, inv::default_anchor(spec));
    double lo = std::max(z_lo, bi.z_lo), hi = std::min(z_hi, bi.z_hi);
    if (!(lo < hi)) throw InvalidParameter("invariant compute: empty z range");
    auto out = open_out(out_path);
    out << "z,J\n";
    for (double z : num::linspace(lo, hi, n))
        out << io::g17(z) << "," << io::g17(bi.j_of_z(z)) << "\n";
    std::printf("wrote %d rows to %s (z in [%s, %s])\n", n, out_path.c_str(),
                io::g17(lo).c_str(), io::g17(hi).c_str());
    return 0;
}

int run_invariant_compare(const std::string& a, const std::string& b, double tol) {
    auto rho = inv::equivalent(spec_from_file(a), spec_from_file(b), 64, tol);
    if (rho) {
        std::printf("equivalent, rho=%s\n", io::g17(*rho).c_str());
    } else {
        std::printf("not equivalent\n");
    }
    return 0;
}

// --- simulate ----------------------------------------------------------------

int run_simulate(const std::string& in, const std::string& transform_path, double x0, double dt,
                 long n_paths, double horizon, std::uint64_t seed, const std::string& policy,
                 const std::string& out_path) {
    mc::SimConfig cfg;
    cfg.dt = dt;
    cfg.n_paths = n_paths;
    cfg.horizon = horizon;
    cfg.seed = seed;
    if (policy == "absorb") {
        cfg.boundary_policy = mc::BoundaryPolicy::AbsorbAtBoundary;
    } else if (policy == "none") {
        cfg.boundary_policy = mc::BoundaryPolicy::ReflectNever;
    } else {
        throw InvalidParameter("simulate: --policy must be 'absorb' or 'none'");
    }
    proc::DiffusionSpec spec;
    if (!transform_path.empty()) {
        spec = io::load_transform(transform_path).target_spec();
    } else if (!in.empty()) {
        spec = spec_from_file(in);
    } else {
        throw InvalidParameter("simulate: need --in or --transform");
    }
    auto res = mc::simulate(spec, x0, cfg);
    auto out = open_out(out_path);
    out << "terminal\n";
    for (double v : res.terminal_values) out << io::g17(v) << "\n";
    std::printf("alive=%zu absorbed_lo=%s absorbed_hi=%s", res.terminal_values.size(),
                io::g17(res.absorbed_fraction_lo).c_str(),
                io::g17(res.absorbed_fraction_hi).c_str());
    if (res.absorption_times.count > 0) {
        std::printf(" absorption_time(mean=%s min=%s max=%s)",
                    io::g17(res.absorption_times.mean_time).c_str(),
                    io::g17(res.absorption_times.min_time).c_str(),
                    io::g17(res.absorption_times.max_time).c_str());
    }
    std::printf("\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvable driftless diffusions by stochastic transformation"};
    app.require_subcommand(1);

    SpecfunArgs sf;
    auto* sp_cmd = app.add_subcommand("specfun", "special-function kernel");
    auto* sp_eval = sp_cmd->add_subcommand("eval", "evaluate one function");
    sp_eval->add_option("--fn", sf.fn, "2f1|m|u|besseli|loggamma|hermite|laguerre|jacobi")
        ->required();
    sp_eval->add_option("--a", sf.a);
    sp_eval->add_option("--b", sf.b);
    sp_eval->add_option("--c", sf.c);
    sp_eval->add_option("--z", sf.z);
    sp_eval->add_option("--nu", sf.nu);
    sp_eval->add_option("--x", sf.x);
    sp_eval->add_option("--alpha", sf.alpha);
    sp_eval->add_option("--beta", sf.beta);
    sp_eval->add_option("--n", sf.n);
    sp_eval->add_option("--rel-tol", sf.rel_tol);
    sp_eval->add_option("--max-terms", sf.max_terms);

    std::string proc_in, proc_out = "density.csv";
    double proc_t = 1.0, proc_x0 = 1.0;
    int proc_grid = 64, proc_terms = 80;
    bool proc_series = false;
    auto* pr_cmd = app.add_subcommand("process", "base-process catalog");
    auto* pr_info = pr_cmd->add_subcommand("info", "print derived parameters");
    pr_info->add_option("--in", proc_in, "process JSON")->required();
    auto* pr_dens = pr_cmd->add_subcommand("density", "transition density to CSV");
    pr_dens->add_option("--in", proc_in, "process JSON")->required();
    pr_dens->add_option("--t", proc_t);
    pr_dens->add_option("--x0", proc_x0);
    pr_dens->add_option("--grid", proc_grid);
    pr_dens->add_option("--out", proc_out);
    pr_dens->add_flag("--series", proc_series, "use the spectral series");
    pr_dens->add_option("--terms", proc_terms, "series truncation");

    std::string cls_in, cls_transform;
    auto* cls_cmd = app.add_subcommand("classify", "Feller boundary classification");
    cls_cmd->add_option("--in", cls_in, "process JSON");
    cls_cmd->add_option("--transform", cls_transform, "transform JSON (refined classes)");

    std::string tr_in, tr_out;
    double tr_x = 1.0, tr_t = 1.0;
    int tr_grid = 64;
    bool tr_lebesgue = false;
    auto* tr_cmd = app.add_subcommand("transform", "stochastic transformations {rho,h,Y}");
    auto* tr_build = tr_cmd->add_subcommand("build", "validate and echo a transform");
    tr_build->add_option("--in", tr_in)->required();
    tr_build->add_option("--out", tr_out);
    auto* tr_eval = tr_cmd->add_subcommand("eval", "evaluate Y, h, sigma_Y at x");
    tr_eval->add_option("--in", tr_in)->required();
    tr_eval->add_option("--x", tr_x)->required();
    auto* tr_dom = tr_cmd->add_subcommand("domain", "target state interval");
    tr_dom->add_option("--in", tr_in)->required();
    auto* tr_dens = tr_cmd->add_subcommand("density", "p_Y grid to CSV");
    tr_dens->add_option("--in", tr_in)->required();
    tr_dens->add_option("--t", tr_t);
    tr_dens->add_option("--grid", tr_grid);
    tr_dens->add_option("--out", tr_out)->required();
    tr_dens->add_flag("--lebesgue", tr_lebesgue, "Lebesgue density instead of m_Y kernel");

    std::string inv_in, inv_a, inv_b, inv_out = "invariant.csv";
    double inv_zlo = -5.0, inv_zhi = 5.0, inv_tol = 1e-4;
    int inv_n = 65;
    auto* inv_cmd = app.add_subcommand("invariant", "Bose invariants / equivalence");
    auto* inv_compute = inv_cmd->add_subcommand("compute", "J(z) on a grid to CSV");
    inv_compute->add_option("--in", inv_in)->required();
    inv_compute->add_option("--zmin", inv_zlo);
    inv_compute->add_option("--zmax", inv_zhi);
    inv_compute->add_option("--n", inv_n);
    inv_compute->add_option("--out", inv_out);
    auto* inv_compare = inv_cmd->add_subcommand("compare", "decide equivalence of two processes");
    inv_compare->add_option("--a", inv_a)->required();
    inv_compare->add_option("--b", inv_b)->required();
    inv_compare->add_option("--tol", inv_tol);

    std::string sim_in, sim_transform, sim_out = "samples.csv", sim_policy = "absorb";
    double sim_x0 = 1.0, sim_dt = 1e-3, sim_horizon = 1.0;
    long sim_paths = 10000;
    std::uint64_t sim_seed = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Euler-Maruyama path simulation");
    sim_cmd->add_option("--in", sim_in, "process JSON");
    sim_cmd->add_option("--transform", sim_transform, "simulate the transformed process");
    sim_cmd->add_option("--x0", sim_x0)->required();
    sim_cmd->add_option("--dt", sim_dt);
    sim_cmd->add_option("--paths", sim_paths);
    sim_cmd->add_option("--horizon", sim_horizon);
    sim_cmd->add_option("--seed", sim_seed);
    sim_cmd->add_option("--policy", sim_policy, "absorb|none");
    sim_cmd->add_option("--out", sim_out);

    int accept_only = 0;
    auto* acc_cmd = app.add_subcommand("accept", "run the acceptance suites");
    acc_cmd->add_option("--criterion", accept_only, "run a single criterion (1-7)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp_eval->parsed()) return run_specfun(sf);
        if (pr_info->parsed()) return run_process_info(proc_in);
        if (pr_dens->parsed())
            return run_process_density(proc_in, proc_t, proc_x0, proc_grid, proc_out,
                                       proc_series, proc_terms);
        if (cls_cmd->parsed()) {
            if (cls_in.empty() && cls_transform.empty())
                throw InvalidParameter("classify: need --in or --transform");
            return run_classify(cls_in, cls_transform);
        }
        if (tr_build->parsed()) return run_transform_build(tr_in, tr_out);
        if (tr_eval->parsed()) return run_transform_eval(tr_in, tr_x);
        if (tr_dom->parsed()) return run_transform_domain(tr_in);
        if (tr_dens->parsed())
            return run_transform_density(tr_in, tr_t, tr_grid, tr_out, tr_lebesgue);
        if (inv_compute->parsed())
            return run_invariant_compute(inv_in, inv_zlo, inv_zhi, inv_n, inv_out);
        if (inv_compare->parsed()) return run_invariant_compare(inv_a, inv_b, inv_tol);
        if (sim_cmd->parsed())
            return run_simulate(sim_in, sim_transform, sim_x0, sim_dt, sim_paths, sim_horizon,
                                sim_seed, sim_policy, sim_out);
        if (acc_cmd->parsed()) {
            int failures = accept::run_acceptance(accept_only);
            return failures == 0 ? 0 : 1;
        }
        std::cerr << "no subcommand action parsed\n";
        return 1;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 2;
    } catch (const NumericBlowup& e) {
        std::cerr << "numeric blowup: " << e.what() << "\n";
        return 2;
    } catch (const InconclusiveIntegrability& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
