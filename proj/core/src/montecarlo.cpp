#include "solvdiff/montecarlo.hpp"
#include "solvdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace solvdiff {
namespace mc {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

void Philox4x32::block(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                       std::uint32_t out[4]) {
    std::uint32_t c[4] = {static_cast<std::uint32_t>(counter),
                          static_cast<std::uint32_t>(counter >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    const std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    const std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(M0, c[0], hi0, lo0);
        mulhilo(M1, c[2], hi1, lo1);
        std::uint32_t n0 = hi1 ^ c[1] ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c[3] ^ k1;
        std::uint32_t n3 = lo0;
        c[0] = n0;
        c[1] = n1;
        c[2] = n2;
        c[3] = n3;
        k0 += W0;
        k1 += W1;
    }
    out[0] = c[0];
    out[1] = c[1];
    out[2] = c[2];
    out[3] = c[3];
}

double inverse_normal_cdf(double p) {
    // Wichura (1988), algorithm AS241 PPND16.
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("inverse_normal_cdf: p must be in (0,1)");
    double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                           6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                         1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                       1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                           3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                         5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                       4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                           2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                         3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                       4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                           1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                         6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                       2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                           1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                         2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                       5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                           1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                         1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                       5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

double NormalStream::next() {
    if (have_ == 0) {
        Philox4x32::block(seed_, stream_, counter_++, buf_);
        have_ = 2;
    }
    int idx = 2 - have_;
    --have_;
    std::uint64_t bits =
        (static_cast<std::uint64_t>(buf_[2 * idx]) << 32) | buf_[2 * idx + 1];
    double u = (bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
    return inverse_normal_cdf(u);
}

namespace {

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SOLVDIFF_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

struct PathOutcome {
    double value = 0.0;   // terminal value or absorption time
    int status = 0;       // 0 alive, -1 absorbed lo, +1 absorbed hi
};

} // namespace

SimResult simulate(const proc::DiffusionSpec& spec, double x0, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw InvalidParameter("simulate: dt must be > 0");
    if (!(cfg.horizon > 0.0) || cfg.dt >= cfg.horizon)
        throw InvalidParameter("simulate: need dt < horizon");
    if (cfg.n_paths < 1) throw InvalidParameter("simulate: n_paths must be >= 1");
    if (!spec.domain.contains_interior(x0))
        throw OutOfDomain("simulate: x0 must be interior");

    long n_full = static_cast<long>(std::floor(cfg.horizon / cfg.dt + 1e-12));
    double rem = cfg.horizon - n_full * cfg.dt;
    if (rem < 1e-12 * cfg.horizon) rem = 0.0;

    const double lo = spec.domain.lo, hi = spec.domain.hi;
    bool absorb = cfg.boundary_policy == BoundaryPolicy::AbsorbAtBoundary;
    bool take_lo = absorb && cfg.absorb_lo;
    bool take_hi = absorb && cfg.absorb_hi;

    std::vector<PathOutcome> outcomes(cfg.n_paths);
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;

    auto run_range = [&](long p_begin, long p_end) {
        try {
            for (long p = p_begin; p < p_end; ++p) {
                NormalStream rng(cfg.seed, static_cast<std::uint64_t>(p));
                double x = x0;
                double t = 0.0;
                PathOutcome& res = outcomes[p];
                res.status = 0;
                bool done = false;
                for (long k = 0; k < n_full + (rem > 0.0 ? 1 : 0) && !done; ++k) {
                    double dt = (k < n_full) ? cfg.dt : rem;
                    double xc = std::min(std::max(x, lo), hi); // full truncation
                    double b = spec.drift(xc);
                    double s = spec.vol(xc);
                    x += b * dt + s * std::sqrt(dt) * rng.next();
                    t += dt;
                    if (std::abs(x) > 1e12)
                        throw NumericBlowup("simulate: |x| exceeded 1e12 (explosion)");
                    if (take_lo && std::isfinite(lo) && x <= lo) {
                        res.status = -1;
                        res.value = t;
                        done = true;
                    } else if (take_hi && std::isfinite(hi) && x >= hi) {
                        res.status = +1;
                        res.value = t;
                        done = true;
                    }
                }
                if (!done) res.value = x;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    int n_workers = worker_count();
    if (n_workers <= 1 || cfg.n_paths < 256) {
        run_range(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        long chunk = (cfg.n_paths + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            long b = w * chunk;
            long e = std::min<long>(cfg.n_paths, b + chunk);
            if (b >= e) break;
            pool.emplace_back(run_range, b, e);
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    SimResult out;
    long n_lo = 0, n_hi = 0;
    AbsorptionSummary& ab = out.absorption_times;
    for (const auto& res : outcomes) {
        if (res.status == 0) {
            out.terminal_values.push_back(res.value);
            continue;
        }
        (res.status < 0 ? n_lo : n_hi) += 1;
        double t = res.value;
        if (ab.count == 0) {
            ab.min_time = ab.max_time = t;
        } else {
            ab.min_time = std::min(ab.min_time, t);
            ab.max_time = std::max(ab.max_time, t);
        }
        ab.mean_time += t;
        ab.count += 1;
    }
    if (ab.count > 0) ab.mean_time /= ab.count;
    out.absorbed_fraction_lo = static_cast<double>(n_lo) / cfg.n_paths;
    out.absorbed_fraction_hi = static_cast<double>(n_hi) / cfg.n_paths;
    return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 100) throw TooFewSamples("ks_statistic: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

} // namespace mc
} // namespace solvdiff
