#include "solvdiff/numeric.hpp"
#include "solvdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace solvdiff {
namespace num {

namespace {

// Kronrod-15 abscissae on [0,1] side (symmetric) and weights; the embedded
// Gauss-7 rule uses the odd-indexed nodes.
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const Fn& f, double a, double b) {
    double hc = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double fk[8][2];
    for (int i = 0; i < 8; ++i) {
        double dx = hc * kXgk[i];
        fk[i][0] = f(mid - dx);
        fk[i][1] = (i == 7) ? fk[i][0] : f(mid + dx);
    }
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fk[i][0] + fk[i][1]);
    resk += kWgk[7] * fk[7][0];
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fk[2 * i + 1][0] + fk[2 * i + 1][1]);
    resg += kWg[3] * fk[7][0];
    resk *= hc;
    resg *= hc;
    // |K15 - G7| is a safe (over-)estimate of the Kronrod error.
    return {resk, std::abs(resk - resg)};
}

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

} // namespace

double integrate(const Fn& f, double a, double b, const QuadOptions& opt) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    auto first = gk15(f, a, b);
    std::priority_queue<Panel> heap;
    heap.push({a, b, first.kronrod, first.err});
    double total = first.kronrod;
    double total_err = first.err;
    int n = 1;
    while (n < opt.max_intervals) {
        double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        Panel worst = heap.top();
        heap.pop();
        double m = 0.5 * (worst.a + worst.b);
        if (m == worst.a || m == worst.b) {
            // Interval at machine resolution; accept its contribution as is.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.err;
            continue;
        }
        auto left = gk15(f, worst.a, m);
        auto right = gk15(f, m, worst.b);
        total += left.kronrod + right.kronrod - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push({worst.a, m, left.kronrod, left.err});
        heap.push({m, worst.b, right.kronrod, right.err});
        ++n;
    }
    return sign * total;
}

double integrate_to_inf(const Fn& f, double a, const QuadOptions& opt) {
    auto g = [&](double t) {
        double one_m = 1.0 - t;
        double x = a + t / one_m;
        return f(x) / (one_m * one_m);
    };
    return integrate(g, 0.0, 1.0 - 1e-14, opt);
}

double integrate_from_inf(const Fn& f, double b, const QuadOptions& opt) {
    auto g = [&](double x) { return f(2.0 * b - x); };
    return integrate_to_inf(g, b, opt);
}

double integrate_real_line(const Fn& f, const QuadOptions& opt) {
    auto g = [&](double t) {
        double d = 1.0 - t * t;
        double x = t / d;
        return f(x) * (1.0 + t * t) / (d * d);
    };
    return integrate(g, -1.0 + 1e-14, 1.0 - 1e-14, opt);
}

namespace {

// Richardson tableau over step halvings; `base` computes the finite
// difference at a given step with error O(h^order_step) in even powers.
double richardson(const std::function<double(double)>& base, double h0, int levels) {
    std::vector<double> row(levels + 1);
    for (int i = 0; i <= levels; ++i) row[i] = base(h0 / std::pow(2.0, i));
    double factor = 4.0;
    for (int k = 0; k < levels; ++k) {
        for (int i = 0; i + 1 < static_cast<int>(row.size()) - k; ++i) {
            row[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
        }
        factor *= 4.0;
    }
    return row[0];
}

} // namespace

double deriv1(const Fn& f, double x, double h0, int levels) {
    return richardson([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0, levels);
}

double deriv2(const Fn& f, double x, double h0, int levels) {
    return richardson(
        [&](double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); }, h0, levels);
}

double deriv3(const Fn& f, double x, double h0, int levels) {
    return richardson(
        [&](double h) {
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
                   (2.0 * h * h * h);
        },
        h0, levels);
}

double bisect(const Fn& f, double lo, double hi, double x_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw InvalidParameter("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo < x_tol || mid == lo || mid == hi) return mid;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const Fn& f, double lo, double hi, double x_tol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (a + b);
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

} // namespace num
} // namespace solvdiff
