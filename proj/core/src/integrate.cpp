#include "nmq/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace nmq {

void TimeWindow::validate() const {
    if (!(t_start >= 0.0) || !(t_start < t_end))
        throw DomainError("TimeWindow: need 0 <= t_start < t_end");
    if (grid_points < 100) throw DomainError("TimeWindow: grid_points must be >= 100");
}

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1] (QUADPACK values).
constexpr double kron_x[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kron_w[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322541, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999234, 0.209482141084727828012999174891};
constexpr double gauss_w[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const RealFunction& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double f0 = f(c);
    double k = kron_w[7] * f0;
    double g = gauss_w[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kron_x[i];
        const double s = f(c + dx) + f(c - dx);
        k += kron_w[i] * s;
        if (i % 2 == 1) g += gauss_w[i / 2] * s;
    }
    k *= h;
    g *= h;

    const double d = std::abs(k - g);
    // QUADPACK-style sharpening: (200 d)^{3/2} once the pair agrees well
    double err = d;
    const double sharp = 200.0 * d * std::sqrt(200.0 * d);
    if (std::isfinite(sharp) && sharp < d) err = sharp;
    return {k, err};
}

}  // namespace

double integrate_adaptive(const RealFunction& f, double a, double b,
                          double rel_tol, double abs_tol) {
    if (a > b) throw DomainError("integrate_adaptive: need a <= b");
    if (a == b) return 0.0;

    struct Panel {
        double a, b, value, error;
    };

    PanelResult first = gk15(f, a, b);
    std::vector<Panel> heap{{a, b, first.value, first.error}};
    double total = first.value;
    double total_err = first.error;

    const int max_panels = 4000;
    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::make_heap(heap.begin(), heap.end(), worse);

    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= max_panels)
            throw ToleranceNotReached("integrate_adaptive: subdivision budget exhausted");
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel p = heap.back();
        heap.pop_back();

        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b)
            throw ToleranceNotReached("integrate_adaptive: interval collapsed below machine precision");
        PanelResult left = gk15(f, p.a, m);
        PanelResult right = gk15(f, m, p.b);

        total += left.value + right.value - p.value;
        total_err += left.error + right.error - p.error;

        heap.push_back({p.a, m, left.value, left.error});
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back({m, p.b, right.value, right.error});
        std::push_heap(heap.begin(), heap.end(), worse);
    }
    return total;
}

double derivative(const RealFunction& f, double t, double h) {
    if (!(h > 0.0)) throw DomainError("derivative: step must be positive");
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

namespace {

// Bisection for the sign boundary of f inside [lo, hi] where f(lo) and
// f(hi) straddle zero (or the sign flag flips).
double refine_root(const RealFunction& f, double lo, double hi, bool lo_negative,
                   double tol) {
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0.0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

IntervalList find_sign_changes(const RealFunction& f, const TimeWindow& window,
                               double refine_tol) {
    window.validate();

    int n = window.grid_points;
    const int max_doublings = 4;

    for (int attempt = 0;; ++attempt) {
        const double h = (window.t_end - window.t_start) / n;
        IntervalList out;
        bool inside = false;
        double start = 0.0;
        double prev_t = window.t_start;
        bool prev_neg = f(window.t_start) < 0.0;
        if (prev_neg) {
            inside = true;
            start = window.t_start;
        }
        for (int i = 1; i <= n; ++i) {
            const double t = window.t_start + i * h;
            const bool neg = f(t) < 0.0;
            if (neg != prev_neg) {
                const double edge = refine_root(f, prev_t, t, prev_neg, refine_tol);
                if (neg) {
                    inside = true;
                    start = edge;
                } else {
                    inside = false;
                    out.push_back({start, edge});
                }
            }
            prev_t = t;
            prev_neg = neg;
        }
        if (inside) out.push_back({start, window.t_end});

        // Resolution check: any interval much shorter than the grid step hints
        // at oscillation faster than the scan can see.
        bool suspicious = false;
        for (const auto& iv : out)
            if (iv.b - iv.a < 0.5 * h && iv.b < window.t_end) suspicious = true;
        if (!suspicious) return out;
        if (attempt >= max_doublings)
            throw GridTooCoarse("find_sign_changes: oscillation faster than grid after doublings");
        n *= 2;
    }
}

namespace {

// Golden-section refinement of a local extremum of f inside [lo, hi].
double refine_extremum(const RealFunction& f, double lo, double hi, bool minimum,
                       double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const bool pick_left = minimum ? (f1 < f2) : (f1 > f2);
        if (pick_left) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

IncreaseResult accumulate_increase(const RealFunction& f, const TimeWindow& window,
                                   double refine_tol) {
    window.validate();

    int n = window.grid_points;
    const int max_doublings = 3;

    for (int attempt = 0;; ++attempt) {
        const double h = (window.t_end - window.t_start) / n;
        std::vector<double> ts(static_cast<size_t>(n) + 1), fs(static_cast<size_t>(n) + 1);
        double scale = 0.0;
        for (int i = 0; i <= n; ++i) {
            ts[static_cast<size_t>(i)] = window.t_start + i * h;
            fs[static_cast<size_t>(i)] = f(ts[static_cast<size_t>(i)]);
            scale = std::max(scale, std::abs(fs[static_cast<size_t>(i)]));
        }
        // floating-point jitter on flat stretches must not register as backflow
        const double noise = 1e-11 * std::max(1.0, scale);

        IncreaseResult res;
        int i = 0;
        while (i < n) {
            if (!(fs[static_cast<size_t>(i + 1)] > fs[static_cast<size_t>(i)])) {
                ++i;
                continue;
            }
            // climb, allowing sub-noise dips to keep one physical run together
            int j = i;
            int peak_idx = i;
            double peak = fs[static_cast<size_t>(i)];
            while (j < n) {
                const double next = fs[static_cast<size_t>(j + 1)];
                if (next >= fs[static_cast<size_t>(j)] || peak - next < noise) {
                    ++j;
                    if (fs[static_cast<size_t>(j)] > peak) {
                        peak = fs[static_cast<size_t>(j)];
                        peak_idx = j;
                    }
                } else {
                    break;
                }
            }

            double a = ts[static_cast<size_t>(i)];
            double fa = fs[static_cast<size_t>(i)];
            if (i > 0) {
                a = refine_extremum(f, ts[static_cast<size_t>(i - 1)], ts[static_cast<size_t>(i + 1)],
                                    /*minimum=*/true, refine_tol);
                fa = f(a);
            }
            double b = ts[static_cast<size_t>(peak_idx)];
            double fb = fs[static_cast<size_t>(peak_idx)];
            if (peak_idx < n) {
                b = refine_extremum(f, ts[static_cast<size_t>(peak_idx - 1)],
                                    ts[static_cast<size_t>(std::min(peak_idx + 1, n))],
                                    /*maximum*/ false, refine_tol);
                fb = f(b);
            }
            if (fb - fa > noise && b > a) {
                res.total += fb - fa;
                res.intervals.push_back({a, b});
            }
            i = std::max(j, i + 1);
        }

        bool suspicious = false;
        for (const auto& iv : res.intervals)
            if (iv.b - iv.a < 0.5 * h && iv.b < window.t_end) suspicious = true;
        if (!suspicious) return res;
        if (attempt >= max_doublings)
            throw GridTooCoarse("accumulate_increase: oscillation faster than grid after doublings");
        n *= 2;
    }
}

}  // namespace nmq
