#include "qcurv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace qcurv {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace

double gk15(const std::function<double(double)>& f, double a, double b, double* err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double kron = wgk[7] * fv[7];
    double gauss = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) kron += wgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) gauss += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kron *= h;
    gauss *= h;
    if (err) *err = std::abs(kron - gauss);
    return kron;
}

QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_tol,
                         std::span<const double> breaks, int max_intervals) {
    QuadResult res;
    if (!(b > a)) {
        res.converged = true;
        return res;
    }

    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::priority_queue<Panel> queue;
    double total = 0.0, total_err = 0.0;
    auto push_panel = [&](double lo, double hi) {
        Panel p;
        p.a = lo;
        p.b = hi;
        p.value = gk15(f, lo, hi, &p.error);
        if (!std::isfinite(p.value)) throw std::runtime_error("quad_adaptive: non-finite integrand");
        total += p.value;
        total_err += p.error;
        queue.push(p);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) push_panel(pts[i], pts[i + 1]);

    int count = static_cast<int>(queue.size());
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
        Panel worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {   // interval at machine resolution
            total += worst.value;
            total_err += worst.error;
            break;
        }
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
        ++count;
    }
    res.value = total;
    res.error = total_err;
    res.intervals = count;
    res.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return res;
}

const GaussRule& gauss_legendre(int g) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;
    if (g < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(g);
    rule.weights.resize(g);
    for (int i = 0; i < (g + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on P_g
        double x = std::cos(M_PI * (i + 0.75) / (g + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < g; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1);
            }
            pp = g * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[g - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[g - 1 - i] = w;
    }
    return cache.emplace(g, std::move(rule)).first->second;
}

double upper_incomplete_gamma(int a, double x) {
    if (a < 1) throw std::invalid_argument("upper_incomplete_gamma: integer order must be >= 1");
    if (x < 0.0) throw std::invalid_argument("upper_incomplete_gamma: x must be >= 0");
    double fact = 1.0;
    for (int i = 2; i < a; ++i) fact *= i;
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < a; ++k) {
        if (k > 0) term *= x / k;
        sum += term;
    }
    return fact * std::exp(-x) * sum;
}

} // namespace qcurv
