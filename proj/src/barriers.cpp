#include "qcurv/barriers.hpp"

#include <cmath>
#include <stdexcept>

namespace qcurv {

namespace {

// golden-section maximum of f on [a, b]
double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

void require_even_case(const ShotSpec& spec) {
    const int m = spec.dim.m;
    if (m % 2 != 0) throw std::invalid_argument("even-case barrier: m must be even");
    if (!(spec.Q < 0.0)) throw std::invalid_argument("even-case barrier: Q must be negative");
    if (spec.alpha[0] != 0.0) throw std::invalid_argument("even-case barrier: alpha_0 must be 0");
    if (!(spec.alpha[1] < 0.0)) throw std::invalid_argument("even-case barrier: alpha_1 must be negative");
    for (double a : spec.alpha)
        if (a > 0.0) throw std::invalid_argument("even-case barrier: alpha_j must be <= 0");
}

// Even derivatives at 0 of the odd-case upper barrier
// w_+ = beta - r^2 + log((1+r^2)/2):
//   w_+(0) = beta - log 2, w_+''(0) = 0, w_+^(2i)(0) = (-1)^{i+1} (2i)!/i  (i >= 2)
double odd_upper_jet(double beta, int i) {
    if (i == 0) return beta - std::log(2.0);
    if (i == 1) return 0.0;
    double v = factorial(2 * i) / i;
    return (i % 2 == 0) ? -v : v;
}

} // namespace

const char* to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::UpperEven: return "UpperEven";
        case BarrierKind::LowerEven: return "LowerEven";
        case BarrierKind::UpperOdd: return "UpperOdd";
        case BarrierKind::LowerOdd: return "LowerOdd";
    }
    return "?";
}

double Barrier::operator()(double r) const {
    switch (kind) {
        case BarrierKind::UpperEven:
            return 0.5 * alpha1 * r * r;
        case BarrierKind::LowerEven:
            return poly.eval(r) + A * std::log(0.5 * (1.0 + r * r));
        case BarrierKind::UpperOdd:
            return beta - r * r + std::log(0.5 * (1.0 + r * r));
        case BarrierKind::LowerOdd:
            return poly.eval(r);
    }
    return 0.0;
}

nlohmann::ordered_json Barrier::params_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    switch (kind) {
        case BarrierKind::UpperEven: j["alpha1"] = alpha1; break;
        case BarrierKind::LowerEven: j["A"] = A; j["beta_i"] = poly.c; break;
        case BarrierKind::UpperOdd: j["beta"] = beta; break;
        case BarrierKind::LowerOdd: j["beta_i"] = poly.c; break;
    }
    j["cert_margin"] = cert_margin;
    if (tail_delta > 0.0) {
        j["tail_delta"] = tail_delta;
        j["tail_C"] = tail_C;
    }
    return j;
}

Barrier build_upper_even(const ShotSpec& spec) {
    require_even_case(spec);
    Barrier b;
    b.kind = BarrierKind::UpperEven;
    b.alpha1 = spec.alpha[1];
    b.tail_delta = 0.5 * (-spec.alpha[1]);
    b.tail_C = 0.0;
    return b;
}

Barrier build_lower_even(const ShotSpec& spec) {
    require_even_case(spec);
    const int m = spec.dim.m;
    const double a1 = spec.alpha[1];
    const double scale = -spec.Q / factorial(2 * m - 1);   // |Q|/(2m-1)!

    // smallest A with A (2/(1+r^2))^{2m} >= (|Q|/(2m-1)!) e^{m a1 r^2}:
    // maximize log of the ratio over t = r^2, then double.
    auto logf = [&](double t) {
        return m * a1 * t + 2.0 * m * std::log(0.5 * (1.0 + t)) + std::log(scale);
    };
    const double t_hi = std::max(10.0, 4.0 * (2.0 / -a1));
    const double t_star = golden_max(logf, 0.0, t_hi);
    const double A = 2.0 * std::exp(std::max(logf(t_star), logf(0.0)));

    Barrier b;
    b.kind = BarrierKind::LowerEven;
    b.A = A;

    // certify A (2/(1+r^2))^{2m} - (|Q|/(2m-1)!) e^{m a1 r^2} >= 0 on a log grid;
    // past the maximizer the ratio is monotone (Gaussian loses to rational decay),
    // so the grid up to 10^3 together with t_star << 10^6 settles the tail.
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 600; ++i) {
        const double r = (i == 0) ? 0.0 : std::pow(10.0, -3.0 + 6.0 * (i - 1) / 599.0);
        const double lhs = A * std::pow(2.0 / (1.0 + r * r), 2 * m);
        const double rhs = scale * std::exp(m * a1 * r * r);
        worst = std::min(worst, lhs - rhs);
    }
    if (worst < 0.0) throw std::runtime_error("build_lower_even: barrier certification failed");
    b.cert_margin = worst;

    // beta_j so that Delta^j (u - w_-)(0) = 0, using the jets of the log term:
    // Delta^j [log((1+r^2)/2)](0) = -log 2 (j=0), (-1)^{j+1} Lambda_j / j (j>=1),
    // Lambda_j = b_j (2j)!.
    auto bj = laplacian_coeffs(spec.dim);
    b.poly.c.resize(m);
    for (int j = 0; j < m; ++j) {
        const double lambda_j = (j == 0) ? 1.0 : bj[j - 1] * factorial(2 * j);
        double L_j;
        if (j == 0) L_j = -std::log(2.0);
        else L_j = ((j % 2 == 1) ? 1.0 : -1.0) * lambda_j / j;
        const double lap_u0 = (j == 0) ? spec.alpha[0] : bj[j - 1] * spec.alpha[j];
        b.poly.c[j] = (lap_u0 - A * L_j) / lambda_j;
    }
    return b;
}

double odd_beta_bound(Dim dim, double Q) {
    const int m = dim.m;
    if (!(Q < 0.0)) throw std::invalid_argument("odd_beta_bound: Q must be negative");
    const double shift = std::log(factorial(2 * m - 1) / -Q) / (2.0 * m);
    // minimize r^2 + 2 log(2/(1+r^2)) over r (numeric; the minimum sits at r = 1)
    auto neg = [&](double t) { return -(t + 2.0 * std::log(2.0 / (1.0 + t))); };
    const double t_star = golden_max(neg, 0.0, 50.0);
    return -neg(t_star) + shift;
}

ShotSpec odd_case_spec(Dim dim, double Q, double margin) {
    const int m = dim.m;
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("odd_case_spec: m must be odd and >= 3");
    if (!(margin > 0.0)) throw std::invalid_argument("odd_case_spec: margin must be positive");
    const double beta = std::min(-0.5, odd_beta_bound(dim, Q) - 0.5);
    std::vector<double> alpha(m);
    for (int i = 0; i < m; ++i)
        alpha[i] = std::min(odd_upper_jet(beta, i) - margin, -margin);
    return ShotSpec(dim, Q, alpha);
}

std::pair<Barrier, Barrier> build_odd_pair(const ShotSpec& spec) {
    const int m = spec.dim.m;
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("build_odd_pair: m must be odd and >= 3");
    if (!(spec.Q < 0.0)) throw std::invalid_argument("build_odd_pair: Q must be negative");

    const double beta_max = odd_beta_bound(spec.dim, spec.Q);
    const double beta = std::min(-0.5, beta_max - 0.5);

    Barrier up;
    up.kind = BarrierKind::UpperOdd;
    up.beta = beta;
    // w_+ <= -r^2/2 + beta since log((1+r^2)/2) <= r^2/2
    up.tail_delta = 0.5;
    up.tail_C = beta;

    // initial data must sit strictly under the barrier jets
    for (int i = 0; i < m; ++i) {
        if (!(spec.alpha[i] < odd_upper_jet(beta, i)))
            throw std::invalid_argument("build_odd_pair: alpha_" + std::to_string(i) +
                                        " not below the upper barrier jet");
        if (spec.alpha[i] > 0.0)
            throw std::invalid_argument("build_odd_pair: alpha_j must be <= 0");
    }

    // feasibility predicate e^{2m(beta - r^2)} <= ((2m-1)!/|Q|) (2/(1+r^2))^{4m},
    // sampled on a log grid
    const double scale = factorial(2 * m - 1) / -spec.Q;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 600; ++i) {
        const double r = (i == 0) ? 0.0 : std::pow(10.0, -3.0 + 6.0 * (i - 1) / 599.0);
        const double lhs = scale * std::pow(2.0 / (1.0 + r * r), 4 * m);
        const double rhs = std::exp(2.0 * m * (beta - r * r));
        worst = std::min(worst, lhs - rhs);
    }
    if (worst < 0.0) throw std::runtime_error("build_odd_pair: beta certification failed");
    up.cert_margin = worst;

    Barrier low;
    low.kind = BarrierKind::LowerOdd;
    low.poly.c.resize(m);
    for (int i = 0; i < m; ++i) low.poly.c[i] = spec.alpha[i] / factorial(2 * i);
    return {up, low};
}

nlohmann::ordered_json SandwichReport::to_json() const {
    nlohmann::ordered_json j;
    j["pass"] = pass;
    j["min_upper_margin"] = min_upper;
    j["at_r_upper"] = r_upper;
    j["min_lower_margin"] = min_lower;
    j["at_r_lower"] = r_lower;
    j["tol"] = tol;
    return j;
}

SandwichReport verify_sandwich(const Trajectory& traj, const Barrier& upper,
                               const Barrier& lower, double tol) {
    SandwichReport rep;
    rep.tol = tol;
    rep.min_upper = rep.min_lower = std::numeric_limits<double>::infinity();
    auto consider = [&](double r, double u) {
        const double mu = upper(r) - u;
        const double ml = u - lower(r);
        if (mu < rep.min_upper) { rep.min_upper = mu; rep.r_upper = r; }
        if (ml < rep.min_lower) { rep.min_lower = ml; rep.r_lower = r; }
    };
    if (traj.has_start_poly()) consider(0.0, traj.start_poly().eval(0.0));
    for (const auto& nd : traj.nodes()) {
        if (nd.r > traj.r_end()) break;
        consider(nd.r, nd.y[0]);
    }
    rep.pass = rep.min_upper >= -tol && rep.min_lower >= -tol;
    return rep;
}

} // namespace qcurv
