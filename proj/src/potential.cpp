#include "qcurv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qcurv/quadrature.hpp"

namespace qcurv {

namespace {

double ipow(double x, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= x;
    return v;
}

// int_0^pi sin^p, p even: I_0 = pi, I_p = I_{p-2} (p-1)/p
double sin_power_integral(int p) {
    double v = std::numbers::pi;
    for (int q = 2; q <= p; q += 2) v *= (q - 1.0) / q;
    return v;
}

// Cholesky solve for the small normal systems of the fits
bool solve_spd(std::vector<std::vector<double>>& a, std::vector<double>& rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (int k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            if (i == j) {
                if (s <= 0.0) return false;
                a[i][i] = std::sqrt(s);
            } else {
                a[i][j] = s / a[j][j];
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= a[i][k] * rhs[k];
        rhs[i] = s / a[i][i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int k = i + 1; k < n; ++k) s -= a[k][i] * rhs[k];
        rhs[i] = s / a[i][i];
    }
    return true;
}

} // namespace

LogKernel::LogKernel(int n) : n_(n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("LogKernel: n must be even and >= 2");
    weight_norm_ = sin_power_integral(n - 2);
}

double LogKernel::psi(double rho) const {
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("LogKernel::psi: rho outside [0,1]");
    if (rho == 0.0) return 0.0;
    const double pi = std::numbers::pi;
    const double d = 1.0 - rho;
    auto g = [&](double theta) {
        const double s = std::sin(0.5 * theta);
        return 0.5 * std::log(d * d + 4.0 * rho * s * s) * ipow(std::sin(theta), n_ - 2);
    };
    // dyadic panels graded into theta = 0 until the integrand's variation
    // scale max(d/8, ~2^-54 pi) is resolved, then one panel across the
    // remaining smooth piece (Kronrod nodes are interior, so the rho = 1
    // log endpoint never gets evaluated at 0)
    const double theta_floor = std::max(0.125 * d, pi * 0x1p-54);
    double total = 0.0;
    double hi = pi;
    for (int j = 0; j < 60 && hi > 2.0 * theta_floor; ++j) {
        const double lo = 0.5 * hi;
        total += gk15(g, lo, hi, nullptr);
        hi = lo;
    }
    total += gk15(g, 0.0, hi, nullptr);
    return total / weight_norm_;
}

double LogKernel::operator()(double r, double s) const {
    if (r < 0.0 || s < 0.0) throw std::invalid_argument("LogKernel: radii must be >= 0");
    if (r == 0.0 && s == 0.0) throw std::invalid_argument("LogKernel: kernel undefined at r = s = 0");
    const double M = std::max(r, s);
    const double rho = std::min(r, s) / M;
    return std::log(M) + psi(rho);
}

PotentialValue potential_v(const RadialDensity& dens, double r) {
    if (r < 0.0 || r > dens.coverage() * (1.0 + 1e-12))
        throw std::out_of_range("potential_v: r outside coverage");
    PotentialValue out;
    if (r == 0.0) {   // kernel factor vanishes identically
        out.tail_certified = dens.tail().has_value();
        return out;
    }
    const Dim dim = dens.dim();
    const LogKernel kernel(dim.n());
    const double K = 2.0 * dens.surf_ratio();   // (2m-1)! |S^{2m-1}| / gamma_m
    const double R = dens.coverage();

    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double w = kernel(r, s) - std::log(s);
        return w * dens.density(s);
    };
    std::vector<double> breaks = dens.breaks();
    breaks.push_back(r);
    breaks.push_back(0.5 * r);
    breaks.push_back(2.0 * r);
    const auto q = quad_adaptive(f, 0.0, R, 1e-9, 1e-300, breaks);
    out.v = K * q.value;

    const TailBound tb = tail_bound(dens, R);
    if (tb.certified) {
        // kernel factor on [R, inf) is psi(r/s) <= psi bound; be generous with psi(1)
        const double psi_cap = std::max(kernel.psi(std::min(r / R, 1.0)), kernel.psi(1.0));
        out.tail_err = 2.0 * psi_cap * tb.bound;
        out.tail_certified = true;
    }
    return out;
}

std::vector<double> potential_profile(const RadialDensity& dens, std::span<const double> rs,
                                      Exec mode) {
    std::vector<double> vs(rs.size());
    parallel_for(rs.size(), mode, [&](std::size_t i) { vs[i] = potential_v(dens, rs[i]).v; });
    return vs;
}

SlopeFit slope_estimate(std::span<const double> rs, std::span<const double> vs) {
    if (rs.size() != vs.size()) throw std::invalid_argument("slope_estimate: size mismatch");
    if (rs.size() < 8) throw std::invalid_argument("slope_estimate: need at least 8 samples");
    const std::size_t from = rs.size() / 2;
    const std::size_t n = rs.size() - from;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = from; i < rs.size(); ++i) {
        sx += std::log(rs[i]);
        sy += vs[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = from; i < rs.size(); ++i) {
        const double dx = std::log(rs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (vs[i] - my);
    }
    SlopeFit fit;
    fit.points_used = static_cast<int>(n);
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = from; i < rs.size(); ++i) {
        const double e = vs[i] - my - fit.slope * (std::log(rs[i]) - mx);
        rss += e * e;
    }
    fit.half_width = (n > 2) ? 2.0 * std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return fit;
}

double Decomposition::eval(double r) const {
    double v = 0.0;
    const double r2 = r * r;
    for (std::size_t k = p.size(); k-- > 0;) v = v * r2 + p[k];
    return v;
}

namespace {

// least squares of y against the scaled even basis (r/R2)^{2k}, k < nb
bool fit_even_poly(std::span<const double> rs, std::span<const double> y, double R2, int nb,
                   std::vector<double>& coef) {
    std::vector<std::vector<double>> ata(nb, std::vector<double>(nb, 0.0));
    std::vector<double> aty(nb, 0.0);
    std::vector<double> row(nb);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double t2 = (rs[i] / R2) * (rs[i] / R2);
        double tk = 1.0;
        for (int k = 0; k < nb; ++k) {
            row[k] = tk;
            tk *= t2;
        }
        for (int a = 0; a < nb; ++a) {
            aty[a] += row[a] * y[i];
            for (int b = 0; b <= a; ++b) ata[a][b] += row[a] * row[b];
        }
    }
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) ata[a][b] = ata[b][a];
    coef = aty;
    return solve_spd(ata, coef);
}

} // namespace

Decomposition decompose_p(const Trajectory& traj, std::span<const double> rs,
                          std::span<const double> vs) {
    if (rs.size() != vs.size() || rs.empty())
        throw std::invalid_argument("decompose_p: bad sample arrays");
    const int m = traj.spec.dim.m;
    if (rs.size() < static_cast<std::size_t>(m + 2))
        throw std::invalid_argument("decompose_p: too few samples for the basis");
    const double R2 = rs.back();

    Decomposition dec;
    dec.window_lo = rs.front();
    dec.window_hi = rs.back();

    std::vector<double> y(rs.size());
    double yscale = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        y[i] = traj.eval_u(rs[i]) - vs[i];
        yscale = std::max(yscale, std::abs(y[i]));
    }

    std::vector<double> coef;
    dec.well_conditioned = fit_even_poly(rs, y, R2, m, coef);
    if (!dec.well_conditioned) {
        dec.residual = std::numeric_limits<double>::quiet_NaN();
        return dec;
    }
    dec.p.resize(m);
    for (int k = 0; k < m; ++k) dec.p[k] = coef[k] / ipow(R2, 2 * k);

    double max_err = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        max_err = std::max(max_err, std::abs(dec.eval(rs[i]) - y[i]));
    dec.residual = max_err / std::max(yscale, 1e-300);

    // separate over-fit with one extra even term; its coefficient staying
    // near zero witnesses the degree <= 2m-2 bound
    std::vector<double> over;
    if (fit_even_poly(rs, y, R2, m + 1, over))
        dec.overfit_coeff = over[m] / ipow(R2, 2 * m);
    else
        dec.overfit_coeff = std::numeric_limits<double>::quiet_NaN();

    dec.fitted_degree = 0;
    for (int k = 1; k < m; ++k)
        if (std::abs(dec.p[k]) * ipow(dec.window_hi, 2 * k) > 1e-6 * std::max(yscale, 1e-12))
            dec.fitted_degree = 2 * k;
    return dec;
}

LaplacianLimits laplacian_limits(const Trajectory& traj) {
    if (traj.status != StopReason::ReachedRmax)
        throw std::invalid_argument("laplacian_limits: trajectory did not reach r_max");
    const int m = traj.spec.dim.m;
    LaplacianLimits out;
    const double R = traj.r_end();
    const double lo = R / 10.0;
    const int ns = 33;
    std::vector<double> sample_r(ns);
    for (int i = 0; i < ns; ++i)
        sample_r[i] = lo * std::pow(R / lo, static_cast<double>(i) / (ns - 1));

    for (int ell = 1; ell < m; ++ell) {
        LaplacianLevel lev;
        lev.ell = ell;
        double mn = std::numeric_limits<double>::infinity(), mx = -mn, sum = 0.0;
        for (double r : sample_r) {
            const double val = traj.eval(r).y[2 * ell];
            mn = std::min(mn, val);
            mx = std::max(mx, val);
            sum += val;
        }
        lev.mean = sum / ns;
        lev.drift = mx - mn;
        lev.at_end = traj.eval(R).y[2 * ell];
        out.levels.push_back(lev);
    }
    for (int i = static_cast<int>(out.levels.size()) - 1; i >= 0; --i) {
        const auto& lev = out.levels[i];
        if (std::abs(lev.mean) > 10.0 * lev.drift) {
            out.conclusive = true;
            out.j = lev.ell;
            out.a = lev.mean;
            out.drift = lev.drift;
            break;
        }
    }
    return out;
}

double scalar_curvature(const Trajectory& traj, double r) {
    const int m = traj.spec.dim.m;
    const int n = traj.spec.dim.n();
    const RadialState st = traj.eval(r);
    const double u = st.y[0];
    const double up = st.y[1];
    double lap_u;
    if (m >= 2) {
        lap_u = st.y[2];
    } else {
        // m = 1: Delta u = -Q e^{2u} from the equation itself
        lap_u = -traj.spec.Q * std::exp(2.0 * u);
    }
    return std::exp(-2.0 * u) *
           (-2.0 * (n - 1) * lap_u - (n - 1.0) * (n - 2.0) * up * up);
}

std::optional<double> curvature_crossing(const Trajectory& traj, double threshold, int samples) {
    const double r0 = traj.r_begin();
    const double R = traj.r_end();
    for (int i = 0; i <= samples; ++i) {
        const double r = r0 + (R - r0) * static_cast<double>(i) / samples;
        if (scalar_curvature(traj, r) < threshold) return r;
    }
    return std::nullopt;
}

} // namespace qcurv
