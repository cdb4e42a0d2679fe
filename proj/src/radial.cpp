#include "qcurv/radial.hpp"

#include <cmath>
#include <stdexcept>

namespace qcurv {

ShotSpec::ShotSpec(Dim d, double q, std::vector<double> a)
    : dim(d), Q(q), alpha(std::move(a)) {
    if (static_cast<int>(alpha.size()) != dim.m)
        throw std::invalid_argument("ShotSpec: need exactly m initial even derivatives");
}

void rhs(const ShotSpec& spec, double r, std::span<const double> y, std::span<double> dydr) {
    const int m = spec.dim.m;
    const int n = spec.dim.n();
    if (r <= 0.0) throw std::invalid_argument("rhs: r must be positive");
    if (static_cast<int>(y.size()) != 2 * m || dydr.size() != y.size())
        throw std::invalid_argument("rhs: state size mismatch");

    const double inv_r = (n - 1) / r;
    for (int j = 0; j + 1 < m; ++j) {
        dydr[2 * j] = y[2 * j + 1];
        dydr[2 * j + 1] = y[2 * j + 2] - inv_r * y[2 * j + 1];
    }
    dydr[2 * m - 2] = y[2 * m - 1];
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    dydr[2 * m - 1] = sign * spec.Q * std::exp(2.0 * m * y[0]) - inv_r * y[2 * m - 1];
}

double EvenRadialPoly::eval(double r) const {
    const double r2 = r * r;
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * r2 + c[k];
    return v;
}

double EvenRadialPoly::deriv(double r) const {
    const double r2 = r * r;
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * r2 + 2.0 * k * c[k];
    return v * r;
}

EvenRadialPoly EvenRadialPoly::laplacian(int n) const {
    // Delta r^{2k} = 2k (2k + n - 2) r^{2k-2}
    EvenRadialPoly out;
    if (c.size() <= 1) return out;
    out.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k)
        out.c[k - 1] = c[k] * 2.0 * k * (2.0 * k + n - 2);
    return out;
}

EvenRadialPoly start_polynomial(const ShotSpec& spec) {
    const int m = spec.dim.m;
    EvenRadialPoly p;
    p.c.resize(m + 1);
    for (int j = 0; j < m; ++j) p.c[j] = spec.alpha[j] / factorial(2 * j);
    const double b_m = laplacian_coeffs(spec.dim).back();
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    p.c[m] = sign * spec.Q * std::exp(2.0 * m * spec.alpha[0]) / (b_m * factorial(2 * m));
    return p;
}

RadialState poly_state(const EvenRadialPoly& p, Dim dim, double r) {
    RadialState st;
    st.r = r;
    st.y.resize(2 * dim.m);
    EvenRadialPoly q = p;
    for (int j = 0; j < dim.m; ++j) {
        st.y[2 * j] = q.eval(r);
        st.y[2 * j + 1] = q.deriv(r);
        if (j + 1 < dim.m) q = q.laplacian(dim.n());
    }
    return st;
}

RadialState taylor_start(const ShotSpec& spec, double h, double h_max) {
    if (h <= 0.0) throw std::invalid_argument("taylor_start: h must be positive");
    if (h > h_max) throw std::invalid_argument("taylor_start: h exceeds h_max");
    return poly_state(start_polynomial(spec), spec.dim, h);
}

std::vector<double> deriv_to_laplacian(Dim dim, std::span<const double> alpha) {
    if (static_cast<int>(alpha.size()) != dim.m)
        throw std::invalid_argument("deriv_to_laplacian: size mismatch");
    auto b = laplacian_coeffs(dim);
    std::vector<double> lap(alpha.begin(), alpha.end());
    for (int j = 1; j < dim.m; ++j) lap[j] *= b[j - 1];
    return lap;
}

std::vector<double> laplacian_to_deriv(Dim dim, std::span<const double> lap) {
    if (static_cast<int>(lap.size()) != dim.m)
        throw std::invalid_argument("laplacian_to_deriv: size mismatch");
    auto b = laplacian_coeffs(dim);
    std::vector<double> alpha(lap.begin(), lap.end());
    for (int j = 1; j < dim.m; ++j) alpha[j] /= b[j - 1];
    return alpha;
}

} // namespace qcurv
