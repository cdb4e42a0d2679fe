// Test-side oracles, kept independent of the library implementation paths
// they check.
#ifndef QCURV_TESTS_ORACLES_HPP
#define QCURV_TESTS_ORACLES_HPP

#include <cmath>
#include <vector>

namespace oracle {

// Apply the radial Laplacian f'' + (n-1) f'/r symbolically to an even
// polynomial sum c_k r^{2k} (monomial rule a r^p -> a p (p+n-2) r^{p-2}).
inline std::vector<double> radial_laplacian_even(const std::vector<double>& c, int n) {
    if (c.size() <= 1) return {};
    std::vector<double> d(c.size() - 1, 0.0);
    for (std::size_t k = 1; k < c.size(); ++k)
        d[k - 1] = c[k] * (2.0 * k) * (2.0 * k + n - 2.0);
    return d;
}

// b_j oracle: Delta^j r^{2j} / (2j)!
inline double b_coefficient(int j, int n) {
    std::vector<double> c(j + 1, 0.0);
    c[j] = 1.0;
    for (int i = 0; i < j; ++i) c = radial_laplacian_even(c, n);
    double fact = 1.0;
    for (int i = 2; i <= 2 * j; ++i) fact *= i;
    return c[0] / fact;
}

// |S^k| from the half-integer Gamma closed forms
inline double sphere_area(int k) {
    const double pi = 3.14159265358979323846;
    if (k % 2 == 1) {
        const int m = (k + 1) / 2;
        double f = 1.0;
        for (int i = 2; i <= m - 1; ++i) f *= i;
        return 2.0 * std::pow(pi, m) / f;
    }
    const int m = k / 2;
    double mf = 1.0, m2f = 1.0;
    for (int i = 2; i <= m; ++i) mf *= i;
    for (int i = 2; i <= 2 * m; ++i) m2f *= i;
    return 2.0 * std::pow(pi, m) * std::pow(4.0, m) * mf / m2f;
}

// closed forms of the two explicit solutions
inline double bubble_u(double r) { return std::log(2.0 / (1.0 + r * r)); }
inline double ball_w(double r) { return std::log(2.0 / (1.0 - r * r)); }

// alpha(R) of the m=1 standard solution: R^2/(1+R^2)
inline double bubble_alpha_m1(double R) { return R * R / (1.0 + R * R); }

} // namespace oracle

#endif
