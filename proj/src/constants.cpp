#include "qcurv/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcurv {

Dim::Dim(int m_) : m(m_) {
    if (m < 1) throw std::invalid_argument("Dim: m must be >= 1");
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double sphere_area(int k) {
    // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2), with the half-integer Gamma
    // expanded so no tgamma rounding enters.
    if (k < 0) throw std::invalid_argument("sphere_area: k must be >= 0");
    const double pi = std::numbers::pi;
    if (k % 2 == 1) {
        int m = (k + 1) / 2;              // k = 2m-1, Gamma(m) = (m-1)!
        return 2.0 * std::pow(pi, m) / factorial(m - 1);
    }
    int m = k / 2;                        // k = 2m, Gamma(m+1/2) = (2m)! sqrt(pi) / (4^m m!)
    return 2.0 * std::pow(pi, m) * std::pow(4.0, m) * factorial(m) / factorial(2 * m);
}

std::pair<double, double> surface_areas(Dim dim) {
    return {sphere_area(2 * dim.m - 1), sphere_area(2 * dim.m)};
}

std::vector<double> laplacian_coeffs(Dim dim) {
    const int n = dim.n();
    std::vector<double> b(dim.m);
    double prod = 1.0;
    for (int j = 1; j <= dim.m; ++j) {
        prod *= 2.0 * j * (2.0 * j + n - 2);
        b[j - 1] = prod / factorial(2 * j);
    }
    return b;
}

double gamma_const(Dim dim) {
    const int m = dim.m;
    double f = factorial(m - 1);
    return sphere_area(2 * m - 1) * std::pow(2.0, 2 * m - 2) * f * f;
}

Constants::Constants(Dim d)
    : dim(d),
      b(laplacian_coeffs(d)),
      gamma_m(gamma_const(d)),
      surf_odd(sphere_area(2 * d.m - 1)),
      surf_even(sphere_area(2 * d.m)),
      fact(factorial(2 * d.m - 1)) {}

} // namespace qcurv
