#ifndef QCURV_CONSTANTS_HPP
#define QCURV_CONSTANTS_HPP

#include <utility>
#include <vector>

namespace qcurv {

// Half the space dimension. Everything here lives on R^n with n = 2m even.
struct Dim {
    int m;
    explicit Dim(int m_);
    int n() const { return 2 * m; }
};

// |S^k|, area of the unit k-sphere in R^{k+1}.
double sphere_area(int k);

// (|S^{2m-1}|, |S^{2m}|)
std::pair<double, double> surface_areas(Dim dim);

// b_1..b_m with Delta^j u(0) = b_j u^(2j)(0) for smooth radial u,
// b_j = prod_{k=1..j} 2k(2k+n-2) / (2j)!.
std::vector<double> laplacian_coeffs(Dim dim);

// Normalization gamma_m of the fundamental solution of (-Delta)^m on R^{2m},
// gamma_m = |S^{2m-1}| 2^{2m-2} ((m-1)!)^2. Satisfies (2m-1)! |S^{2m}| / gamma_m = 2.
double gamma_const(Dim dim);

double factorial(int k);

// Bundle of the dimension-dependent constants used throughout.
struct Constants {
    Dim dim;
    std::vector<double> b;   // b[j-1] = b_j
    double gamma_m;
    double surf_odd;         // |S^{2m-1}|
    double surf_even;        // |S^{2m}|
    double fact;             // (2m-1)!

    explicit Constants(Dim d);
};

} // namespace qcurv

#endif
