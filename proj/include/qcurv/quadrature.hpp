#ifndef QCURV_QUADRATURE_HPP
#define QCURV_QUADRATURE_HPP

#include <functional>
#include <span>

namespace qcurv {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    int intervals = 0;
    bool converged = false;
};

// Single Gauss-Kronrod 7-15 panel on [a, b]; err receives |K15 - G7|.
double gk15(const std::function<double(double)>& f, double a, double b, double* err);

// Globally adaptive Gauss-Kronrod quadrature on [a, b]. Stops when the
// summed error estimate drops below max(abs_tol, rel_tol*|I|). Optional
// break points force initial subdivisions (integrand kinks, support edges).
QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_tol,
                         std::span<const double> breaks = {}, int max_intervals = 4000);

// Upper incomplete gamma for integer order: Gamma(a, x) = (a-1)! e^{-x} sum_{k<a} x^k/k!.
double upper_incomplete_gamma(int a, double x);

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_g).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int g);

} // namespace qcurv

#endif
