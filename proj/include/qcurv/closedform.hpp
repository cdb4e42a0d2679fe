#ifndef QCURV_CLOSEDFORM_HPP
#define QCURV_CLOSEDFORM_HPP

#include <map>

#include "qcurv/constants.hpp"
#include "qcurv/radial.hpp"
#include "qcurv/rational.hpp"

namespace qcurv {

// Radial functions of the form
//     d * log(2/(1 + sigma r^2)) + sum_k c_k (1 + sigma r^2)^{-k}
// with exact rational coefficients, sigma = +1 (sphere family) or -1
// (ball family). The family is closed under the radial Laplacian:
//     Delta (1+sr^2)^{-k} = s[4k(k+1) - 2kn] (1+sr^2)^{-k-1} - s 4k(k+1) (1+sr^2)^{-k-2}
//     Delta log(2/(1+sr^2)) = -s 2(n-2) (1+sr^2)^{-1} - s 4 (1+sr^2)^{-2}
// so iterated Laplacians of log(2/(1+-r^2)) are exact. This is the engine
// behind the residual checks of the verification suite.
class RadialClosedForm {
public:
    RadialClosedForm(int sigma = 1) : sigma_(sigma) {}

    static RadialClosedForm log_sphere();   // log(2/(1+r^2)), entire
    static RadialClosedForm log_ball();     // log(2/(1-r^2)), |r| < 1

    RadialClosedForm laplacian(int n) const;
    RadialClosedForm iterated_laplacian(int n, int times) const;

    double eval(double r) const;
    double deriv(double r) const;

    int sigma() const { return sigma_; }

    // Full radial state (Delta^j f, (Delta^j f)') at radius r.
    RadialState state(Dim dim, double r) const;

private:
    int sigma_;
    Rational log_coeff_;
    std::map<int, Rational> pow_;   // k -> c_k, k >= 0
};

} // namespace qcurv

#endif
