#ifndef QCURV_RADIAL_HPP
#define QCURV_RADIAL_HPP

#include <span>
#include <vector>

#include "qcurv/constants.hpp"

namespace qcurv {

// Phase point of the radial system: y[2j] = Delta^j u(r), y[2j+1] = (Delta^j u)'(r),
// j = 0..m-1. At r = 0 every odd slot vanishes (radial regularity).
struct RadialState {
    double r = 0.0;
    std::vector<double> y;

    double u() const { return y[0]; }
};

// One shooting attempt: dimension, curvature constant Q and the free even
// derivatives u^(2j)(0) = alpha[j]; odd derivatives at 0 are implicitly zero.
struct ShotSpec {
    Dim dim;
    double Q = 0.0;
    std::vector<double> alpha;   // size m

    ShotSpec(Dim d, double q, std::vector<double> a);
};

// d/dr of the state at r > 0:
//   y[2j]'   = y[2j+1]
//   y[2j+1]' = y[2j+2] - (n-1)/r y[2j+1]          (j < m-1)
//   y[2m-1]' = (-1)^m Q e^{2m y[0]} - (n-1)/r y[2m-1]
// Throws for r <= 0 (use taylor_start there). An overflowing source term
// comes back as +-inf and is treated as a blow-up by the integrator.
void rhs(const ShotSpec& spec, double r, std::span<const double> y, std::span<double> dydr);

// Even polynomial in r, stored as coefficients of r^{2k}. Closed under the
// radial Laplacian, which is what makes the series start at r = 0 exact.
struct EvenRadialPoly {
    std::vector<double> c;   // c[k] * r^{2k}

    double eval(double r) const;
    double deriv(double r) const;
    EvenRadialPoly laplacian(int n) const;   // Delta p in R^n, radial
};

// Degree-2m Taylor polynomial of u at r = 0: c_{2j} = alpha_j/(2j)! for
// j <= m-1 and c_{2m} = (-1)^m Q e^{2m alpha_0} / (b_m (2m)!), forced by the
// equation at the origin.
EvenRadialPoly start_polynomial(const ShotSpec& spec);

// State at r = h evaluated from the start polynomial, 0 < h <= h_max.
RadialState taylor_start(const ShotSpec& spec, double h, double h_max = 1e-3);

// Full state (all 2m slots) of an even polynomial at radius r.
RadialState poly_state(const EvenRadialPoly& p, Dim dim, double r);

// Delta^j u(0) = b_j alpha_j and back; round-trip is identity.
std::vector<double> deriv_to_laplacian(Dim dim, std::span<const double> alpha);
std::vector<double> laplacian_to_deriv(Dim dim, std::span<const double> lap);

} // namespace qcurv

#endif
