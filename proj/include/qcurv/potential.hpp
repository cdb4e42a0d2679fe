#ifndef QCURV_POTENTIAL_HPP
#define QCURV_POTENTIAL_HPP

#include <optional>
#include <span>
#include <vector>

#include "qcurv/parallel.hpp"
#include "qcurv/volume.hpp"

namespace qcurv {

// Spherical mean of the log kernel:
//   A(r, s) = mean over w in S^{n-1} of log|r e_1 - s w|
//           = log max(r,s) + psi(min/max),
// with psi the mean of (1/2) log(1 - 2 rho cos(theta) + rho^2) under the
// sin^{n-2} weight. The theta integral is done on dyadic panels graded into
// the theta = 0 endpoint, which resolves the log singularity at rho = 1.
class LogKernel {
public:
    explicit LogKernel(int n);

    double operator()(double r, double s) const;   // A(r, s)
    double psi(double rho) const;
    int n() const { return n_; }

private:
    int n_;
    double weight_norm_;   // int_0^pi sin^{n-2}
};

struct PotentialValue {
    double v = 0.0;
    double tail_err = 0.0;   // bound on the neglected tail contribution
    bool tail_certified = false;
};

// v(r) = ((2m-1)!/gamma_m) |S^{2m-1}| int_0^inf [A(r,s) - log s] e^{2mu(s)} s^{2m-1} ds.
// v(0) = 0 identically. Without a tail certificate the value is still
// computed over the covered range but flagged.
PotentialValue potential_v(const RadialDensity& dens, double r);

// v on a grid of radii; the grid points are independent, so this is one of
// the OpenMP kernels.
std::vector<double> potential_profile(const RadialDensity& dens, std::span<const double> rs,
                                      Exec mode = Exec::Parallel);

struct SlopeFit {
    double slope = 0.0;
    double half_width = 0.0;   // ~2 sigma confidence on the slope
    int points_used = 0;
};

// Least-squares slope of v against log r over the outer half of a geometric
// grid (needs >= 8 samples).
SlopeFit slope_estimate(std::span<const double> rs, std::span<const double> vs);

struct Decomposition {
    std::vector<double> p;       // p[k] r^{2k}, k = 0..m-1
    double residual = 0.0;       // max |fit - y| / max |y| on the window
    double window_lo = 0.0;
    double window_hi = 0.0;
    double overfit_coeff = 0.0;  // fitted r^{2m} coefficient (degree check)
    int fitted_degree = 0;       // largest even degree with a significant coefficient
    bool well_conditioned = true;

    double eval(double r) const;
};

// Fit u - v on [window] by sum p_k r^{2k}, k <= m-1, plus a deliberate r^{2m}
// over-fit term whose smallness witnesses the degree bound.
Decomposition decompose_p(const Trajectory& traj, std::span<const double> rs,
                          std::span<const double> vs);

struct LaplacianLevel {
    int ell = 0;        // which Delta^ell u
    double mean = 0.0;  // over the outer decade
    double drift = 0.0; // max - min over the outer decade
    double at_end = 0.0;
};

struct LaplacianLimits {
    std::vector<LaplacianLevel> levels;   // ell = 1..m-1
    bool conclusive = false;
    int j = 0;          // largest ell with |mean| > 10 drift
    double a = 0.0;
    double drift = 0.0;
};

// Limit estimates of Delta^ell u over the outer decade of the run.
LaplacianLimits laplacian_limits(const Trajectory& traj);

// Scalar curvature of e^{2u} g_flat in dimension n = 2m:
//   R = e^{-2u} (-2(n-1) Delta u - (n-1)(n-2) (u')^2),
// normalized so the standard m=1 solution gives R = 2.
double scalar_curvature(const Trajectory& traj, double r);

// First radius where the running min of R crosses below the threshold.
std::optional<double> curvature_crossing(const Trajectory& traj, double threshold,
                                         int samples = 400);

} // namespace qcurv

#endif
