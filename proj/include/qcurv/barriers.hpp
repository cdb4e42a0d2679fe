#ifndef QCURV_BARRIERS_HPP
#define QCURV_BARRIERS_HPP

#include <utility>

#include "qcurv/integrate.hpp"
#include "qcurv/radial.hpp"

#include "json.hpp"

namespace qcurv {

enum class BarrierKind { UpperEven, LowerEven, UpperOdd, LowerOdd };

const char* to_string(BarrierKind k);

// Closed-form super/sub-solution. The construction inequalities are
// certified at build time (dense log-grid sampling plus the analytic tail
// comparison); cert_margin records the worst sampled slack.
struct Barrier {
    BarrierKind kind;
    double alpha1 = 0.0;         // UpperEven: w = alpha1 r^2 / 2
    double A = 0.0;              // LowerEven: log-term coefficient
    double beta = 0.0;           // UpperOdd: offset
    EvenRadialPoly poly;         // polynomial part of the lower barriers
    double cert_margin = 0.0;

    // Quadratic envelope w(r) <= -tail_delta r^2 + tail_C, set on upper
    // barriers; it certifies the volume tail bound.
    double tail_delta = 0.0;
    double tail_C = 0.0;

    double operator()(double r) const;

    nlohmann::ordered_json params_json() const;
};

// Case m even, Q < 0, alpha_0 = 0, alpha_1 < 0, alpha_j <= 0:
// upper barrier w_+ = alpha_1 r^2 / 2.
Barrier build_upper_even(const ShotSpec& spec);

// Matching lower barrier sum beta_i r^{2i} + A log((1+r^2)/2),
// with A from 1-D maximization (doubled) and beta_i forcing
// Delta^j (u - w_-)(0) >= 0.
Barrier build_lower_even(const ShotSpec& spec);

// Case m odd >= 3, Q < 0 with initial data below the upper barrier jets:
// w_+ = beta - r^2 + log((1+r^2)/2), w_- the even Taylor polynomial of the
// initial data.
std::pair<Barrier, Barrier> build_odd_pair(const ShotSpec& spec);

// Sample initial data compatible with build_odd_pair: alpha_i strictly under
// the upper barrier's even derivatives at 0 (and <= 0).
ShotSpec odd_case_spec(Dim dim, double Q, double margin = 0.1);

// Largest feasible beta for the odd-case upper barrier at this Q (numeric
// 1-D minimization of the constraint curve).
double odd_beta_bound(Dim dim, double Q);

struct SandwichReport {
    double min_upper = 0.0;   // min of w_+ - u over nodes
    double r_upper = 0.0;
    double min_lower = 0.0;   // min of u - w_- over nodes
    double r_lower = 0.0;
    double tol = 1e-8;
    bool pass = false;

    nlohmann::ordered_json to_json() const;
};

// Check w_- <= u <= w_+ along the trajectory nodes; PASS iff both margins
// stay above -tol (tolerance absorbs dense-output error).
SandwichReport verify_sandwich(const Trajectory& traj, const Barrier& upper,
                               const Barrier& lower, double tol = 1e-8);

} // namespace qcurv

#endif
