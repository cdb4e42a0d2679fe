// Dormand-Prince 5(4) with the quartic dense-output interpolant and
// PI stepsize control, after Hairer, Norsett & Wanner (DOPRI5).
#include "qcurv/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcurv {

namespace {

constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
constexpr double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;

double dense_component(const std::vector<double>& rc, int dim2, int i, double theta) {
    const double th1 = 1.0 - theta;
    return rc[i] +
           theta * (rc[dim2 + i] +
                    th1 * (rc[2 * dim2 + i] +
                           theta * (rc[3 * dim2 + i] + th1 * rc[4 * dim2 + i])));
}

Trajectory run(Trajectory traj, RadialState st, const ShotSpec& spec,
               const IntegratorConfig& cfg) {
    const int dim2 = 2 * spec.dim.m;
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> y = st.y, ynew(dim2), ytmp(dim2);
    std::vector<double> k1(dim2), k2(dim2), k3(dim2), k4(dim2), k5(dim2), k6(dim2), k7(dim2);
    double r = st.r;
    double h = std::min(cfg.h0, cfg.r_max - r);
    double facold = 1e-4;

    traj.push_node(r, y);
    rhs(spec, r, y, k1);

    auto finish = [&](StopReason reason, double stop, std::string note) {
        traj.status = reason;
        traj.r_stop = stop;
        traj.note = std::move(note);
        return traj;
    };

    long steps = 0;
    bool last = false;
    while (true) {
        if (++steps > cfg.max_steps)
            return finish(StopReason::StepUnderflow, r, "max_steps exceeded");
        if (0.1 * h <= r * eps) {
            if (y[0] > 0.5 * cfg.u_max)
                return finish(StopReason::BlowUp, r, "step underflow while u rising");
            return finish(StopReason::StepUnderflow, r, "step size underflow");
        }
        if (r + 1.01 * h >= cfg.r_max) {
            h = cfg.r_max - r;
            last = true;
        } else {
            last = false;
        }

        for (int i = 0; i < dim2; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(spec, r + c2 * h, ytmp, k2);
        for (int i = 0; i < dim2; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(spec, r + c3 * h, ytmp, k3);
        for (int i = 0; i < dim2; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(spec, r + c4 * h, ytmp, k4);
        for (int i = 0; i < dim2; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(spec, r + c5 * h, ytmp, k5);
        for (int i = 0; i < dim2; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(spec, r + h, ytmp, k6);
        for (int i = 0; i < dim2; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        rhs(spec, r + h, ynew, k7);

        double err = 0.0;
        for (int i = 0; i < dim2; ++i) {
            const double ee = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ee / sc) * (ee / sc);
        }
        err = std::sqrt(err / dim2);
        if (!std::isfinite(err)) err = 1e10;

        const double fac11 = std::pow(err, 0.2 - beta * 0.75);
        if (err > 1.0) {
            h /= std::min(1.0 / facl, fac11 / safe);
            continue;
        }

        // accepted: assemble the dense interpolant for [r, r+h]
        std::vector<double> rc(5 * dim2);
        for (int i = 0; i < dim2; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            rc[i] = y[i];
            rc[dim2 + i] = ydiff;
            rc[2 * dim2 + i] = bspl;
            rc[3 * dim2 + i] = ydiff - h * k7[i] - bspl;
            rc[4 * dim2 + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                    d6 * k6[i] + d7 * k7[i]);
        }
        traj.push_interval(std::move(rc));
        r += h;
        y = ynew;
        traj.push_node(r, y);
        k1.swap(k7);

        if (y[0] > cfg.u_max) {
            // locate the crossing inside the last interval for the report
            traj.r_stop = r;
            double lo = r - h, hi = r;
            for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (traj.eval(mid).y[0] > cfg.u_max) hi = mid;
                else lo = mid;
            }
            return finish(StopReason::BlowUp, hi, "u exceeded u_max");
        }
        if (last) return finish(StopReason::ReachedRmax, r, "");

        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(1.0 / facr, std::min(1.0 / facl, fac / safe));
        facold = std::max(err, 1e-4);
        h /= fac;
    }
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
    if (!(r_max > h0) || !(h0 > 0.0))
        throw std::invalid_argument("IntegratorConfig: need r_max > h0 > 0");
    if (!(start_radius > 0.0) || !(r_max > start_radius))
        throw std::invalid_argument("IntegratorConfig: need r_max > start_radius > 0");
    if (max_steps < 1)
        throw std::invalid_argument("IntegratorConfig: max_steps must be >= 1");
}

const char* to_string(StopReason s) {
    switch (s) {
        case StopReason::ReachedRmax: return "ReachedRmax";
        case StopReason::BlowUp: return "BlowUp";
        case StopReason::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

Trajectory integrate(const ShotSpec& spec, const IntegratorConfig& cfg) {
    cfg.validate();
    Trajectory traj(spec, cfg);
    traj.set_start_poly(start_polynomial(spec));
    RadialState st = taylor_start(spec, cfg.start_radius, cfg.start_radius);
    return run(std::move(traj), st, spec, cfg);
}

Trajectory integrate_from(const RadialState& state, const ShotSpec& spec,
                          const IntegratorConfig& cfg) {
    cfg.validate();
    if (state.r <= 0.0 || state.r >= cfg.r_max)
        throw std::invalid_argument("integrate_from: state radius outside (0, r_max)");
    Trajectory traj(spec, cfg);
    return run(std::move(traj), state, spec, cfg);
}

RadialState Trajectory::eval(double r) const {
    const int dim2 = 2 * spec.dim.m;
    if (r < 0.0 || r > r_stop + 1e-12 * std::max(1.0, r_stop))
        throw std::out_of_range("Trajectory::eval: radius outside covered interval");
    if (r == nodes_.front().r) {
        RadialState st;
        st.r = r;
        st.y = nodes_.front().y;
        return st;
    }
    if (r < nodes_.front().r) {
        if (!has_poly_)
            throw std::out_of_range("Trajectory::eval: below first node and no start polynomial");
        return poly_state(start_poly_, spec.dim, r);
    }
    // exact node hit returns the stored state
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r,
                               [](const Node& a, double x) { return a.r < x; });
    if (it != nodes_.end() && it->r == r) {
        RadialState st;
        st.r = r;
        st.y = it->y;
        return st;
    }
    std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
    if (hi >= nodes_.size()) hi = nodes_.size() - 1;   // r_stop rounding slack
    const std::size_t lo = hi - 1;
    const double h = nodes_[hi].r - nodes_[lo].r;
    const double theta = (r - nodes_[lo].r) / h;
    RadialState st;
    st.r = r;
    st.y.resize(dim2);
    const auto& rc = rcont_[lo];
    for (int i = 0; i < dim2; ++i) st.y[i] = dense_component(rc, dim2, i, theta);
    return st;
}

double Trajectory::eval_u(double r) const {
    if (r <= nodes_.front().r && has_poly_) return start_poly_.eval(r);
    return eval(r).y[0];
}

double Trajectory::max_u(double* arg_r) const {
    double best = -std::numeric_limits<double>::infinity();
    double at = 0.0;
    if (has_poly_) {
        const double u0 = start_poly_.eval(0.0);
        best = u0;
        at = 0.0;
    }
    for (const auto& nd : nodes_) {
        if (nd.r > r_stop) break;
        if (nd.y[0] > best) {
            best = nd.y[0];
            at = nd.r;
        }
    }
    if (arg_r) *arg_r = at;
    return best;
}

nlohmann::ordered_json Trajectory::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["spec"] = {{"m", spec.dim.m}, {"Q", spec.Q}, {"alpha", spec.alpha}};
    j["config"] = {{"rtol", cfg.rtol},   {"atol", cfg.atol},
                   {"r_max", cfg.r_max}, {"u_max", cfg.u_max},
                   {"h0", cfg.h0},       {"max_steps", cfg.max_steps},
                   {"start_radius", cfg.start_radius}};
    j["status"] = to_string(status);
    j["r_stop"] = r_stop;
    if (!note.empty()) j["note"] = note;
    nlohmann::ordered_json nds = nlohmann::ordered_json::array();
    for (const auto& nd : nodes_) {
        nlohmann::ordered_json one;
        one["r"] = nd.r;
        one["y"] = nd.y;
        nds.push_back(std::move(one));
    }
    j["nodes"] = std::move(nds);
    return j;
}

} // namespace qcurv
