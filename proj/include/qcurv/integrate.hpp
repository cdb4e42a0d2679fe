#ifndef QCURV_INTEGRATE_HPP
#define QCURV_INTEGRATE_HPP

#include <string>
#include <vector>

#include "qcurv/radial.hpp"

#include "json.hpp"

namespace qcurv {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double r_max = 50.0;
    double u_max = 50.0;          // blow-up threshold on u = y[0]
    double h0 = 1e-3;             // initial step
    long max_steps = 10'000'000;
    double start_radius = 1e-3;   // where the Taylor start hands over

    void validate() const;
};

enum class StopReason { ReachedRmax, BlowUp, StepUnderflow };

const char* to_string(StopReason s);

// Dense-output record of one integration. Nodes are the accepted step
// endpoints; each interval between consecutive nodes carries the quartic
// interpolant of the Dormand-Prince pair. Immutable after construction.
class Trajectory {
public:
    struct Node {
        double r;
        std::vector<double> y;
    };

    ShotSpec spec;
    IntegratorConfig cfg;
    StopReason status = StopReason::ReachedRmax;
    double r_stop = 0.0;          // end of usable coverage
    std::string note;

    const std::vector<Node>& nodes() const { return nodes_; }
    double r_begin() const { return nodes_.front().r; }
    double r_end() const { return r_stop; }

    // Dense evaluation. Radii in [0, r_begin] use the exact Taylor start
    // polynomial when available; a node radius returns the stored state.
    RadialState eval(double r) const;
    double eval_u(double r) const;

    double max_u(double* arg_r = nullptr) const;

    nlohmann::ordered_json to_json() const;

    Trajectory(ShotSpec s, IntegratorConfig c) : spec(std::move(s)), cfg(c) {}

    // construction interface used by integrate()
    void set_start_poly(const EvenRadialPoly& p) { start_poly_ = p; has_poly_ = true; }
    void push_node(double r, std::vector<double> y) { nodes_.push_back({r, std::move(y)}); }
    void push_interval(std::vector<double> rcont) { rcont_.push_back(std::move(rcont)); }
    const EvenRadialPoly& start_poly() const { return start_poly_; }
    bool has_start_poly() const { return has_poly_; }

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<double>> rcont_;   // size nodes-1, each 5*2m
    EvenRadialPoly start_poly_;
    bool has_poly_ = false;
};

// Adaptive Dormand-Prince 5(4) from the Taylor start at cfg.start_radius.
Trajectory integrate(const ShotSpec& spec, const IntegratorConfig& cfg);

// Same, continuing from an arbitrary state (no Taylor start below it).
Trajectory integrate_from(const RadialState& state, const ShotSpec& spec,
                          const IntegratorConfig& cfg);

} // namespace qcurv

#endif
