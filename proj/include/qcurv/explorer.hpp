#ifndef QCURV_EXPLORER_HPP
#define QCURV_EXPLORER_HPP

#include <optional>
#include <string>
#include <vector>

#include "qcurv/barriers.hpp"
#include "qcurv/parallel.hpp"
#include "qcurv/potential.hpp"
#include "qcurv/volume.hpp"

#include "json.hpp"

namespace qcurv {

enum class OutcomeLabel { FiniteVolume, InfiniteVolume, BlowUp, Inconclusive };

const char* to_string(OutcomeLabel l);

enum class DiagLevel { Fast, Full };

// Everything a single run produces: termination status, volume verdict,
// barrier certification, and (for finite-volume runs under Full
// diagnostics) the asymptotic quantities of the decomposition u = v + p.
struct ShotOutcome {
    ShotSpec spec;
    IntegratorConfig cfg;
    StopReason status = StopReason::ReachedRmax;
    OutcomeLabel label = OutcomeLabel::Inconclusive;
    VolumeVerdictKind volume = VolumeVerdictKind::Inconclusive;
    std::optional<AlphaInterval> alpha;
    std::optional<SandwichReport> sandwich;
    nlohmann::ordered_json barrier_params;   // null unless barriers were built
    std::optional<LaplacianLimits> lap_limits;
    std::optional<Decomposition> decomposition;
    std::optional<SlopeFit> v_slope;
    double max_u = 0.0;
    double argmax_u = 0.0;
    double min_R = 0.0;                       // min sampled scalar curvature
    std::optional<double> curv_below_1e3;     // first r with R < -1e3
    double r_end = 0.0;
    std::string error;                        // captured per-point failure

    ShotOutcome(ShotSpec s, IntegratorConfig c) : spec(std::move(s)), cfg(c) {}
};

// integrate -> barriers (when the data matches a construction) -> volume ->
// potential diagnostics. Failures are captured in the outcome, not thrown.
ShotOutcome classify(const ShotSpec& spec, const IntegratorConfig& cfg,
                     DiagLevel diag = DiagLevel::Full, Exec mode = Exec::Parallel);

struct SweepPlan {
    Dim dim;
    double Q = 0.0;
    std::vector<std::vector<double>> alpha_grids;   // one grid per alpha_j
    IntegratorConfig cfg;
    DiagLevel diag = DiagLevel::Full;

    explicit SweepPlan(Dim d) : dim(d) {}

    void validate() const;
    std::size_t size() const;
    ShotSpec spec_at(std::size_t index) const;   // last grid fastest
};

// One outcome per grid point, in enumeration order; identical results in
// serial and parallel execution (each point is pure and owns its slot).
std::vector<ShotOutcome> sweep(const SweepPlan& plan, Exec mode = Exec::Parallel);

struct AlphaRangeSummary {
    int finite_count = 0;
    int total = 0;
    double min_alpha = 0.0;
    double max_alpha = 0.0;
    std::vector<double> bin_edges;
    std::vector<int> bin_counts;
    std::string label = "empirical";   // sampled evidence only, never a claim
};

// alpha statistics over a sweep's finite-volume rows; requires Q != 0.
AlphaRangeSummary alpha_range(const SweepPlan& plan, const std::vector<ShotOutcome>& outcomes,
                              int bins = 12);

struct DegreeReport {
    std::vector<std::pair<int, int>> histogram;   // (even degree, count)
    int sharp_degree = 0;                         // 2m-2
    std::vector<std::size_t> sharp_indices;       // runs attaining it
};

DegreeReport degree_report(Dim dim, const std::vector<ShotOutcome>& outcomes);

// serialization (CSV schema: m,Q,alpha_0..alpha_{m-1},status,alpha_lo,
// alpha_hi,j,a,deg_p,p_lead,max_u,r_max)
std::string sweep_csv_header(Dim dim);
std::string outcome_csv_row(const ShotOutcome& o);
nlohmann::ordered_json outcome_json(const ShotOutcome& o);

std::string format_double(double v);   // locale-free shortest form

} // namespace qcurv

#endif
