#include "qcurv/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

namespace qcurv {

const char* to_string(OutcomeLabel l) {
    switch (l) {
        case OutcomeLabel::FiniteVolume: return "FiniteVolume";
        case OutcomeLabel::InfiniteVolume: return "InfiniteVolume";
        case OutcomeLabel::BlowUp: return "BlowUp";
        case OutcomeLabel::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

bool even_case_applicable(const ShotSpec& spec) {
    if (spec.dim.m % 2 != 0 || !(spec.Q < 0.0)) return false;
    if (spec.alpha[0] != 0.0 || !(spec.alpha[1] < 0.0)) return false;
    for (double a : spec.alpha)
        if (a > 0.0) return false;
    return true;
}

bool odd_case_applicable(const ShotSpec& spec) {
    return spec.dim.m >= 3 && spec.dim.m % 2 == 1 && spec.Q < 0.0;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    g.back() = hi;
    return g;
}

} // namespace

ShotOutcome classify(const ShotSpec& spec, const IntegratorConfig& cfg, DiagLevel diag,
                     Exec mode) {
    ShotOutcome out(spec, cfg);
    try {
        auto traj = std::make_shared<const Trajectory>(integrate(spec, cfg));
        out.status = traj->status;
        out.r_end = traj->r_end();
        out.max_u = traj->max_u(&out.argmax_u);

        // barriers, where the initial data matches one of the constructions
        std::optional<TailCertificate> cert;
        if (even_case_applicable(spec)) {
            const Barrier up = build_upper_even(spec);
            const Barrier low = build_lower_even(spec);
            out.sandwich = verify_sandwich(*traj, up, low);
            out.barrier_params = nlohmann::ordered_json::array({up.params_json(), low.params_json()});
            if (out.sandwich->pass)
                cert = TailCertificate{up.tail_delta, up.tail_C, 0.0};
        } else if (odd_case_applicable(spec)) {
            try {
                const auto [up, low] = build_odd_pair(spec);
                out.sandwich = verify_sandwich(*traj, up, low);
                out.barrier_params =
                    nlohmann::ordered_json::array({up.params_json(), low.params_json()});
                if (out.sandwich->pass)
                    cert = TailCertificate{up.tail_delta, up.tail_C, 0.0};
            } catch (const std::invalid_argument&) {
                // initial data not under the barrier jets; continue uncertified
            }
        }

        RadialDensity dens = RadialDensity::from_trajectory(traj, cert);

        if (out.status == StopReason::BlowUp) {
            out.label = OutcomeLabel::BlowUp;
            out.volume = divergence_check(dens, traj->r_end()).kind;
        } else if (out.status == StopReason::StepUnderflow) {
            out.label = OutcomeLabel::Inconclusive;
            out.volume = VolumeVerdictKind::Inconclusive;
        } else if (cert) {
            out.alpha = alpha_total(dens, traj->r_end());
            out.volume = VolumeVerdictKind::Converged;
            out.label = OutcomeLabel::FiniteVolume;
        } else {
            const VolumeVerdict vd = divergence_check(dens, traj->r_end());
            out.volume = vd.kind;
            switch (vd.kind) {
                case VolumeVerdictKind::Converged: {
                    AlphaInterval iv;
                    iv.lo = vd.alpha_hat;
                    iv.hi = vd.alpha_hat + vd.last_increment;
                    iv.certified = false;
                    out.alpha = iv;
                    out.label = OutcomeLabel::FiniteVolume;
                    break;
                }
                case VolumeVerdictKind::Diverging:
                    out.label = OutcomeLabel::InfiniteVolume;
                    break;
                case VolumeVerdictKind::Inconclusive:
                    out.label = OutcomeLabel::Inconclusive;
                    break;
            }
        }

        if (out.label == OutcomeLabel::FiniteVolume && diag == DiagLevel::Full) {
            if (spec.dim.m >= 2) out.lap_limits = laplacian_limits(*traj);

            const auto rs = geometric_grid(traj->r_end() / 10.0, traj->r_end(), 33);
            const auto vs = potential_profile(dens, rs, mode);
            out.v_slope = slope_estimate(rs, vs);
            out.decomposition = decompose_p(*traj, rs, vs);

            double min_R = std::numeric_limits<double>::infinity();
            const int nsamp = 400;
            for (int i = 0; i <= nsamp; ++i) {
                const double r =
                    traj->r_begin() + (traj->r_end() - traj->r_begin()) * i / double(nsamp);
                const double R = scalar_curvature(*traj, r);
                if (R < min_R) {
                    min_R = R;
                    if (!out.curv_below_1e3 && min_R < -1e3) out.curv_below_1e3 = r;
                }
            }
            out.min_R = min_R;
        }
    } catch (const std::exception& e) {
        out.error = e.what();
        out.label = OutcomeLabel::Inconclusive;
    }
    return out;
}

void SweepPlan::validate() const {
    if (static_cast<int>(alpha_grids.size()) != dim.m)
        throw std::invalid_argument("SweepPlan: need one alpha grid per derivative (m of them)");
    for (const auto& g : alpha_grids)
        if (g.empty()) throw std::invalid_argument("SweepPlan: empty alpha grid");
    cfg.validate();
}

std::size_t SweepPlan::size() const {
    std::size_t n = 1;
    for (const auto& g : alpha_grids) n *= g.size();
    return n;
}

ShotSpec SweepPlan::spec_at(std::size_t index) const {
    std::vector<double> alpha(dim.m);
    for (int j = dim.m - 1; j >= 0; --j) {
        const std::size_t k = alpha_grids[j].size();
        alpha[j] = alpha_grids[j][index % k];
        index /= k;
    }
    return ShotSpec(dim, Q, alpha);
}

std::vector<ShotOutcome> sweep(const SweepPlan& plan, Exec mode) {
    plan.validate();
    const std::size_t n = plan.size();
    std::vector<ShotOutcome> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(plan.spec_at(i), plan.cfg);
    parallel_for(n, mode, [&](std::size_t i) {
        out[i] = classify(plan.spec_at(i), plan.cfg, plan.diag, mode);
    });
    return out;
}

AlphaRangeSummary alpha_range(const SweepPlan& plan, const std::vector<ShotOutcome>& outcomes,
                              int bins) {
    if (plan.Q == 0.0)
        throw std::invalid_argument("alpha_range: Q must be nonzero (alpha is unconstrained at Q=0)");
    AlphaRangeSummary s;
    s.total = static_cast<int>(outcomes.size());
    std::vector<double> alphas;
    for (const auto& o : outcomes)
        if (o.label == OutcomeLabel::FiniteVolume && o.alpha)
            alphas.push_back(0.5 * (o.alpha->lo + o.alpha->hi));
    s.finite_count = static_cast<int>(alphas.size());
    if (alphas.empty()) return s;
    const auto [mn, mx] = std::minmax_element(alphas.begin(), alphas.end());
    s.min_alpha = *mn;
    s.max_alpha = *mx;
    const double lo = s.min_alpha, hi = std::max(s.max_alpha, lo + 1e-12);
    s.bin_edges.resize(bins + 1);
    s.bin_counts.assign(bins, 0);
    for (int b = 0; b <= bins; ++b) s.bin_edges[b] = lo + (hi - lo) * b / bins;
    for (double a : alphas) {
        int b = static_cast<int>((a - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        s.bin_counts[b]++;
    }
    return s;
}

DegreeReport degree_report(Dim dim, const std::vector<ShotOutcome>& outcomes) {
    DegreeReport rep;
    rep.sharp_degree = 2 * dim.m - 2;
    std::map<int, int> hist;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.label != OutcomeLabel::FiniteVolume || !o.decomposition) continue;
        const int deg = o.decomposition->fitted_degree;
        hist[deg]++;
        if (deg == rep.sharp_degree) rep.sharp_indices.push_back(i);
    }
    rep.histogram.assign(hist.begin(), hist.end());
    return rep;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sweep_csv_header(Dim dim) {
    std::string h = "m,Q";
    for (int j = 0; j < dim.m; ++j) h += ",alpha" + std::to_string(j);
    h += ",status,alpha_lo,alpha_hi,j,a,deg_p,p_lead,max_u,r_max";
    return h;
}

std::string outcome_csv_row(const ShotOutcome& o) {
    std::string row = std::to_string(o.spec.dim.m) + "," + format_double(o.spec.Q);
    for (double a : o.spec.alpha) row += "," + format_double(a);
    row += ",";
    row += to_string(o.label);
    row += ",";
    row += o.alpha ? format_double(o.alpha->lo) : "";
    row += ",";
    row += o.alpha ? format_double(o.alpha->hi) : "";
    row += ",";
    row += (o.lap_limits && o.lap_limits->conclusive) ? std::to_string(o.lap_limits->j) : "";
    row += ",";
    row += (o.lap_limits && o.lap_limits->conclusive) ? format_double(o.lap_limits->a) : "";
    row += ",";
    row += o.decomposition ? std::to_string(o.decomposition->fitted_degree) : "";
    row += ",";
    row += (o.decomposition && !o.decomposition->p.empty())
               ? format_double(o.decomposition->p.back())
               : "";
    row += ",";
    row += format_double(o.max_u);
    row += ",";
    row += format_double(o.cfg.r_max);
    return row;
}

nlohmann::ordered_json outcome_json(const ShotOutcome& o) {
    nlohmann::ordered_json j;
    j["spec"] = {{"m", o.spec.dim.m}, {"Q", o.spec.Q}, {"alpha", o.spec.alpha}};
    j["status"] = to_string(o.status);
    j["label"] = to_string(o.label);
    j["volume_verdict"] = to_string(o.volume);
    if (o.alpha) {
        j["alpha"] = {{"lo", o.alpha->lo}, {"hi", o.alpha->hi}, {"certified", o.alpha->certified}};
    }
    if (o.sandwich) j["sandwich"] = o.sandwich->to_json();
    if (!o.barrier_params.is_null()) j["barriers"] = o.barrier_params;
    if (o.lap_limits) {
        nlohmann::ordered_json ll;
        ll["conclusive"] = o.lap_limits->conclusive;
        if (o.lap_limits->conclusive) {
            ll["j"] = o.lap_limits->j;
            ll["a"] = o.lap_limits->a;
            ll["drift"] = o.lap_limits->drift;
        }
        nlohmann::ordered_json levels = nlohmann::ordered_json::array();
        for (const auto& lev : o.lap_limits->levels)
            levels.push_back({{"ell", lev.ell},
                              {"mean", lev.mean},
                              {"drift", lev.drift},
                              {"at_end", lev.at_end}});
        ll["levels"] = std::move(levels);
        j["laplacian_limits"] = std::move(ll);
    }
    if (o.decomposition) {
        const auto& d = *o.decomposition;
        j["decomposition"] = {{"p", d.p},
                              {"residual", d.residual},
                              {"window", {d.window_lo, d.window_hi}},
                              {"overfit_coeff", d.overfit_coeff},
                              {"fitted_degree", d.fitted_degree},
                              {"well_conditioned", d.well_conditioned}};
    }
    if (o.v_slope) {
        j["v_slope"] = {{"slope", o.v_slope->slope},
                        {"half_width", o.v_slope->half_width},
                        {"points", o.v_slope->points_used}};
    }
    j["max_u"] = o.max_u;
    j["argmax_u"] = o.argmax_u;
    if (o.decomposition) {
        j["min_scalar_curvature"] = o.min_R;
        if (o.curv_below_1e3) j["curvature_below_1e3_at_r"] = *o.curv_below_1e3;
    }
    j["r_end"] = o.r_end;
    if (!o.error.empty()) j["error"] = o.error;
    return j;
}

} // namespace qcurv
