// Command-line laboratory: single runs, sweeps, the built-in verification
// suite, and the flat-case polynomial classifier.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcurv/explorer.hpp"
#include "qcurv/poly.hpp"
#include "qcurv/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// unknown keys are rejected with a JSON pointer to the offender
void check_keys(const json& obj, const std::string& pointer,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw UsageError("config: expected an object at " +
                                           (pointer.empty() ? "/" : pointer));
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw UsageError("config: unknown key " + pointer + "/" + key);
    }
}

void apply_integrator_config(const json& j, qcurv::IntegratorConfig& cfg,
                             const std::string& pointer) {
    check_keys(j, pointer,
               {"rtol", "atol", "r_max", "u_max", "h0", "max_steps", "start_radius"});
    if (j.contains("rtol")) cfg.rtol = j["rtol"].get<double>();
    if (j.contains("atol")) cfg.atol = j["atol"].get<double>();
    if (j.contains("r_max")) cfg.r_max = j["r_max"].get<double>();
    if (j.contains("u_max")) cfg.u_max = j["u_max"].get<double>();
    if (j.contains("h0")) cfg.h0 = j["h0"].get<double>();
    if (j.contains("max_steps")) cfg.max_steps = j["max_steps"].get<long>();
    if (j.contains("start_radius")) cfg.start_radius = j["start_radius"].get<double>();
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw UsageError("config parse error in " + path + ": " + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw UsageError("config: schema_version must be 1 at /schema_version");
    return j;
}

std::string out_dir_prefixed(const std::string& path) {
    if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
    const char* dir = std::getenv("QCURV_OUT_DIR");
    if (!dir || !*dir) return path;
    return (std::filesystem::path(dir) / path).string();
}

void write_file(const std::string& path, const std::string& content) {
    const std::string full = out_dir_prefixed(path);
    std::ofstream out(full);
    if (!out) throw std::runtime_error("cannot write " + full);
    out << content;
}

std::string sorted_dump(const ordered_json& oj) {
    const json sorted = oj;   // map-backed: keys come out sorted
    return sorted.dump(2) + "\n";
}

std::vector<double> parse_alpha_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("cannot parse alpha value '" + tok + "'");
        }
        pos = next + 1;
    }
    if (out.empty()) throw UsageError("empty alpha list");
    return out;
}

// grid spec: either "v1,v2,v3" or "lo:hi:count"
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_alpha_list(text);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(':', pos);
        if (next == std::string::npos) next = text.size();
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    if (parts.size() != 3) throw UsageError("malformed range '" + text + "', want lo:hi:count");
    double lo, hi;
    long count;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        count = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("malformed range '" + text + "'");
    }
    if (count < 1) throw UsageError("range count must be >= 1 in '" + text + "'");
    std::vector<double> g(count);
    for (long i = 0; i < count; ++i)
        g[i] = (count == 1) ? lo : lo + (hi - lo) * i / double(count - 1);
    return g;
}

std::vector<std::vector<double>> grids_from_json(const json& j, const std::string& pointer) {
    if (!j.is_array() || j.empty())
        throw UsageError("config: " + pointer + " must be a nonempty array");
    std::vector<std::vector<double>> grids;
    int idx = 0;
    for (const auto& g : j) {
        const std::string p = pointer + "/" + std::to_string(idx++);
        if (g.is_array()) {
            grids.push_back(g.get<std::vector<double>>());
        } else if (g.is_object()) {
            check_keys(g, p, {"lo", "hi", "count"});
            const double lo = g.at("lo").get<double>();
            const double hi = g.at("hi").get<double>();
            const long count = g.at("count").get<long>();
            if (count < 1) throw UsageError("config: " + p + "/count must be >= 1");
            std::vector<double> grid(count);
            for (long i = 0; i < count; ++i)
                grid[i] = (count == 1) ? lo : lo + (hi - lo) * i / double(count - 1);
            grids.push_back(std::move(grid));
        } else {
            throw UsageError("config: " + p + " must be an array or {lo,hi,count}");
        }
        if (grids.back().empty()) throw UsageError("config: " + p + " is empty");
    }
    return grids;
}

std::string profile_csv(const qcurv::Trajectory& traj, const qcurv::ShotOutcome& outcome,
                        const qcurv::RadialDensity* dens) {
    using qcurv::format_double;
    std::string csv = "r,u,v,p_fit,lap_u,scalar_R\n";
    const double r_lo = std::max(traj.r_begin(), traj.r_end() / 1000.0);
    const double r_hi = traj.r_end();
    const int count = 200;
    for (int i = 0; i < count; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, i / double(count - 1));
        const auto st = traj.eval(r);
        csv += format_double(r) + "," + format_double(st.y[0]) + ",";
        if (dens) csv += format_double(qcurv::potential_v(*dens, r).v);
        csv += ",";
        if (outcome.decomposition) csv += format_double(outcome.decomposition->eval(r));
        csv += ",";
        const double lap = traj.spec.dim.m >= 2
                               ? st.y[2]
                               : -traj.spec.Q * std::exp(2.0 * st.y[0]);
        csv += format_double(lap) + ",";
        csv += format_double(qcurv::scalar_curvature(traj, r));
        csv += "\n";
    }
    return csv;
}

int cmd_solve(int m, double Q, const std::vector<double>& alpha,
              const qcurv::IntegratorConfig& cfg, qcurv::DiagLevel diag,
              const std::string& out_path, const std::string& profile_path, qcurv::Exec mode) {
    const qcurv::ShotSpec spec(qcurv::Dim(m), Q, alpha);
    const auto outcome = qcurv::classify(spec, cfg, diag, mode);
    ordered_json report = qcurv::outcome_json(outcome);
    report["schema_version"] = 1;
    const std::string text = sorted_dump(report);
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);

    if (!profile_path.empty()) {
        const auto traj = std::make_shared<const qcurv::Trajectory>(qcurv::integrate(spec, cfg));
        std::optional<qcurv::RadialDensity> dens;
        if (outcome.label == qcurv::OutcomeLabel::FiniteVolume)
            dens = qcurv::RadialDensity::from_trajectory(traj);
        write_file(profile_path, profile_csv(*traj, outcome, dens ? &*dens : nullptr));
    }
    return outcome.error.empty() ? 0 : 1;
}

int cmd_sweep(const qcurv::SweepPlan& plan, const std::string& out_base, bool resume,
              qcurv::Exec mode) {
    plan.validate();
    const std::size_t n = plan.size();
    const std::string json_path = out_dir_prefixed(out_base + ".json");
    const std::string csv_path = out_dir_prefixed(out_base + ".csv");

    std::map<std::size_t, ordered_json> rows;
    if (resume && std::filesystem::exists(json_path)) {
        std::ifstream in(json_path);
        json old;
        in >> old;
        if (old.contains("rows"))
            for (const auto& row : old["rows"]) {
                const std::size_t idx = row.at("index").get<std::size_t>();
                if (idx < n) rows.emplace(idx, row);
            }
    }

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < n; ++i)
        if (!rows.count(i)) todo.push_back(i);

    std::vector<ordered_json> fresh(todo.size());
    qcurv::parallel_for(todo.size(), mode, [&](std::size_t k) {
        const auto outcome = qcurv::classify(plan.spec_at(todo[k]), plan.cfg, plan.diag, mode);
        ordered_json row = qcurv::outcome_json(outcome);
        row["index"] = todo[k];
        row["csv"] = qcurv::outcome_csv_row(outcome);
        fresh[k] = std::move(row);
    });
    for (std::size_t k = 0; k < todo.size(); ++k) rows.emplace(todo[k], std::move(fresh[k]));

    std::string csv = qcurv::sweep_csv_header(plan.dim) + "\n";
    ordered_json mirror;
    mirror["schema_version"] = 1;
    mirror["plan"] = {{"m", plan.dim.m},
                      {"Q", plan.Q},
                      {"alpha_grids", plan.alpha_grids},
                      {"size", n}};
    ordered_json jrows = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows.at(i);
        csv += row.at("csv").get<std::string>() + "\n";
        jrows.push_back(row);
    }
    mirror["rows"] = std::move(jrows);

    write_file(out_base + ".csv", csv);
    write_file(out_base + ".json", sorted_dump(mirror));
    std::cout << "sweep: " << n << " points (" << todo.size() << " computed, "
              << n - todo.size() << " reused) -> " << csv_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for radial constant Q-curvature metrics on R^{2m}"};
    app.require_subcommand(1);

    // ---- solve
    auto* solve = app.add_subcommand("solve", "integrate one initial-data spec and classify it");
    int s_m = 2;
    double s_Q = -6.0;
    std::string s_alpha, s_config, s_out, s_profile;
    qcurv::IntegratorConfig s_cfg;
    bool s_fast = false;
    int s_jobs = 0;
    solve->add_option("--m", s_m, "half dimension (n = 2m)");
    solve->add_option("--Q", s_Q, "curvature constant");
    solve->add_option("--alpha", s_alpha, "comma-separated u^(2j)(0), j = 0..m-1");
    solve->add_option("--config", s_config, "JSON config file (schema_version 1)");
    solve->add_option("--rmax", s_cfg.r_max, "integration end radius");
    solve->add_option("--rtol", s_cfg.rtol, "relative tolerance");
    solve->add_option("--atol", s_cfg.atol, "absolute tolerance");
    solve->add_option("--umax", s_cfg.u_max, "blow-up threshold on u");
    solve->add_option("--out", s_out, "report path (default stdout)");
    solve->add_option("--profile", s_profile, "profile CSV path (r,u,v,p_fit,lap_u,scalar_R)");
    solve->add_flag("--fast", s_fast, "skip the potential diagnostics");
    solve->add_option("--jobs", s_jobs, "worker threads (1 = serial)");

    // ---- sweep
    auto* swp = app.add_subcommand("sweep", "classify a grid of initial data");
    int w_m = 2;
    double w_Q = -6.0;
    std::vector<std::string> w_grids;
    std::string w_config, w_out = "sweep";
    qcurv::IntegratorConfig w_cfg;
    bool w_resume = false, w_fast = false;
    int w_jobs = 0;
    swp->add_option("--m", w_m, "half dimension");
    swp->add_option("--Q", w_Q, "curvature constant");
    swp->add_option("--grid", w_grids,
                    "per-alpha grid, 'v1,v2,...' or 'lo:hi:count' (repeat m times)");
    swp->add_option("--config", w_config, "JSON config file");
    swp->add_option("--rmax", w_cfg.r_max, "integration end radius");
    swp->add_option("--out", w_out, "output base path (.csv/.json)");
    swp->add_flag("--resume", w_resume, "reuse rows of an earlier interrupted sweep");
    swp->add_flag("--fast", w_fast, "skip the potential diagnostics");
    swp->add_option("--jobs", w_jobs, "worker threads (1 = serial)");

    // ---- verify
    auto* ver = app.add_subcommand("verify", "run the built-in oracle suite");
    std::string v_filter;
    double v_perturb = 0.0;
    ver->add_option("--filter", v_filter, "run only checks whose name contains this");
    ver->add_option("--perturb-gamma", v_perturb, "test hook: perturb gamma_m relatively")
        ->group("");   // hidden

    // ---- polyzero
    auto* pz = app.add_subcommand("polyzero", "classify a polynomial for the flat (Q = 0) case");
    std::string p_text, p_out;
    int p_n = 4, p_m = 2;
    bool p_sec4 = false;
    pz->add_option("--poly", p_text, "polynomial, e.g. '-1*x1^2 - 1*x2^2'");
    pz->add_option("--n", p_n, "number of variables (must be 2m)");
    pz->add_option("--m", p_m, "half dimension");
    pz->add_flag("--example-sec4", p_sec4, "use the built-in -(1+x1^2)|x~|^2 example");
    pz->add_option("--out", p_out, "report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            double Q = s_Q;
            int m = s_m;
            std::vector<double> alpha;
            qcurv::DiagLevel diag = s_fast ? qcurv::DiagLevel::Fast : qcurv::DiagLevel::Full;
            if (!s_config.empty()) {
                const json j = load_config(s_config);
                check_keys(j, "", {"schema_version", "m", "Q", "alpha", "integrator",
                                   "diagnostics", "out", "profile"});
                if (j.contains("m")) m = j["m"].get<int>();
                if (j.contains("Q")) Q = j["Q"].get<double>();
                if (j.contains("alpha")) alpha = j["alpha"].get<std::vector<double>>();
                if (j.contains("integrator")) apply_integrator_config(j["integrator"], s_cfg, "/integrator");
                if (j.contains("diagnostics"))
                    diag = j["diagnostics"].get<std::string>() == "fast" ? qcurv::DiagLevel::Fast
                                                                         : qcurv::DiagLevel::Full;
                if (j.contains("out") && s_out.empty()) s_out = j["out"].get<std::string>();
                if (j.contains("profile") && s_profile.empty())
                    s_profile = j["profile"].get<std::string>();
            }
            if (!s_alpha.empty()) alpha = parse_alpha_list(s_alpha);
            if (alpha.empty()) throw UsageError("missing --alpha (or config alpha)");
#ifdef _OPENMP
            if (s_jobs > 0) omp_set_num_threads(s_jobs);
#endif
            const qcurv::Exec mode = (s_jobs == 1) ? qcurv::Exec::Serial : qcurv::Exec::Parallel;
            return cmd_solve(m, Q, alpha, s_cfg, diag, s_out, s_profile, mode);
        }

        if (*swp) {
            int m = w_m;
            double Q = w_Q;
            std::vector<std::vector<double>> grids;
            std::string out_base = w_out;
            qcurv::DiagLevel diag = w_fast ? qcurv::DiagLevel::Fast : qcurv::DiagLevel::Full;
            if (!w_config.empty()) {
                const json j = load_config(w_config);
                check_keys(j, "", {"schema_version", "m", "Q", "alpha_grids", "integrator",
                                   "diagnostics", "out"});
                if (j.contains("m")) m = j["m"].get<int>();
                if (j.contains("Q")) Q = j["Q"].get<double>();
                if (j.contains("alpha_grids")) grids = grids_from_json(j["alpha_grids"], "/alpha_grids");
                if (j.contains("integrator")) apply_integrator_config(j["integrator"], w_cfg, "/integrator");
                if (j.contains("diagnostics"))
                    diag = j["diagnostics"].get<std::string>() == "fast" ? qcurv::DiagLevel::Fast
                                                                         : qcurv::DiagLevel::Full;
                if (j.contains("out")) out_base = j["out"].get<std::string>();
            }
            if (!w_grids.empty()) {
                grids.clear();
                for (const auto& g : w_grids) grids.push_back(parse_grid(g));
            }
            if (grids.empty()) throw UsageError("missing --grid (repeat m times) or config alpha_grids");
            qcurv::SweepPlan plan{qcurv::Dim(m)};
            plan.Q = Q;
            plan.alpha_grids = std::move(grids);
            plan.cfg = w_cfg;
            plan.diag = diag;
#ifdef _OPENMP
            if (w_jobs > 0) omp_set_num_threads(w_jobs);
#endif
            const qcurv::Exec mode = (w_jobs == 1) ? qcurv::Exec::Serial : qcurv::Exec::Parallel;
            return cmd_sweep(plan, out_base, w_resume, mode);
        }

        if (*ver) {
            qcurv::VerifyOptions opts;
            opts.filter = v_filter;
            opts.gamma_perturb = v_perturb;
            const auto results = qcurv::run_verification(opts);
            bool all = true;
            for (const auto& r : results) {
                std::printf("%-38s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                            r.detail.c_str());
                all = all && r.pass;
            }
            std::printf("%zu checks, %s\n", results.size(), all ? "all PASS" : "FAILURES");
            return all ? 0 : 1;
        }

        if (*pz) {
            qcurv::MultiPoly poly(1);
            int m = p_m;
            if (p_sec4) {
                const auto ex = qcurv::sec4_example(m);
                poly = ex.p;
            } else {
                if (p_text.empty()) throw UsageError("missing --poly (or --example-sec4)");
                if (p_n != 2 * p_m)
                    throw UsageError("need n = 2m (got n = " + std::to_string(p_n) + ", m = " +
                                     std::to_string(p_m) + ")");
                try {
                    poly = qcurv::MultiPoly::parse(p_text, p_n);
                } catch (const qcurv::PolyParseError& e) {
                    std::cerr << "polyzero: " << e.what() << "\n";
                    return 2;
                }
            }
            const auto report = qcurv::polyzero_report(poly, m);
            const std::string text = sorted_dump(report);
            if (p_out.empty()) std::cout << text;
            else write_file(p_out, text);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
