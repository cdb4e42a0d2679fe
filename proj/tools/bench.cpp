// Serial vs OpenMP timing of the three data-parallel kernels: initial-data
// sweeps, potential profiles, and sphere sampling of leading forms. The
// serial path is the reference implementation the tests compare against;
// this target reports what the parallel path buys.
#include <chrono>
#include <cstdio>
#include <memory>
#include <string>

#include "qcurv/explorer.hpp"
#include "qcurv/poly.hpp"

using namespace qcurv;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return ms_since(t0);
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-24s serial %9.1f ms   openmp %9.1f ms   speedup %5.2fx   identical %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, same ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    std::printf("threads available: %d\n", max_threads());

    {
        SweepPlan plan{Dim(2)};
        plan.Q = -6.0;
        plan.alpha_grids = {{0.0}, {}};
        const int points = quick ? 4 : 16;
        for (int i = 0; i < points; ++i)
            plan.alpha_grids[1].push_back(-2.0 + 1.5 * i / double(points));
        plan.cfg.r_max = quick ? 20.0 : 50.0;
        plan.diag = DiagLevel::Full;

        std::vector<ShotOutcome> serial_out, parallel_out;
        const double ts = time_ms([&] { serial_out = sweep(plan, Exec::Serial); });
        const double tp = time_ms([&] { parallel_out = sweep(plan, Exec::Parallel); });
        bool same = serial_out.size() == parallel_out.size();
        for (std::size_t i = 0; same && i < serial_out.size(); ++i)
            same = outcome_csv_row(serial_out[i]) == outcome_csv_row(parallel_out[i]);
        report("sweep (m=2, Q=-6)", ts, tp, same);
    }

    {
        const ShotSpec spec(Dim(2), -6.0, {0.0, -1.0});
        IntegratorConfig cfg;
        cfg.r_max = quick ? 20.0 : 50.0;
        auto traj = std::make_shared<const Trajectory>(integrate(spec, cfg));
        const Barrier up = build_upper_even(spec);
        const auto dens = RadialDensity::from_trajectory(
            traj, TailCertificate{up.tail_delta, up.tail_C, 0.0});
        std::vector<double> rs;
        const int count = quick ? 24 : 96;
        for (int i = 0; i < count; ++i)
            rs.push_back(cfg.r_max / 10.0 *
                         std::pow(10.0, i / double(count - 1)));
        std::vector<double> vs_serial, vs_parallel;
        const double ts = time_ms([&] { vs_serial = potential_profile(dens, rs, Exec::Serial); });
        const double tp =
            time_ms([&] { vs_parallel = potential_profile(dens, rs, Exec::Parallel); });
        report("potential profile", ts, tp, vs_serial == vs_parallel);
    }

    {
        const auto ex = sec4_example(3);
        const int samples = quick ? 20000 : 120000;
        LeadingFormReport a, b;
        const double ts = time_ms([&] { a = leading_form_sign(ex.p, samples, Exec::Serial); });
        const double tp = time_ms([&] { b = leading_form_sign(ex.p, samples, Exec::Parallel); });
        report("leading-form sampling", ts, tp,
               a.max_value == b.max_value && a.verdict == b.verdict);
    }
    return 0;
}
