#include "qcurv/volume.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcurv/quadrature.hpp"

namespace qcurv {

RadialDensity RadialDensity::from_trajectory(std::shared_ptr<const Trajectory> traj,
                                             std::optional<TailCertificate> tail) {
    if (!traj) throw std::invalid_argument("RadialDensity: null trajectory");
    RadialDensity d(traj->spec.dim);
    d.traj_ = traj;
    const Trajectory* t = traj.get();
    d.u_ = [t](double s) { return t->eval_u(s); };
    d.coverage_ = traj->r_end();
    d.tail_ = tail;
    d.breaks_ = {traj->r_begin()};
    auto [so, se] = surface_areas(d.dim_);
    d.surf_ratio_ = so / se;
    return d;
}

RadialDensity RadialDensity::from_function(Dim dim, std::function<double(double)> u,
                                           double coverage,
                                           std::optional<TailCertificate> tail,
                                           std::vector<double> breaks) {
    if (!(coverage > 0.0)) throw std::invalid_argument("RadialDensity: coverage must be positive");
    RadialDensity d(dim);
    d.u_ = std::move(u);
    d.coverage_ = coverage;
    d.tail_ = tail;
    d.breaks_ = std::move(breaks);
    auto [so, se] = surface_areas(dim);
    d.surf_ratio_ = so / se;
    return d;
}

double RadialDensity::u_at(double s) const { return u_(s); }

double RadialDensity::density(double s) const {
    if (s < 0.0) throw std::invalid_argument("RadialDensity: s must be >= 0");
    if (s == 0.0) return 0.0;
    const int m = dim_.m;
    double p = 1.0;
    for (int i = 0; i < 2 * m - 1; ++i) p *= s;
    return std::exp(2.0 * m * u_(s)) * p;
}

double RadialDensity::radial_mass(double R) const {
    if (R < 0.0 || R > coverage_ * (1.0 + 1e-12))
        throw std::out_of_range("RadialDensity: R outside coverage");
    R = std::min(R, coverage_);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& mass_cache = cache_->mass;
    auto it = mass_cache.find(R);
    if (it != mass_cache.end()) return it->second;

    // integrate from the largest cached radius below R; increments of a
    // nonnegative integrand keep the cache monotone
    double base_r = 0.0, base_mass = 0.0;
    auto lb = mass_cache.lower_bound(R);
    if (lb != mass_cache.begin()) {
        --lb;
        base_r = lb->first;
        base_mass = lb->second;
    }
    auto f = [this](double s) { return density(s); };
    const auto q = quad_adaptive(f, base_r, R, 1e-9, 1e-300, breaks_);
    const double mass = base_mass + std::max(q.value, 0.0);
    mass_cache[R] = mass;
    return mass;
}

double RadialDensity::alpha_partial(double R) const {
    return surf_ratio_ * radial_mass(R);
}

TailBound tail_bound(const RadialDensity& dens, double R) {
    TailBound tb;
    if (!dens.tail()) return tb;
    const auto& cert = *dens.tail();
    if (!(cert.delta > 0.0) || R < cert.from_r) return tb;
    const int m = dens.m();
    const double x = 2.0 * m * cert.delta * R * R;
    const double mass = std::exp(2.0 * m * cert.C) *
                        std::pow(2.0 * m * cert.delta, -m) * 0.5 *
                        upper_incomplete_gamma(m, x);
    if (!std::isfinite(mass)) return tb;
    tb.certified = true;
    tb.bound = dens.surf_ratio() * mass;
    return tb;
}

AlphaInterval alpha_total(const RadialDensity& dens, double R) {
    AlphaInterval iv;
    iv.lo = dens.alpha_partial(R);
    const TailBound tb = tail_bound(dens, R);
    iv.certified = tb.certified;
    iv.hi = iv.lo + (tb.certified ? tb.bound : 0.0);
    return iv;
}

const char* to_string(VolumeVerdictKind k) {
    switch (k) {
        case VolumeVerdictKind::Converged: return "Converged";
        case VolumeVerdictKind::Diverging: return "Diverging";
        case VolumeVerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

VolumeVerdict divergence_check(const RadialDensity& dens, double R_hi) {
    if (!(R_hi > 0.0)) throw std::invalid_argument("divergence_check: R_hi must be positive");
    R_hi = std::min(R_hi, dens.coverage());
    VolumeVerdict v;
    const double a_hi = dens.alpha_partial(R_hi);
    const double a_half = dens.alpha_partial(0.5 * R_hi);
    const double a_quarter = dens.alpha_partial(0.25 * R_hi);
    const double a_decade = dens.alpha_partial(0.1 * R_hi);
    v.alpha_hat = a_hi;
    v.last_increment = a_hi - a_half;
    v.decade_increment = a_hi - a_decade;

    const double tol_conv = 1e-6 * a_hi;
    if (v.last_increment <= tol_conv) {
        v.kind = VolumeVerdictKind::Converged;
        return v;
    }
    const double prev_increment = a_half - a_quarter;
    if (v.last_increment >= 0.5 * prev_increment && v.decade_increment > 1e-2 * a_hi) {
        v.kind = VolumeVerdictKind::Diverging;
        return v;
    }
    v.kind = VolumeVerdictKind::Inconclusive;
    return v;
}

} // namespace qcurv
