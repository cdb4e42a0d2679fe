#ifndef QCURV_VOLUME_HPP
#define QCURV_VOLUME_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qcurv/integrate.hpp"

namespace qcurv {

// Quadratic upper envelope u(s) <= -delta s^2 + C for s >= from_r, carried
// over from a verified barrier; the only tail shape the volume module
// certifies.
struct TailCertificate {
    double delta = 0.0;
    double C = 0.0;
    double from_r = 0.0;
};

// The radial measure e^{2m u(s)} s^{2m-1} ds, backed by a trajectory's
// dense output or a closed-form profile. Mass queries are cached and the
// cache increments are nonnegative, so alpha_partial is monotone by
// construction.
class RadialDensity {
public:
    static RadialDensity from_trajectory(std::shared_ptr<const Trajectory> traj,
                                         std::optional<TailCertificate> tail = std::nullopt);
    static RadialDensity from_function(Dim dim, std::function<double(double)> u,
                                       double coverage,
                                       std::optional<TailCertificate> tail = std::nullopt,
                                       std::vector<double> breaks = {});

    int m() const { return dim_.m; }
    Dim dim() const { return dim_; }
    double coverage() const { return coverage_; }
    const std::optional<TailCertificate>& tail() const { return tail_; }

    double u_at(double s) const;
    double density(double s) const;

    // integral of the density over [0, R]
    double radial_mass(double R) const;

    // alpha(R) = (|S^{2m-1}|/|S^{2m}|) int_0^R e^{2mu} s^{2m-1} ds
    double alpha_partial(double R) const;

    double surf_ratio() const { return surf_ratio_; }
    const std::vector<double>& breaks() const { return breaks_; }

private:
    RadialDensity(Dim dim) : dim_(dim), cache_(std::make_shared<Cache>()) {}

    Dim dim_;
    std::function<double(double)> u_;
    std::shared_ptr<const Trajectory> traj_;   // keeps the dense output alive
    double coverage_ = 0.0;
    double surf_ratio_ = 0.0;
    std::optional<TailCertificate> tail_;
    std::vector<double> breaks_;

    struct Cache {
        std::mutex mutex;
        std::map<double, double> mass;   // R -> mass on [0, R]
    };
    std::shared_ptr<Cache> cache_;
};

struct TailBound {
    bool certified = false;
    double bound = 0.0;   // alpha units
};

// Closed-form incomplete-gamma bound on the alpha mass beyond R under the
// density's quadratic certificate; Unknown (certified=false) without one.
TailBound tail_bound(const RadialDensity& dens, double R);

struct AlphaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool certified = false;
    double width() const { return hi - lo; }
};

// [alpha(R), alpha(R) + tail bound]; certified only through the tail bound.
AlphaInterval alpha_total(const RadialDensity& dens, double R);

enum class VolumeVerdictKind { Converged, Diverging, Inconclusive };

const char* to_string(VolumeVerdictKind k);

struct VolumeVerdict {
    VolumeVerdictKind kind = VolumeVerdictKind::Inconclusive;
    double alpha_hat = 0.0;        // alpha at the largest radius probed
    double last_increment = 0.0;   // alpha(R) - alpha(R/2)
    double decade_increment = 0.0; // alpha(R) - alpha(R/10)
};

// Cauchy test of alpha(R) on a doubling grid up to R_hi: converged when the
// last doubling adds < 1e-6 alpha, diverging when increments stopped
// shrinking and the last decade added > 1% of alpha.
VolumeVerdict divergence_check(const RadialDensity& dens, double R_hi);

} // namespace qcurv

#endif
