#include "qcurv/verify.hpp"

#include <cmath>
#include <sstream>

#include "qcurv/closedform.hpp"
#include "qcurv/constants.hpp"
#include "qcurv/potential.hpp"

namespace qcurv {

namespace {

// Monomial oracle for b_j: apply the radial Laplacian symbolically to r^{2j}
// and read off the constant; independent of the product formula in
// laplacian_coeffs.
double monomial_b(int j, int n) {
    // radial polynomial as coefficients of r^{2k}
    std::vector<double> c(j + 1, 0.0);
    c[j] = 1.0;
    for (int it = 0; it < j; ++it) {
        std::vector<double> d(c.size() - 1, 0.0);
        for (std::size_t k = 1; k < c.size(); ++k)
            d[k - 1] = c[k] * (2.0 * k) * (2.0 * k + n - 2);
        c = std::move(d);
    }
    return c[0] / factorial(2 * j);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    std::vector<CheckResult> results;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        if (!opts.filter.empty() && name.find(opts.filter) == std::string::npos) return;
        results.push_back({name, pass, detail});
    };

    for (int m = 1; m <= 6; ++m) {
        const Dim dim(m);
        const auto b = laplacian_coeffs(dim);
        double worst = 0.0;
        for (int j = 1; j <= m; ++j) {
            const double oracle = monomial_b(j, dim.n());
            worst = std::max(worst, std::abs(b[j - 1] - oracle) / oracle);
        }
        add("constants.b_coeffs.m" + std::to_string(m), worst <= 1e-13,
            "max rel dev vs monomial oracle " + fmt(worst));
    }

    for (int m = 1; m <= 5; ++m) {
        const Dim dim(m);
        const double gamma = gamma_const(dim) * (1.0 + opts.gamma_perturb);
        const double lhs = factorial(2 * m - 1) * sphere_area(2 * m) / gamma;
        const double dev = std::abs(lhs - 2.0);
        add("constants.gamma_identity.m" + std::to_string(m), dev <= 1e-12,
            "(2m-1)!|S^{2m}|/gamma_m = 2 " + fmt(dev));
    }

    // (-Delta)^m log(2/(1+r^2)) = (2m-1)! e^{2m u} on [0, 20]
    for (int m = 1; m <= 4; ++m) {
        const Dim dim(m);
        const auto lhs_form = RadialClosedForm::log_sphere().iterated_laplacian(dim.n(), m);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double r = 20.0 * i / 400.0;
            const double lhs = sign * lhs_form.eval(r);
            const double rhs = factorial(2 * m - 1) *
                               std::pow(2.0 / (1.0 + r * r), 2.0 * m);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        add("closedform.sphere_residual.m" + std::to_string(m), worst <= 1e-8,
            "max rel residual " + fmt(worst));
    }

    // (-Delta)^m log(2/(1-r^2)) = (-1)^m (2m-1)! e^{2m w} on [0, 0.9]
    // (the ball metric has Q of sign (-1)^m; m = 1 is the Poincare disk)
    for (int m = 1; m <= 4; ++m) {
        const Dim dim(m);
        const auto lhs_form = RadialClosedForm::log_ball().iterated_laplacian(dim.n(), m);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double r = 0.9 * i / 400.0;
            const double lhs = sign * lhs_form.eval(r);
            const double rhs = sign * factorial(2 * m - 1) *
                               std::pow(2.0 / (1.0 - r * r), 2.0 * m);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        add("closedform.ball_residual.m" + std::to_string(m), worst <= 1e-8,
            "max rel residual " + fmt(worst));
    }

    {
        // classical 2-D identity: A(r, s) = log max(r, s)
        const LogKernel kernel(2);
        double worst = 0.0;
        const double radii[] = {0.1, 0.5, 1.0, 2.0, 7.5, 30.0};
        for (double r : radii)
            for (double s : radii) {
                if (r == s) continue;
                worst = std::max(worst,
                                 std::abs(kernel(r, s) - std::log(std::max(r, s))));
            }
        add("kernel.n2_log_max", worst <= 1e-9, "max abs dev " + fmt(worst));
        const double at_diag = std::abs(kernel(1.0, 1.0) - 0.0);
        add("kernel.n2_diagonal", at_diag <= 1e-7, "abs dev at r=s " + fmt(at_diag));
    }

    return results;
}

} // namespace qcurv
