#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qcurv/closedform.hpp"
#include "qcurv/constants.hpp"
#include "qcurv/radial.hpp"

#include "oracles.hpp"

using namespace qcurv;
constexpr double pi = std::numbers::pi;

TEST_CASE("surface areas from closed-form Gamma values") {
    auto [s1, s2] = surface_areas(Dim(1));
    CHECK(s1 == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(s2 == doctest::Approx(4.0 * pi).epsilon(1e-15));
    auto [s3, s4] = surface_areas(Dim(2));
    CHECK(s3 == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK(s4 == doctest::Approx(8.0 * pi * pi / 3.0).epsilon(1e-15));
    auto [s5, s6] = surface_areas(Dim(3));
    CHECK(s5 == doctest::Approx(pi * pi * pi).epsilon(1e-15));
    (void)s6;
}

TEST_CASE("laplacian coefficients match the monomial oracle up to m = 6") {
    for (int m = 1; m <= 6; ++m) {
        const Dim dim(m);
        const auto b = laplacian_coeffs(dim);
        REQUIRE(b.size() == static_cast<std::size_t>(m));
        for (int j = 1; j <= m; ++j) {
            CHECK(b[j - 1] ==
                  doctest::Approx(oracle::b_coefficient(j, dim.n())).epsilon(1e-13));
            CHECK(b[j - 1] > 0.0);
        }
        CHECK(b[0] == doctest::Approx(dim.n()));   // b_1 = n
    }
    // spot values
    CHECK(laplacian_coeffs(Dim(2)) == std::vector<double>{4.0, 8.0});
    CHECK(laplacian_coeffs(Dim(3)) == std::vector<double>{6.0, 16.0, 32.0});
}

TEST_CASE("gamma_m: fundamental-solution normalization") {
    CHECK(gamma_const(Dim(1)) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(gamma_const(Dim(2)) == doctest::Approx(8.0 * pi * pi).epsilon(1e-15));
    for (int m = 1; m <= 5; ++m) {
        const double lhs = factorial(2 * m - 1) * sphere_area(2 * m) / gamma_const(Dim(m));
        CHECK(std::abs(lhs - 2.0) <= 1e-12);
    }
}

TEST_CASE("rhs: standard solution point check at r = 1, m = 1") {
    const ShotSpec spec(Dim(1), 1.0, {std::log(2.0)});
    std::vector<double> y{0.0, -1.0}, dy(2);
    rhs(spec, 1.0, y, dy);
    CHECK(dy[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dy[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("rhs: zero source for Q = 0 and sign bookkeeping for m = 2") {
    const ShotSpec zero(Dim(2), 0.0, {0.0, 0.0});
    std::vector<double> y{1.0, 2.0, 3.0, 4.0}, dy(4);
    rhs(zero, 2.0, y, dy);
    CHECK(dy[3] == doctest::Approx(-(zero.dim.n() - 1) / 2.0 * y[3]));

    const ShotSpec neg(Dim(2), -6.0, {0.0, 0.0});
    std::vector<double> y2{0.0, 0.0, 0.0, 0.0}, dy2(4);
    rhs(neg, 1.0, y2, dy2);
    CHECK(dy2[3] == doctest::Approx(-6.0));   // (-1)^2 Q e^0
}

TEST_CASE("rhs rejects r = 0") {
    const ShotSpec spec(Dim(1), 1.0, {0.0});
    std::vector<double> y{0.0, 0.0}, dy(2);
    CHECK_THROWS_AS(rhs(spec, 0.0, y, dy), std::invalid_argument);
}

TEST_CASE("rhs along the closed forms matches their symbolic derivative") {
    // states built from the exact engine; the rhs wiring must reproduce the
    // symbolic derivative of every component
    for (int m = 1; m <= 4; ++m) {
        const Dim dim(m);
        const double Q = factorial(2 * m - 1);
        const ShotSpec spec(dim, Q, std::vector<double>(m, 0.0));   // alpha unused here
        const auto u = RadialClosedForm::log_sphere();
        for (double r : {0.3, 1.0, 2.5, 10.0, 20.0}) {
            const RadialState st = u.state(dim, r);
            std::vector<double> dy(2 * m);
            rhs(spec, r, st.y, dy);
            // symbolic d/dr of each slot
            RadialClosedForm f = u;
            for (int j = 0; j < m; ++j) {
                const RadialClosedForm lap = f.laplacian(dim.n());
                CHECK(dy[2 * j] == doctest::Approx(f.deriv(r)).epsilon(1e-10));
                const double w2 = lap.eval(r) - (dim.n() - 1) / r * f.deriv(r);
                CHECK(dy[2 * j + 1] == doctest::Approx(w2).epsilon(1e-8));
                f = lap;
            }
        }
    }
}

TEST_CASE("closed-form engine: bubble solves the equation to 1e-8 on [0, 20]") {
    for (int m = 1; m <= 4; ++m) {
        const Dim dim(m);
        const auto lap_m = RadialClosedForm::log_sphere().iterated_laplacian(dim.n(), m);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double r = 20.0 * i / 200.0;
            const double lhs = sign * lap_m.eval(r);   // (-Delta)^m u
            const double rhs_v = factorial(2 * m - 1) * std::pow(2.0 / (1.0 + r * r), 2.0 * m);
            CHECK(std::abs(lhs - rhs_v) / std::abs(rhs_v) <= 1e-8);
        }
    }
}

TEST_CASE("closed-form engine: ball solution on [0, 0.9]") {
    // (-Delta)^m log(2/(1-r^2)) = (-1)^m (2m-1)! e^{2mw}; the negative-Q
    // reading holds for odd m (m = 1 is the Poincare disk)
    for (int m = 1; m <= 4; ++m) {
        const Dim dim(m);
        const auto lap_m = RadialClosedForm::log_ball().iterated_laplacian(dim.n(), m);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double q_sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double r = 0.9 * i / 200.0;
            const double lhs = sign * lap_m.eval(r);
            const double rhs_v =
                q_sign * factorial(2 * m - 1) * std::pow(2.0 / (1.0 - r * r), 2.0 * m);
            CHECK(std::abs(lhs - rhs_v) / std::abs(rhs_v) <= 1e-8);
        }
    }
}

TEST_CASE("closed-form engine sanity against hand derivatives (independent check)") {
    // Delta log(2/(1+r^2)) in R^n = -(2(n-2) r^2 + 2n)/(1+r^2)^2, by hand
    for (int n : {2, 4, 6}) {
        const auto lap = RadialClosedForm::log_sphere().laplacian(n);
        for (double r : {0.0, 0.7, 3.0}) {
            const double expect = -(2.0 * (n - 2) * r * r + 2.0 * n) / std::pow(1.0 + r * r, 2);
            CHECK(lap.eval(r) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("taylor_start: standard-solution coefficients and spec examples") {
    // m=1, Q=1, alpha_0 = log 2: c_2 = -1 matches log(2/(1+r^2)) = log2 - r^2 + ...
    const ShotSpec bubble(Dim(1), 1.0, {std::log(2.0)});
    const auto p1 = start_polynomial(bubble);
    REQUIRE(p1.c.size() == 2);
    CHECK(p1.c[0] == doctest::Approx(std::log(2.0)));
    CHECK(p1.c[1] == doctest::Approx(-1.0).epsilon(1e-14));

    // m=2, Q=-6, alpha = (0, -1): c = (0, -1/2, -1/32)
    const ShotSpec even(Dim(2), -6.0, {0.0, -1.0});
    const auto p2 = start_polynomial(even);
    REQUIRE(p2.c.size() == 3);
    CHECK(p2.c[0] == 0.0);
    CHECK(p2.c[1] == doctest::Approx(-0.5));
    CHECK(p2.c[2] == doctest::Approx(-1.0 / 32.0).epsilon(1e-14));

    // zero data, Q = 0: zero state
    const ShotSpec zero(Dim(2), 0.0, {0.0, 0.0});
    const auto st = taylor_start(zero, 1e-3);
    for (double v : st.y) CHECK(v == 0.0);

    CHECK_THROWS_AS(taylor_start(zero, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(taylor_start(zero, 1.0), std::invalid_argument);
}

TEST_CASE("taylor_start reverse consistency: alpha recovered to O(h^2)") {
    const ShotSpec spec(Dim(3), -120.0, {-0.5, -1.0, -13.0});
    const auto b = laplacian_coeffs(spec.dim);
    auto recover_err = [&](double h) {
        const auto st = taylor_start(spec, h);
        double worst = 0.0;
        for (int j = 0; j < spec.dim.m; ++j) {
            const double alpha_hat = (j == 0) ? st.y[0] : st.y[2 * j] / b[j - 1];
            worst = std::max(worst, std::abs(alpha_hat - spec.alpha[j]));
        }
        return worst;
    };
    const double e1 = recover_err(1e-3);
    const double e2 = recover_err(5e-4);
    CHECK(e1 <= 1e-4);
    CHECK(e2 <= e1 / 3.0);   // ~factor 4 from O(h^2)
}

TEST_CASE("deriv_to_laplacian round trip and spec values") {
    const Dim d2(2);
    const auto lap = deriv_to_laplacian(d2, std::vector<double>{0.0, -1.0});
    CHECK(lap[0] == 0.0);
    CHECK(lap[1] == doctest::Approx(-4.0));   // b_1 = n = 4

    const Dim d3(3);
    const auto lap3 = deriv_to_laplacian(d3, std::vector<double>{0.0, 0.0, 1.0});
    CHECK(lap3[2] == doctest::Approx(16.0));  // b_2 = 16 in R^6

    const std::vector<double> alpha{-0.3, 0.7, -2.0};
    const auto back = laplacian_to_deriv(d3, deriv_to_laplacian(d3, alpha));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(back[j] - alpha[j]) <= 1e-14);

    const auto zeros = deriv_to_laplacian(d3, std::vector<double>{0.0, 0.0, 0.0});
    for (double v : zeros) CHECK(v == 0.0);
}
