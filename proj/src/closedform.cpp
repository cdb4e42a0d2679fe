#include "qcurv/closedform.hpp"

#include <cmath>

namespace qcurv {

RadialClosedForm RadialClosedForm::log_sphere() {
    RadialClosedForm f(+1);
    f.log_coeff_ = Rational(1);
    return f;
}

RadialClosedForm RadialClosedForm::log_ball() {
    RadialClosedForm f(-1);
    f.log_coeff_ = Rational(1);
    return f;
}

RadialClosedForm RadialClosedForm::laplacian(int n) const {
    RadialClosedForm out(sigma_);
    const Rational s(sigma_);
    auto add = [&out](int k, const Rational& v) {
        if (v.is_zero()) return;
        auto it = out.pow_.find(k);
        if (it == out.pow_.end()) out.pow_.emplace(k, v);
        else {
            it->second += v;
            if (it->second.is_zero()) out.pow_.erase(it);
        }
    };
    if (!log_coeff_.is_zero()) {
        add(1, log_coeff_ * s * Rational(-2 * (n - 2)));
        add(2, log_coeff_ * s * Rational(-4));
    }
    for (const auto& [k, ck] : pow_) {
        if (k == 0) continue;
        add(k + 1, ck * s * Rational(4LL * k * (k + 1) - 2LL * k * n));
        add(k + 2, ck * s * Rational(-4LL * k * (k + 1)));
    }
    return out;
}

RadialClosedForm RadialClosedForm::iterated_laplacian(int n, int times) const {
    RadialClosedForm f = *this;
    for (int i = 0; i < times; ++i) f = f.laplacian(n);
    return f;
}

double RadialClosedForm::eval(double r) const {
    const double base = 1.0 + sigma_ * r * r;
    double v = 0.0;
    if (!log_coeff_.is_zero())
        v += log_coeff_.to_double() * std::log(2.0 / base);
    for (const auto& [k, ck] : pow_)
        v += ck.to_double() * std::pow(base, -k);
    return v;
}

double RadialClosedForm::deriv(double r) const {
    const double base = 1.0 + sigma_ * r * r;
    double v = 0.0;
    if (!log_coeff_.is_zero())
        v += log_coeff_.to_double() * (-2.0 * sigma_ * r / base);
    for (const auto& [k, ck] : pow_)
        v += ck.to_double() * (-2.0 * k * sigma_ * r) * std::pow(base, -k - 1);
    return v;
}

RadialState RadialClosedForm::state(Dim dim, double r) const {
    RadialState st;
    st.r = r;
    st.y.resize(2 * dim.m);
    RadialClosedForm f = *this;
    for (int j = 0; j < dim.m; ++j) {
        st.y[2 * j] = f.eval(r);
        st.y[2 * j + 1] = f.deriv(r);
        if (j + 1 < dim.m) f = f.laplacian(dim.n());
    }
    return st;
}

} // namespace qcurv
