#include "qcurv/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "qcurv/quadrature.hpp"

namespace qcurv {

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) {
    if (nvars < 1) throw std::invalid_argument("MultiPoly: need at least one variable");
}

MultiPoly MultiPoly::constant(int nvars, Rational c) {
    MultiPoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("MultiPoly: variable index");
    MultiPoly p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(e, Rational(1));
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && degree() == 0);
}

Rational MultiPoly::constant_value() const {
    return coeff(Exponents(nvars_, 0));
}

int MultiPoly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (int a : e) t += a;
        d = std::max(d, t);
    }
    return d;
}

Rational MultiPoly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars_)
        throw std::invalid_argument("MultiPoly: exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("MultiPoly: arity mismatch");
    MultiPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("MultiPoly: arity mismatch");
    MultiPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("MultiPoly: arity mismatch");
    MultiPoly out(nvars_);
    Exponents e(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly out(nvars_);
    if (c.is_zero()) return out;
    for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
    return out;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        out.add_term(d, c * Rational(e[var]));
    }
    return out;
}

MultiPoly MultiPoly::laplacian() const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_)
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] < 2) continue;
            Exponents d = e;
            d[i] -= 2;
            out.add_term(d, c * Rational(static_cast<std::int64_t>(e[i]) * (e[i] - 1)));
        }
    return out;
}

MultiPoly MultiPoly::iterated_laplacian(int k) const {
    MultiPoly p = *this;
    for (int i = 0; i < k && !p.is_zero(); ++i) p = p.laplacian();
    return p;
}

MultiPoly MultiPoly::leading_form() const {
    MultiPoly out(nvars_);
    const int d = degree();
    if (d < 0) return out;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (int a : e) t += a;
        if (t == d) out.terms_.emplace(e, c);
    }
    return out;
}

double MultiPoly::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != nvars_)
        throw std::invalid_argument("MultiPoly::eval: arity mismatch");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.to_double();
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    // graded-lex descending for a stable text form
    std::vector<const std::pair<const Exponents, Rational>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        int da = 0, db = 0;
        for (int v : a->first) da += v;
        for (int v : b->first) db += v;
        if (da != db) return da > db;
        return a->first > b->first;
    });
    std::string out;
    for (const auto* t : order) {
        const Rational& c = t->second;
        if (!out.empty()) out += c.sign() < 0 ? " - " : " + ";
        else if (c.sign() < 0) out += "-";
        Rational abs_c = c.sign() < 0 ? -c : c;
        bool has_var = false;
        std::string vars;
        for (int i = 0; i < nvars_; ++i) {
            if (t->first[i] == 0) continue;
            if (has_var) vars += "*";
            vars += "x" + std::to_string(i + 1);
            if (t->first[i] > 1) vars += "^" + std::to_string(t->first[i]);
            has_var = true;
        }
        if (!has_var) out += abs_c.str();
        else if (abs_c == Rational(1)) out += vars;
        else out += abs_c.str() + "*" + vars;
    }
    return out;
}

// ------------------------------------------------------------------- parser

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() { return i < s.size() ? s[i] : '\0'; }
};

std::int64_t parse_uint(Cursor& c, const char* what) {
    c.skip_ws();
    if (c.i >= c.s.size() || !std::isdigit(static_cast<unsigned char>(c.s[c.i])))
        throw PolyParseError(std::string("expected ") + what, static_cast<int>(c.i));
    std::int64_t v = 0;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
        v = v * 10 + (c.s[c.i] - '0');
        if (v > (1LL << 60)) throw PolyParseError("integer literal too large", static_cast<int>(c.i));
        ++c.i;
    }
    return v;
}

} // namespace

MultiPoly MultiPoly::parse(const std::string& text, int nvars) {
    MultiPoly out(nvars);
    Cursor c{text};
    bool first = true;
    while (!c.done()) {
        int sign = 1;
        c.skip_ws();
        if (c.peek() == '+' || c.peek() == '-') {
            sign = c.peek() == '-' ? -1 : 1;
            ++c.i;
        } else if (!first) {
            throw PolyParseError("expected '+' or '-' between terms", static_cast<int>(c.i));
        }
        first = false;
        c.skip_ws();

        Rational coeff(sign);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            const std::int64_t num = parse_uint(c, "coefficient");
            std::int64_t den = 1;
            c.skip_ws();
            if (c.peek() == '/') {
                ++c.i;
                den = parse_uint(c, "denominator");
                if (den == 0) throw PolyParseError("zero denominator", static_cast<int>(c.i));
            }
            coeff = Rational(sign * num, den);
            have_coeff = true;
            c.skip_ws();
            if (c.peek() == '*') ++c.i;
        }

        Exponents e(nvars, 0);
        bool have_var = false;
        while (true) {
            c.skip_ws();
            if (c.peek() != 'x') break;
            ++c.i;
            const std::int64_t idx = parse_uint(c, "variable index");
            if (idx < 1 || idx > nvars)
                throw PolyParseError("variable index out of range x1..x" + std::to_string(nvars),
                                     static_cast<int>(c.i));
            std::int64_t pow = 1;
            c.skip_ws();
            if (c.peek() == '^') {
                ++c.i;
                pow = parse_uint(c, "exponent");
            }
            e[idx - 1] += static_cast<int>(pow);
            have_var = true;
            c.skip_ws();
            if (c.peek() == '*') ++c.i;
        }
        if (!have_coeff && !have_var)
            throw PolyParseError("expected a term", static_cast<int>(c.i));
        out.add_term(e, coeff);
    }
    if (first) throw PolyParseError("empty polynomial", 0);
    return out;
}

// -------------------------------------------------------------- constructors

MultiPoly radial_square(int nvars) {
    MultiPoly p(nvars);
    MultiPoly::Exponents e(nvars, 0);
    for (int i = 0; i < nvars; ++i) {
        e[i] = 2;
        p.add_term(e, Rational(1));
        e[i] = 0;
    }
    return p;
}

Sec4Example sec4_example(int m) {
    if (m < 3) throw std::invalid_argument("sec4_example: needs m >= 3");
    const int n = 2 * m;
    MultiPoly tilde(n);   // |x~|^2 over x2..x_{2m}
    MultiPoly::Exponents e(n, 0);
    for (int i = 1; i < n; ++i) {
        e[i] = 2;
        tilde.add_term(e, Rational(1));
        e[i] = 0;
    }
    MultiPoly one_plus = MultiPoly::constant(n, Rational(1));
    e.assign(n, 0);
    e[0] = 2;
    one_plus.add_term(e, Rational(1));
    Sec4Example ex{-(one_plus * tilde), std::vector<double>(n, 0.0)};
    ex.zero_direction[0] = 1.0;
    return ex;
}

// -------------------------------------------------------- leading form sign

const char* to_string(FormSign s) {
    switch (s) {
        case FormSign::NegativeDefiniteDirectionSet: return "NegativeDefiniteDirectionSet";
        case FormSign::HasZeroSet: return "HasZeroSet";
        case FormSign::PositiveSomewhere: return "PositiveSomewhere";
    }
    return "?";
}

LeadingFormReport leading_form_sign(const MultiPoly& p, int samples, Exec mode) {
    const int n = p.nvars();
    if (p.degree() < 1) throw std::invalid_argument("leading_form_sign: degree must be >= 1");
    const MultiPoly form = p.leading_form();
    if (samples <= 0) samples = 10000 * n;

    // deterministic sample of directions (fixed seed, generated serially)
    std::mt19937_64 rng(0x51a7badd5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> dirs(samples, std::vector<double>(n));
    for (auto& d : dirs) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& x : d) {
                x = gauss(rng);
                norm += x * x;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (double& x : d) x /= norm;
    }

    std::vector<double> vals(samples);
    parallel_for(static_cast<std::size_t>(samples), mode,
                 [&](std::size_t i) { vals[i] = form.eval(dirs[i]); });

    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));

    // local ascent refinement from the best starting directions
    std::vector<int> idx(samples);
    for (int i = 0; i < samples; ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + std::min(samples, 24), idx.end(),
                      [&](int a, int b) { return vals[a] > vals[b]; });

    std::vector<MultiPoly> grad;
    grad.reserve(n);
    for (int i = 0; i < n; ++i) grad.push_back(form.derivative(i));

    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> best_dir;
    for (int t = 0; t < std::min(samples, 24); ++t) {
        std::vector<double> x = dirs[idx[t]];
        double fx = vals[idx[t]];
        double step = 0.1;
        for (int it = 0; it < 200 && step > 1e-14; ++it) {
            std::vector<double> g(n);
            double gdotx = 0.0;
            for (int i = 0; i < n; ++i) {
                g[i] = grad[i].eval(x);
                gdotx += g[i] * x[i];
            }
            double tnorm = 0.0;
            for (int i = 0; i < n; ++i) {
                g[i] -= gdotx * x[i];   // project to the tangent space
                tnorm += g[i] * g[i];
            }
            tnorm = std::sqrt(tnorm);
            if (tnorm < 1e-16 * std::max(1.0, scale)) break;
            std::vector<double> y(n);
            double norm = 0.0;
            for (int i = 0; i < n; ++i) {
                y[i] = x[i] + step * g[i] / tnorm;
                norm += y[i] * y[i];
            }
            norm = std::sqrt(norm);
            for (double& v : y) v /= norm;
            const double fy = form.eval(y);
            if (fy > fx) {
                x = std::move(y);
                fx = fy;
                step *= 1.3;
            } else {
                step *= 0.5;
            }
        }
        if (fx > best) {
            best = fx;
            best_dir = x;
        }
    }

    LeadingFormReport rep;
    rep.samples = samples;
    rep.max_value = best;
    rep.max_direction = best_dir;
    rep.tol = 1e-7 * std::max(scale, 1e-300);
    if (best > rep.tol) rep.verdict = FormSign::PositiveSomewhere;
    else if (best < -rep.tol) rep.verdict = FormSign::NegativeDefiniteDirectionSet;
    else rep.verdict = FormSign::HasZeroSet;
    return rep;
}

// ------------------------------------------------- exact quadratic analysis

namespace {

using RMat = std::vector<std::vector<Rational>>;

RMat rational_matmul(const RMat& a, const RMat& b) {
    const int n = static_cast<int>(a.size());
    RMat c(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational s(0);
            for (int k = 0; k < n; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

Rational rational_trace(const RMat& a) {
    Rational t(0);
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

// elementary symmetric functions of the eigenvalues via Newton's identities
std::vector<Rational> char_poly_elementary(const RMat& m) {
    const int n = static_cast<int>(m.size());
    std::vector<Rational> t(n + 1), e(n + 1);
    RMat power = m;
    t[1] = rational_trace(power);
    for (int k = 2; k <= n; ++k) {
        power = rational_matmul(power, m);
        t[k] = rational_trace(power);
    }
    e[0] = Rational(1);
    for (int k = 1; k <= n; ++k) {
        Rational s(0);
        for (int i = 1; i <= k; ++i) {
            Rational term = e[k - i] * t[i];
            s += (i % 2 == 1) ? term : -term;
        }
        e[k] = s / Rational(k);
    }
    return e;
}

// all eigenvalues strictly negative <=> (-1)^k e_k > 0 for k = 1..n
bool negative_definite(const RMat& m) {
    auto e = char_poly_elementary(m);
    const int n = static_cast<int>(m.size());
    for (int k = 1; k <= n; ++k) {
        Rational v = (k % 2 == 1) ? -e[k] : e[k];
        if (!(v > Rational(0))) return false;
    }
    return true;
}

Rational rational_det(RMat a) {
    const int n = static_cast<int>(a.size());
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            Rational f = a[r][col] / a[col][col];
            for (int c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
        }
    }
    return det;
}

// solve a x = rhs; false when singular
bool rational_solve(RMat a, std::vector<Rational> rhs, std::vector<Rational>& out) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return false;
        std::swap(a[pivot], a[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational f = a[r][col] / a[col][col];
            for (int c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(n);
    for (int i = 0; i < n; ++i) out[i] = rhs[i] / a[i][i];
    return true;
}

// nonzero kernel vector of a singular symmetric matrix
std::vector<Rational> rational_kernel_vector(RMat a) {
    const int n = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int pr = -1;
        for (int r = row; r < n; ++r)
            if (!a[r][col].is_zero()) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[pr], a[row]);
        for (int r = 0; r < n; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            Rational f = a[r][col] / a[row][col];
            for (int c2 = 0; c2 < n; ++c2) a[r][c2] -= f * a[row][c2];
        }
        pivot_col.push_back(col);
        ++row;
    }
    // free column -> back-substituted kernel vector
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    std::vector<Rational> v(n, Rational(0));
    if (free_col < 0) return v;   // not singular
    v[free_col] = Rational(1);
    for (int r = static_cast<int>(pivot_col.size()) - 1; r >= 0; --r) {
        const int pc = pivot_col[r];
        Rational s(0);
        for (int c = pc + 1; c < n; ++c) s += a[r][c] * v[c];
        v[pc] = -s / a[r][pc];
    }
    return v;
}

// quadratic data p = x^T S x + b^T x + c
struct QuadraticParts {
    RMat S;
    std::vector<Rational> b;
    Rational c;
};

QuadraticParts quadratic_parts(const MultiPoly& p) {
    const int n = p.nvars();
    QuadraticParts parts;
    parts.S.assign(n, std::vector<Rational>(n, Rational(0)));
    parts.b.assign(n, Rational(0));
    for (const auto& [e, coeff] : p.terms()) {
        int total = 0, vi = -1, vj = -1;
        for (int i = 0; i < n; ++i) {
            total += e[i];
            if (e[i] >= 1) {
                if (vi < 0) vi = i;
                else vj = i;
            }
        }
        if (total == 0) parts.c = coeff;
        else if (total == 1) parts.b[vi] = coeff;
        else if (total == 2) {
            if (e[vi] == 2) parts.S[vi][vi] = coeff;
            else {
                Rational half = coeff / Rational(2);
                parts.S[vi][vj] = half;
                parts.S[vj][vi] = half;
            }
        } else {
            throw std::invalid_argument("quadratic_parts: degree exceeds 2");
        }
    }
    return parts;
}

std::vector<double> to_unit_double(const std::vector<Rational>& v) {
    std::vector<double> d(v.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        d[i] = v[i].to_double();
        norm += d[i] * d[i];
    }
    norm = std::sqrt(norm);
    if (norm > 0)
        for (double& x : d) x /= norm;
    return d;
}

} // namespace

Q0Report classify_q0_m2(const MultiPoly& p) {
    if (p.nvars() != 4)
        throw std::invalid_argument("classify_q0_m2: polynomial must live on R^4");
    Q0Report rep;
    const int d = p.degree();
    if (d > 2) {
        rep.reason = "degree " + std::to_string(d) + " exceeds the bound 2m-2 = 2";
        return rep;
    }
    if (d <= 0) {
        rep.reason = "constant polynomials are excluded";
        return rep;
    }
    if (d == 1) {
        rep.reason = "degree-1 polynomials are unbounded above";
        return rep;
    }
    const auto parts = quadratic_parts(p);
    if (negative_definite(parts.S)) {
        rep.solution = true;
        return rep;
    }
    rep.reason = rational_det(parts.S).is_zero()
                     ? "quadratic form is degenerate; p does not tend to -infinity in every direction"
                     : "quadratic form has a nonnegative direction";
    return rep;
}

const char* to_string(IntegrabilityKind k) {
    switch (k) {
        case IntegrabilityKind::Integrable: return "Integrable";
        case IntegrabilityKind::NotIntegrable: return "NotIntegrable";
        case IntegrabilityKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

// --------------------------------------------------------- integrability

namespace {

// exact Gaussian value of int e^{2m(x^T S x + b^T x + c)} dx for S negative
// definite: exp(2m(c - b^T S^{-1} b / 4)) sqrt(pi^n / ((2m)^n det(-S)))
double gaussian_value(const QuadraticParts& parts, int m) {
    const int n = static_cast<int>(parts.b.size());
    std::vector<Rational> z;
    if (!rational_solve(parts.S, parts.b, z))
        throw std::runtime_error("gaussian_value: singular matrix");
    Rational btz(0);
    for (int i = 0; i < n; ++i) btz += parts.b[i] * z[i];
    const double expo = 2.0 * m * (parts.c - btz / Rational(4)).to_double();
    RMat negS = parts.S;
    for (auto& row : negS)
        for (auto& v : row) v = -v;
    const double det = rational_det(negS).to_double();
    const double pi = std::numbers::pi;
    return std::exp(expo) * std::sqrt(std::pow(pi / (2.0 * m), n) / det);
}

// p = sum_{i != axis} q_i(x_axis) x_i^2 + s(x_axis), with every other
// variable appearing only as a bare square
struct ConditionedGaussian {
    int axis;
    std::vector<std::vector<double>> q;   // per variable, coefficients in x_axis
    std::vector<double> s;
};

std::optional<ConditionedGaussian> match_conditioned(const MultiPoly& p, int axis) {
    const int n = p.nvars();
    ConditionedGaussian cg;
    cg.axis = axis;
    cg.q.assign(n, {});
    auto bump = [](std::vector<double>& poly, int k, double v) {
        if (static_cast<int>(poly.size()) <= k) poly.resize(k + 1, 0.0);
        poly[k] += v;
    };
    for (const auto& [e, coeff] : p.terms()) {
        int other = -1;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (i == axis || e[i] == 0) continue;
            if (e[i] != 2 || other >= 0) ok = false;
            else other = i;
        }
        if (!ok) return std::nullopt;
        if (other < 0) bump(cg.s, e[axis], coeff.to_double());
        else bump(cg.q[other], e[axis], coeff.to_double());
    }
    return cg;
}

double eval_poly1(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
    return v;
}

// q(t) < 0 for all t: even degree, negative leading coefficient, and a dense
// grid out to the Cauchy root bound stays negative
bool strictly_negative_everywhere(const std::vector<double>& c) {
    int deg = static_cast<int>(c.size()) - 1;
    while (deg >= 0 && c[deg] == 0.0) --deg;
    if (deg < 0) return false;            // identically zero
    if (deg == 0) return c[0] < 0.0;
    if (deg % 2 != 0 || c[deg] >= 0.0) return false;
    double bound = 1.0;
    for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k] / c[deg]));
    const double T = 1.0 + bound;
    for (int i = 0; i <= 4000; ++i) {
        const double t = -T + 2.0 * T * i / 4000.0;
        if (eval_poly1(c, t) >= 0.0) return false;
    }
    return true;
}

struct OuterIntegral {
    bool diverges = false;
    double value = 0.0;
    double error = 0.0;
};

// int over R of g with doubling limits; flags divergence when increments grow
OuterIntegral integrate_line(const std::function<double(double)>& g) {
    OuterIntegral out;
    double L = 8.0;
    auto q0 = quad_adaptive(g, -L, L, 1e-9, 1e-300);
    double total = q0.value;
    double prev_inc = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 12; ++k) {
        const double L2 = 2.0 * L;
        const double inc = quad_adaptive(g, L, L2, 1e-9, 1e-300).value +
                           quad_adaptive(g, -L2, -L, 1e-9, 1e-300).value;
        total += inc;
        if (inc <= 1e-9 * std::abs(total)) {
            out.value = total;
            out.error = std::abs(inc) + q0.error;
            return out;
        }
        if (inc > prev_inc && inc > std::abs(total) * 0.5) {
            out.diverges = true;
            return out;
        }
        prev_inc = inc;
        L = L2;
    }
    out.diverges = true;   // never settled
    return out;
}

// tensor-product Gauss-Legendre of e^{2mp} over [-L, L]^n
double tensor_gauss(const MultiPoly& p, int m, double L, int g, Exec mode) {
    const int n = p.nvars();
    const auto& rule = gauss_legendre(g);
    // flattened monomials for fast evaluation
    struct Term {
        double c;
        std::vector<int> e;
    };
    std::vector<Term> terms;
    for (const auto& [e, c] : p.terms()) terms.push_back({c.to_double(), e});

    std::vector<double> partial(g, 0.0);
    parallel_for(static_cast<std::size_t>(g), mode, [&](std::size_t i0) {
        std::vector<int> idx(n, 0);
        std::vector<double> x(n);
        x[0] = L * rule.nodes[i0];
        double sum = 0.0;
        // iterate the remaining n-1 axes odometer-style
        while (true) {
            double w = rule.weights[i0];
            for (int d = 1; d < n; ++d) {
                x[d] = L * rule.nodes[idx[d]];
                w *= rule.weights[idx[d]];
            }
            double val = 0.0;
            for (const auto& t : terms) {
                double tv = t.c;
                for (int d = 0; d < n; ++d)
                    for (int k = 0; k < t.e[d]; ++k) tv *= x[d];
                val += tv;
            }
            sum += w * std::exp(2.0 * m * val);
            int d = 1;
            while (d < n && ++idx[d] == g) idx[d++] = 0;
            if (d == n) break;
        }
        partial[i0] = sum;
    });
    double total = 0.0;
    for (double v : partial) total += v;   // fixed-order reduction
    return total * std::pow(L, n);
}

} // namespace

IntegrabilityReport integrability_probe(const MultiPoly& p, Exec mode) {
    const int n = p.nvars();
    if (n % 2 != 0)
        throw std::invalid_argument("integrability_probe: the weight e^{2mp} needs n = 2m even");
    const int m = n / 2;
    IntegrabilityReport rep;

    const int d = p.degree();
    if (d <= 0) {
        rep.kind = IntegrabilityKind::NotIntegrable;
        rep.witness_ray.assign(n, 0.0);
        rep.witness_ray[0] = 1.0;
        rep.method = "constant weight has infinite mass";
        return rep;
    }
    if (d == 1) {
        const auto parts = quadratic_parts(p);
        rep.kind = IntegrabilityKind::NotIntegrable;
        rep.witness_ray = to_unit_double(parts.b);
        rep.method = "linear exponent grows along b";
        return rep;
    }
    if (d == 2) {
        const auto parts = quadratic_parts(p);
        if (negative_definite(parts.S)) {
            rep.kind = IntegrabilityKind::Integrable;
            rep.value = gaussian_value(parts, m);
            rep.error = 1e-14 * rep.value;
            rep.method = "gaussian closed form";
            return rep;
        }
        rep.kind = IntegrabilityKind::NotIntegrable;
        if (rational_det(parts.S).is_zero()) {
            rep.witness_ray = to_unit_double(rational_kernel_vector(parts.S));
            rep.method = "degenerate quadratic form (flat direction)";
        } else {
            const auto lf = leading_form_sign(p, 0, mode);
            rep.witness_ray = lf.max_direction;
            rep.method = "quadratic form positive along the witness ray";
        }
        return rep;
    }

    // degree >= 3: decide from the leading form, then try the structured paths
    const auto lf = leading_form_sign(p, 0, mode);
    if (lf.verdict == FormSign::PositiveSomewhere) {
        rep.kind = IntegrabilityKind::NotIntegrable;
        rep.witness_ray = lf.max_direction;
        rep.method = "leading form positive along the witness ray";
        return rep;
    }

    for (int axis = 0; axis < n; ++axis) {
        auto cg = match_conditioned(p, axis);
        if (!cg) continue;
        bool all_negative = true;
        for (int i = 0; i < n && all_negative; ++i) {
            if (i == axis) continue;
            all_negative = strictly_negative_everywhere(cg->q[i]);
        }
        if (!all_negative) continue;
        const double pi = std::numbers::pi;
        auto g = [&](double t) {
            double prod = std::exp(2.0 * m * eval_poly1(cg->s, t));
            for (int i = 0; i < n; ++i) {
                if (i == axis) continue;
                prod *= std::sqrt(pi / (2.0 * m * -eval_poly1(cg->q[i], t)));
            }
            return prod;
        };
        const auto line = integrate_line(g);
        if (line.diverges) {
            rep.kind = IntegrabilityKind::NotIntegrable;
            rep.witness_ray.assign(n, 0.0);
            rep.witness_ray[axis] = 1.0;
            rep.method = "conditioned gaussian slices diverge along the axis";
        } else {
            rep.kind = IntegrabilityKind::Integrable;
            rep.value = line.value;
            rep.error = line.error;
            rep.method = "conditioned gaussian slices";
        }
        return rep;
    }

    if (lf.verdict == FormSign::HasZeroSet) {
        rep.kind = IntegrabilityKind::Inconclusive;
        rep.witness_ray = lf.max_direction;
        rep.method = "leading form vanishes along the witness ray; no structured slice found";
        return rep;
    }

    // negative definite leading form: tensor product quadrature
    if (n > 6) {
        rep.kind = IntegrabilityKind::Inconclusive;
        rep.method = "dimension too high for tensor quadrature";
        return rep;
    }
    // box size: grow until p drops 30/m below its near-origin ceiling in
    // every sampled direction
    double p_max = p.eval(std::vector<double>(n, 0.0));
    std::mt19937_64 rng(0xb0c5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> dirs(256, std::vector<double>(n));
    for (auto& dir : dirs) {
        double norm = 0.0;
        for (double& x : dir) {
            x = gauss(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (double& x : dir) x /= norm;
    }
    for (const auto& dir : dirs)
        for (double rr = 0.25; rr <= 4.0; rr *= 2.0) {
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) x[i] = rr * dir[i];
            p_max = std::max(p_max, p.eval(x));
        }
    double L = 1.0;
    for (int it = 0; it < 60; ++it) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& dir : dirs) {
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) x[i] = L * dir[i];
            worst = std::max(worst, p.eval(x));
        }
        if (worst <= p_max - 30.0 / m) break;
        L *= 1.5;
    }
    const int g1 = (n <= 4) ? 32 : 18;
    const int g2 = (n <= 4) ? 44 : 24;
    const double v1 = tensor_gauss(p, m, L, g1, mode);
    const double v2 = tensor_gauss(p, m, L, g2, mode);
    const double rel = std::abs(v2 - v1) / std::max(std::abs(v2), 1e-300);
    if (rel < 1e-6) {
        rep.kind = IntegrabilityKind::Integrable;
        rep.value = v2;
        rep.error = std::abs(v2 - v1);
        rep.method = "tensor gauss-legendre";
    } else {
        rep.kind = IntegrabilityKind::Inconclusive;
        rep.value = v2;
        rep.error = std::abs(v2 - v1);
        rep.method = "tensor quadrature did not converge";
    }
    return rep;
}

std::optional<AsymLap> asymptotic_laplacian(const MultiPoly& p) {
    if (p.is_zero()) return std::nullopt;
    MultiPoly cur = p;
    int j = 0;
    while (true) {
        MultiPoly next = cur.laplacian();
        if (next.is_zero()) break;
        cur = std::move(next);
        ++j;
    }
    if (j == 0) return std::nullopt;           // p itself harmonic (or constant)
    if (!cur.is_constant()) return std::nullopt;
    return AsymLap{j, cur.constant_value().to_double()};
}

nlohmann::ordered_json polyzero_report(const MultiPoly& p, int m, Exec mode) {
    if (p.nvars() != 2 * m)
        throw std::invalid_argument("polyzero_report: polynomial must live on R^{2m}");
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["n"] = p.nvars();
    j["m"] = m;
    j["polynomial"] = p.str();
    j["degree"] = p.degree();
    j["iterated_laplacian_zero"] = p.iterated_laplacian(m).is_zero();

    if (p.degree() >= 1) {
        const auto lf = leading_form_sign(p, 0, mode);
        j["leading_form"] = {{"verdict", to_string(lf.verdict)},
                             {"max_value", lf.max_value},
                             {"max_direction", lf.max_direction},
                             {"samples", lf.samples},
                             {"tol", lf.tol}};
    }
    if (m == 2) {
        const auto q0 = classify_q0_m2(p);
        nlohmann::ordered_json cls;
        cls["solution"] = q0.solution;
        if (!q0.solution) cls["reason"] = q0.reason;
        j["classification_m2"] = std::move(cls);
    }
    const auto probe = integrability_probe(p, mode);
    nlohmann::ordered_json pj;
    pj["kind"] = to_string(probe.kind);
    pj["method"] = probe.method;
    if (probe.kind == IntegrabilityKind::Integrable) {
        pj["value"] = probe.value;
        pj["error"] = probe.error;
    }
    if (!probe.witness_ray.empty()) pj["witness_ray"] = probe.witness_ray;
    j["integrability"] = std::move(pj);

    const auto asym = asymptotic_laplacian(p);
    if (asym) {
        j["asymptotic_laplacian"] = {{"j", asym->j}, {"a", asym->a}};
    } else {
        j["asymptotic_laplacian"] = nullptr;
    }
    return j;
}

} // namespace qcurv
