#ifndef QCURV_POLY_HPP
#define QCURV_POLY_HPP

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcurv/parallel.hpp"
#include "qcurv/rational.hpp"

#include "json.hpp"

namespace qcurv {

struct PolyParseError : std::runtime_error {
    int column;
    PolyParseError(const std::string& msg, int col)
        : std::runtime_error(msg + " (column " + std::to_string(col + 1) + ")"), column(col) {}
};

// Multivariate polynomial with exact rational coefficients. Zero
// coefficients are never stored.
class MultiPoly {
public:
    using Exponents = std::vector<int>;

    explicit MultiPoly(int nvars);
    static MultiPoly constant(int nvars, Rational c);
    static MultiPoly variable(int nvars, int index);   // x_{index+1}

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;   // 0 for the zero polynomial
    int degree() const;                // -1 for the zero polynomial

    const std::map<Exponents, Rational>& terms() const { return terms_; }
    Rational coeff(const Exponents& e) const;
    void add_term(const Exponents& e, const Rational& c);

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly scaled(const Rational& c) const;

    MultiPoly derivative(int var) const;
    MultiPoly laplacian() const;
    MultiPoly iterated_laplacian(int k) const;

    // top-degree homogeneous part a_d
    MultiPoly leading_form() const;

    double eval(std::span<const double> x) const;

    std::string str() const;
    static MultiPoly parse(const std::string& text, int nvars);

private:
    int nvars_;
    std::map<Exponents, Rational> terms_;
};

// |x|^2 on R^n
MultiPoly radial_square(int nvars);

// u = -(1 + x_1^2) |x~|^2 on R^{2m}, x~ = (x_2..x_{2m}); Delta^m u = 0 for
// m >= 3 while limsup u = 0 along the recorded axis direction.
struct Sec4Example {
    MultiPoly p;
    std::vector<double> zero_direction;   // e_1
};
Sec4Example sec4_example(int m);

enum class FormSign { NegativeDefiniteDirectionSet, HasZeroSet, PositiveSomewhere };

const char* to_string(FormSign s);

struct LeadingFormReport {
    FormSign verdict = FormSign::HasZeroSet;
    double max_value = 0.0;                // refined max of a_d on the sphere sample
    std::vector<double> max_direction;
    int samples = 0;
    double tol = 0.0;                      // |max| below tol makes the verdict HasZeroSet
};

// Sign analysis of the leading form on a deterministic quasi-uniform sphere
// sample (10^4 n points by default) with local ascent refinement. Sampling
// is the one approximate step of this module.
LeadingFormReport leading_form_sign(const MultiPoly& p, int samples = 0,
                                    Exec mode = Exec::Parallel);

struct Q0Report {
    bool solution = false;
    std::string reason;   // set when not a solution
};

// Dimension-4 classification: p solves the flat-curvature problem iff its
// quadratic part is negative definite (exact characteristic-polynomial sign
// test); the linear part is irrelevant.
Q0Report classify_q0_m2(const MultiPoly& p);

enum class IntegrabilityKind { Integrable, NotIntegrable, Inconclusive };

const char* to_string(IntegrabilityKind k);

struct IntegrabilityReport {
    IntegrabilityKind kind = IntegrabilityKind::Inconclusive;
    double value = 0.0;
    double error = 0.0;
    std::vector<double> witness_ray;   // direction along which e^{2mp} fails to decay
    std::string method;
};

// Does e^{2mp} (n = 2m variables) have finite integral? Quadratics are
// settled exactly (Gaussian closed form); a one-variable conditioned
// Gaussian structure is integrated by closed-form slices; otherwise a
// negative-definite leading form is handled by tensor product quadrature.
IntegrabilityReport integrability_probe(const MultiPoly& p, Exec mode = Exec::Parallel);

struct AsymLap {
    int j = 0;
    double a = 0.0;
};

// Largest j with Delta^j p != 0; returns (j, constant) when that top
// Laplacian is constant (j >= 1), otherwise nothing.
std::optional<AsymLap> asymptotic_laplacian(const MultiPoly& p);

nlohmann::ordered_json polyzero_report(const MultiPoly& p, int m, Exec mode = Exec::Parallel);

} // namespace qcurv

#endif
