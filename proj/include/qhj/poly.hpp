#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhj {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients; coeffs()[k] multiplies y^k.
/// Exact trailing zeros are trimmed, so the zero polynomial has no coefficients.
class Polynomial {
public:
    static constexpr int kZeroDegree = std::numeric_limits<int>::min();

    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs);

    static Polynomial from_real(const std::vector<double>& coeffs);
    static Polynomial constant(cplx c);
    static Polynomial monomial(int k, cplx c = 1.0);
    /// lead * prod (y - r_i)
    static Polynomial from_roots(const std::vector<cplx>& roots, cplx lead = 1.0);

    int degree() const;
    bool is_zero() const { return c_.empty(); }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx operator[](int k) const;
    cplx leading() const;
    double max_abs_coeff() const;

    cplx operator()(cplx z) const;
    double eval_real(double x) const;

    Polynomial derivative(int order = 1) const;
    /// q(t) = p(c + t)
    Polynomial shifted(cplx c) const;
    /// t^n p(1/t); requires n >= degree()
    Polynomial reversed(int n) const;
    Polynomial monic() const;
    /// Zeroes out coefficients with magnitude below rel_tol * max|coeff| and re-trims.
    Polynomial chopped(double rel_tol) const;
    /// Quotient and remainder of division by d (d nonzero).
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
    bool has_real_coefficients(double rel_tol = 0.0) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(cplx s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

private:
    void trim();
    std::vector<cplx> c_;
};

/// y as a polynomial, handy for building expressions.
inline Polynomial poly_y() { return Polynomial::monomial(1); }

struct PoleFactor {
    cplx location;
    int multiplicity;
};

/// num / den with den kept in factored monic form.  Factors whose root also
/// annihilates the numerator (to 1e-10 relative) are cancelled on construction;
/// cancellations that are merely close (to 1e-6) are recorded in notes().
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(Polynomial num);  // NOLINT: polynomials promote implicitly
    RationalFunction(Polynomial num, std::vector<PoleFactor> den_factors);
    /// General denominator; its roots are found numerically and clustered.
    static RationalFunction from_polynomials(const Polynomial& num, const Polynomial& den);
    static RationalFunction constant(cplx c) { return RationalFunction(Polynomial::constant(c)); }
    /// c / (y - a)^k
    static RationalFunction pole(cplx a, int k, cplx c = 1.0);

    const Polynomial& num() const { return num_; }
    const std::vector<PoleFactor>& den_factors() const { return den_; }
    Polynomial den() const;
    const std::vector<std::string>& notes() const { return notes_; }

    /// Pole order at a (0 if regular).
    int pole_order(cplx a) const;
    /// Order of growth at infinity: deg num - deg den.
    int degree_at_infinity() const;
    bool is_zero() const { return num_.is_zero(); }

    cplx operator()(cplx z) const;
    RationalFunction derivative() const;

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator*=(cplx s);

    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, RationalFunction b) { b *= -1.0; return a += b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator*(RationalFunction a, cplx s) { return a *= s; }
    friend RationalFunction operator*(cplx s, RationalFunction a) { return a *= s; }
    friend RationalFunction operator*(double s, RationalFunction a) { return a *= cplx(s); }

private:
    void reduce();
    Polynomial num_;
    std::vector<PoleFactor> den_;
    std::vector<std::string> notes_;
};

/// Laurent coefficients about a finite point (local variable t = y - center)
/// or about infinity (local variable t = 1/y).  coeff(k) multiplies t^k.
struct LaurentExpansion {
    bool at_infinity = false;
    cplx center{0.0, 0.0};
    int min_order = 0;
    std::vector<cplx> coeffs;  // coeffs[i] is the coefficient of t^(min_order + i)
    /// |order -1 coefficient - limit formula| at simple finite poles; 0 otherwise.
    double crosscheck_error = 0.0;

    int max_order() const { return min_order + static_cast<int>(coeffs.size()) - 1; }
    cplx coeff(int k) const;
};

class LaurentOrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LaurentExpansion laurent_at(const RationalFunction& r, cplx center, int min_order, int max_order);
/// Expansion in t = 1/y.  A pole of order m at infinity shows up as order -m.
LaurentExpansion laurent_at_infinity(const RationalFunction& r, int min_order, int max_order);

/// Coefficient of 1/(y - pole).  A regular point yields 0 and, if note is
/// given, the text "not a pole".
cplx residue_at(const RationalFunction& r, cplx pole, std::string* note = nullptr);
/// Minus the coefficient of 1/y in the expansion at infinity.
cplx residue_at_infinity(const RationalFunction& r);

// ---------------------------------------------------------------- roots

struct Root {
    cplx value;
    int multiplicity;
};

struct RootResult {
    std::vector<cplx> all;      // every root, repeated per multiplicity
    std::vector<Root> grouped;  // clusters with multiplicities summing to the degree
    int iterations = 0;
    bool used_companion_fallback = false;
    double roundtrip_error = 0.0;  // max coefficient error relative to max|coeff|
};

class RootFindingError : public std::runtime_error {
public:
    RootFindingError(const std::string& what, std::vector<cplx> partial, std::vector<bool> converged)
        : std::runtime_error(what), partial_roots(std::move(partial)), converged(std::move(converged)) {}
    std::vector<cplx> partial_roots;
    std::vector<bool> converged;
};

inline constexpr int kAberthIterationCap = 500;

/// Aberth-Ehrlich simultaneous iteration with a companion-matrix fallback.
RootResult poly_roots(const Polynomial& p, double tol = 1e-8);

/// |Im r| < 1e-8 * max(1, |r|)
bool is_real_root(cplx r);

}  // namespace qhj
