#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "ynet/error.hpp"

namespace ynet {

using cdouble = std::complex<double>;

/// Dense univariate polynomial in the Laplace variable s with complex
/// coefficients, stored in ascending degree order.
///
/// Values are immutable in spirit: all operations return new polynomials.
/// After every construction and arithmetic step the representation is
/// normalized by trimming high-order coefficients whose magnitude falls below
/// kTrimRelTol times the largest coefficient magnitude, so degree() always
/// reflects a nonzero leading coefficient (the zero polynomial is {0}).
class Polynomial {
public:
    /// Relative threshold for dropping leading coefficients that additive
    /// cancellation left as noise (judged against the addend magnitudes).
    static constexpr double kTrimRelTol = 1e-12;
    /// Hard cap on polynomial degree. Common-denominator arithmetic grows
    /// degrees multiplicatively; failing loud beats grinding to a halt.
    static constexpr int kMaxDegree = 200;

    Polynomial() : c_{cdouble(0.0)} {}
    explicit Polynomial(cdouble c0) : c_{c0} {}
    explicit Polynomial(double c0) : c_{cdouble(c0)} {}
    Polynomial(std::initializer_list<cdouble> ascending);
    explicit Polynomial(std::vector<cdouble> ascending);

    /// The monomial s.
    static Polynomial variable();
    static Polynomial from_real(std::span<const double> ascending);
    /// prod_k (s - r_k) scaled by `leading`.
    static Polynomial from_roots(std::span<const cdouble> roots, cdouble leading = cdouble(1.0));

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cdouble>& coeffs() const { return c_; }
    /// Coefficient of s^k (zero beyond the stored degree).
    cdouble coeff(int k) const;
    cdouble leading() const { return c_.back(); }
    double max_abs_coeff() const;

    bool is_zero() const { return c_.size() == 1 && c_[0] == cdouble(0.0); }
    /// True when every imaginary part is negligible relative to the
    /// coefficient scale.
    bool is_real(double rel_tol = 1e-12) const;

    cdouble eval(cdouble s) const;
    Polynomial derivative() const;
    /// Coefficient-wise complex conjugate. For real s, conj(p(s)) equals
    /// conjugated()(s).
    Polynomial conjugated() const;
    /// Composition p(s + c) (Taylor shift).
    Polynomial shifted(cdouble c) const;
    /// Composition p(a*s).
    Polynomial scaled_arg(cdouble a) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(cdouble k);
    Polynomial& operator/=(cdouble k);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, cdouble k) { return a *= k; }
    friend Polynomial operator*(cdouble k, Polynomial a) { return a *= k; }
    friend Polynomial operator/(Polynomial a, cdouble k) { return a /= k; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// All complex roots with multiplicity, via a balanced companion-matrix
    /// eigenvalue problem followed by Newton polishing.
    /// Throws InvalidArgument for constant polynomials.
    std::vector<cdouble> roots() const;

private:
    std::vector<cdouble> c_;  // ascending, never empty

    void normalize();
    /// Drop leading coefficients that additive cancellation left as noise,
    /// judged against the addend magnitudes at the same degree.
    void trim_cancellation(const std::vector<cdouble>& a, const std::vector<cdouble>& b);
    void check_cap() const;
};

/// max |a_k - b_k| over the common coefficient range.
double coeff_distance(const Polynomial& a, const Polynomial& b);

}  // namespace ynet
