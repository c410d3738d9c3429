#pragma once

#include "ynet/polynomial.hpp"

namespace ynet {

class RationalFunction;

/// Outcome of an explicit pole/zero cancellation pass.
struct SimplifyOutcome {
    std::vector<cdouble> cancelled;       ///< root of each removed pole/zero pair
    std::vector<cdouble> num_roots_kept;  ///< surviving zeros (as computed, not re-rooted)
    std::vector<cdouble> den_roots_kept;  ///< surviving poles
};

/// Ratio of two polynomials in s. No common factor is ever removed
/// implicitly: arithmetic works over plain common denominators so every
/// pole/zero pair stays visible until an explicit simplify() call. This keeps
/// right-half-plane cancellations auditable.
class RationalFunction {
public:
    /// Default cancellation tolerance: roots closer than
    /// kCancelTol * (1 + |root|) are paired and removed by simplify().
    static constexpr double kCancelTol = 1e-7;

    RationalFunction() : num_(), den_(cdouble(1.0)) {}
    RationalFunction(Polynomial num, Polynomial den);
    static RationalFunction constant(cdouble v) { return RationalFunction(Polynomial(v), Polynomial(cdouble(1.0))); }
    /// The rational function s/1.
    static RationalFunction variable() { return RationalFunction(Polynomial::variable(), Polynomial(cdouble(1.0))); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() == 0 && den_.degree() == 0; }
    /// deg(num) <= deg(den): realizable as a state-space model plus feedthrough.
    bool is_proper() const { return num_.degree() <= den_.degree() || num_.is_zero(); }

    cdouble eval(cdouble s) const { return num_.eval(s) / den_.eval(s); }

    /// Substitute s -> s + c in numerator and denominator.
    RationalFunction shifted(cdouble c) const { return RationalFunction(num_.shifted(c), den_.shifted(c)); }
    RationalFunction conjugated() const { return RationalFunction(num_.conjugated(), den_.conjugated()); }

    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);

    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    friend RationalFunction operator*(RationalFunction a, cdouble k) { a.num_ *= k; return a; }
    friend RationalFunction operator*(cdouble k, RationalFunction a) { a.num_ *= k; return a; }

    struct SimplifyResult;

    /// Explicit pole/zero cancellation. Roots of num and den are computed,
    /// matched greedily by distance, and pairs closer than
    /// tol*(1+|root|) are removed; both polynomials are rebuilt from the
    /// surviving roots. Never called implicitly by arithmetic.
    SimplifyResult simplify(double tol = kCancelTol) const;

private:
    Polynomial num_, den_;

    /// Rescale so the denominator's largest coefficient has unit magnitude;
    /// keeps repeated arithmetic from drifting to extreme scales.
    void rebalance();
};

struct RationalFunction::SimplifyResult : SimplifyOutcome {
    RationalFunction value;
};

}  // namespace ynet
