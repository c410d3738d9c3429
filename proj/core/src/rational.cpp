#include "ynet/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ynet {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidArgument("rational function with identically zero denominator");
    rebalance();
}

void RationalFunction::rebalance() {
    const double dscale = den_.max_abs_coeff();
    if (dscale > 0.0 && (dscale > 1e6 || dscale < 1e-6)) {
        num_ /= cdouble(dscale);
        den_ /= cdouble(dscale);
    }
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    rebalance();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
    if (den_ == o.den_) {
        num_ -= o.num_;
    } else {
        num_ = num_ * o.den_ - o.num_ * den_;
        den_ = den_ * o.den_;
    }
    rebalance();
    return *this;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    rebalance();
    return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
    if (o.num_.is_zero()) throw InvalidArgument("division by identically zero rational function");
    num_ *= o.den_;
    den_ *= o.num_;
    rebalance();
    return *this;
}

RationalFunction::SimplifyResult RationalFunction::simplify(double tol) const {
    SimplifyResult res;
    if (num_.is_zero()) {
        res.value = RationalFunction(Polynomial(), Polynomial(cdouble(1.0)));
        return res;
    }

    std::vector<cdouble> nr = num_.degree() >= 1 ? num_.roots() : std::vector<cdouble>{};
    std::vector<cdouble> dr = den_.degree() >= 1 ? den_.roots() : std::vector<cdouble>{};
    std::vector<bool> ncut(nr.size(), false), dcut(dr.size(), false);

    // Greedy nearest-pair matching; each pass removes the globally closest
    // admissible pair so clusters of near-equal roots cancel consistently.
    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < nr.size(); ++i) {
            if (ncut[i]) continue;
            for (std::size_t j = 0; j < dr.size(); ++j) {
                if (dcut[j]) continue;
                const double d = std::abs(nr[i] - dr[j]);
                if (d < best) { best = d; bi = i; bj = j; }
            }
        }
        if (!std::isfinite(best)) break;
        const double limit = tol * (1.0 + 0.5 * (std::abs(nr[bi]) + std::abs(dr[bj])));
        if (best > limit) break;
        ncut[bi] = dcut[bj] = true;
        res.cancelled.push_back(0.5 * (nr[bi] + dr[bj]));
    }

    for (std::size_t i = 0; i < nr.size(); ++i)
        if (!ncut[i]) res.num_roots_kept.push_back(nr[i]);
    for (std::size_t j = 0; j < dr.size(); ++j)
        if (!dcut[j]) res.den_roots_kept.push_back(dr[j]);

    Polynomial n2 = Polynomial::from_roots(res.num_roots_kept, num_.leading());
    Polynomial d2 = Polynomial::from_roots(res.den_roots_kept, den_.leading());
    res.value = RationalFunction(std::move(n2), std::move(d2));
    return res;
}

}  // namespace ynet
