#include "ynet/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ynet {

Polynomial::Polynomial(std::initializer_list<cdouble> ascending)
    : c_(ascending.begin(), ascending.end()) {
    if (c_.empty()) c_ = {cdouble(0.0)};
    normalize();
}

Polynomial::Polynomial(std::vector<cdouble> ascending) : c_(std::move(ascending)) {
    if (c_.empty()) c_ = {cdouble(0.0)};
    normalize();
}

Polynomial Polynomial::variable() { return Polynomial{cdouble(0.0), cdouble(1.0)}; }

Polynomial Polynomial::from_real(std::span<const double> ascending) {
    std::vector<cdouble> c(ascending.size());
    std::transform(ascending.begin(), ascending.end(), c.begin(),
                   [](double x) { return cdouble(x); });
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const cdouble> roots, cdouble leading) {
    std::vector<cdouble> c{leading};  // descending while building
    c.reserve(roots.size() + 1);
    for (cdouble r : roots) {
        c.push_back(cdouble(0.0));
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
    }
    std::reverse(c.begin(), c.end());
    return Polynomial(std::move(c));
}

cdouble Polynomial::coeff(int k) const {
    if (k < 0 || k > degree()) return cdouble(0.0);
    return c_[static_cast<std::size_t>(k)];
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (cdouble ck : c_) m = std::max(m, std::abs(ck));
    return m;
}

bool Polynomial::is_real(double rel_tol) const {
    const double scale = max_abs_coeff();
    if (scale == 0.0) return true;
    for (cdouble ck : c_)
        if (std::abs(ck.imag()) > rel_tol * scale) return false;
    return true;
}

cdouble Polynomial::eval(cdouble s) const {
    cdouble acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<cdouble> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::conjugated() const {
    std::vector<cdouble> c(c_.size());
    std::transform(c_.begin(), c_.end(), c.begin(), [](cdouble x) { return std::conj(x); });
    return Polynomial(std::move(c));
}

Polynomial Polynomial::shifted(cdouble c) const {
    // Repeated synthetic division by (s - (-c)) accumulates the Taylor
    // coefficients of p about -c, i.e. p(s + c).
    std::vector<cdouble> work(c_.rbegin(), c_.rend());  // descending
    const std::size_t n = work.size();
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 1; i < n - k; ++i) work[i] += c * work[i - 1];
        out[k] = work[n - 1 - k];
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled_arg(cdouble a) const {
    std::vector<cdouble> c(c_);
    cdouble pw(1.0);
    for (std::size_t k = 1; k < c.size(); ++k) {
        pw *= a;
        c[k] *= pw;
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
    std::vector<cdouble> c(c_.size());
    std::transform(c_.begin(), c_.end(), c.begin(), [](cdouble x) { return -x; });
    return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    const std::vector<cdouble> mine = c_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cdouble(0.0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim_cancellation(mine, o.c_);
    normalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    const std::vector<cdouble> mine = c_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cdouble(0.0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim_cancellation(mine, o.c_);
    normalize();
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    if (is_zero() || o.is_zero()) {
        c_ = {cdouble(0.0)};
        return *this;
    }
    std::vector<cdouble> r(c_.size() + o.c_.size() - 1, cdouble(0.0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    normalize();
    return *this;
}

Polynomial& Polynomial::operator*=(cdouble k) {
    for (cdouble& ck : c_) ck *= k;
    normalize();
    return *this;
}

Polynomial& Polynomial::operator/=(cdouble k) {
    if (k == cdouble(0.0)) throw InvalidArgument("polynomial division by zero scalar");
    for (cdouble& ck : c_) ck /= k;
    normalize();
    return *this;
}

void Polynomial::normalize() {
    // Exact zeros only. Near-zero leading coefficients are trimmed where they
    // arise -- additive cancellation -- against the magnitude of the addends;
    // a magnitude test against the largest coefficient would also kill the
    // genuinely tiny leading terms that inductance products produce.
    while (c_.size() > 1 && c_.back() == cdouble(0.0)) c_.pop_back();
    check_cap();
}

void Polynomial::trim_cancellation(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    while (c_.size() > 1) {
        const std::size_t k = c_.size() - 1;
        const double mag_in = (k < a.size() ? std::abs(a[k]) : 0.0) +
                              (k < b.size() ? std::abs(b[k]) : 0.0);
        if (std::abs(c_.back()) <= kTrimRelTol * mag_in)
            c_.pop_back();
        else
            break;
    }
    if (c_.size() == 1) {
        const double mag_in = (!a.empty() ? std::abs(a[0]) : 0.0) +
                              (!b.empty() ? std::abs(b[0]) : 0.0);
        if (std::abs(c_[0]) <= kTrimRelTol * mag_in) c_[0] = cdouble(0.0);
    }
}

void Polynomial::check_cap() const {
    if (degree() > kMaxDegree)
        throw NumericError("polynomial degree " + std::to_string(degree()) +
                           " exceeds cap of " + std::to_string(kMaxDegree) +
                           " (runaway common-denominator growth?)");
}

namespace {

// Parlett-Reinsch style diagonal balancing by powers of two.
void balance_in_place(Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    bool changed = true;
    int passes = 0;
    while (changed && passes++ < 20) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double rn = 0.0, cn = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                rn += std::abs(m(i, j));
                cn += std::abs(m(j, i));
            }
            if (rn == 0.0 || cn == 0.0) continue;
            int exponent = 0;
            std::frexp(rn / cn, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double sc = std::ldexp(1.0, exponent);
                const double scaled = std::ldexp(cn, exponent) + std::ldexp(rn, -exponent);
                if (scaled < 0.95 * (cn + rn)) {
                    changed = true;
                    m.row(i) /= sc;
                    m.col(i) *= sc;
                }
            }
        }
    }
}

}  // namespace

std::vector<cdouble> Polynomial::roots() const {
    if (degree() < 1)
        throw InvalidArgument("constant polynomial has no roots");

    // Roots at the origin: strip low-order coefficients that are negligible
    // relative to the overall coefficient scale.
    const double scale = max_abs_coeff();
    std::vector<cdouble> c(c_);
    std::vector<cdouble> out;
    while (c.size() > 1 && std::abs(c.front()) <= kTrimRelTol * scale) {
        out.push_back(cdouble(0.0));
        c.erase(c.begin());
    }
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 0) return out;
    if (n == 1) {
        out.push_back(-c[0] / c[1]);
        return out;
    }

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = cdouble(1.0);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    balance_in_place(comp);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericError("companion-matrix eigenvalue iteration failed to converge");

    const Polynomial deriv = derivative();
    for (int i = 0; i < n; ++i) {
        cdouble r = es.eigenvalues()(i);
        // A couple of Newton steps sharpen isolated roots; skip when the
        // derivative is tiny (multiple root) to avoid wild corrections.
        for (int it = 0; it < 3; ++it) {
            const cdouble pv = eval(r);
            const cdouble dv = deriv.eval(r);
            if (std::abs(dv) < 1e-14 * std::max(1.0, std::abs(pv))) break;
            const cdouble step = pv / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            if (std::abs(step) > 0.1 * (1.0 + std::abs(r))) break;
            r -= step;
        }
        out.push_back(r);
    }
    return out;
}

double coeff_distance(const Polynomial& a, const Polynomial& b) {
    double d = 0.0;
    const int n = std::max(a.degree(), b.degree());
    for (int k = 0; k <= n; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
    return d;
}

}  // namespace ynet
