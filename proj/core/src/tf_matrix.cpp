#include "ynet/tf_matrix.hpp"

#include <bit>
#include <optional>
#include <sstream>

namespace ynet {

TFMatrix::TFMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw InvalidArgument("negative TFMatrix dimension");
    e_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), RationalFunction());
}

TFMatrix TFMatrix::identity(int n) {
    TFMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = RationalFunction::constant(cdouble(1.0));
    return m;
}

TFMatrix TFMatrix::constant(const Eigen::MatrixXcd& src) {
    TFMatrix m(static_cast<int>(src.rows()), static_cast<int>(src.cols()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j)
            if (src(i, j) != cdouble(0.0)) m(i, j) = RationalFunction::constant(src(i, j));
    return m;
}

TFMatrix TFMatrix::constant(const Eigen::MatrixXd& src) {
    return constant(Eigen::MatrixXcd(src.cast<cdouble>()));
}

void TFMatrix::check_range(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw InvalidArgument("TFMatrix index out of range");
}

RationalFunction& TFMatrix::operator()(int i, int j) {
    check_range(i, j);
    return e_[static_cast<std::size_t>(i) * cols_ + j];
}

const RationalFunction& TFMatrix::operator()(int i, int j) const {
    check_range(i, j);
    return e_[static_cast<std::size_t>(i) * cols_ + j];
}

TFMatrix& TFMatrix::operator+=(const TFMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidArgument("TFMatrix addition dimension mismatch: " + std::to_string(rows_) +
                              "x" + std::to_string(cols_) + " vs " + std::to_string(o.rows_) +
                              "x" + std::to_string(o.cols_));
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
}

TFMatrix& TFMatrix::operator-=(const TFMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidArgument("TFMatrix subtraction dimension mismatch");
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
}

TFMatrix TFMatrix::operator*(const TFMatrix& o) const {
    if (cols_ != o.rows_) throw InvalidArgument("TFMatrix product dimension mismatch");
    TFMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            RationalFunction acc;
            for (int k = 0; k < cols_; ++k) {
                const RationalFunction& a = (*this)(i, k);
                const RationalFunction& b = o(k, j);
                if (a.is_zero() || b.is_zero()) continue;
                acc += a * b;
            }
            r(i, j) = std::move(acc);
        }
    return r;
}

TFMatrix operator*(const Eigen::MatrixXcd& m, const TFMatrix& a) {
    if (static_cast<int>(m.cols()) != a.rows()) throw InvalidArgument("constant*TFMatrix dimension mismatch");
    TFMatrix r(static_cast<int>(m.rows()), a.cols());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) {
            RationalFunction acc;
            for (int k = 0; k < a.rows(); ++k) {
                if (m(i, k) == cdouble(0.0) || a(k, j).is_zero()) continue;
                acc += a(k, j) * m(i, k);
            }
            r(i, j) = std::move(acc);
        }
    return r;
}

TFMatrix operator*(const TFMatrix& a, const Eigen::MatrixXcd& m) {
    if (a.cols() != static_cast<int>(m.rows())) throw InvalidArgument("TFMatrix*constant dimension mismatch");
    TFMatrix r(a.rows(), static_cast<int>(m.cols()));
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) {
            RationalFunction acc;
            for (int k = 0; k < a.cols(); ++k) {
                if (m(k, j) == cdouble(0.0) || a(i, k).is_zero()) continue;
                acc += a(i, k) * m(k, j);
            }
            r(i, j) = std::move(acc);
        }
    return r;
}

TFMatrix TFMatrix::transpose() const {
    TFMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Eigen::MatrixXcd TFMatrix::eval(cdouble s) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            const RationalFunction& f = (*this)(i, j);
            const cdouble dv = f.den().eval(s);
            const cdouble nv = f.num().eval(s);
            const cdouble v = nv / dv;
            if (dv == cdouble(0.0) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream os;
                os << "pole hit evaluating entry (" << i << "," << j << ") at s = " << s.real()
                   << (s.imag() < 0 ? " - " : " + ") << std::abs(s.imag()) << "j";
                throw PoleError(os.str());
            }
            m(i, j) = v;
        }
    return m;
}

namespace {

/// Division-free determinant of a polynomial matrix by Laplace expansion,
/// memoized over column subsets. Entry (n-k, S) is expanded along its first
/// row; zero entries prune the recursion.
Polynomial poly_det(const std::vector<std::vector<Polynomial>>& p) {
    const int n = static_cast<int>(p.size());
    if (n == 0) return Polynomial(cdouble(1.0));
    if (n > 20) throw NumericError("determinant size cap exceeded (n > 20)");
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    std::vector<std::optional<Polynomial>> memo(static_cast<std::size_t>(full) + 1);

    // f(mask) = det of rows [n - popcount(mask), n) on the columns in mask.
    auto solve = [&](auto&& self, std::uint32_t mask) -> const Polynomial& {
        auto& slot = memo[mask];
        if (slot) return *slot;
        const int k = std::popcount(mask);
        const int row = n - k;
        Polynomial acc;
        int t = 0;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            const Polynomial& pij = p[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
            if (!pij.is_zero()) {
                if (k == 1) {
                    acc += pij;
                } else {
                    const Polynomial& sub = self(self, mask & ~(1u << j));
                    if (!sub.is_zero()) {
                        Polynomial term = pij * sub;
                        if (t % 2) acc -= term; else acc += term;
                    }
                }
            }
            ++t;
        }
        slot = std::move(acc);
        return *slot;
    };
    return solve(solve, full);
}

}  // namespace

RationalFunction TFMatrix::det() const {
    if (!is_square()) throw InvalidArgument("determinant of non-square TFMatrix");
    const int n = rows_;
    if (n == 0) return RationalFunction::constant(cdouble(1.0));

    // Clear each row by the product of its distinct non-constant denominators.
    Polynomial den_total(cdouble(1.0));
    std::vector<std::vector<Polynomial>> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<const Polynomial*> factors;  // distinct by coefficient equality
        for (int j = 0; j < n; ++j) {
            const Polynomial& d = (*this)(i, j).den();
            if (d.degree() == 0) continue;
            bool seen = false;
            for (const Polynomial* f : factors)
                if (*f == d) { seen = true; break; }
            if (!seen) factors.push_back(&d);
        }
        p[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const RationalFunction& f = (*this)(i, j);
            Polynomial cleared = f.num();
            if (f.den().degree() == 0) {
                cleared /= f.den().coeff(0);
                for (const Polynomial* g : factors) cleared *= *g;
            } else {
                // num_ij * product of the other factors; its own denominator
                // appears exactly once in the factor list and is skipped once.
                bool skipped = false;
                for (const Polynomial* g : factors) {
                    if (!skipped && *g == f.den()) { skipped = true; continue; }
                    cleared *= *g;
                }
            }
            p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(cleared);
        }
        for (const Polynomial* g : factors) den_total *= *g;
    }

    Polynomial num = poly_det(p);
    return RationalFunction(std::move(num), std::move(den_total));
}

TFMatrix TFMatrix::minor_matrix(int r, int c) const {
    check_range(r, c);
    TFMatrix m(rows_ - 1, cols_ - 1);
    for (int i = 0, mi = 0; i < rows_; ++i) {
        if (i == r) continue;
        for (int j = 0, mj = 0; j < cols_; ++j) {
            if (j == c) continue;
            m(mi, mj) = (*this)(i, j);
            ++mj;
        }
        ++mi;
    }
    return m;
}

RationalFunction TFMatrix::cofactor(int r, int c) const {
    RationalFunction d = minor_matrix(r, c).det();
    if ((r + c) % 2) return -d;
    return d;
}

TFMatrix TFMatrix::inverse2x2() const {
    if (rows_ != 2 || cols_ != 2) throw InvalidArgument("inverse2x2 requires a 2x2 matrix");
    const RationalFunction d =
        (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    if (d.is_zero()) throw NumericError("2x2 TFMatrix is singular as a rational matrix");
    TFMatrix r(2, 2);
    r(0, 0) = (*this)(1, 1) / d;
    r(0, 1) = -(*this)(0, 1) / d;
    r(1, 0) = -(*this)(1, 0) / d;
    r(1, 1) = (*this)(0, 0) / d;
    return r;
}

TFMatrix TFMatrix::simplified(double tol) const {
    TFMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).simplify(tol).value;
    return r;
}

void TFMatrix::set_block(int i, int j, const TFMatrix& block) {
    if (i + block.rows_ > rows_ || j + block.cols_ > cols_ || i < 0 || j < 0)
        throw InvalidArgument("set_block out of range");
    for (int a = 0; a < block.rows_; ++a)
        for (int b = 0; b < block.cols_; ++b) (*this)(i + a, j + b) = block(a, b);
}

}  // namespace ynet
