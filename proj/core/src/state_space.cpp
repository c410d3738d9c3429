#include "ynet/state_space.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ynet {

StateSpace::StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
                       std::optional<double> sample_period)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), dt(sample_period) {
    if (A.rows() != A.cols()) throw InvalidArgument("state matrix A must be square");
    if (B.rows() != A.rows()) throw InvalidArgument("B row count must match state dimension");
    if (C.cols() != A.cols()) throw InvalidArgument("C column count must match state dimension");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw InvalidArgument("D must be outputs x inputs");
    if (dt && *dt <= 0.0) throw InvalidArgument("discrete sample period must be positive");
}

Eigen::VectorXcd StateSpace::eigenvalues() const {
    if (order() == 0) return Eigen::VectorXcd(0);
    return A.eigenvalues();
}

StateSpace discretize_zoh(const StateSpace& ss, double ts) {
    if (ss.is_discrete()) throw InvalidArgument("model is already discrete");
    if (ts <= 0.0) throw InvalidArgument("sample period must be positive");
    const int n = ss.order();
    const int m = ss.inputs();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = ss.A * ts;
    aug.topRightCorner(n, m) = ss.B * ts;
    const Eigen::MatrixXd e = aug.exp();
    return StateSpace(e.topLeftCorner(n, n), e.topRightCorner(n, m), ss.C, ss.D, ts);
}

StateSpace undiscretize_zoh(const StateSpace& ss, std::vector<std::string>* warnings) {
    if (!ss.is_discrete()) throw InvalidArgument("model is already continuous");
    const double ts = *ss.dt;
    const int n = ss.order();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ss.A.cast<cdouble>());
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed in d2c");
    const Eigen::MatrixXcd V = es.eigenvectors();
    const Eigen::VectorXcd lam_d = es.eigenvalues();

    Eigen::VectorXcd lam_c(n);
    Eigen::VectorXcd binv(n);  // lambda_c / (lambda_d - 1), with the integrator limit
    for (int i = 0; i < n; ++i) {
        const cdouble ld = lam_d(i);
        if (std::abs(ld) < 1e-14)
            throw NumericError("discrete eigenvalue at the origin has no continuous preimage");
        if (warnings && std::abs(ld.imag()) < 1e-12 * std::abs(ld) && ld.real() < 0.0)
            warnings->push_back("discrete eigenvalue on the negative real axis (" +
                                std::to_string(ld.real()) +
                                "): principal logarithm is alias-ambiguous");
        lam_c(i) = std::log(ld) / ts;
        if (std::abs(ld - cdouble(1.0)) < 1e-9)
            binv(i) = cdouble(1.0 / ts);
        else
            binv(i) = lam_c(i) / (ld - cdouble(1.0));
    }

    const Eigen::MatrixXcd Vi = V.inverse();
    const Eigen::MatrixXcd Ac = V * lam_c.asDiagonal() * Vi;
    const Eigen::MatrixXcd Bc = V * binv.asDiagonal() * Vi * ss.B.cast<cdouble>();
    const double im_a = Ac.imag().cwiseAbs().maxCoeff();
    const double im_b = Bc.imag().cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, std::max(Ac.real().cwiseAbs().maxCoeff(),
                                                Bc.real().cwiseAbs().maxCoeff()));
    if (std::max(im_a, im_b) > 1e-6 * scale)
        throw NumericError("d2c produced a significantly complex realization; "
                           "conjugate eigenvalue pairing is broken");
    return StateSpace(Ac.real(), Bc.real(), ss.C, ss.D, std::nullopt);
}

Resolvent resolvent(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (n == 0) {
        Resolvent r;
        r.charpoly = Polynomial(cdouble(1.0));
        return r;
    }
    // Characteristic polynomial from eigenvalues (more robust than the trace
    // recursion for the mid-size models used here).
    Eigen::VectorXcd lam = A.eigenvalues();
    std::vector<cdouble> roots(lam.data(), lam.data() + lam.size());
    Polynomial chi = Polynomial::from_roots(roots, cdouble(1.0));
    // A is real, so force the coefficients real.
    std::vector<cdouble> cc = chi.coeffs();
    for (cdouble& c : cc) c = cdouble(c.real(), 0.0);
    chi = Polynomial(std::move(cc));

    // Faddeev-LeVerrier: with chi(s) = s^n + a_{n-1} s^{n-1} + ... + a_0,
    // N_{n-1} = I and N_{k-1} = A N_k + a_k I.
    Resolvent r;
    r.charpoly = chi;
    r.numerators.assign(static_cast<std::size_t>(n), Eigen::MatrixXd());
    Eigen::MatrixXd Nk = Eigen::MatrixXd::Identity(n, n);
    r.numerators[static_cast<std::size_t>(n - 1)] = Nk;
    for (int k = n - 1; k >= 1; --k) {
        Nk = A * Nk + chi.coeff(k).real() * Eigen::MatrixXd::Identity(n, n);
        r.numerators[static_cast<std::size_t>(k - 1)] = Nk;
    }
    return r;
}

TFMatrix ss_to_admittance(const StateSpace& ss) {
    if (ss.is_discrete())
        throw InvalidArgument("admittance conversion expects a continuous model");
    const int n = ss.order();
    const int m = ss.inputs();
    const int p = ss.outputs();

    TFMatrix y(p, m);
    if (n == 0) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < m; ++j)
                if (ss.D(i, j) != 0.0) y(i, j) = RationalFunction::constant(cdouble(-ss.D(i, j)));
        return y;
    }

    // Numerators by interpolation on a circle scaled to the eigenvalue cloud:
    // evaluating the resolvent through LU solves is stable where polynomial
    // recursions on stiff models are not. num_ij(s) = -(G_ij(s)) * chi(s) has
    // degree <= n, so n+1 nodes determine it; the inverse DFT on the circle is
    // unitary up to the radius scaling.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ss.A.cast<cdouble>(), false);
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    const Eigen::VectorXcd lam = es.eigenvalues();

    double log_sigma = 0.0;
    for (int i = 0; i < n; ++i) log_sigma += std::log(1.0 + std::abs(lam(i)));
    const double sigma = std::exp(log_sigma / n);

    std::vector<cdouble> roots(lam.data(), lam.data() + n);
    Polynomial chi = Polynomial::from_roots(roots);
    if (chi.is_real(1e-8)) {
        std::vector<cdouble> cc = chi.coeffs();
        for (cdouble& c : cc) c = cdouble(c.real(), 0.0);
        chi = Polynomial(std::move(cc));
    }

    const int nodes = n + 1;
    const double two_pi = 2.0 * 3.14159265358979323846;
    const double theta0 = 0.377;  // keeps nodes clear of on-circle eigenvalues
    std::vector<Eigen::MatrixXcd> values(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        const cdouble sk = sigma * std::polar(1.0, theta0 + two_pi * k / nodes);
        cdouble chik(1.0);
        for (int i = 0; i < n; ++i) chik *= sk - lam(i);
        const Eigen::MatrixXcd res =
            (sk * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<cdouble>())
                .partialPivLu()
                .solve(ss.B.cast<cdouble>());
        values[static_cast<std::size_t>(k)] =
            -(ss.C.cast<cdouble>() * res + ss.D.cast<cdouble>()) * chik;
    }

    for (int i = 0; i < p; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<cdouble> coeff(static_cast<std::size_t>(nodes));
            for (int d = 0; d < nodes; ++d) {
                cdouble acc(0.0);
                for (int k = 0; k < nodes; ++k)
                    acc += values[static_cast<std::size_t>(k)](i, j) *
                           std::polar(1.0, -two_pi * k * d / nodes);
                coeff[static_cast<std::size_t>(d)] =
                    acc * std::polar(1.0, -theta0 * d) / (double(nodes) * std::pow(sigma, d));
            }
            // Real models yield real coefficients up to rounding.
            double scale = 0.0, imag = 0.0;
            for (const cdouble& c : coeff) {
                scale = std::max(scale, std::abs(c));
                imag = std::max(imag, std::abs(c.imag()));
            }
            if (imag <= 1e-8 * scale)
                for (cdouble& c : coeff) c = cdouble(c.real(), 0.0);
            y(i, j) = RationalFunction(Polynomial(std::move(coeff)), chi);
        }
    return y;
}

TimeSeries step_response(const StateSpace& ss, int channel, double magnitude, double t_end,
                         double fs) {
    if (channel < 0 || channel >= ss.inputs()) throw InvalidArgument("step channel out of range");
    if (fs <= 0.0 || t_end <= 0.0) throw InvalidArgument("step response needs fs > 0 and t_end > 0");
    if (fs * t_end < 10.0) throw InvalidArgument("step response needs fs * t_end >= 10 samples");
    if (ss.is_discrete() && std::abs(fs * *ss.dt - 1.0) > 1e-9)
        throw InvalidArgument("requested fs conflicts with the model's sample period");

    StateSpace d = ss.is_discrete() ? ss : discretize_zoh(ss, 1.0 / fs);
    const double ts = *d.dt;
    const int steps = static_cast<int>(std::floor(t_end / ts + 0.5));

    TimeSeries out;
    out.t.resize(static_cast<std::size_t>(steps) + 1);
    out.y.resize(ss.outputs(), steps + 1);
    for (int i = 0; i < ss.outputs(); ++i) out.names.push_back("y" + std::to_string(i + 1));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(d.order());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d.inputs());
    u(channel) = magnitude;
    for (int k = 0; k <= steps; ++k) {
        out.t[static_cast<std::size_t>(k)] = k * ts;
        out.y.col(k) = d.C * x + d.D * u;
        x = d.A * x + d.B * u;
    }
    return out;
}

StateSpace tf_to_statespace(const TFMatrix& tf) {
    const int p = tf.rows();
    const int m = tf.cols();
    if (p == 0 || m == 0) throw InvalidArgument("empty transfer matrix");

    // Column-wise controllable canonical blocks over each column's common
    // denominator.
    std::vector<Polynomial> col_den(static_cast<std::size_t>(m));
    std::vector<std::vector<Polynomial>> col_num(static_cast<std::size_t>(m));
    int order = 0;
    for (int j = 0; j < m; ++j) {
        std::vector<const Polynomial*> factors;
        for (int i = 0; i < p; ++i) {
            const Polynomial& d = tf(i, j).den();
            if (d.degree() == 0) continue;
            bool seen = false;
            for (const Polynomial* f : factors)
                if (*f == d) { seen = true; break; }
            if (!seen) factors.push_back(&d);
        }
        Polynomial dj(cdouble(1.0));
        for (const Polynomial* f : factors) dj *= *f;
        col_den[static_cast<std::size_t>(j)] = dj;
        col_num[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) {
            const RationalFunction& f = tf(i, j);
            Polynomial n = f.num();
            if (f.den().degree() == 0) {
                n /= f.den().coeff(0);
                for (const Polynomial* g : factors) n *= *g;
            } else {
                bool skipped = false;
                for (const Polynomial* g : factors) {
                    if (!skipped && *g == f.den()) { skipped = true; continue; }
                    n *= *g;
                }
            }
            if (n.degree() > dj.degree())
                throw InvalidArgument("tf_to_statespace: entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is improper");
            if (!n.is_real(1e-9) || !dj.is_real(1e-9))
                throw InvalidArgument("tf_to_statespace requires real coefficients; lift "
                                      "static-frame functions first");
            col_num[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = n;
        }
        order += dj.degree();
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(order, order);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(order, m);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, order);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(p, m);

    int at = 0;
    for (int j = 0; j < m; ++j) {
        const Polynomial& dj = col_den[static_cast<std::size_t>(j)];
        const int n = dj.degree();
        const double lead = dj.leading().real();
        if (n == 0) {
            for (int i = 0; i < p; ++i)
                D(i, j) = col_num[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]
                              .coeff(0).real() / lead;
            continue;
        }
        // x' = A_j x + e_1 u_j, top-row companion of the monic denominator.
        for (int r = 0; r < n; ++r)
            A(at, at + r) = -dj.coeff(n - 1 - r).real() / lead;
        for (int r = 1; r < n; ++r) A(at + r, at + r - 1) = 1.0;
        B(at, j) = 1.0;
        for (int i = 0; i < p; ++i) {
            Polynomial nij = col_num[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            double dij = 0.0;
            if (nij.degree() == n) {
                dij = nij.coeff(n).real() / lead;
                nij -= dj * cdouble(dij);
            }
            D(i, j) = dij;
            // y_i += sum_r c_r x_r with strictly-proper numerator coefficients
            // aligned to the companion states (descending powers).
            for (int r = 0; r < n; ++r) C(i, at + r) += nij.coeff(n - 1 - r).real() / lead;
        }
        at += n;
    }
    return StateSpace(A, B, C, D);
}

std::vector<Eigen::MatrixXd> markov_parameters(const StateSpace& ss, int count) {
    if (!ss.is_discrete()) throw InvalidArgument("Markov parameters are defined for discrete models");
    std::vector<Eigen::MatrixXd> h;
    h.reserve(static_cast<std::size_t>(count));
    if (count <= 0) return h;
    h.push_back(ss.D);
    Eigen::MatrixXd akb = ss.B;
    for (int k = 1; k < count; ++k) {
        h.push_back(ss.C * akb);
        akb = ss.A * akb;
    }
    return h;
}

}  // namespace ynet
