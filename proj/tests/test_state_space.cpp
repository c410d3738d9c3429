#include <doctest.h>

#include <cmath>

#include "support/test_util.hpp"
#include "ynet/nonlinear.hpp"
#include "ynet/state_space.hpp"

using namespace ynet;

TEST_CASE("linearize a scalar pendulum-like model") {
    NonlinearModel m;
    m.state_dim = m.input_dim = m.output_dim = 1;
    m.f = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::VectorXd dx(1);
        dx(0) = -std::sin(x(0)) + u(0);
        return dx;
    };
    m.g = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) { return x; };
    m.x0 = Eigen::VectorXd::Zero(1);
    m.u0 = Eigen::VectorXd::Zero(1);

    const StateSpace ss = linearize(m, m.x0, m.u0);
    CHECK(std::abs(ss.A(0, 0) + 1.0) < 1e-9);
    CHECK(std::abs(ss.B(0, 0) - 1.0) < 1e-9);
    CHECK(std::abs(ss.C(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(ss.D(0, 0)) < 1e-12);

    // Non-equilibrium seed reports the residual.
    Eigen::VectorXd bad(1);
    bad << 1.0;
    CHECK_THROWS_AS(linearize(m, bad, m.u0), NumericError);
}

TEST_CASE("linearize is exact on a linear model") {
    Eigen::MatrixXd A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << -1.0, 2.0, 0.5, -3.0;
    B << 1.0, -0.5;
    C << 2.0, 1.0;
    D << 0.25;

    NonlinearModel m;
    m.state_dim = 2;
    m.input_dim = 1;
    m.output_dim = 1;
    m.f = [A, B](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(A * x + B * u);
    };
    m.g = [C, D](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(C * x + D * u);
    };
    m.x0 = Eigen::VectorXd::Zero(2);
    m.u0 = Eigen::VectorXd::Zero(1);

    const StateSpace ss = linearize(m, m.x0, m.u0);
    CHECK((ss.A - A).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((ss.B - B).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((ss.C - C).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((ss.D - D).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("find_equilibrium solves a stiffly damped system") {
    NonlinearModel m;
    m.state_dim = 2;
    m.input_dim = 1;
    m.output_dim = 1;
    m.f = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::VectorXd dx(2);
        dx(0) = -std::sin(x(0)) + 0.2 * x(1) + u(0);
        dx(1) = -x(1) + std::cos(x(0)) - 1.0;
        return dx;
    };
    m.g = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
        return Eigen::VectorXd(x.head(1));
    };
    m.x0 = Eigen::VectorXd::Constant(2, 0.1);
    m.u0 = Eigen::VectorXd::Constant(1, 0.05);

    const Eigen::VectorXd xeq = find_equilibrium(m, m.u0);
    CHECK(m.f(xeq, m.u0).norm() < 1e-10);
}

TEST_CASE("ss_to_admittance on first order and feedthrough models") {
    {
        Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1), D(1, 1);
        A << -1.0;
        B << 1.0;
        C << 1.0;
        D << 0.0;
        const TFMatrix y = ss_to_admittance(StateSpace(A, B, C, D));
        // Y = -1/(s+1)
        for (int k = 0; k < 5; ++k) {
            const cdouble s(test::uniform(-0.5, 2), test::uniform(-2, 2));
            CHECK(std::abs(y.eval(s)(0, 0) + 1.0 / (s + 1.0)) < 1e-12);
        }
    }
    {
        Eigen::MatrixXd D(2, 2);
        D << 1.0, -2.0, 0.5, 3.0;
        const StateSpace ss(Eigen::MatrixXd::Zero(0, 0), Eigen::MatrixXd::Zero(0, 2),
                            Eigen::MatrixXd::Zero(2, 0), D);
        const TFMatrix y = ss_to_admittance(ss);
        CHECK((y.eval(cdouble(0.7, 0.1)) + D.cast<cdouble>()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("admittance frequency response identity") {
    // tf_eval(ss_to_admittance(ss), jw) == -(C (jwI-A)^{-1} B + D)
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 3 + trial;
        Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n);
        A -= (A.eigenvalues().real().maxCoeff() + 0.5) * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, 2);
        const Eigen::MatrixXd C = Eigen::MatrixXd::Random(2, n);
        const Eigen::MatrixXd D = Eigen::MatrixXd::Random(2, 2);
        const TFMatrix y = ss_to_admittance(StateSpace(A, B, C, D));
        for (int k = 0; k < 20; ++k) {
            const double w = test::uniform(0.01, 50.0);
            const cdouble s(0.0, w);
            const Eigen::MatrixXcd res =
                (s * Eigen::MatrixXcd::Identity(n, n) - A.cast<cdouble>()).inverse();
            const Eigen::MatrixXcd expect =
                -(C.cast<cdouble>() * res * B.cast<cdouble>() + D.cast<cdouble>());
            const Eigen::MatrixXcd got = y.eval(s);
            CHECK((got - expect).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + expect.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("resolvent matches direct inverse") {
    const int n = 5;
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n);
    const Resolvent r = resolvent(A);
    for (int k = 0; k < 6; ++k) {
        const cdouble s(test::uniform(-2, 2), test::uniform(-2, 2));
        Eigen::MatrixXcd adj = Eigen::MatrixXcd::Zero(n, n);
        cdouble sk(1.0);
        for (int d = 0; d < n; ++d) {
            adj += sk * r.numerators[static_cast<std::size_t>(d)].cast<cdouble>();
            sk *= s;
        }
        const Eigen::MatrixXcd direct =
            (s * Eigen::MatrixXcd::Identity(n, n) - A.cast<cdouble>()).inverse() *
            r.charpoly.eval(s);
        CHECK((adj - direct).cwiseAbs().maxCoeff() < 1e-6 * direct.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("step response of a first order lag") {
    Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1), D(1, 1);
    A << -1.0;
    B << 1.0;
    C << 1.0;
    D << 0.0;
    const StateSpace ss(A, B, C, D);
    const TimeSeries ts = step_response(ss, 0, 1.0, 2.0, 1000.0);
    // y(1.0 s) = 1 - exp(-1)
    const std::size_t k1 = 1000;
    CHECK(ts.t[k1] == doctest::Approx(1.0));
    CHECK(std::abs(ts.y(0, static_cast<Eigen::Index>(k1)) - 0.63212) < 1e-5);
    CHECK(ts.y(0, 0) == 0.0);

    const TimeSeries zero = step_response(ss, 0, 0.0, 1.0, 100.0);
    CHECK(zero.y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("step response settles at the dc admittance value") {
    for (int trial = 0; trial < 3; ++trial) {
        const int n = 3;
        Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n);
        A -= (A.eigenvalues().real().maxCoeff() + 1.0) * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, 1);
        const Eigen::MatrixXd C = Eigen::MatrixXd::Random(1, n);
        const Eigen::MatrixXd D = Eigen::MatrixXd::Zero(1, 1);
        const StateSpace ss(A, B, C, D);

        const double tau = 1.0 / std::abs(A.eigenvalues().real().maxCoeff());
        const double p = 0.01;
        const TimeSeries ts = step_response(ss, 0, p, 10.0 * tau, 200.0 / tau);
        const TFMatrix y = ss_to_admittance(ss);
        const double expect = -(y.eval(cdouble(1e-12, 0.0))(0, 0) * p).real();
        const double got = ts.y(0, ts.y.cols() - 1);
        CHECK(std::abs(got - expect) <= 1e-3 * std::max(std::abs(expect), 1e-12));
    }
}

TEST_CASE("zoh round trip discrete to continuous") {
    const int n = 4;
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n);
    A -= (A.eigenvalues().real().maxCoeff() + 0.8) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, 2);
    const Eigen::MatrixXd C = Eigen::MatrixXd::Random(2, n);
    const Eigen::MatrixXd D = Eigen::MatrixXd::Random(2, 2);
    const StateSpace cont(A, B, C, D);
    const StateSpace disc = discretize_zoh(cont, 1e-3);
    const StateSpace back = undiscretize_zoh(disc);
    CHECK((back.A - A).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((back.B - B).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("tf_to_statespace reproduces the frequency response") {
    // Mixed proper/strictly-proper 2x2 with shared denominators.
    const Polynomial d1{cdouble(2.0), cdouble(1.0)};                      // s + 2
    const Polynomial d2{cdouble(5.0), cdouble(2.0), cdouble(1.0)};        // s^2+2s+5
    TFMatrix tf(2, 2);
    tf(0, 0) = RationalFunction(Polynomial{cdouble(1.0), cdouble(1.0)}, d1);  // proper
    tf(0, 1) = RationalFunction(Polynomial(cdouble(3.0)), d2);
    tf(1, 0) = RationalFunction(Polynomial(cdouble(-1.0)), d1);
    tf(1, 1) = RationalFunction(Polynomial{cdouble(0.0), cdouble(1.0)}, d2);

    const StateSpace ss = tf_to_statespace(tf);
    CHECK(ss.order() == 3);  // shared denominators merge within each column
    for (int k = 0; k < 12; ++k) {
        const cdouble s(0.0, test::uniform(0.1, 30.0));
        const Eigen::MatrixXcd direct = tf.eval(s);
        const int n = ss.order();
        const Eigen::MatrixXcd got =
            ss.C.cast<cdouble>() *
                (s * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<cdouble>()).inverse() *
                ss.B.cast<cdouble>() +
            ss.D.cast<cdouble>();
        CHECK((got - direct).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + direct.cwiseAbs().maxCoeff()));
    }

    // Improper entries are rejected.
    TFMatrix bad(1, 1);
    bad(0, 0) = RationalFunction(Polynomial{cdouble(0), cdouble(0), cdouble(1)}, d1);
    CHECK_THROWS_AS(tf_to_statespace(bad), InvalidArgument);
}
