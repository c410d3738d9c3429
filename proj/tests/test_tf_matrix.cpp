#include <doctest.h>

#include "support/test_util.hpp"
#include "ynet/tf_matrix.hpp"

using namespace ynet;

namespace {

TFMatrix random_tf(int n, int max_deg = 2) {
    TFMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = RationalFunction(test::random_polynomial(1 + (i + j) % max_deg),
                                       test::random_polynomial(max_deg));
    return m;
}

}  // namespace

TEST_CASE("tf_add identities") {
    const TFMatrix y = random_tf(2);
    const TFMatrix sum = y + TFMatrix::zeros(2, 2);
    for (int k = 0; k < 4; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK((sum.eval(s) - y.eval(s)).cwiseAbs().maxCoeff() < 1e-12);
    }

    // diag(1/s) + diag(1/s) = diag(2/s)
    TFMatrix d(2, 2);
    const RationalFunction inv_s(Polynomial(cdouble(1.0)), Polynomial::variable());
    d(0, 0) = inv_s;
    d(1, 1) = inv_s;
    const TFMatrix two = d + d;
    const cdouble s(0.0, 2.0);
    CHECK(std::abs(two.eval(s)(0, 0) - cdouble(0.0, -1.0)) < 1e-14);  // 2/(2j) = -j
    CHECK(std::abs(two.eval(s)(1, 1) - cdouble(0.0, -1.0)) < 1e-14);

    CHECK_THROWS_AS(TFMatrix::zeros(2, 2) + TFMatrix::zeros(3, 3), InvalidArgument);
}

TEST_CASE("tf_eval basics and pole error") {
    TFMatrix m(1, 1);
    m(0, 0) = RationalFunction(Polynomial(cdouble(1.0)), Polynomial::variable());
    CHECK(std::abs(m.eval(cdouble(0, 1))(0, 0) - cdouble(0, -1)) < 1e-15);  // 1/j = -j
    CHECK_THROWS_AS(m.eval(cdouble(0.0)), PoleError);

    const TFMatrix id = TFMatrix::identity(3);
    CHECK((id.eval(cdouble(1.5, -2.0)) - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("tf_det on simple matrices") {
    CHECK(TFMatrix::identity(2).det().eval(cdouble(0.3, 1.0)) == cdouble(1.0));

    // diag(a, b) -> a*b
    TFMatrix d(2, 2);
    d(0, 0) = RationalFunction(test::random_polynomial(2), test::random_polynomial(1));
    d(1, 1) = RationalFunction(test::random_polynomial(1), test::random_polynomial(2));
    const RationalFunction det = d.det();
    for (int k = 0; k < 8; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        const cdouble expect = d(0, 0).eval(s) * d(1, 1).eval(s);
        CHECK(std::abs(det.eval(s) - expect) < 1e-9 * (1.0 + std::abs(expect)));
    }

    CHECK_THROWS_AS(TFMatrix::zeros(2, 3).det(), InvalidArgument);
}

TEST_CASE("determinant is invariant under orthogonal similarity") {
    for (int n : {2, 3, 4}) {
        const TFMatrix m = random_tf(n);
        // Random constant orthogonal Q from QR of a random matrix.
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = test::uniform(-1, 1);
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
        const Eigen::MatrixXcd qc = q.cast<cdouble>();

        const TFMatrix sim = qc.transpose() * m * qc;
        const RationalFunction d0 = m.det();
        const RationalFunction d1 = sim.det();
        for (int k = 0; k < 32; ++k) {
            const cdouble s(test::uniform(-1.5, 1.5), test::uniform(-1.5, 1.5));
            const cdouble v0 = d0.eval(s), v1 = d1.eval(s);
            CHECK(std::abs(v0 - v1) <= 1e-9 * (1.0 + std::abs(v0)));
        }
    }
}

TEST_CASE("eval distributes over add") {
    const TFMatrix a = random_tf(3);
    const TFMatrix b = random_tf(3);
    const TFMatrix sum = a + b;
    for (int k = 0; k < 16; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK((sum.eval(s) - (a.eval(s) + b.eval(s))).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("cofactor inverse of 2x2") {
    const TFMatrix m = random_tf(2);
    const TFMatrix inv = m.inverse2x2();
    for (int k = 0; k < 6; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        const Eigen::MatrixXcd prod = m.eval(s) * inv.eval(s);
        CHECK((prod - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("determinant matches complex evaluation on a dense 5x5") {
    const TFMatrix m = random_tf(5, 2);
    const RationalFunction d = m.det();
    for (int k = 0; k < 8; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        const cdouble direct = m.eval(s).determinant();
        CHECK(std::abs(d.eval(s) - direct) < 1e-8 * (1.0 + std::abs(direct)));
    }
}
