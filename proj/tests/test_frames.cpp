#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/test_util.hpp"
#include "ynet/frames.hpp"

using namespace ynet;

namespace {

AdmittanceBlock random_dq_block() {
    TFMatrix m(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m(i, j) = RationalFunction(test::random_polynomial(1), test::random_polynomial(2));
    AdmittanceBlock b;
    b.tf = m;
    b.frame = FrameTag::system();
    return b;
}

}  // namespace

TEST_CASE("rotation matrices") {
    CHECK((frames::rotation(0.0) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::Matrix2d t90 = frames::rotation(std::numbers::pi / 2.0);
    Eigen::Matrix2d expect;
    expect << 0, 1, -1, 0;
    CHECK((t90 - expect).cwiseAbs().maxCoeff() < 1e-15);

    const double a = 50.5 * std::numbers::pi / 180.0;
    CHECK(frames::rotation(a)(0, 0) == doctest::Approx(std::cos(a)).epsilon(1e-15));

    for (int k = 0; k < 10; ++k) {
        const Eigen::Matrix2d t = frames::rotation(test::uniform(-6, 6));
        CHECK((t.transpose() * t - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("rotate_admittance round trip and det invariance") {
    const AdmittanceBlock b = random_dq_block();

    const AdmittanceBlock same = frames::rotate_admittance(b, FrameTag::system());
    for (int k = 0; k < 4; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK((same.tf.eval(s) - b.tf.eval(s)).cwiseAbs().maxCoeff() < 1e-12);
    }

    const double ang = 0.83;
    const AdmittanceBlock there = frames::rotate_admittance(b, FrameTag::local(ang));
    const AdmittanceBlock back = frames::rotate_admittance(there, FrameTag::system());
    for (int k = 0; k < 6; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK((back.tf.eval(s) - b.tf.eval(s)).cwiseAbs().maxCoeff() < 1e-12);
    }

    const RationalFunction d0 = b.tf.det();
    const RationalFunction d1 = there.tf.det();
    for (int k = 0; k < 32; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK(std::abs(d0.eval(s) - d1.eval(s)) < 1e-9 * (1.0 + std::abs(d0.eval(s))));
    }

    AdmittanceBlock st;
    st.tf = TFMatrix::identity(2);
    st.frame = FrameTag::static_frame();
    CHECK_THROWS_AS(frames::rotate_admittance(st, FrameTag::system()), InvalidArgument);
}

TEST_CASE("static_to_alphabeta splits") {
    // Real-coefficient F lifts to diag(F, F).
    const RationalFunction f(test::random_polynomial(2), test::random_polynomial(3));
    const TFMatrix ab = frames::static_to_alphabeta(f);
    for (int k = 0; k < 5; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        const Eigen::MatrixXcd m = ab.eval(s);
        CHECK(std::abs(m(0, 0) - f.eval(s)) < 1e-9);
        CHECK(std::abs(m(1, 1) - f.eval(s)) < 1e-9);
        CHECK(std::abs(m(0, 1)) < 1e-9);
        CHECK(std::abs(m(1, 0)) < 1e-9);
    }

    // F = j lifts to [[0, -1], [1, 0]].
    const RationalFunction fj(Polynomial(cdouble(0.0, 1.0)), Polynomial(cdouble(1.0)));
    const Eigen::MatrixXcd mj = frames::static_to_alphabeta(fj).eval(cdouble(0.37, 0.0));
    Eigen::Matrix2cd expect;
    expect << 0, -1, 1, 0;
    CHECK((mj - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("alphabeta lift is a ring homomorphism") {
    for (int trial = 0; trial < 10; ++trial) {
        const RationalFunction f(test::random_polynomial(2, true), test::random_polynomial(2, true));
        const RationalFunction g(test::random_polynomial(1, true), test::random_polynomial(2, true));
        const TFMatrix lhs = frames::static_to_alphabeta(f * g);
        const TFMatrix rhs = frames::static_to_alphabeta(f) * frames::static_to_alphabeta(g);
        for (int k = 0; k < 4; ++k) {
            const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
            CHECK((lhs.eval(s) - rhs.eval(s)).cwiseAbs().maxCoeff() <
                  1e-8 * (1.0 + lhs.eval(s).cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("static_to_dq substitution") {
    const double w0 = 377.0;
    // F = 1/s -> [[s/(s^2+w0^2), w0/(s^2+w0^2)], [-w0/(...), s/(...)]]
    const RationalFunction f(Polynomial(cdouble(1.0)), Polynomial::variable());
    const TFMatrix dq = frames::static_to_dq(f, w0);
    for (int k = 0; k < 6; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-50, 50));
        const cdouble den = s * s + w0 * w0;
        const Eigen::MatrixXcd m = dq.eval(s);
        CHECK(std::abs(m(0, 0) - s / den) < 1e-12);
        CHECK(std::abs(m(0, 1) - w0 / den) < 1e-12);
        CHECK(std::abs(m(1, 0) + w0 / den) < 1e-12);
        CHECK(std::abs(m(1, 1) - s / den) < 1e-12);
    }

    // omega0 = 0 degenerates to the alphabeta lift.
    const RationalFunction g(test::random_polynomial(2, true), test::random_polynomial(3, true));
    const TFMatrix a = frames::static_to_dq(g, 0.0);
    const TFMatrix b = frames::static_to_alphabeta(g);
    for (int k = 0; k < 4; ++k) {
        const cdouble s(test::uniform(-1, 1), test::uniform(-1, 1));
        CHECK((a.eval(s) - b.eval(s)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("dq lift shifts poles by -j omega0 and adds conjugates") {
    const double w0 = 120.0;
    const std::vector<cdouble> poles{cdouble(-1.0, 40.0), cdouble(-0.3, -25.0)};
    const RationalFunction f(Polynomial(cdouble(1.0)), Polynomial::from_roots(poles));
    const TFMatrix dq = frames::static_to_dq(f, w0);

    // Poles of the lifted entries: every static pole shifted down by j w0,
    // together with the conjugates.
    std::vector<cdouble> expect;
    for (const cdouble& p : poles) {
        expect.push_back(p - cdouble(0.0, w0));
        expect.push_back(std::conj(p - cdouble(0.0, w0)));
    }
    const std::vector<cdouble> got = dq(0, 0).den().roots();
    CHECK(test::root_multiset_distance(got, expect) < 1e-7);
}
