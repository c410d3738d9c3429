#include "ynet/components.hpp"

#include <cmath>

#include "ynet/frames.hpp"

namespace ynet {
namespace components {

TorqueCoefficients torque_coefficients(const GeneratorParams& gp, const OperatingPoint& op) {
    TorqueCoefficients t;
    t.Tx = gp.E * std::sin(op.delta) / gp.Xg;
    t.Ty = -gp.E * std::cos(op.delta) / gp.Xg;
    t.Tdelta = gp.E * (op.Vx * std::cos(op.delta) + op.Vy * std::sin(op.delta)) / gp.Xg;
    return t;
}

SolvedTerminal solve_terminal(double P, double Q, double V, double theta_v, double Xg) {
    if (V <= 0.0) throw InvalidArgument("terminal voltage magnitude must be positive");
    const cdouble vph = std::polar(V, theta_v);
    const cdouble i = std::conj(cdouble(P, Q) / vph);
    const cdouble e = vph + cdouble(0.0, Xg) * i;
    SolvedTerminal st;
    st.E = std::abs(e);
    st.op.Vx = vph.real();
    st.op.Vy = vph.imag();
    st.op.theta_v = theta_v;
    st.op.delta = std::arg(e);
    st.op.P = P;
    st.op.Q = Q;
    return st;
}

namespace {

void check_generator_consistency(const GeneratorParams& gp, const OperatingPoint& op) {
    if (gp.H <= 0.0 || gp.Xg <= 0.0 || gp.E <= 0.0)
        throw InvalidArgument("generator parameters require H > 0, Xg > 0, E > 0");
    if (op.vmag() <= 0.0) throw InvalidArgument("operating point needs |V| > 0");

    const cdouble vph(op.Vx, op.Vy);
    const cdouble e = std::polar(gp.E, op.delta);
    const cdouble i = (e - vph) / cdouble(0.0, gp.Xg);
    const cdouble s = vph * std::conj(i);
    const double mismatch = std::abs(s - cdouble(op.P, op.Q));
    if (mismatch > 1e-6)
        throw InvalidArgument("operating point inconsistent with generator internals: "
                              "|S(E,delta) - (P+jQ)| = " + std::to_string(mismatch));
}

}  // namespace

StateSpace gen_classical_statespace(const GeneratorParams& gp, const OperatingPoint& op) {
    check_generator_consistency(gp, op);
    const TorqueCoefficients t = torque_coefficients(gp, op);

    Eigen::MatrixXd A(2, 2), B(2, 2), C(2, 2), D(2, 2);
    A << 0.0, gp.omega0,
        -t.Tdelta / (2.0 * gp.H), -gp.D1 / (2.0 * gp.H);
    B << 0.0, 0.0,
        -t.Tx / (2.0 * gp.H), -t.Ty / (2.0 * gp.H);
    C << -t.Ty, 0.0,
        t.Tx, 0.0;
    D << 0.0, -1.0 / gp.Xg,
        1.0 / gp.Xg, 0.0;
    return StateSpace(A, B, C, D);
}

AdmittanceBlock gen_classical_admittance(const GeneratorParams& gp, const OperatingPoint& op) {
    AdmittanceBlock blk;
    blk.tf = ss_to_admittance(gen_classical_statespace(gp, op));
    blk.frame = FrameTag::system();
    blk.injection_positive = true;
    blk.calibration = op;
    return blk;
}

TFMatrix rl_branch_impedance(double R, double L, double omega0) {
    if (R < 0.0 || L < 0.0) throw InvalidArgument("branch R and L must be non-negative");
    TFMatrix z(2, 2);
    const Polynomial rl({cdouble(R), cdouble(L)});
    z(0, 0) = RationalFunction(rl, Polynomial(cdouble(1.0)));
    z(1, 1) = z(0, 0);
    z(0, 1) = RationalFunction::constant(cdouble(-omega0 * L));
    z(1, 0) = RationalFunction::constant(cdouble(omega0 * L));
    return z;
}

AdmittanceBlock rl_branch_admittance(double R, double L, double omega0) {
    if (R == 0.0 && L == 0.0)
        throw InvalidArgument("R = L = 0 short circuit has no admittance representation");
    AdmittanceBlock blk;
    blk.tf = rl_branch_impedance(R, L, omega0).inverse2x2();
    blk.frame = FrameTag::system();
    blk.injection_positive = true;
    return blk;
}

RationalFunction rlc_branch_static_admittance(double R, double X, double Xc, double omega0) {
    if (X <= 0.0 || Xc <= 0.0) throw InvalidArgument("series R-L-C branch needs X > 0 and Xc > 0");
    const double L = X / omega0;
    // 1/(C s) with C = 1/(omega0 Xc) gives the term omega0*Xc/s, so
    // Z = (L s^2 + R s + omega0 Xc) / s.
    Polynomial num({cdouble(0.0), cdouble(1.0)});
    Polynomial den({cdouble(omega0 * Xc), cdouble(R), cdouble(L)});
    return RationalFunction(std::move(num), std::move(den));
}

AdmittanceBlock rlc_branch_admittance(double R, double X, double Xc, double omega0) {
    AdmittanceBlock blk;
    blk.tf = frames::static_to_dq(rlc_branch_static_admittance(R, X, Xc, omega0), omega0);
    blk.frame = FrameTag::system();
    blk.injection_positive = true;
    return blk;
}

DfigAdmittances dfig_static_admittance(const DfigParams& dp) {
    if (dp.comp <= 0.0 || dp.comp >= 1.0)
        throw InvalidArgument("series compensation level must be inside (0, 1)");
    if (dp.rs < 0.0 || dp.rr < 0.0 || dp.Xls <= 0.0 || dp.Xlr <= 0.0)
        throw InvalidArgument("machine resistances must be >= 0 and leakage reactances > 0");

    const double wm = dp.wm * dp.omega0;  // rotor speed, rad/s
    const double Lt = (dp.Xls + dp.Xlr) / dp.omega0;

    // Z_dfig = rr/slip + rs + Lt s with slip = 1 - j wm / s, so
    // rr/slip = rr s / (s - j wm) and
    // Z_dfig = [Lt s^2 + (rs + rr - j wm Lt) s - j wm rs] / (s - j wm).
    Polynomial zn({cdouble(0.0, -wm * dp.rs), cdouble(dp.rs + dp.rr, -wm * Lt), cdouble(Lt)});
    Polynomial zd({cdouble(0.0, -wm), cdouble(1.0)});

    DfigAdmittances out;
    out.y_dfig = RationalFunction(zd, zn);
    out.y_line = rlc_branch_static_admittance(dp.R, dp.XL, dp.comp * dp.XL, dp.omega0);
    return out;
}

StateSpace torsional_statespace(const TorsionalParams& tp, const OperatingPoint& op) {
    const std::size_t n = tp.H.size();
    if (n == 0) throw InvalidArgument("torsional chain needs at least one mass");
    if (tp.D.size() != n) throw InvalidArgument("torsional D must match the mass count");
    if (tp.K.size() + 1 != n)
        throw InvalidArgument("torsional K must have one entry per shaft section (masses - 1)");
    for (double h : tp.H)
        if (h <= 0.0) throw InvalidArgument("torsional inertias must be positive");

    check_generator_consistency(tp.gen, op);
    const TorqueCoefficients t = torque_coefficients(tp.gen, op);
    const double w0 = tp.gen.omega0;
    const int ni = static_cast<int>(n);

    // States: [delta_0..delta_{n-1}, omega_0..omega_{n-1}]; mass 0 carries the
    // electrical coupling through Tdelta/Tx/Ty.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * ni, 2 * ni);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * ni, 2);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2 * ni);
    Eigen::MatrixXd D(2, 2);

    for (int i = 0; i < ni; ++i) A(i, ni + i) = w0;
    for (int i = 0; i < ni; ++i) {
        const double m2h = 2.0 * tp.H[static_cast<std::size_t>(i)];
        if (i > 0) {
            const double k = tp.K[static_cast<std::size_t>(i - 1)];
            A(ni + i, i) += -k / m2h;
            A(ni + i, i - 1) += k / m2h;
        }
        if (i + 1 < ni) {
            const double k = tp.K[static_cast<std::size_t>(i)];
            A(ni + i, i) += -k / m2h;
            A(ni + i, i + 1) += k / m2h;
        }
        A(ni + i, ni + i) = -tp.D[static_cast<std::size_t>(i)] / m2h;
    }
    const double m2h0 = 2.0 * tp.H[0];
    A(ni, 0) += -t.Tdelta / m2h0;
    B(ni, 0) = -t.Tx / m2h0;
    B(ni, 1) = -t.Ty / m2h0;
    C(0, 0) = -t.Ty;
    C(1, 0) = t.Tx;
    D << 0.0, -1.0 / tp.gen.Xg,
        1.0 / tp.gen.Xg, 0.0;
    return StateSpace(A, B, C, D);
}

AdmittanceBlock torsional_gen_admittance(const TorsionalParams& tp, const OperatingPoint& op) {
    AdmittanceBlock blk;
    blk.tf = ss_to_admittance(torsional_statespace(tp, op));
    blk.frame = FrameTag::system();
    blk.injection_positive = true;
    blk.calibration = op;
    return blk;
}

}  // namespace components
}  // namespace ynet
