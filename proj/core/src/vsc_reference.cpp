#include "ynet/vsc_reference.hpp"

#include <cmath>

#include "ynet/frames.hpp"
#include "ynet/state_space.hpp"

namespace ynet {

namespace {

enum : int { kId = 0, kIq, kVdc, kTheta, kZpll, kXdc, kXv, kGd, kGq, kNx };

inline Eigen::Vector2d rot(double th, const Eigen::Vector2d& v) {
    // system -> frame leading by th
    return {std::cos(th) * v(0) + std::sin(th) * v(1),
            -std::sin(th) * v(0) + std::cos(th) * v(1)};
}

inline Eigen::Vector2d irot(double th, const Eigen::Vector2d& v) {
    return {std::cos(th) * v(0) - std::sin(th) * v(1),
            std::sin(th) * v(0) + std::cos(th) * v(1)};
}

inline Eigen::Vector2d jmul(const Eigen::Vector2d& v) { return {-v(1), v(0)}; }

struct VscContext {
    VscParams vp;
    double Lc, Lm, Lt, rt;
    double mu;   ///< Lm / Lc, PCC tap weight on the bridge voltage
    double rho;  ///< r_grid - (Lm/Lc) r_choke, resistive tap weight
    double vac_ref;
    double p_ext;
};

Eigen::VectorXd vsc_f(const VscContext& c, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const VscParams& vp = c.vp;
    const Eigen::Vector2d i(x(kId), x(kIq));
    const Eigen::Vector2d vg(u(0), u(1));
    const double vdc = x(kVdc), th = x(kTheta);

    const Eigen::Vector2d i_c = rot(th, i);

    // Controller output before the PCC-voltage feedforward (control frame).
    const double e_dc = vdc - vp.vdc_ref;
    const double id_ref = vp.kp_dc * e_dc + x(kXdc);

    // The voltage-magnitude loop needs |v_pcc|, which itself depends on the
    // feedforward path; with feedforward gain one the tap algebra below stays
    // linear in v_pcc, and the magnitude enters only through the outer error.
    // Evaluate ubar with the previous-magnitude-free terms first:
    //   ubar = [kp_i (id_ref - id_c) + g_d - x_choke iq_c,
    //           kp_i (iq_ref - iq_c) + g_q + x_choke id_c]
    // where iq_ref depends on |v_pcc|. Solve the scalar fixed point for
    // |v_pcc| explicitly: v_pcc = vg + rho i + mu * R^T ubar, and ubar splits
    // into a part independent of |v_pcc| and kp_v * |v_pcc| on the q axis.
    const double ubar_d = vp.kp_i * (id_ref - i_c(0)) + x(kGd) - vp.x_choke * i_c(1);
    const double ubar_q0 = vp.kp_i * (-(vp.kp_v * c.vac_ref + x(kXv)) - i_c(1)) + x(kGq) +
                           vp.x_choke * i_c(0);
    // iq_ref = -(kp_v (vac_ref - |v|) + x_v) = kp_v |v| - kp_v vac_ref - x_v
    // so ubar_q = ubar_q0 + kp_i kp_v |v_pcc|.
    const Eigen::Vector2d base = vg + c.rho * i;
    const Eigen::Vector2d a0 = base + c.mu * irot(th, Eigen::Vector2d(ubar_d, ubar_q0));
    const Eigen::Vector2d aq = c.mu * irot(th, Eigen::Vector2d(0.0, vp.kp_i * vp.kp_v));
    // |v_pcc| solves |a0 + aq * m| = m for m >= 0; one damped fixed-point pass
    // per evaluation is exact at steady state and smooth nearby.
    double m = a0.norm();
    for (int it = 0; it < 20; ++it) {
        const double mn = (a0 + aq * m).norm();
        if (std::abs(mn - m) < 1e-14 * (1.0 + m)) { m = mn; break; }
        m = mn;
    }
    const Eigen::Vector2d v_pcc = a0 + aq * m;
    const double vmag = v_pcc.norm();

    const double e_v = c.vac_ref - vmag;
    const double iq_ref = -(vp.kp_v * e_v + x(kXv));
    const Eigen::Vector2d v_pcc_c = rot(th, v_pcc);

    const double ed = id_ref - i_c(0);
    const double eq = iq_ref - i_c(1);
    const Eigen::Vector2d vconv_c(vp.kp_i * ed + x(kGd) - vp.x_choke * i_c(1) + v_pcc_c(0),
                                  vp.kp_i * eq + x(kGq) + vp.x_choke * i_c(0) + v_pcc_c(1));
    const Eigen::Vector2d vconv = irot(th, vconv_c);

    const double p_conv = vconv_c(0) * i_c(0) + vconv_c(1) * i_c(1);

    Eigen::VectorXd dx(kNx);
    const Eigen::Vector2d didt = (vconv - vg - c.rt * i) / c.Lt - vp.omega0 * jmul(i);
    dx(kId) = didt(0);
    dx(kIq) = didt(1);
    dx(kVdc) = (c.p_ext - p_conv) / (vp.tau_dc * std::max(vdc, 0.05));
    dx(kTheta) = vp.kp_pll * v_pcc_c(1) + x(kZpll);
    dx(kZpll) = vp.ki_pll * v_pcc_c(1);
    dx(kXdc) = vp.ki_dc * e_dc;
    dx(kXv) = vp.ki_v * e_v;
    dx(kGd) = vp.ki_i * ed;
    dx(kGq) = vp.ki_i * eq;
    return dx;
}

}  // namespace

NonlinearModel vsc_reference_model(const VscParams& vp, const OperatingPoint& op) {
    if (vp.x_choke <= 0.0 || vp.x_grid <= 0.0 || vp.tau_dc <= 0.0)
        throw InvalidArgument("VSC model needs x_choke > 0, x_grid > 0 and tau_dc > 0");
    if (vp.kp_i < 0 || vp.ki_i < 0 || vp.kp_dc < 0 || vp.ki_dc < 0 || vp.kp_v < 0 ||
        vp.ki_v < 0 || vp.kp_pll < 0 || vp.ki_pll < 0)
        throw InvalidArgument("VSC controller gains must be non-negative");

    VscContext c;
    c.vp = vp;
    c.Lc = vp.x_choke / vp.omega0;
    c.Lm = vp.x_grid / vp.omega0;
    c.Lt = c.Lc + c.Lm;
    c.rt = vp.r_choke + vp.r_grid;
    c.mu = c.Lm / c.Lc;
    c.rho = vp.r_grid - c.mu * vp.r_choke;

    // Steady-state phasors at the terminal condition.
    const cdouble vg(op.Vx, op.Vy);
    if (std::abs(vg) <= 0.0) throw InvalidArgument("VSC operating point needs |V| > 0");
    const cdouble iph = std::conj(cdouble(op.P, op.Q) / vg);
    const cdouble zm(vp.r_grid, vp.x_grid);
    const cdouble zc(vp.r_choke, vp.x_choke);
    const cdouble vpcc = vg + zm * iph;
    const cdouble vconv = vpcc + zc * iph;

    c.vac_ref = std::abs(vpcc);
    c.p_ext = (vconv * std::conj(iph)).real();

    const double th0 = std::arg(vpcc);
    const cdouble i_c0 = iph * std::polar(1.0, -th0);

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(kNx);
    x0(kId) = iph.real();
    x0(kIq) = iph.imag();
    x0(kVdc) = vp.vdc_ref;
    x0(kTheta) = th0;
    x0(kZpll) = 0.0;
    x0(kXdc) = i_c0.real();
    x0(kXv) = -i_c0.imag();
    // Inner integrators hold the steady bridge voltage minus feedforward and
    // decoupling: vconv_c - v_pcc_c - j x_choke i_c = (r_choke + j x_choke -
    // j x_choke) i_c = r_choke i_c.
    x0(kGd) = vp.r_choke * i_c0.real();
    x0(kGq) = vp.r_choke * i_c0.imag();

    NonlinearModel m;
    m.state_dim = kNx;
    m.input_dim = 2;
    m.output_dim = 2;
    m.f = [c](const Eigen::VectorXd& x, const Eigen::VectorXd& u) { return vsc_f(c, x, u); };
    m.g = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
        return Eigen::VectorXd(Eigen::Vector2d(x(kId), x(kIq)));
    };
    m.x0 = x0;
    m.u0 = Eigen::Vector2d(op.Vx, op.Vy);
    return m;
}

AdmittanceBlock vsc_admittance(const VscParams& vp, const OperatingPoint& op) {
    NonlinearModel m = vsc_reference_model(vp, op);
    const Eigen::VectorXd xeq = find_equilibrium(m, m.u0);
    const StateSpace ss = linearize(m, xeq, m.u0);

    AdmittanceBlock blk;
    blk.tf = ss_to_admittance(ss);
    blk.frame = FrameTag::system();
    blk.injection_positive = true;
    blk.calibration = op;
    return blk;
}

}  // namespace ynet
