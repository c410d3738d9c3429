#pragma once

#include "ynet/admittance.hpp"
#include "ynet/state_space.hpp"

namespace ynet {
namespace components {

/// Classical (second-order) synchronous generator: constant voltage magnitude
/// E behind transient reactance Xg, swing dynamics with inertia H and damping
/// D1, all per-unit on the case base.
struct GeneratorParams {
    double H;            ///< inertia constant, s
    double D1;           ///< damping coefficient, pu
    double Xg;           ///< transient reactance, pu
    double E;            ///< internal voltage magnitude, pu
    double omega0 = 377.0;  ///< nominal speed, rad/s
};

/// Small-signal torque/power coefficients of the classical machine at an
/// operating point:
///   dPe = Tx dVx + Ty dVy + Tdelta ddelta.
struct TorqueCoefficients {
    double Tx;
    double Ty;
    double Tdelta;
};

TorqueCoefficients torque_coefficients(const GeneratorParams& gp, const OperatingPoint& op);

/// Terminal condition consistent with (P, Q, V, theta_v) dispatch: solves the
/// internal voltage E*exp(j*delta) = V + j*Xg*I and returns the operating
/// point plus the implied E (callers decide whether to adopt it).
struct SolvedTerminal {
    OperatingPoint op;
    double E;
};
SolvedTerminal solve_terminal(double P, double Q, double V, double theta_v, double Xg);

/// State-space of the classical generator seen from its terminal: inputs
/// (dVx, dVy), outputs the current components flowing out of the machine.
StateSpace gen_classical_statespace(const GeneratorParams& gp, const OperatingPoint& op);

/// 2x2 dq admittance block of the classical generator. The operating point
/// must reproduce the dispatched complex power through E,delta,Xg to 1e-6;
/// otherwise the mismatch magnitude is reported in the error.
AdmittanceBlock gen_classical_admittance(const GeneratorParams& gp, const OperatingPoint& op);

/// Series R-L branch in the rotating dq frame. The dq impedance is
///   Z = [[R + sL, -omega0 L], [omega0 L, R + sL]]
/// and the returned block holds its exact rational inverse (a true
/// admittance; the impedance form is available separately).
AdmittanceBlock rl_branch_admittance(double R, double L, double omega0 = 377.0);
TFMatrix rl_branch_impedance(double R, double L, double omega0 = 377.0);

/// Series R-L-C branch lifted to dq (used by series-compensated lines).
/// Reactances are per-unit at omega0; xc is the capacitive reactance.
AdmittanceBlock rlc_branch_admittance(double R, double X, double Xc, double omega0 = 377.0);
/// Static-frame scalar admittance 1/(R + Ls + 1/(Cs)) of the same branch.
RationalFunction rlc_branch_static_admittance(double R, double X, double Xc,
                                              double omega0 = 377.0);

/// Induction-generator-effect model of a DFIG-based wind turbine, static
/// frame. The slip enters as slip = 1 - j*omega_m/s; magnetizing and
/// grid-side-converter branches are open and the rotor-side converter
/// impedance is neglected.
struct DfigParams {
    double rs;    ///< stator resistance, pu
    double Xls;   ///< stator leakage reactance, pu
    double rr;    ///< rotor resistance, pu
    double Xlr;   ///< rotor leakage reactance, pu
    double wm;    ///< rotor speed, pu of synchronous
    double R;     ///< line resistance, pu
    double XL;    ///< line reactance, pu
    double comp;  ///< series compensation level, (0, 1); Xc = comp * XL
    double omega0 = 377.0;
};

/// Machine and line admittances of the DFIG circuit, static frame with
/// complex coefficients. The total admittance is the sum.
struct DfigAdmittances {
    RationalFunction y_dfig;
    RationalFunction y_line;
};
DfigAdmittances dfig_static_admittance(const DfigParams& dp);

/// Multi-mass shaft coupled to the classical electrical interface. Mass 0 is
/// the generator rotor; K[i] couples mass i to mass i+1.
struct TorsionalParams {
    std::vector<double> H;  ///< per-mass inertias, s
    std::vector<double> D;  ///< per-mass dampings, pu
    std::vector<double> K;  ///< shaft stiffnesses, pu torque/rad; size H.size()-1
    GeneratorParams gen;    ///< electrical interface of the generator mass
};

StateSpace torsional_statespace(const TorsionalParams& tp, const OperatingPoint& op);
AdmittanceBlock torsional_gen_admittance(const TorsionalParams& tp, const OperatingPoint& op);

}  // namespace components
}  // namespace ynet
