#pragma once

#include "ynet/admittance.hpp"
#include "ynet/nonlinear.hpp"

namespace ynet {

/// Grid-following VSC reference model, 9th order, dq frame.
///
/// This is a reference implementation: converter controls vary between
/// vendors, so every structural choice is fixed and documented here rather
/// than configurable. Quantities are per-unit on the converter base.
///
/// Topology: bridge -- choke (r_choke, x_choke) -- PCC -- terminal branch
/// (r_grid, x_grid) -- model terminal. The terminal branch is part of the
/// measured block; a voltage-regulating converter tied directly to an ideal
/// source would leave its voltage loop with nothing to regulate, so the
/// component boundary sits behind a small series branch and the PCC is an
/// internal algebraic node.
///
/// Controls:
///  - synchronous-reference-frame PLL on the PCC voltage q-component
///    (states: control-frame angle and its integrator)
///  - dc-voltage PI commanding d-axis current; the dc link is an energy
///    buffer with time constant tau_dc fed by constant external power
///  - PCC voltage magnitude PI commanding (negative) q-axis current; the
///    magnitude reference is taken from the calibration operating point
///  - inner current PIs in the control frame with inductive decoupling and
///    PCC-voltage feedforward
///
/// States (9): series current dq pair, v_dc, PLL angle + integrator, two
/// outer-loop integrators, two inner-loop integrators. Inputs: terminal
/// voltage dq (system frame). Outputs: current injected into the terminal.
struct VscParams {
    double r_choke = 0.003;
    double x_choke = 0.15;
    double r_grid = 0.001;  ///< terminal-side branch inside the block
    double x_grid = 0.1;
    double kp_i = 0.3;      ///< inner current PI
    double ki_i = 5.0;
    double kp_dc = 1.0;     ///< dc-link voltage PI
    double ki_dc = 100.0;
    double kp_v = 1.0;      ///< PCC voltage magnitude PI
    double ki_v = 100.0;
    double kp_pll = 60.0;
    double ki_pll = 1400.0;
    double tau_dc = 0.0272;  ///< dc capacitor time constant, s
    double vdc_ref = 1.0;
    double omega0 = 377.0;
};

/// Nonlinear model (9 states, 2 inputs, 2 outputs) calibrated at the given
/// terminal condition: op supplies the terminal voltage phasor and the
/// dispatched injection (op.P, op.Q). The model's x0 seed is an exact
/// equilibrium for u0 = (op.Vx, op.Vy).
NonlinearModel vsc_reference_model(const VscParams& vp, const OperatingPoint& op);

/// Equilibrium solve + numerical linearization + admittance conversion.
AdmittanceBlock vsc_admittance(const VscParams& vp, const OperatingPoint& op);

}  // namespace ynet
