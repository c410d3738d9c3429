#pragma once

#include "ynet/network.hpp"

namespace ynet::test {

/// Eigenvalues of the full classical multi-machine DAE, linearized
/// numerically and with the algebraic network equations eliminated:
///   A = f_x - f_y g_y^{-1} g_x.
/// This never touches the rational-matrix machinery, so it serves as the
/// independent oracle for determinant-root eigenvalues.
Eigen::VectorXcd monolithic_multimachine_eigenvalues(const network::NetworkCase& cs,
                                                     const network::PowerFlowResult& pf);

/// Coupled torsional-chain + series-RLC single-machine system, assembled
/// directly as one state matrix (no transfer functions involved).
Eigen::VectorXcd monolithic_torsional_rlc_eigenvalues(const components::TorsionalParams& tp,
                                                      const OperatingPoint& op, double RL,
                                                      double XL, double Xc, double omega0);

/// Two-area four-machine case on a 100 MVA system base: four classical
/// machines behind step-up branches, a double-circuit tie, constant-impedance
/// loads with shunt compensation.
network::NetworkCase two_area_four_machine_case();

/// Synthetic eight-machine ring: eight classical machines on a meshed ring
/// with distributed loads; stands in for a larger grid whose data the desk
/// cases do not carry.
network::NetworkCase eight_machine_ring_case();

/// Torsional study fixture: five-mass shaft on a series-compensated line.
/// comp scales the capacitive reactance Xc = comp * XL.
struct TorsionalFixture {
    components::TorsionalParams params;
    OperatingPoint op;
    double RL, XL, omega0;
};
TorsionalFixture torsional_fixture();

/// Induction-generator-effect fixture for the SSR sweeps.
components::DfigParams dfig_fixture(double comp);

}  // namespace ynet::test
