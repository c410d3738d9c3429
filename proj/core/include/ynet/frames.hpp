#pragma once

#include "ynet/admittance.hpp"

namespace ynet {
namespace frames {

/// Nominal system frequency (rad/s) used wherever a case does not override it.
inline constexpr double kOmega0 = 377.0;

/// Rotation T(dtheta) = [[cos, sin], [-sin, cos]] mapping system-frame dq
/// vectors into a frame whose d-axis leads the system frame by dtheta.
/// Orthogonal: T^T T = I.
Eigen::Matrix2d rotation(double dtheta);

/// Re-express a 2x2 dq admittance block in a frame at `to.angle`:
/// Y' = T(dth) Y T(dth)^{-1} with dth the angle from the block's frame to the
/// target. Static and alphabeta blocks are rejected; rotation is a rotating-
/// frame operation.
AdmittanceBlock rotate_admittance(const AdmittanceBlock& block, const FrameTag& to);

/// Split a complex-coefficient rational F into real-coefficient Re/Im parts:
/// F(s) = re(s) + j*im(s) for real s. Internally multiplies num and den by the
/// coefficient-conjugated denominator, which makes the common denominator
/// real.
struct ReImParts {
    RationalFunction re;
    RationalFunction im;
};
ReImParts split_re_im(const RationalFunction& f);

/// Lift a static-frame complex-coefficient scalar transfer function to the
/// stationary two-axis frame:
///   F_ab = [[Re F, -Im F], [Im F, Re F]].
TFMatrix static_to_alphabeta(const RationalFunction& f);

/// Lift a static-frame scalar to the rotating dq frame: substitute
/// s -> s + j*omega0, then split as in static_to_alphabeta.
TFMatrix static_to_dq(const RationalFunction& f, double omega0 = kOmega0);

}  // namespace frames
}  // namespace ynet
