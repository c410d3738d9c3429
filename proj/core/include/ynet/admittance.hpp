#pragma once

#include <optional>
#include <string>

#include "ynet/tf_matrix.hpp"

namespace ynet {

/// Reference-frame kinds an admittance block can be expressed in.
///  - system:    rotating dq frame shared by the whole assembled network
///  - local:     rotating dq frame of one component, offset by `angle`
///  - static_:   stationary complex (positive-sequence) frame, scalar entries
///  - alphabeta: stationary two-axis real frame
enum class FrameKind { system, local, static_, alphabeta };

struct FrameTag {
    FrameKind kind = FrameKind::system;
    /// Angle (rad) by which this frame's d-axis leads the system frame.
    double angle = 0.0;

    static FrameTag system() { return {FrameKind::system, 0.0}; }
    static FrameTag local(double angle) { return {FrameKind::local, angle}; }
    static FrameTag static_frame() { return {FrameKind::static_, 0.0}; }
    static FrameTag alphabeta() { return {FrameKind::alphabeta, 0.0}; }
};

std::string to_string(FrameKind k);

/// Solved terminal condition a component model was calibrated at. Voltage
/// components are in the frame declared by the owning block.
struct OperatingPoint {
    double Vx = 1.0;
    double Vy = 0.0;
    double delta = 0.0;    ///< rotor (or internal source) angle, rad
    double theta_v = 0.0;  ///< terminal voltage angle, rad
    double P = 0.0;        ///< dispatched active power, pu (injection positive)
    double Q = 0.0;        ///< dispatched reactive power, pu (injection positive)

    double vmag() const;
};

/// A component admittance plus the metadata assembly needs: where it sits,
/// which frame it is expressed in, the sign convention, and the operating
/// point it was calibrated at.
struct AdmittanceBlock {
    TFMatrix tf;  ///< 2x2 dq or 1x1 static/scalar
    std::string bus;
    FrameTag frame;
    /// True when the block satisfies I = -Y V with current flowing into the
    /// network, which is what assembly requires.
    bool injection_positive = true;
    std::optional<OperatingPoint> calibration;
};

}  // namespace ynet
