#pragma once

#include <functional>

#include "ynet/state_space.hpp"

namespace ynet {

/// User-supplied smooth nonlinear model
///   xdot = f(x, u),  y = g(x, u)
/// with an equilibrium seed (x0, u0). Models are immutable after
/// construction; f and g must be pure.
struct NonlinearModel {
    int state_dim = 0;
    int input_dim = 0;
    int output_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> f;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> g;
    Eigen::VectorXd x0;
    Eigen::VectorXd u0;
};

struct LinearizeOptions {
    /// Central-difference step h_i = fd_step_rel * (1 + |x_i|); the default
    /// balances truncation against rounding at per-unit signal scale.
    double fd_step_rel = 1e-6;
    /// Maximum equilibrium residual accepted before linearizing.
    double equilibrium_tol = 1e-8;
};

/// Numerical linearization by central finite differences at an equilibrium
/// (x_star, u_star). Throws NumericError (with the residual norm) when the
/// seed is not an equilibrium to within equilibrium_tol.
StateSpace linearize(const NonlinearModel& model, const Eigen::VectorXd& x_star,
                     const Eigen::VectorXd& u_star, const LinearizeOptions& opts = {});

struct EquilibriumOptions {
    double tol = 1e-10;
    int max_iterations = 100;
};

/// Damped Newton solve of f(x, u0) = 0 starting from the model's seed.
/// Failure to converge is an error, never a silent fallback.
Eigen::VectorXd find_equilibrium(const NonlinearModel& model, const Eigen::VectorXd& u0,
                                 const EquilibriumOptions& opts = {});

}  // namespace ynet
