#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ynet/tf_matrix.hpp"

namespace ynet {

/// LTI quadruple. Continuous when dt is absent, discrete (sample period dt)
/// otherwise. Immutable after construction; simulations never mutate it.
struct StateSpace {
    Eigen::MatrixXd A, B, C, D;
    std::optional<double> dt;

    StateSpace() = default;
    StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
               std::optional<double> sample_period = std::nullopt);

    int order() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }
    bool is_discrete() const { return dt.has_value(); }

    Eigen::VectorXcd eigenvalues() const;
};

/// Sampled multi-output record. Column k of `y` is the sample at `t[k]`.
struct TimeSeries {
    std::vector<double> t;
    Eigen::MatrixXd y;  // outputs x samples
    std::vector<std::string> names;
};

/// Zero-order-hold discretization via the exact augmented matrix exponential.
StateSpace discretize_zoh(const StateSpace& ss, double ts);

/// Continuous model recovered from a ZOH-discrete one through the principal
/// matrix logarithm (eigenvalue form). Discrete eigenvalues on the negative
/// real axis make the log ambiguous; `warnings` records them.
StateSpace undiscretize_zoh(const StateSpace& ss, std::vector<std::string>* warnings = nullptr);

/// Admittance transfer matrix Y(s) = -C (sI - A)^{-1} B - D of a continuous
/// model whose inputs are terminal-voltage perturbations and outputs are
/// current perturbations injected INTO the network. The minus sign makes the
/// returned block satisfy I = -Y V for the source measurement convention, so
/// assembled nodal equations read (Y_sources + Y_network) V = I_ext.
/// Poles of every entry are (a subset of) the eigenvalues of A.
TFMatrix ss_to_admittance(const StateSpace& ss);

/// Resolvent numerator matrix polynomials: adj(sI - A) = sum_k s^k N_k and the
/// characteristic polynomial, via the Faddeev-LeVerrier recursion seeded with
/// eigenvalue-derived coefficients.
struct Resolvent {
    std::vector<Eigen::MatrixXd> numerators;  // N_0 .. N_{n-1}
    Polynomial charpoly;
};
Resolvent resolvent(const Eigen::MatrixXd& A);

/// Step response on one input channel from zero initial state, sampled at fs
/// (includes the t = 0 sample). Continuous models are ZOH-discretized
/// internally. Unstable models are simulated as-is; growth is a legitimate
/// study object.
TimeSeries step_response(const StateSpace& ss, int channel, double magnitude, double t_end,
                         double fs);

/// Impulse-equivalent Markov parameters D, CB, CAB, ... of a discrete model.
std::vector<Eigen::MatrixXd> markov_parameters(const StateSpace& ss, int count);

/// Controllable-canonical realization of a proper real-coefficient transfer
/// matrix, one companion block per input column. Improper entries or
/// significantly complex coefficients are errors.
StateSpace tf_to_statespace(const TFMatrix& tf);

}  // namespace ynet
