#pragma once

#include <string>
#include <vector>

#include "ynet/state_space.hpp"

namespace ynet {
namespace era {

/// One perturbation experiment: a step of size p on one input channel,
/// with every output channel sampled at Ts.
struct EventRecord {
    std::string input_channel;          ///< perturbed input name, e.g. "v_d"
    double p = 0.0;                     ///< perturbation size, pu (nonzero)
    double ts = 0.0;                    ///< sample period, s
    Eigen::MatrixXd outputs;            ///< K channels x (N+1) samples
    std::vector<std::string> channels;  ///< output channel names
    std::vector<double> scales;         ///< per-channel scale factors (empty = all 1)
    int pre_event_samples = 1;          ///< samples before the step, used for offsets
    bool processed = false;             ///< true once preprocess() has run

    std::vector<double> offsets;        ///< removed steady-state values (after preprocess)
    std::vector<std::string> warnings;  ///< e.g. zero-variance channels

    void validate() const;
};

/// Offset removal, scaling, and first-differencing of step records into
/// impulse-equivalent Markov parameters: h_0 = y_0/p (the feedthrough),
/// h_k = (y_k - y_{k-1})/p. Differencing absorbs the 1/s the step input
/// introduces, so no marginal pole has to be realized downstream.
EventRecord preprocess(const EventRecord& raw);

/// Shifted block-Hankel pair of one or more processed event records,
/// concatenated column-wise. The one-step shift structure is verified on
/// construction.
struct HankelPair {
    Eigen::MatrixXd h1, h2;
    int block_rows = 0;  ///< K: output channels per block row
    HankelPair(const std::vector<EventRecord>& events, int L);
};

struct EraRealization {
    StateSpace shared;                  ///< discrete (A, -, C, -) with per-event B/D below
    std::vector<Eigen::VectorXd> b;     ///< one input column per event
    std::vector<Eigen::VectorXd> d;     ///< feedthrough per event
    Eigen::VectorXd singular_values;    ///< full Hankel spectrum, for order diagnostics
    int order = 0;
};

struct EraOptions {
    int order = 0;        ///< 0 = automatic: smallest n with s_{n+1}/s_1 < auto_tol
    int hankel_cols = 0;  ///< L; 0 = floor(N/2)
    double auto_tol = 1e-8;
};

/// Multi-event ERA: one shared (A, C) realized from the concatenated Hankel
/// pair, per-event B and D. Requesting an order beyond the numerical rank
/// (s_n/s_1 < 1e-12) is an error suggesting a lower order.
EraRealization era_realize(const std::vector<EventRecord>& events, const EraOptions& opts = {});

struct AdmittanceFit {
    TFMatrix admittance;                ///< 2x2 dq
    StateSpace continuous;              ///< shared continuous realization
    EraRealization realization;         ///< discrete diagnostics
    std::vector<std::string> log;       ///< d2c warnings, pole cleanup notes
    double reconstruction_error = 0.0;  ///< relative Frobenius error on Markov data
};

/// Identify a 2x2 dq admittance from exactly two step-response events, one
/// per voltage axis, with equal p and Ts. The realized discrete model is
/// mapped to continuous time through the principal eigenvalue logarithm and
/// converted with the admittance sign convention; any residual pole inside
/// |s| < 1e-3 rad/s is cancelled and logged.
AdmittanceFit admittance_from_steps(const std::vector<EventRecord>& events,
                                    const EraOptions& opts = {});

/// Relative Frobenius mismatch between the realization's Markov parameters
/// and the processed event data.
double markov_reconstruction_error(const EraRealization& r,
                                   const std::vector<EventRecord>& processed);

}  // namespace era
}  // namespace ynet
