#pragma once

#include <functional>

#include "ynet/admittance.hpp"
#include "ynet/state_space.hpp"

namespace ynet {
namespace stability {

struct EigsOptions {
    /// Roots with real part above this are reported unstable; the margin
    /// separates genuine instability from root-finder noise.
    double tol_rhp = 1e-6;
    double cancel_tol = RationalFunction::kCancelTol;
};

struct Root {
    cdouble value;      ///< rad/s
    double freq_hz;     ///< |Im| / 2 pi
    double damping;     ///< -Re / |value| (0 for the zero root)
};

struct EigenReport {
    std::vector<Root> roots;
    bool unstable = false;
    std::vector<cdouble> cancelled;   ///< pole/zero pairs removed by simplify
    std::vector<std::string> notes;   ///< recorded assumptions and audits

    const Root& dominant() const;     ///< root with the largest real part
};

/// Determinant-root eigenvalue analysis: roots of num(det(Y)) after explicit
/// simplify. The standing assumptions (stable sources, stable network
/// denominators) are audited by recording the rightmost denominator root.
EigenReport eigs_from_admittance(const TFMatrix& y, const EigsOptions& opts = {});

/// Frequencies in Hz, strictly increasing.
using FrequencyGrid = std::vector<double>;

/// 400 log-spaced points over 0.1..100 Hz.
FrequencyGrid default_grid(double fmin = 0.1, double fmax = 100.0, int n = 400);

/// Densify a grid fourfold inside +-10% of each local minimum of |det Y(jw)|;
/// resonance peaks need local resolution the base grid may not have.
FrequencyGrid densify_near_det_minima(const TFMatrix& y, const FrequencyGrid& grid);

struct PeakEntry {
    double freq_hz = 0.0;
    double magnitude = 0.0;
    int trace = 0;
};

struct RmaResult {
    FrequencyGrid freq_hz;
    Eigen::MatrixXcd modal;  ///< modal impedances, traces x points
    std::vector<PeakEntry> peaks;
    std::vector<std::string> flags;  ///< skipped points, association notes
};

/// Resonance mode analysis: eigen-decompose Y(jw) per frequency; modal
/// impedances are the reciprocals of the admittance eigenvalues. Traces are
/// ordered by magnitude at the first point and re-associated across
/// frequencies by eigenvector continuity.
RmaResult rma_sweep(const TFMatrix& y, const FrequencyGrid& grid);

struct SigmaResult {
    FrequencyGrid freq_hz;
    Eigen::MatrixXd sigma;  ///< singular values (descending), values x points
};

SigmaResult sigma_sweep(const TFMatrix& y, const FrequencyGrid& grid);

struct NyquistOptions {
    /// Maximum unwrapped phase step of det(I+L) between neighboring samples
    /// before the segment is bisected.
    double max_phase_step = 0.3;
    int max_refine_depth = 40;
    /// |det(I+L)| beyond this flags an imaginary-axis pole inside the grid.
    double pole_magnitude = 1e12;
};

struct NyquistResult {
    std::vector<double> freq_hz;  ///< signed, -fmax..-fmin then fmin..fmax
    Eigen::MatrixXcd loci;        ///< eigenvalues of L(jw), traces x points
    double winding = 0.0;         ///< winding number of det(I+L) about 0
    int encirclements_cw = 0;     ///< clockwise encirclements of (-1, 0)
    std::vector<std::string> notes;
};

/// Generalized Nyquist: eigen-loci of the open-loop gain over +-jw and the
/// encirclement count of (-1, 0), computed as the winding number of
/// det(I + L(jw)) with adaptive phase refinement. Pole behavior at the origin
/// and at infinity is detected from magnitude growth at the grid ends and
/// corrected by the corresponding indentation arcs; the grid itself must
/// exclude imaginary-axis poles, and a sample blowing up is an error asking
/// for an indented (adjusted) grid.
NyquistResult nyquist_loci(const TFMatrix& loop, const FrequencyGrid& grid,
                           const NyquistOptions& opts = {});

struct ModeTraceResult {
    std::vector<double> parameter;
    std::vector<EigenReport> reports;
    /// pairing[k][i]: index in reports[k+1] paired with root i of reports[k],
    /// or -1 when unmatched.
    std::vector<std::vector<int>> pairing;
    std::vector<std::string> warnings;  ///< pairing ambiguities
};

/// Root sets along a monotone parameter sweep with nearest-neighbor mode
/// pairing between consecutive steps (mode-migration data).
ModeTraceResult mode_trace(const std::function<TFMatrix(double)>& build,
                           const std::vector<double>& parameters, const EigsOptions& opts = {});

/// Time-domain step response of a scalar static-frame closed-loop transfer
/// function, lifted to the requested frame and realized as a state space.
/// axis 0 steps the d (or alpha) input; the series holds both outputs.
TimeSeries closed_loop_step(const RationalFunction& f, FrameKind frame, int axis, double t_end,
                            double fs, double omega0 = 377.0);

/// Ringing frequency by zero-crossing counting of the detrended segment
/// [t0, t1] of one output channel.
double ringing_frequency(const TimeSeries& ts, int output, double t0, double t1);

/// Local maxima of |fn| over the grid, each refined by ternary search between
/// its grid neighbors.
std::vector<PeakEntry> find_magnitude_peaks(const std::function<double(double)>& fn,
                                            const FrequencyGrid& grid, bool refine = true);

}  // namespace stability
}  // namespace ynet
