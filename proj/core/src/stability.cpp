#include "ynet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ynet/frames.hpp"

namespace ynet {
namespace stability {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Root make_root(cdouble v) {
    Root r;
    r.value = v;
    r.freq_hz = std::abs(v.imag()) / kTwoPi;
    const double mag = std::abs(v);
    r.damping = mag > 0.0 ? -v.real() / mag : 0.0;
    return r;
}

}  // namespace

const Root& EigenReport::dominant() const {
    if (roots.empty()) throw InvalidArgument("eigen report holds no roots");
    return *std::max_element(roots.begin(), roots.end(),
                             [](const Root& a, const Root& b) { return a.value.real() < b.value.real(); });
}

EigenReport eigs_from_admittance(const TFMatrix& y, const EigsOptions& opts) {
    if (!y.is_square()) throw InvalidArgument("eigenvalue analysis needs a square admittance");

    const RationalFunction d = y.det();
    const RationalFunction::SimplifyResult sr = d.simplify(opts.cancel_tol);
    if (sr.value.num().degree() < 1 && !sr.num_roots_kept.empty())
        throw NumericError("inconsistent simplify result");
    if (sr.num_roots_kept.empty())
        throw InvalidArgument("determinant numerator has degree 0: no modes to report");

    EigenReport rep;
    rep.cancelled = sr.cancelled;
    for (const cdouble& r : sr.num_roots_kept) rep.roots.push_back(make_root(r));
    std::sort(rep.roots.begin(), rep.roots.end(), [](const Root& a, const Root& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    rep.unstable = rep.roots.front().value.real() > opts.tol_rhp;

    // Audit the standing assumptions: source/network denominators stable.
    double den_max_re = -std::numeric_limits<double>::infinity();
    for (const cdouble& r : sr.den_roots_kept) den_max_re = std::max(den_max_re, r.real());
    if (!sr.den_roots_kept.empty()) {
        rep.notes.push_back("determinant denominator rightmost root Re = " +
                            std::to_string(den_max_re) +
                            (den_max_re > opts.tol_rhp
                                 ? " (UNSTABLE denominator factor: criterion assumptions violated)"
                                 : " (denominator factors stable)"));
    }
    rep.notes.push_back("assumes source admittances and network branches are individually stable");
    if (!rep.cancelled.empty())
        rep.notes.push_back(std::to_string(rep.cancelled.size()) +
                            " pole/zero pair(s) cancelled by explicit simplify");
    return rep;
}

FrequencyGrid default_grid(double fmin, double fmax, int n) {
    if (fmin <= 0.0 || fmax <= fmin || n < 2) throw InvalidArgument("bad frequency grid spec");
    FrequencyGrid g(static_cast<std::size_t>(n));
    const double l0 = std::log10(fmin), l1 = std::log10(fmax);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
    return g;
}

FrequencyGrid densify_near_det_minima(const TFMatrix& y, const FrequencyGrid& grid) {
    if (grid.size() < 3) return grid;
    std::vector<double> mag(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::MatrixXcd m = y.eval(cdouble(0.0, kTwoPi * grid[i]));
        mag[i] = std::abs(m.determinant());
    }
    std::vector<double> centers;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if (mag[i] < mag[i - 1] && mag[i] < mag[i + 1]) centers.push_back(grid[i]);

    FrequencyGrid out = grid;
    for (double c : centers) {
        const double lo = 0.9 * c, hi = 1.1 * c;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (grid[i + 1] < lo || grid[i] > hi) continue;
            const double r = grid[i + 1] / grid[i];
            for (int k = 1; k < 4; ++k) out.push_back(grid[i] * std::pow(r, k / 4.0));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RmaResult rma_sweep(const TFMatrix& y, const FrequencyGrid& grid) {
    if (!y.is_square()) throw InvalidArgument("modal impedance sweep needs a square admittance");
    const int n = y.rows();
    RmaResult res;
    res.freq_hz = grid;
    res.modal.resize(n, static_cast<Eigen::Index>(grid.size()));

    Eigen::MatrixXcd prev_vec;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd m = y.eval(cdouble(0.0, kTwoPi * grid[k]));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/true);
        if (es.info() != Eigen::Success) {
            res.flags.push_back("skipped defective matrix at " + std::to_string(grid[k]) + " Hz");
            if (k > 0)
                res.modal.col(static_cast<Eigen::Index>(k)) = res.modal.col(static_cast<Eigen::Index>(k - 1));
            else
                res.modal.col(static_cast<Eigen::Index>(k)).setZero();
            continue;
        }
        Eigen::VectorXcd lam = es.eigenvalues();
        Eigen::MatrixXcd vec = es.eigenvectors();

        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        if (k == 0) {
            // Sort by modal impedance magnitude, descending.
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return std::abs(1.0 / lam(a)) > std::abs(1.0 / lam(b));
            });
        } else {
            // Greedy eigenvector-continuity association with the previous point.
            std::vector<bool> used(static_cast<std::size_t>(n), false);
            for (int t = 0; t < n; ++t) {
                double best = -1.0;
                int pick = -1;
                for (int c = 0; c < n; ++c) {
                    if (used[static_cast<std::size_t>(c)]) continue;
                    const double ip = std::abs(prev_vec.col(t).adjoint().dot(vec.col(c)));
                    if (ip > best) { best = ip; pick = c; }
                }
                order[static_cast<std::size_t>(t)] = pick;
                used[static_cast<std::size_t>(pick)] = true;
            }
        }
        Eigen::MatrixXcd sorted_vec(n, n);
        for (int t = 0; t < n; ++t) {
            const int c = order[static_cast<std::size_t>(t)];
            res.modal(t, static_cast<Eigen::Index>(k)) = 1.0 / lam(c);
            sorted_vec.col(t) = vec.col(c);
        }
        prev_vec = sorted_vec;
    }

    for (int t = 0; t < n; ++t) {
        for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
            const double m0 = std::abs(res.modal(t, static_cast<Eigen::Index>(k - 1)));
            const double m1 = std::abs(res.modal(t, static_cast<Eigen::Index>(k)));
            const double m2 = std::abs(res.modal(t, static_cast<Eigen::Index>(k + 1)));
            if (m1 > m0 && m1 > m2) res.peaks.push_back({grid[k], m1, t});
        }
    }
    std::sort(res.peaks.begin(), res.peaks.end(),
              [](const PeakEntry& a, const PeakEntry& b) { return a.magnitude > b.magnitude; });
    return res;
}

SigmaResult sigma_sweep(const TFMatrix& y, const FrequencyGrid& grid) {
    SigmaResult res;
    res.freq_hz = grid;
    const int n = std::min(y.rows(), y.cols());
    res.sigma.resize(n, static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd m = y.eval(cdouble(0.0, kTwoPi * grid[k]));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        res.sigma.col(static_cast<Eigen::Index>(k)) = svd.singularValues();
    }
    return res;
}

namespace {

cdouble det_i_plus_l(const TFMatrix& loop, double f_hz, const NyquistOptions& opts) {
    const Eigen::MatrixXcd l = loop.eval(cdouble(0.0, kTwoPi * f_hz));
    const cdouble d = (Eigen::MatrixXcd::Identity(l.rows(), l.cols()) + l).determinant();
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) || std::abs(d) > opts.pole_magnitude)
        throw PoleError("open-loop gain blows up at " + std::to_string(f_hz) +
                        " Hz: pole on the imaginary axis within grid resolution; "
                        "indent the grid around it");
    return d;
}

/// Accumulated phase of det(I+L) along [f0, f1] (signed frequencies),
/// bisecting until each step is below max_phase_step.
double phase_sweep(const TFMatrix& loop, double f0, double f1, cdouble d0, cdouble d1,
                   const NyquistOptions& opts, int depth) {
    const double dphi = std::arg(d1 / d0);
    if (std::abs(dphi) <= opts.max_phase_step || depth >= opts.max_refine_depth) return dphi;
    const double fm = 0.5 * (f0 + f1);
    const cdouble dm = det_i_plus_l(loop, fm, opts);
    return phase_sweep(loop, f0, fm, d0, dm, opts, depth + 1) +
           phase_sweep(loop, fm, f1, dm, d1, opts, depth + 1);
}

/// Pole multiplicity of det(I+L) at a grid end from magnitude growth between
/// f and f/2 (origin) or f and 2f (infinity).
int end_multiplicity(const TFMatrix& loop, double f, bool origin, const NyquistOptions& opts) {
    const double f2 = origin ? f / 2.0 : f * 2.0;
    const double m1 = std::abs(det_i_plus_l(loop, f, opts));
    if (m1 < 1e3) return 0;  // bounded: no pole at this end
    const double m2 = std::abs(det_i_plus_l(loop, f2, opts));
    const double growth = std::log2(m2 / m1);
    return std::max(0, static_cast<int>(std::lround(growth)));
}

}  // namespace

NyquistResult nyquist_loci(const TFMatrix& loop, const FrequencyGrid& grid,
                           const NyquistOptions& opts) {
    if (!loop.is_square()) throw InvalidArgument("Nyquist needs a square open-loop gain");
    if (grid.size() < 2) throw InvalidArgument("Nyquist grid needs at least two points");

    NyquistResult res;
    const int n = loop.rows();
    // Signed path: -fmax .. -fmin, fmin .. fmax. Negative frequencies are
    // evaluated explicitly; complex-coefficient loops have no conjugate
    // symmetry to exploit.
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) res.freq_hz.push_back(-*it);
    for (double f : grid) res.freq_hz.push_back(f);

    res.loci.resize(n, static_cast<Eigen::Index>(res.freq_hz.size()));
    for (std::size_t k = 0; k < res.freq_hz.size(); ++k) {
        const Eigen::MatrixXcd l = loop.eval(cdouble(0.0, kTwoPi * res.freq_hz[k]));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l, false);
        res.loci.col(static_cast<Eigen::Index>(k)) = es.eigenvalues();
    }

    // Winding of det(I + L) along the two grid halves.
    double phase = 0.0;
    for (int half = 0; half < 2; ++half) {
        std::vector<double> fs;
        if (half == 0)
            for (auto it = grid.rbegin(); it != grid.rend(); ++it) fs.push_back(-*it);
        else
            fs.assign(grid.begin(), grid.end());
        cdouble dprev = det_i_plus_l(loop, fs[0], opts);
        for (std::size_t k = 1; k < fs.size(); ++k) {
            const cdouble dnext = det_i_plus_l(loop, fs[k], opts);
            phase += phase_sweep(loop, fs[k - 1], fs[k], dprev, dnext, opts, 0);
            dprev = dnext;
        }
    }

    // Indentation corrections: a pole of multiplicity m at the origin is
    // bypassed through the right half plane (arg sweep -m*pi); an improper
    // loop contributes the same way on the closing arc at infinity.
    const int m0 = end_multiplicity(loop, grid.front(), true, opts);
    const int mi = end_multiplicity(loop, grid.back(), false, opts);
    if (m0 > 0)
        res.notes.push_back("origin pole of multiplicity " + std::to_string(m0) +
                            " bypassed by right-half-plane indentation");
    if (mi > 0)
        res.notes.push_back("improper loop: infinite arc of order " + std::to_string(mi) +
                            " included in the winding");
    phase += -std::numbers::pi * (m0 + mi);

    res.winding = phase / kTwoPi;
    const double rounded = std::round(res.winding);
    if (std::abs(res.winding - rounded) > 0.1)
        res.notes.push_back("winding number " + std::to_string(res.winding) +
                            " is far from an integer; widen the grid");
    res.encirclements_cw = -static_cast<int>(rounded);
    return res;
}

ModeTraceResult mode_trace(const std::function<TFMatrix(double)>& build,
                           const std::vector<double>& parameters, const EigsOptions& opts) {
    if (parameters.empty()) throw InvalidArgument("mode_trace needs at least one parameter value");
    for (std::size_t i = 1; i < parameters.size(); ++i)
        if (parameters[i] <= parameters[i - 1])
            throw InvalidArgument("mode_trace parameter list must be strictly increasing");

    ModeTraceResult res;
    res.parameter = parameters;
    for (double p : parameters) res.reports.push_back(eigs_from_admittance(build(p), opts));

    for (std::size_t k = 0; k + 1 < res.reports.size(); ++k) {
        const auto& a = res.reports[k].roots;
        const auto& b = res.reports[k + 1].roots;
        std::vector<int> pair(a.size(), -1);
        std::vector<bool> used(b.size(), false);
        for (std::size_t i = 0; i < a.size(); ++i) {
            double best = std::numeric_limits<double>::infinity(), second = best;
            int pick = -1;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (used[j]) continue;
                const double d = std::abs(a[i].value - b[j].value);
                if (d < best) { second = best; best = d; pick = static_cast<int>(j); }
                else if (d < second) second = d;
            }
            if (pick >= 0) {
                pair[i] = pick;
                used[static_cast<std::size_t>(pick)] = true;
                if (second < 2.0 * best && std::isfinite(second) && best > 0.0)
                    res.warnings.push_back("ambiguous pairing near parameter " +
                                           std::to_string(parameters[k + 1]) + " for root " +
                                           std::to_string(i));
            }
        }
        res.pairing.push_back(std::move(pair));
    }
    return res;
}

TimeSeries closed_loop_step(const RationalFunction& f, FrameKind frame, int axis, double t_end,
                            double fs, double omega0) {
    if (!f.is_proper()) throw InvalidArgument("closed-loop transfer function must be proper");
    if (axis < 0 || axis > 1) throw InvalidArgument("step axis must be 0 or 1");

    TFMatrix lifted;
    switch (frame) {
        case FrameKind::alphabeta: lifted = frames::static_to_alphabeta(f); break;
        case FrameKind::system:
        case FrameKind::local: lifted = frames::static_to_dq(f, omega0); break;
        default: throw InvalidArgument("closed_loop_step lifts to alphabeta or dq frames");
    }
    const StateSpace ss = tf_to_statespace(lifted);
    return step_response(ss, axis, 1.0, t_end, fs);
}

double ringing_frequency(const TimeSeries& ts, int output, double t0, double t1) {
    if (output < 0 || output >= ts.y.rows()) throw InvalidArgument("output index out of range");
    if (ts.t.size() < 3) throw InvalidArgument("time series too short");
    std::size_t i0 = 0, i1 = ts.t.size() - 1;
    while (i0 < ts.t.size() && ts.t[i0] < t0) ++i0;
    while (i1 > 0 && ts.t[i1] > t1) --i1;
    if (i1 <= i0 + 2) throw InvalidArgument("ringing window holds too few samples");

    const double ref = ts.y(output, static_cast<Eigen::Index>(i1));
    int crossings = 0;
    double prev = ts.y(output, static_cast<Eigen::Index>(i0)) - ref;
    for (std::size_t k = i0 + 1; k <= i1; ++k) {
        const double cur = ts.y(output, static_cast<Eigen::Index>(k)) - ref;
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++crossings;
        if (cur != 0.0) prev = cur;
    }
    const double window = ts.t[i1] - ts.t[i0];
    return crossings / (2.0 * window);
}

std::vector<PeakEntry> find_magnitude_peaks(const std::function<double(double)>& fn,
                                            const FrequencyGrid& grid, bool refine) {
    if (grid.size() < 3) throw InvalidArgument("peak search grid needs at least three points");
    std::vector<double> mag(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mag[i] = fn(grid[i]);

    std::vector<PeakEntry> peaks;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(mag[i] > mag[i - 1] && mag[i] > mag[i + 1])) continue;
        double lo = grid[i - 1], hi = grid[i + 1];
        double fbest = grid[i], mbest = mag[i];
        if (refine) {
            for (int it = 0; it < 80 && (hi - lo) > 1e-7 * fbest; ++it) {
                const double m1 = lo + (hi - lo) / 3.0;
                const double m2 = hi - (hi - lo) / 3.0;
                if (fn(m1) < fn(m2)) lo = m1; else hi = m2;
            }
            fbest = 0.5 * (lo + hi);
            mbest = fn(fbest);
        }
        peaks.push_back({fbest, mbest, 0});
    }
    return peaks;
}

}  // namespace stability
}  // namespace ynet
