#include "ynet/era.hpp"

#include <cmath>

namespace ynet {
namespace era {

void EventRecord::validate() const {
    if (p == 0.0) throw InvalidArgument("event perturbation size p must be nonzero");
    if (ts <= 0.0) throw InvalidArgument("event sample period must be positive");
    if (outputs.rows() < 1 || outputs.cols() < 4)
        throw InvalidArgument("event record needs at least one channel and four samples");
    if (!channels.empty() && static_cast<int>(channels.size()) != outputs.rows())
        throw InvalidArgument("channel name count does not match output rows");
    if (!scales.empty() && static_cast<int>(scales.size()) != outputs.rows())
        throw InvalidArgument("scale count does not match output rows");
}

EventRecord preprocess(const EventRecord& raw) {
    raw.validate();
    if (raw.processed) return raw;
    if (raw.pre_event_samples < 1)
        throw InvalidArgument("preprocess needs at least one pre-event sample to estimate offsets");

    EventRecord out = raw;
    const int k = static_cast<int>(raw.outputs.rows());
    const int n = static_cast<int>(raw.outputs.cols());
    // The step arrives at sample index pre_event_samples: offsets come from
    // the strictly-pre-event window, and the first on-step sample (which
    // carries any feedthrough) opens the response window.
    const int pre = std::min(raw.pre_event_samples, n - 4);

    out.offsets.resize(static_cast<std::size_t>(k));
    Eigen::MatrixXd y(k, n - pre);
    for (int i = 0; i < k; ++i) {
        const double off = raw.outputs.row(i).head(pre).mean();
        out.offsets[static_cast<std::size_t>(i)] = off;
        const double sc = raw.scales.empty() ? 1.0 : raw.scales[static_cast<std::size_t>(i)];
        for (int j = 0; j < n - pre; ++j)
            y(i, j) = sc * (raw.outputs(i, pre + j) - off);

        double var = 0.0;
        for (int j = 0; j < n - pre; ++j) var += y(i, j) * y(i, j);
        if (var == 0.0)
            out.warnings.push_back("channel " + (raw.channels.empty()
                                                      ? std::to_string(i)
                                                      : raw.channels[static_cast<std::size_t>(i)]) +
                                   " has zero variance (kept)");
    }

    // First-difference into impulse-equivalent Markov parameters.
    Eigen::MatrixXd h(k, y.cols());
    h.col(0) = y.col(0) / raw.p;
    for (int j = 1; j < y.cols(); ++j) h.col(j) = (y.col(j) - y.col(j - 1)) / raw.p;

    out.outputs = h;
    out.pre_event_samples = 0;
    out.processed = true;
    return out;
}

HankelPair::HankelPair(const std::vector<EventRecord>& events, int L) {
    if (events.empty()) throw InvalidArgument("Hankel pair needs at least one event");
    const int k = static_cast<int>(events[0].outputs.rows());
    block_rows = k;
    int nmark = 0;
    for (const EventRecord& e : events) {
        if (!e.processed) throw InvalidArgument("events must be preprocessed before Hankel assembly");
        if (e.outputs.rows() != k) throw InvalidArgument("events disagree on channel count");
        nmark = nmark == 0 ? static_cast<int>(e.outputs.cols())
                           : std::min(nmark, static_cast<int>(e.outputs.cols()));
    }
    // Markov columns are h_0 .. h_{nmark-1}; Hankel blocks start at h_1 and
    // the shifted matrix needs one extra sample, so rows span h_1..h_{nmark-1}.
    const int nh = nmark - 2;  // usable shift depth
    if (L < 1 || L > nh)
        throw InvalidArgument("Hankel column count L out of range (have " + std::to_string(nh) +
                              " usable Markov samples)");
    const int rows_blocks = nh - L + 1;
    h1.resize(static_cast<Eigen::Index>(k) * rows_blocks, static_cast<Eigen::Index>(L) * events.size());
    h2.resizeLike(h1);
    for (std::size_t ev = 0; ev < events.size(); ++ev) {
        const Eigen::MatrixXd& h = events[ev].outputs;
        for (int r = 0; r < rows_blocks; ++r)
            for (int c = 0; c < L; ++c) {
                h1.block(static_cast<Eigen::Index>(k) * r, static_cast<Eigen::Index>(L) * ev + c, k, 1) =
                    h.col(1 + r + c);
                h2.block(static_cast<Eigen::Index>(k) * r, static_cast<Eigen::Index>(L) * ev + c, k, 1) =
                    h.col(2 + r + c);
            }
    }
    // Shift-structure check: h2 rows 0..end-K equal h1 rows K..end.
    if (rows_blocks > 1) {
        const double diff = (h2.topRows(h2.rows() - k) - h1.bottomRows(h1.rows() - k)).cwiseAbs().maxCoeff();
        if (diff != 0.0)
            throw NumericError("Hankel pair violates the one-step shift structure");
    }
}

EraRealization era_realize(const std::vector<EventRecord>& events, const EraOptions& opts) {
    if (events.empty()) throw InvalidArgument("era_realize needs at least one event");
    std::vector<EventRecord> pr;
    pr.reserve(events.size());
    for (const EventRecord& e : events) pr.push_back(e.processed ? e : preprocess(e));

    const double ts = pr[0].ts;
    for (const EventRecord& e : pr)
        if (std::abs(e.ts - ts) > 1e-12)
            throw InvalidArgument("events disagree on sample period");

    int nmark = static_cast<int>(pr[0].outputs.cols());
    for (const EventRecord& e : pr) nmark = std::min(nmark, static_cast<int>(e.outputs.cols()));
    const int nh = nmark - 2;
    const int L = opts.hankel_cols > 0 ? opts.hankel_cols : std::max(1, nh / 2);

    HankelPair hp(pr, L);
    const int k = hp.block_rows;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(hp.h1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) throw NumericError("Hankel matrix is identically zero");

    int order = opts.order;
    if (order <= 0) {
        order = static_cast<int>(sv.size());
        for (int i = 1; i < sv.size(); ++i)
            if (sv(i) / sv(0) < opts.auto_tol) { order = i; break; }
    }
    if (order > sv.size())
        throw InvalidArgument("requested order exceeds the Hankel rank bound");
    if (sv(order - 1) / sv(0) < 1e-12)
        throw NumericError("requested order " + std::to_string(order) +
                           " exceeds the numerical rank of the data; try a lower order");
    const int rows_blocks = static_cast<int>(hp.h1.rows()) / k;
    if (rows_blocks < order || L < order)
        throw InvalidArgument("not enough samples for order " + std::to_string(order) +
                              ": need N-L+1 >= n and L >= n");

    const Eigen::MatrixXd u = svd.matrixU().leftCols(order);
    const Eigen::MatrixXd v = svd.matrixV().leftCols(order);
    const Eigen::VectorXd s = sv.head(order);
    const Eigen::VectorXd si = s.cwiseSqrt().cwiseInverse();
    const Eigen::VectorXd sr = s.cwiseSqrt();

    const Eigen::MatrixXd a =
        si.asDiagonal() * (u.transpose() * hp.h2 * v) * si.asDiagonal();
    const Eigen::MatrixXd obs = u * sr.asDiagonal();     // O = U' S'^(1/2)
    const Eigen::MatrixXd ctr = sr.asDiagonal() * v.transpose();  // C = S'^(1/2) V'^T

    EraRealization out;
    out.order = order;
    out.singular_values = sv;
    const Eigen::MatrixXd c = obs.topRows(k);
    for (std::size_t ev = 0; ev < pr.size(); ++ev) {
        out.b.push_back(ctr.col(static_cast<Eigen::Index>(L) * ev));
        out.d.push_back(pr[ev].outputs.col(0));
    }
    // Shared A and C; B/D per event (the struct carries event 0's pair for
    // convenience).
    out.shared = StateSpace(a, out.b[0], c, out.d[0], ts);
    return out;
}

double markov_reconstruction_error(const EraRealization& r,
                                   const std::vector<EventRecord>& processed) {
    double num = 0.0, den = 0.0;
    for (std::size_t ev = 0; ev < processed.size(); ++ev) {
        const Eigen::MatrixXd& h = processed[ev].outputs;
        StateSpace ssev(r.shared.A, r.b[ev], r.shared.C, r.d[ev], r.shared.dt);
        const std::vector<Eigen::MatrixXd> mk =
            markov_parameters(ssev, static_cast<int>(h.cols()));
        for (std::size_t j = 0; j < mk.size(); ++j) {
            num += (mk[j] - h.col(static_cast<Eigen::Index>(j))).squaredNorm();
            den += h.col(static_cast<Eigen::Index>(j)).squaredNorm();
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

AdmittanceFit admittance_from_steps(const std::vector<EventRecord>& events,
                                    const EraOptions& opts) {
    if (events.size() != 2)
        throw InvalidArgument("two events required for 2x2 identification (one per dq axis)");
    if (events[0].outputs.rows() != 2 || events[1].outputs.rows() != 2)
        throw InvalidArgument("2x2 identification needs exactly the two current channels");
    if (std::abs(events[0].p - events[1].p) > 1e-15)
        throw InvalidArgument("events disagree on perturbation size p");
    if (std::abs(events[0].ts - events[1].ts) > 1e-15)
        throw InvalidArgument("events disagree on sample period");

    std::vector<EventRecord> pr;
    for (const EventRecord& e : events) pr.push_back(e.processed ? e : preprocess(e));

    AdmittanceFit fit;
    fit.realization = era_realize(pr, opts);
    fit.reconstruction_error = markov_reconstruction_error(fit.realization, pr);

    // Assemble the two-input discrete model and convert to continuous time.
    const int n = fit.realization.order;
    Eigen::MatrixXd bd(n, 2), dd(2, 2);
    bd.col(0) = fit.realization.b[0];
    bd.col(1) = fit.realization.b[1];
    dd.col(0) = fit.realization.d[0];
    dd.col(1) = fit.realization.d[1];
    const StateSpace disc(fit.realization.shared.A, bd, fit.realization.shared.C, dd,
                          fit.realization.shared.dt);
    fit.continuous = undiscretize_zoh(disc, &fit.log);

    TFMatrix y = ss_to_admittance(fit.continuous);
    // The step-induced integrator is absorbed by differencing; if a residual
    // near-origin pole slipped through anyway, cancel it against the nearest
    // near-origin zero and log the cleanup.
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) {
            const RationalFunction& f = y(i, j);
            if (f.den().degree() < 1 || f.num().degree() < 1) continue;
            std::vector<cdouble> dr = f.den().roots();
            bool near_origin = false;
            for (const cdouble& r : dr)
                if (std::abs(r) < 1e-3) { near_origin = true; break; }
            if (!near_origin) continue;

            std::vector<cdouble> nr = f.num().roots();
            std::vector<cdouble> dkeep, nkeep;
            std::vector<bool> ncut(nr.size(), false);
            int removed = 0;
            for (const cdouble& r : dr) {
                if (std::abs(r) < 1e-3) {
                    // nearest unmatched near-origin zero
                    int best = -1;
                    double bd = 2e-3;
                    for (std::size_t t = 0; t < nr.size(); ++t)
                        if (!ncut[t] && std::abs(nr[t]) < 1e-3 && std::abs(nr[t] - r) < bd) {
                            bd = std::abs(nr[t] - r);
                            best = static_cast<int>(t);
                        }
                    if (best >= 0) {
                        ncut[static_cast<std::size_t>(best)] = true;
                        ++removed;
                        continue;
                    }
                }
                dkeep.push_back(r);
            }
            for (std::size_t t = 0; t < nr.size(); ++t)
                if (!ncut[t]) nkeep.push_back(nr[t]);
            if (removed > 0) {
                fit.log.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  "): cancelled " + std::to_string(removed) +
                                  " residual near-origin pole/zero pair(s)");
                y(i, j) = RationalFunction(Polynomial::from_roots(nkeep, f.num().leading()),
                                           Polynomial::from_roots(dkeep, f.den().leading()));
            }
        }
    fit.admittance = std::move(y);
    return fit;
}

}  // namespace era
}  // namespace ynet
