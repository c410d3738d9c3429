#include "ynet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ynet/frames.hpp"

namespace ynet {
namespace network {

int NetworkCase::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    throw InvalidArgument("unknown bus id '" + id + "'");
}

const Bus& NetworkCase::bus(const std::string& id) const {
    return buses[static_cast<std::size_t>(bus_index(id))];
}

void NetworkCase::validate() const {
    if (buses.empty()) throw InvalidArgument("case has no buses");
    std::set<std::string> ids;
    for (const Bus& b : buses)
        if (!ids.insert(b.id).second) throw InvalidArgument("duplicate bus id '" + b.id + "'");
    for (const Branch& br : branches) {
        bus_index(br.from);
        bus_index(br.to);
        if (br.r < 0.0) throw InvalidArgument("branch resistance must be >= 0");
        if (br.comp < 0.0 || br.comp >= 1.0)
            throw InvalidArgument("branch series compensation must lie in [0, 1)");
        if (br.comp > 0.0 && br.x <= 0.0)
            throw InvalidArgument("series compensation requires a positive branch reactance");
    }
    for (const Load& l : loads) bus_index(l.bus);
    std::set<std::string> src_buses;
    for (const SourceSpec& s : sources) {
        if (bus(s.bus).type != BusType::source)
            throw InvalidArgument("source declared at non-source bus '" + s.bus + "'");
        if (!src_buses.insert(s.bus).second)
            throw InvalidArgument("bus '" + s.bus + "' hosts more than one source");
    }
    for (const Bus& b : buses)
        if (b.type == BusType::source && !src_buses.count(b.id))
            throw InvalidArgument("source bus '" + b.id + "' has no source component");
    if (sources.empty()) throw InvalidArgument("case needs at least one source");
}

const SourceSolution& PowerFlowResult::at_bus(const std::string& bus) const {
    for (const SourceSolution& s : sources)
        if (s.bus == bus) return s;
    throw InvalidArgument("no source solution at bus '" + bus + "'");
}

namespace {

Eigen::MatrixXcd power_flow_ybus(const NetworkCase& cs) {
    const int n = static_cast<int>(cs.buses.size());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    for (const Branch& br : cs.branches) {
        const int a = cs.bus_index(br.from);
        const int b = cs.bus_index(br.to);
        const double xeff = br.x * (1.0 - br.comp);
        const cdouble z(br.r, xeff);
        if (std::abs(z) == 0.0) throw InvalidArgument("zero-impedance branch");
        const cdouble ys = 1.0 / z;
        y(a, a) += ys;
        y(b, b) += ys;
        y(a, b) -= ys;
        y(b, a) -= ys;
        y(a, a) += cdouble(0.0, br.charging / 2.0);
        y(b, b) += cdouble(0.0, br.charging / 2.0);
    }
    return y;
}

}  // namespace

PowerFlowResult power_flow(const NetworkCase& cs) {
    cs.validate();
    const int n = static_cast<int>(cs.buses.size());
    const Eigen::MatrixXcd y = power_flow_ybus(cs);

    enum class Role { slack, pv, pq };
    std::vector<Role> role(static_cast<std::size_t>(n), Role::pq);
    Eigen::VectorXd pset = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd qset = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd vset = Eigen::VectorXd::Ones(n);

    int slack = -1;
    for (int i = 0; i < n; ++i)
        if (cs.buses[static_cast<std::size_t>(i)].type == BusType::infinite) { slack = i; break; }
    for (const SourceSpec& s : cs.sources) {
        const int k = cs.bus_index(s.bus);
        role[static_cast<std::size_t>(k)] = Role::pv;
        pset(k) += s.P;
        vset(k) = s.V;
        if (slack < 0) slack = k;
    }
    role[static_cast<std::size_t>(slack)] = Role::slack;
    for (const Load& l : cs.loads) {
        const int k = cs.bus_index(l.bus);
        pset(k) -= l.p;
        qset(k) -= l.q;
    }

    Eigen::VectorXd vm = vset, va = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (role[static_cast<std::size_t>(i)] == Role::pq) vm(i) = 1.0;

    auto injections = [&](const Eigen::VectorXd& vmag, const Eigen::VectorXd& vang) {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = std::polar(vmag(i), vang(i));
        Eigen::VectorXcd s = v.array() * (y * v).conjugate().array();
        return s;
    };

    // Mismatch vector: dP for all non-slack buses, dQ for PQ buses.
    std::vector<int> pidx, qidx;
    for (int i = 0; i < n; ++i) {
        if (role[static_cast<std::size_t>(i)] != Role::slack) pidx.push_back(i);
        if (role[static_cast<std::size_t>(i)] == Role::pq) qidx.push_back(i);
    }
    const int nun = static_cast<int>(pidx.size() + qidx.size());

    auto mismatch = [&](const Eigen::VectorXd& vmag, const Eigen::VectorXd& vang) {
        const Eigen::VectorXcd s = injections(vmag, vang);
        Eigen::VectorXd f(nun);
        int r = 0;
        for (int i : pidx) f(r++) = s(i).real() - pset(i);
        for (int i : qidx) f(r++) = s(i).imag() - qset(i);
        return f;
    };

    Eigen::VectorXd f = mismatch(vm, va);
    int it = 0;
    const int kMaxIt = 50;
    for (; it < kMaxIt && f.lpNorm<Eigen::Infinity>() > 1e-10; ++it) {
        // Numerical Jacobian; cases here are small.
        Eigen::MatrixXd jac(nun, nun);
        int cidx = 0;
        for (int i : pidx) {
            Eigen::VectorXd va2 = va;
            const double h = 1e-7;
            va2(i) += h;
            jac.col(cidx++) = (mismatch(vm, va2) - f) / h;
        }
        for (int i : qidx) {
            Eigen::VectorXd vm2 = vm;
            const double h = 1e-7;
            vm2(i) += h;
            jac.col(cidx++) = (mismatch(vm2, va) - f) / h;
        }
        const Eigen::VectorXd dx = jac.fullPivLu().solve(-f);
        if (!dx.allFinite()) throw NumericError("power flow Jacobian solve failed");

        double alpha = 1.0;
        for (int bt = 0;; ++bt) {
            Eigen::VectorXd va2 = va, vm2 = vm;
            int r = 0;
            for (int i : pidx) va2(i) += alpha * dx(r++);
            for (int i : qidx) vm2(i) += alpha * dx(r++);
            const Eigen::VectorXd f2 = mismatch(vm2, va2);
            if (f2.norm() <= f.norm() || bt >= 4) {
                va = va2;
                vm = vm2;
                f = f2;
                break;
            }
            alpha *= 0.5;
        }
    }
    if (f.lpNorm<Eigen::Infinity>() > 1e-8)
        throw NumericError("power flow diverged: mismatch " +
                           std::to_string(f.lpNorm<Eigen::Infinity>()) + " after " +
                           std::to_string(it) + " iterations");

    PowerFlowResult res;
    res.iterations = it;
    res.mismatch = f.lpNorm<Eigen::Infinity>();
    res.v.resize(n);
    for (int i = 0; i < n; ++i) res.v(i) = std::polar(vm(i), va(i));

    // Per-source terminal conditions and internal angles.
    const Eigen::VectorXcd inet = y * res.v;
    for (const SourceSpec& s : cs.sources) {
        const int k = cs.bus_index(s.bus);
        cdouble iload(0.0);
        for (const Load& l : cs.loads)
            if (cs.bus_index(l.bus) == k) iload += std::conj(cdouble(l.p, l.q) / res.v(k));
        const cdouble isrc = inet(k) + iload;
        const cdouble sinj = res.v(k) * std::conj(isrc);

        SourceSolution sol;
        sol.bus = s.bus;
        sol.P = sinj.real();
        sol.Q = sinj.imag();
        sol.V = std::abs(res.v(k));
        sol.theta = std::arg(res.v(k));

        double xg = 0.0;
        if (const auto* gp = std::get_if<components::GeneratorParams>(&s.params)) xg = gp->Xg;
        if (const auto* tp = std::get_if<components::TorsionalParams>(&s.params)) xg = tp->gen.Xg;
        if (xg > 0.0) {
            const cdouble e = res.v(k) + cdouble(0.0, xg) * isrc;
            sol.delta = std::arg(e);
            sol.E = std::abs(e);
        }
        res.sources.push_back(sol);
    }
    return res;
}

YbusResult build_ybus(const NetworkCase& cs, const PowerFlowResult* pf) {
    cs.validate();
    const int n = static_cast<int>(cs.buses.size());
    std::vector<int> row_of_bus(static_cast<std::size_t>(n), -1);
    YbusResult out;
    for (int i = 0; i < n; ++i) {
        if (cs.buses[static_cast<std::size_t>(i)].type == BusType::infinite) continue;
        row_of_bus[static_cast<std::size_t>(i)] = static_cast<int>(out.bus_of_row.size());
        out.bus_of_row.push_back(i);
    }
    const int m = static_cast<int>(out.bus_of_row.size());
    out.y = Eigen::MatrixXcd::Zero(m, m);

    for (const Branch& br : cs.branches) {
        const int a = cs.bus_index(br.from);
        const int b = cs.bus_index(br.to);
        const cdouble z(br.r, br.x * (1.0 - br.comp));
        const cdouble ys = 1.0 / z;
        const int ra = row_of_bus[static_cast<std::size_t>(a)];
        const int rb = row_of_bus[static_cast<std::size_t>(b)];
        if (ra >= 0) out.y(ra, ra) += ys + cdouble(0.0, br.charging / 2.0);
        if (rb >= 0) out.y(rb, rb) += ys + cdouble(0.0, br.charging / 2.0);
        if (ra >= 0 && rb >= 0) {
            out.y(ra, rb) -= ys;
            out.y(rb, ra) -= ys;
        }
    }
    if (pf) {
        for (const Load& l : cs.loads) {
            const int k = cs.bus_index(l.bus);
            const int rk = row_of_bus[static_cast<std::size_t>(k)];
            if (rk < 0) continue;
            const cdouble vk = pf->v(k);
            out.y(rk, rk) += std::conj(cdouble(l.p, l.q)) / (std::abs(vk) * std::abs(vk));
        }
    }
    return out;
}

Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y, const std::vector<int>& keep) {
    const int n = static_cast<int>(y.rows());
    if (y.cols() != n) throw InvalidArgument("kron_reduce needs a square matrix");
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw InvalidArgument("kron_reduce keep index out of range");
        kept[static_cast<std::size_t>(k)] = true;
    }
    std::vector<int> elim;
    for (int i = 0; i < n; ++i)
        if (!kept[static_cast<std::size_t>(i)]) elim.push_back(i);
    if (elim.empty()) return y;

    const int nk = static_cast<int>(keep.size());
    const int ne = static_cast<int>(elim.size());
    Eigen::MatrixXcd ykk(nk, nk), yke(nk, ne), yek(ne, nk), yee(ne, ne);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) ykk(i, j) = y(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < ne; ++j) yke(i, j) = y(keep[static_cast<std::size_t>(i)], elim[static_cast<std::size_t>(j)]);
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < nk; ++j) yek(i, j) = y(elim[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < ne; ++j) yee(i, j) = y(elim[static_cast<std::size_t>(i)], elim[static_cast<std::size_t>(j)]);

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(yee);
    if (!lu.isInvertible())
        throw NumericError("kron_reduce: eliminated block is singular");
    return ykk - yke * lu.solve(yek);
}

TFMatrix expand_dq(const Eigen::MatrixXcd& yc) {
    const int n = static_cast<int>(yc.rows());
    const int m = static_cast<int>(yc.cols());
    TFMatrix out(2 * n, 2 * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const double re = yc(i, j).real();
            const double im = yc(i, j).imag();
            if (re != 0.0) {
                out(2 * i, 2 * j) = RationalFunction::constant(cdouble(re));
                out(2 * i + 1, 2 * j + 1) = RationalFunction::constant(cdouble(re));
            }
            if (im != 0.0) {
                out(2 * i, 2 * j + 1) = RationalFunction::constant(cdouble(-im));
                out(2 * i + 1, 2 * j) = RationalFunction::constant(cdouble(im));
            }
        }
    return out;
}

namespace {

bool is_single_dfig(const NetworkCase& cs) {
    return cs.sources.size() == 1 &&
           std::holds_alternative<components::DfigParams>(cs.sources[0].params);
}

/// Rational dq admittance of one branch in dynamic-branches mode.
TFMatrix dynamic_branch_admittance(const Branch& br, double omega0) {
    if (br.comp > 0.0)
        return components::rlc_branch_admittance(br.r, br.x, br.comp * br.x, omega0).tf;
    return components::rl_branch_admittance(br.r, br.x / omega0, omega0).tf;
}

/// Reduced passive network as a TFMatrix over the source buses.
/// Quasistatic mode goes through the complex Ybus and Kron reduction;
/// dynamic-branches mode stamps rational branch blocks and eliminates the
/// passive buses by a rational Schur complement (small cases only).
TFMatrix reduced_network(const NetworkCase& cs, const PowerFlowResult& pf,
                         const std::vector<int>& source_buses, Eigen::MatrixXcd* y_red_out) {
    if (cs.mode == BranchMode::quasistatic) {
        const YbusResult yb = build_ybus(cs, &pf);
        std::vector<int> keep;
        for (int sb : source_buses) {
            auto itrow = std::find(yb.bus_of_row.begin(), yb.bus_of_row.end(), sb);
            if (itrow == yb.bus_of_row.end())
                throw InvalidArgument("source bus eliminated from Ybus");
            keep.push_back(static_cast<int>(itrow - yb.bus_of_row.begin()));
        }
        const Eigen::MatrixXcd yred = kron_reduce(yb.y, keep);
        if (y_red_out) *y_red_out = yred;
        return expand_dq(yred);
    }

    // Dynamic branches: rational blocks, bus order = non-infinite buses.
    std::vector<int> dyn_buses;
    for (int i = 0; i < static_cast<int>(cs.buses.size()); ++i)
        if (cs.buses[static_cast<std::size_t>(i)].type != BusType::infinite) dyn_buses.push_back(i);
    const int m = static_cast<int>(dyn_buses.size());
    auto row_of = [&](int bus) {
        auto itr = std::find(dyn_buses.begin(), dyn_buses.end(), bus);
        return itr == dyn_buses.end() ? -1 : static_cast<int>(itr - dyn_buses.begin());
    };

    TFMatrix y(2 * m, 2 * m);
    for (const Branch& br : cs.branches) {
        const TFMatrix yb = dynamic_branch_admittance(br, cs.omega0);
        const int ra = row_of(cs.bus_index(br.from));
        const int rb = row_of(cs.bus_index(br.to));
        if (ra >= 0)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) y(2 * ra + a, 2 * ra + b) += yb(a, b);
        if (rb >= 0)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) y(2 * rb + a, 2 * rb + b) += yb(a, b);
        if (ra >= 0 && rb >= 0)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    y(2 * ra + a, 2 * rb + b) -= yb(a, b);
                    y(2 * rb + a, 2 * ra + b) -= yb(a, b);
                }
        // Charging stays quasistatic (constant shunt).
        if (br.charging > 0.0) {
            const Eigen::MatrixXcd sh = Eigen::MatrixXcd::Constant(1, 1, cdouble(0.0, br.charging / 2.0));
            const TFMatrix shq = expand_dq(sh);
            if (ra >= 0)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) y(2 * ra + a, 2 * ra + b) += shq(a, b);
            if (rb >= 0)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) y(2 * rb + a, 2 * rb + b) += shq(a, b);
        }
    }
    for (const Load& l : cs.loads) {
        const int rk = row_of(cs.bus_index(l.bus));
        if (rk < 0) continue;
        const cdouble vk = pf.v(cs.bus_index(l.bus));
        const cdouble yl = std::conj(cdouble(l.p, l.q)) / (std::abs(vk) * std::abs(vk));
        const TFMatrix ylq = expand_dq(Eigen::MatrixXcd::Constant(1, 1, yl));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) y(2 * rk + a, 2 * rk + b) += ylq(a, b);
    }

    // Eliminate non-source rows by a rational Schur complement.
    std::vector<int> keep_rows, elim_rows;
    for (int r = 0; r < m; ++r) {
        const bool is_src = std::find(source_buses.begin(), source_buses.end(),
                                      dyn_buses[static_cast<std::size_t>(r)]) != source_buses.end();
        (is_src ? keep_rows : elim_rows).push_back(r);
    }
    if (y_red_out) *y_red_out = Eigen::MatrixXcd();
    if (elim_rows.empty()) {
        // Reorder to the requested source order.
        TFMatrix out(2 * static_cast<int>(source_buses.size()), 2 * static_cast<int>(source_buses.size()));
        for (std::size_t i = 0; i < source_buses.size(); ++i)
            for (std::size_t j = 0; j < source_buses.size(); ++j) {
                const int ri = row_of(source_buses[i]);
                const int rj = row_of(source_buses[j]);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        out(2 * static_cast<int>(i) + a, 2 * static_cast<int>(j) + b) =
                            y(2 * ri + a, 2 * rj + b);
            }
        return out;
    }
    if (elim_rows.size() > 1)
        throw NumericError("dynamic-branches mode supports at most one eliminated bus; "
                           "use quasistatic mode for meshed passive networks");

    const int e = elim_rows[0];
    TFMatrix yee(2, 2), inv(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) yee(a, b) = y(2 * e + a, 2 * e + b);
    inv = yee.inverse2x2();

    const int nk = static_cast<int>(keep_rows.size());
    TFMatrix out(2 * nk, 2 * nk);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) {
            const int ri = keep_rows[static_cast<std::size_t>(i)];
            const int rj = keep_rows[static_cast<std::size_t>(j)];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    RationalFunction acc = y(2 * ri + a, 2 * rj + b);
                    for (int c1 = 0; c1 < 2; ++c1)
                        for (int c2 = 0; c2 < 2; ++c2)
                            acc -= y(2 * ri + a, 2 * e + c1) * inv(c1, c2) * y(2 * e + c2, 2 * rj + b);
                    out(2 * i + a, 2 * j + b) = acc.simplify().value;
                }
        }
    // Map keep_rows order to requested source order.
    std::vector<int> order(static_cast<std::size_t>(nk));
    for (std::size_t i = 0; i < source_buses.size(); ++i) {
        const int r = row_of(source_buses[i]);
        auto itk = std::find(keep_rows.begin(), keep_rows.end(), r);
        order[i] = static_cast<int>(itk - keep_rows.begin());
    }
    TFMatrix out2(2 * nk, 2 * nk);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    out2(2 * i + a, 2 * j + b) =
                        out(2 * order[static_cast<std::size_t>(i)] + a,
                            2 * order[static_cast<std::size_t>(j)] + b);
    return out2;
}

void check_block_for_assembly(const AdmittanceBlock& blk, const SourceSolution& sol) {
    if (blk.frame.kind != FrameKind::system || blk.frame.angle != 0.0)
        throw InvalidArgument("source block at bus '" + blk.bus + "' is in the " +
                              to_string(blk.frame.kind) + " frame (angle " +
                              std::to_string(blk.frame.angle) +
                              "); rotate to the system frame before assembly");
    if (!blk.injection_positive)
        throw InvalidArgument("source block at bus '" + blk.bus +
                              "' does not use the injection-positive convention");
    if (blk.tf.rows() != 2 || blk.tf.cols() != 2)
        throw InvalidArgument("source block at bus '" + blk.bus + "' must be 2x2 dq");
    if (!blk.calibration)
        throw InvalidArgument("source block at bus '" + blk.bus + "' carries no operating point");

    const OperatingPoint& op = *blk.calibration;
    const double tol = 1e-4;
    const double dp = std::abs(op.P - sol.P);
    const double dq = std::abs(op.Q - sol.Q);
    const double dv = std::abs(op.vmag() - sol.V);
    double dth = std::remainder(op.theta_v - sol.theta, 2.0 * M_PI);
    if (dp > tol || dq > tol || dv > tol || std::abs(dth) > tol)
        throw InvalidArgument(
            "source block at bus '" + blk.bus + "' calibrated off the solved operating point: "
            "|dP|=" + std::to_string(dp) + " |dQ|=" + std::to_string(dq) +
            " |dV|=" + std::to_string(dv) + " |dtheta|=" + std::to_string(std::abs(dth)) +
            " (tolerance 1e-4)");
}

}  // namespace

AdmittanceBlock derive_source_block(const NetworkCase& cs, const PowerFlowResult& pf,
                                    const SourceSpec& src) {
    const SourceSolution& sol = pf.at_bus(src.bus);
    const int k = cs.bus_index(src.bus);
    const cdouble v = pf.v(k);

    OperatingPoint op;
    op.Vx = v.real();
    op.Vy = v.imag();
    op.theta_v = sol.theta;
    op.P = sol.P;
    op.Q = sol.Q;
    op.delta = sol.delta;

    AdmittanceBlock blk;
    if (const auto* gp = std::get_if<components::GeneratorParams>(&src.params)) {
        components::GeneratorParams g = *gp;
        g.omega0 = cs.omega0;
        g.E = sol.E;  // internal voltage from the solved condition
        blk = components::gen_classical_admittance(g, op);
    } else if (const auto* tp = std::get_if<components::TorsionalParams>(&src.params)) {
        components::TorsionalParams t = *tp;
        t.gen.omega0 = cs.omega0;
        t.gen.E = sol.E;
        blk = components::torsional_gen_admittance(t, op);
    } else if (const auto* vp = std::get_if<VscParams>(&src.params)) {
        VscParams v2 = *vp;
        v2.omega0 = cs.omega0;
        blk = vsc_admittance(v2, op);
    } else if (std::holds_alternative<components::DfigParams>(src.params)) {
        throw InvalidArgument("DFIG sources are static-frame scalars; use derive_and_assemble "
                              "on a single-DFIG case");
    } else {
        throw InvalidArgument("measured-admittance sources are loaded through the case file layer");
    }
    blk.bus = src.bus;
    return blk;
}

AssembledSystem assemble_total(const NetworkCase& cs, const std::vector<AdmittanceBlock>& blocks) {
    cs.validate();
    if (is_single_dfig(cs))
        throw InvalidArgument("single-DFIG cases assemble in the static frame; "
                              "use derive_and_assemble");

    AssembledSystem out;
    out.pf = power_flow(cs);

    std::vector<int> source_buses;
    for (const SourceSpec& s : cs.sources) {
        out.source_buses.push_back(s.bus);
        source_buses.push_back(cs.bus_index(s.bus));
    }

    const int ns = static_cast<int>(cs.sources.size());
    TFMatrix y = reduced_network(cs, out.pf, source_buses, &out.y_red);

    for (int i = 0; i < ns; ++i) {
        const std::string& bus = out.source_buses[static_cast<std::size_t>(i)];
        const AdmittanceBlock* blk = nullptr;
        for (const AdmittanceBlock& b : blocks)
            if (b.bus == bus) { blk = &b; break; }
        if (!blk) throw InvalidArgument("no admittance block supplied for source bus '" + bus + "'");
        check_block_for_assembly(*blk, out.pf.at_bus(bus));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) y(2 * i + a, 2 * i + b) += blk->tf(a, b);
    }
    out.y_total = std::move(y);
    return out;
}

AssembledSystem derive_and_assemble(const NetworkCase& cs) {
    cs.validate();
    if (is_single_dfig(cs)) {
        // Static-frame scalar path: Y = Y_dfig + Y_line from the machine and
        // its series-compensated line parameters.
        auto dp = std::get<components::DfigParams>(cs.sources[0].params);
        dp.omega0 = cs.omega0;
        const components::DfigAdmittances ys = components::dfig_static_admittance(dp);
        AssembledSystem out;
        out.source_buses.push_back(cs.sources[0].bus);
        out.y_total = TFMatrix(1, 1);
        out.y_total(0, 0) = ys.y_dfig + ys.y_line;
        return out;
    }

    AssembledSystem pre;
    pre.pf = power_flow(cs);
    std::vector<AdmittanceBlock> blocks;
    for (const SourceSpec& s : cs.sources) blocks.push_back(derive_source_block(cs, pre.pf, s));
    return assemble_total(cs, blocks);
}

TFMatrix thevenin(const TFMatrix& y, int block_index, double simplify_tol) {
    if (!y.is_square() || y.rows() % 2 != 0)
        throw InvalidArgument("thevenin expects a square matrix of 2x2 dq blocks");
    const int nb = y.rows() / 2;
    if (block_index < 0 || block_index >= nb) throw InvalidArgument("thevenin block index out of range");

    const RationalFunction d = y.det().simplify(simplify_tol).value;
    if (d.is_zero()) throw NumericError("thevenin: admittance matrix is singular");

    TFMatrix z(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            // (Y^{-1})_{ij} = cof_{ji} / det
            const RationalFunction c =
                y.cofactor(2 * block_index + b, 2 * block_index + a).simplify(simplify_tol).value;
            z(a, b) = (c / d).simplify(simplify_tol).value;
        }
    return z;
}

Eigen::Matrix2cd thevenin_at(const TFMatrix& y, int block_index, cdouble s) {
    const Eigen::MatrixXcd m = y.eval(s);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible()) throw NumericError("thevenin_at: matrix singular at the requested s");
    const Eigen::MatrixXcd inv = lu.inverse();
    return inv.block<2, 2>(2 * block_index, 2 * block_index);
}

}  // namespace network
}  // namespace ynet
