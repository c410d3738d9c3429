// ynet: admittance-based small-signal analysis from the command line.
//
// Exit codes: 0 success (stable verdict where applicable), 3 unstable
// verdict, 1 usage/input error, 2 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ynet/case_file.hpp"
#include "ynet/frames.hpp"
#include "ynet/io.hpp"
#include "ynet/network.hpp"
#include "ynet/stability.hpp"

namespace fs = std::filesystem;
using namespace ynet;

namespace {

struct CommonArgs {
    std::string case_path;
    std::string out_dir = ".";
    std::string grid_spec;
    int order = 0;
    std::string frame = "system";
    std::string mode;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_case = true) {
    auto* opt = cmd->add_option("--case", a.case_path, "case file (JSON)");
    if (needs_case) opt->required();
    cmd->add_option("--out", a.out_dir, "output directory (default .)");
    cmd->add_option("--grid", a.grid_spec, "frequency grid fmin,fmax,n (Hz)");
    cmd->add_option("--order", a.order, "identified model order");
    cmd->add_option("--frame", a.frame, "calibration frame: system|local")
        ->check(CLI::IsMember({"system", "local"}));
    cmd->add_option("--mode", a.mode, "branch mode: quasistatic|dynamic-branches")
        ->check(CLI::IsMember({"quasistatic", "dynamic-branches"}));
}

io::CaseFile load_case(const CommonArgs& a) {
    io::CaseFile cf = io::load_case_file(a.case_path);
    if (!a.mode.empty())
        cf.net.mode = a.mode == "quasistatic" ? network::BranchMode::quasistatic
                                              : network::BranchMode::dynamic_branches;
    return cf;
}

stability::FrequencyGrid make_grid(const CommonArgs& a, const io::AnalysisOptions& an) {
    double fmin = an.fmin, fmax = an.fmax;
    int n = an.grid_points;
    if (!a.grid_spec.empty()) {
        if (std::sscanf(a.grid_spec.c_str(), "%lf,%lf,%d", &fmin, &fmax, &n) != 3)
            throw InvalidArgument("--grid expects fmin,fmax,n");
    }
    return stability::default_grid(fmin, fmax, n);
}

fs::path out_file(const CommonArgs& a, const std::string& name) {
    fs::create_directories(a.out_dir);
    return fs::path(a.out_dir) / name;
}

void write_powerflow_report(const fs::path& path, const network::NetworkCase& cs,
                            const network::PowerFlowResult& pf) {
    std::ofstream os(path);
    os << "bus,vmag,theta,p,q,delta,e\n";
    char buf[256];
    for (const auto& sol : pf.sources) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      sol.bus.c_str(), sol.V, sol.theta, sol.P, sol.Q, sol.delta, sol.E);
        os << buf;
    }
    for (std::size_t i = 0; i < cs.buses.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,,,,\n", cs.buses[i].id.c_str(),
                      std::abs(pf.v(static_cast<Eigen::Index>(i))),
                      std::arg(pf.v(static_cast<Eigen::Index>(i))));
        os << buf;
    }
}

/// Derive one block honoring --frame.
AdmittanceBlock derive_block(const io::CaseFile& cf, const network::PowerFlowResult& pf,
                             const network::SourceSpec& src, const std::string& frame) {
    AdmittanceBlock blk = network::derive_source_block(cf.net, pf, src);
    if (frame == "local") {
        const auto& sol = pf.at_bus(src.bus);
        blk = frames::rotate_admittance(blk, FrameTag::local(sol.theta));
        // Calibration voltage moves into the local frame (d-axis on V).
        blk.calibration->Vx = sol.V;
        blk.calibration->Vy = 0.0;
        blk.calibration->theta_v = 0.0;
        blk.calibration->delta -= sol.theta;
    }
    return blk;
}

int cmd_derive(const CommonArgs& a, const std::string& source_bus) {
    const io::CaseFile cf = load_case(a);

    // Static-frame DFIG path writes the scalar machine admittance.
    for (const auto& src : cf.net.sources) {
        if (!source_bus.empty() && src.bus != source_bus) continue;
        if (const auto* dp = std::get_if<components::DfigParams>(&src.params)) {
            auto d = *dp;
            d.omega0 = cf.net.omega0;
            const auto ys = components::dfig_static_admittance(d);
            TFMatrix y(1, 1);
            y(0, 0) = ys.y_dfig;
            io::write_admittance_file(out_file(a, src.bus + ".adm"), y);
            TFMatrix yl(1, 1);
            yl(0, 0) = ys.y_line;
            io::write_admittance_file(out_file(a, src.bus + "_line.adm"), yl);
            std::cout << "wrote " << src.bus << ".adm (static frame, scalar)\n";
            return 0;
        }
    }

    const network::PowerFlowResult pf = network::power_flow(cf.net);
    bool any = false;
    for (const auto& src : cf.net.sources) {
        if (!source_bus.empty() && src.bus != source_bus) continue;
        if (src.kind == network::SourceKind::measured_admittance_file) continue;
        const AdmittanceBlock blk = derive_block(cf, pf, src, a.frame);
        io::write_admittance_file(out_file(a, src.bus + ".adm"), blk.tf);
        std::cout << "wrote " << src.bus << ".adm\n";
        any = true;
    }
    if (!any) throw InvalidArgument("no source matched '" + source_bus + "'");
    return 0;
}

int cmd_assemble(const CommonArgs& a) {
    io::CaseFile cf = load_case(a);

    network::AssembledSystem sys;
    if (a.frame == "local") {
        // Deliberately calibrate each source in its terminal frame; assembly
        // rejects the blocks, which is the point of the exercise.
        const network::PowerFlowResult pf = network::power_flow(cf.net);
        std::vector<AdmittanceBlock> blocks;
        for (const auto& src : cf.net.sources) blocks.push_back(derive_block(cf, pf, src, "local"));
        sys = network::assemble_total(cf.net, blocks);
    } else {
        sys = io::assemble_case(cf);
    }

    io::write_admittance_file(out_file(a, "total.adm"), sys.y_total);
    if (sys.pf.v.size() > 0) write_powerflow_report(out_file(a, "powerflow.csv"), cf.net, sys.pf);
    if (sys.y_red.size() > 0) {
        std::ofstream os(out_file(a, "ybus_reduced.csv"));
        io::write_ybus(os, sys.y_red);
    }
    std::cout << "wrote total.adm (" << sys.y_total.rows() << "x" << sys.y_total.cols() << ")\n";
    return 0;
}

int report_verdict(const stability::EigenReport& rep) {
    const auto& dom = rep.dominant();
    std::cout << (rep.unstable ? "UNSTABLE" : "stable") << ": dominant root "
              << dom.value.real() << (dom.value.imag() < 0 ? " - " : " + ")
              << std::abs(dom.value.imag()) << "j rad/s (" << dom.freq_hz << " Hz, damping "
              << dom.damping << ")\n";
    return rep.unstable ? 3 : 0;
}

int cmd_eigs(const CommonArgs& a, const std::string& admittance_file) {
    TFMatrix y;
    if (!admittance_file.empty()) {
        y = io::read_admittance_file(admittance_file);
    } else {
        y = io::assemble_case(load_case(a)).y_total;
    }
    const stability::EigenReport rep = stability::eigs_from_admittance(y);
    std::ofstream os(out_file(a, "eigs.csv"));
    io::write_eigen_report(os, rep);
    for (const auto& n : rep.notes) std::cout << "# " << n << "\n";
    return report_verdict(rep);
}

int cmd_rma(const CommonArgs& a) {
    const io::CaseFile cf = load_case(a);
    const TFMatrix y = io::assemble_case(cf).y_total;
    auto grid = make_grid(a, cf.analysis);
    grid = stability::densify_near_det_minima(y, grid);
    const stability::RmaResult r = stability::rma_sweep(y, grid);
    {
        std::ofstream os(out_file(a, "rma.csv"));
        io::write_rma(os, r);
    }
    {
        std::ofstream os(out_file(a, "rma_peaks.csv"));
        os << "freq_hz,magnitude,trace\n";
        char buf[128];
        for (const auto& p : r.peaks) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", p.freq_hz, p.magnitude, p.trace);
            os << buf;
        }
    }
    std::cout << "wrote rma.csv, rma_peaks.csv (" << r.peaks.size() << " peaks)\n";
    return 0;
}

int cmd_sigma(const CommonArgs& a) {
    const io::CaseFile cf = load_case(a);
    const TFMatrix y = io::assemble_case(cf).y_total;
    const stability::SigmaResult r = stability::sigma_sweep(y, make_grid(a, cf.analysis));
    std::ofstream os(out_file(a, "sigma.csv"));
    io::write_sigma(os, r);
    std::cout << "wrote sigma.csv\n";
    return 0;
}

int cmd_nyquist(const CommonArgs& a) {
    const io::CaseFile cf = load_case(a);
    if (cf.net.sources.size() != 1)
        throw InvalidArgument("nyquist needs a single-source case (two-impedance partition)");
    const auto& src = cf.net.sources[0];

    TFMatrix loop;
    if (const auto* dp = std::get_if<components::DfigParams>(&src.params)) {
        auto d = *dp;
        d.omega0 = cf.net.omega0;
        const auto ys = components::dfig_static_admittance(d);
        loop = TFMatrix(1, 1);
        loop(0, 0) = ys.y_dfig / ys.y_line;
    } else {
        const network::PowerFlowResult pf = network::power_flow(cf.net);
        const AdmittanceBlock blk = network::derive_source_block(cf.net, pf, src);
        network::AssembledSystem sys = io::assemble_case(cf);
        const TFMatrix net = sys.y_total - blk.tf;  // passive part
        loop = blk.tf * net.inverse2x2();
    }
    const stability::NyquistResult r =
        stability::nyquist_loci(loop, make_grid(a, cf.analysis));
    std::ofstream os(out_file(a, "nyquist.csv"));
    io::write_nyquist(os, r);
    for (const auto& n : r.notes) std::cout << "# " << n << "\n";
    std::cout << "clockwise encirclements of (-1,0): " << r.encirclements_cw << "\n";
    return r.encirclements_cw > 0 ? 3 : 0;
}

int cmd_trace(const CommonArgs& a) {
    io::CaseFile cf = load_case(a);
    if (cf.analysis.sweep_path.empty() || cf.analysis.sweep_values.empty())
        throw InvalidArgument("trace needs analysis.sweep and analysis.values in the case file");

    auto build = [&](double v) {
        io::CaseFile tmp = cf;
        const std::string& path = cf.analysis.sweep_path;
        if (path == "sources[0].comp") {
            auto& dp = std::get<components::DfigParams>(tmp.net.sources[0].params);
            dp.comp = v;
        } else if (path == "branches[0].comp") {
            tmp.net.branches[0].comp = v;
        } else {
            throw InvalidArgument("unsupported sweep path '" + path +
                                  "' (use sources[0].comp or branches[0].comp)");
        }
        return io::assemble_case(tmp).y_total;
    };

    const stability::ModeTraceResult tr =
        stability::mode_trace(build, cf.analysis.sweep_values);
    std::ofstream os(out_file(a, "trace.csv"));
    os << "parameter,re,im,freq_hz,damping_ratio\n";
    char buf[200];
    bool any_unstable = false;
    for (std::size_t k = 0; k < tr.reports.size(); ++k) {
        any_unstable = any_unstable || tr.reports[k].unstable;
        for (const auto& r : tr.reports[k].roots) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.parameter[k],
                          r.value.real(), r.value.imag(), r.freq_hz, r.damping);
            os << buf;
        }
    }
    for (const auto& w : tr.warnings) std::cout << "# " << w << "\n";
    std::cout << "wrote trace.csv over " << tr.parameter.size() << " parameter values\n";
    return any_unstable ? 3 : 0;
}

int cmd_era(const CommonArgs& a, const std::vector<std::string>& event_csvs,
            const std::vector<std::string>& metas, int hankel_cols) {
    if (event_csvs.size() != 2)
        throw InvalidArgument("two events required for 2x2 identification");
    std::vector<era::EventRecord> events;
    for (std::size_t i = 0; i < event_csvs.size(); ++i) {
        fs::path meta = i < metas.size() ? fs::path(metas[i])
                                         : fs::path(event_csvs[i]).replace_extension(".json");
        events.push_back(io::read_event(event_csvs[i], meta));
    }

    era::EraOptions opts;
    opts.order = a.order;
    opts.hankel_cols = hankel_cols;
    const era::AdmittanceFit fit = era::admittance_from_steps(events, opts);

    io::write_admittance_file(out_file(a, "identified.adm"), fit.admittance);
    {
        std::ofstream os(out_file(a, "era_model.txt"));
        os << "order " << fit.realization.order << "\nts " << *fit.realization.shared.dt << "\n";
        const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, " ", "\n", "", "", "", "");
        os << "A\n" << fit.continuous.A.format(fmt) << "\nB\n" << fit.continuous.B.format(fmt)
           << "\nC\n" << fit.continuous.C.format(fmt) << "\nD\n" << fit.continuous.D.format(fmt)
           << "\n";
    }
    {
        std::ofstream os(out_file(a, "era_report.txt"));
        os << "order " << fit.realization.order << "\n";
        os << "reconstruction_error " << fit.reconstruction_error << "\n";
        os << "singular_values";
        for (int i = 0; i < fit.realization.singular_values.size(); ++i)
            os << " " << fit.realization.singular_values(i);
        os << "\n";
        for (const auto& l : fit.log) os << "note " << l << "\n";
    }
    std::cout << "wrote identified.adm, era_model.txt, era_report.txt (reconstruction error "
              << fit.reconstruction_error << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"admittance-based small-signal stability toolkit"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string source_bus, admittance_file;
    std::vector<std::string> event_csvs, metas;
    int hankel_cols = 0;

    auto* derive = app.add_subcommand("derive", "derive one source's admittance model");
    add_common(derive, a);
    derive->add_option("--source", source_bus, "source bus id (default: all)");

    auto* assemble = app.add_subcommand("assemble", "power flow + total admittance matrix");
    add_common(assemble, a);

    auto* eigs = app.add_subcommand("eigs", "determinant-root eigenvalue analysis");
    add_common(eigs, a, false);
    eigs->add_option("--admittance", admittance_file, "analyze an admittance file instead");

    auto* rma = app.add_subcommand("rma", "modal impedance sweep");
    add_common(rma, a);
    auto* sigma = app.add_subcommand("sigma", "singular value sweep");
    add_common(sigma, a);
    auto* nyquist = app.add_subcommand("nyquist", "generalized Nyquist of the open loop");
    add_common(nyquist, a);
    auto* trace = app.add_subcommand("trace", "root sets across a parameter sweep");
    add_common(trace, a);

    auto* era_cmd = app.add_subcommand("era", "identify an admittance from two step events");
    add_common(era_cmd, a, false);
    era_cmd->add_option("--events", event_csvs, "two event CSV files")->required();
    era_cmd->add_option("--meta", metas, "metadata sidecars (default <event>.json)");
    era_cmd->add_option("--hankel-cols", hankel_cols, "Hankel column count L (default N/2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) return cmd_derive(a, source_bus);
        if (assemble->parsed()) return cmd_assemble(a);
        if (eigs->parsed()) {
            if (a.case_path.empty() && admittance_file.empty())
                throw InvalidArgument("eigs needs --case or --admittance");
            return cmd_eigs(a, admittance_file);
        }
        if (rma->parsed()) return cmd_rma(a);
        if (sigma->parsed()) return cmd_sigma(a);
        if (nyquist->parsed()) return cmd_nyquist(a);
        if (trace->parsed()) return cmd_trace(a);
        if (era_cmd->parsed()) return cmd_era(a, event_csvs, metas, hankel_cols);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
