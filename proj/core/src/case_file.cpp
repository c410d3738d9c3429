#include "ynet/case_file.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "ynet/io.hpp"

namespace ynet {
namespace io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InvalidArgument("case file: " + where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

double num_at(const json& j, const std::string& where, const std::string& key, double dflt,
              bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(where, "missing key '" + key + "'");
        return dflt;
    }
    if (!j.at(key).is_number()) fail(where + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::string str_at(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail(where, "missing key '" + key + "'");
    if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

components::GeneratorParams parse_generator(const json& j, const std::string& where) {
    reject_unknown(j, where, {"h", "d1", "xg", "e"});
    components::GeneratorParams g;
    g.H = num_at(j, where, "h", 0.0, true);
    g.D1 = num_at(j, where, "d1", 0.0);
    g.Xg = num_at(j, where, "xg", 0.0, true);
    g.E = num_at(j, where, "e", 1.0);  // refined from the power flow at derive time
    return g;
}

components::DfigParams parse_dfig(const json& j, const std::string& where) {
    reject_unknown(j, where, {"rs", "xls", "rr", "xlr", "wm", "r", "xl", "comp"});
    components::DfigParams d;
    d.rs = num_at(j, where, "rs", 0.0, true);
    d.Xls = num_at(j, where, "xls", 0.0, true);
    d.rr = num_at(j, where, "rr", 0.0, true);
    d.Xlr = num_at(j, where, "xlr", 0.0, true);
    d.wm = num_at(j, where, "wm", 0.0, true);
    d.R = num_at(j, where, "r", 0.0, true);
    d.XL = num_at(j, where, "xl", 0.0, true);
    d.comp = num_at(j, where, "comp", 0.0, true);
    return d;
}

components::TorsionalParams parse_torsional(const json& j, const std::string& where) {
    reject_unknown(j, where, {"h", "d", "k", "d1", "xg", "e"});
    components::TorsionalParams t;
    for (const char* key : {"h", "d", "k"}) {
        if (!j.contains(key) || !j.at(key).is_array()) fail(where, std::string("missing array '") + key + "'");
    }
    t.H = j.at("h").get<std::vector<double>>();
    t.D = j.at("d").get<std::vector<double>>();
    t.K = j.at("k").get<std::vector<double>>();
    t.gen.H = t.H.empty() ? 0.0 : t.H[0];
    t.gen.D1 = num_at(j, where, "d1", 0.0);
    t.gen.Xg = num_at(j, where, "xg", 0.0, true);
    t.gen.E = num_at(j, where, "e", 1.0);
    return t;
}

VscParams parse_vsc(const json& j, const std::string& where) {
    reject_unknown(j, where, {"r_choke", "x_choke", "r_grid", "x_grid", "kp_i", "ki_i", "kp_dc",
                              "ki_dc", "kp_v", "ki_v", "kp_pll", "ki_pll", "tau_dc", "vdc_ref"});
    VscParams v;
    v.r_choke = num_at(j, where, "r_choke", v.r_choke);
    v.x_choke = num_at(j, where, "x_choke", v.x_choke);
    v.r_grid = num_at(j, where, "r_grid", v.r_grid);
    v.x_grid = num_at(j, where, "x_grid", v.x_grid);
    v.kp_i = num_at(j, where, "kp_i", v.kp_i);
    v.ki_i = num_at(j, where, "ki_i", v.ki_i);
    v.kp_dc = num_at(j, where, "kp_dc", v.kp_dc);
    v.ki_dc = num_at(j, where, "ki_dc", v.ki_dc);
    v.kp_v = num_at(j, where, "kp_v", v.kp_v);
    v.ki_v = num_at(j, where, "ki_v", v.ki_v);
    v.kp_pll = num_at(j, where, "kp_pll", v.kp_pll);
    v.ki_pll = num_at(j, where, "ki_pll", v.ki_pll);
    v.tau_dc = num_at(j, where, "tau_dc", v.tau_dc);
    v.vdc_ref = num_at(j, where, "vdc_ref", v.vdc_ref);
    return v;
}

}  // namespace

CaseFile parse_case(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("case file: JSON parse error: ") + e.what());
    }
    reject_unknown(j, "$", {"system", "buses", "branches", "loads", "sources", "analysis"});

    CaseFile cf;
    if (j.contains("system")) {
        const json& s = j.at("system");
        reject_unknown(s, "system", {"omega0", "mode"});
        cf.net.omega0 = num_at(s, "system", "omega0", 377.0);
        if (s.contains("mode")) {
            const std::string m = str_at(s, "system", "mode");
            if (m == "quasistatic") cf.net.mode = network::BranchMode::quasistatic;
            else if (m == "dynamic-branches") cf.net.mode = network::BranchMode::dynamic_branches;
            else fail("system.mode", "expected 'quasistatic' or 'dynamic-branches'");
        }
    }

    if (!j.contains("buses") || !j.at("buses").is_array()) fail("$", "missing 'buses' array");
    for (std::size_t i = 0; i < j.at("buses").size(); ++i) {
        const json& b = j.at("buses")[i];
        const std::string where = "buses[" + std::to_string(i) + "]";
        reject_unknown(b, where, {"id", "type"});
        network::Bus bus;
        bus.id = str_at(b, where, "id");
        const std::string t = b.contains("type") ? str_at(b, where, "type") : "passive";
        if (t == "source") bus.type = network::BusType::source;
        else if (t == "passive") bus.type = network::BusType::passive;
        else if (t == "infinite") bus.type = network::BusType::infinite;
        else fail(where + ".type", "expected source|passive|infinite");
        cf.net.buses.push_back(bus);
    }

    if (j.contains("branches"))
        for (std::size_t i = 0; i < j.at("branches").size(); ++i) {
            const json& b = j.at("branches")[i];
            const std::string where = "branches[" + std::to_string(i) + "]";
            reject_unknown(b, where, {"from", "to", "r", "x", "charging", "comp"});
            network::Branch br;
            br.from = str_at(b, where, "from");
            br.to = str_at(b, where, "to");
            br.r = num_at(b, where, "r", 0.0);
            br.x = num_at(b, where, "x", 0.0, true);
            br.charging = num_at(b, where, "charging", 0.0);
            br.comp = num_at(b, where, "comp", 0.0);
            cf.net.branches.push_back(br);
        }

    if (j.contains("loads"))
        for (std::size_t i = 0; i < j.at("loads").size(); ++i) {
            const json& l = j.at("loads")[i];
            const std::string where = "loads[" + std::to_string(i) + "]";
            reject_unknown(l, where, {"bus", "p", "q"});
            network::Load ld;
            ld.bus = str_at(l, where, "bus");
            ld.p = num_at(l, where, "p", 0.0);
            ld.q = num_at(l, where, "q", 0.0);
            cf.net.loads.push_back(ld);
        }

    if (!j.contains("sources") || !j.at("sources").is_array()) fail("$", "missing 'sources' array");
    for (std::size_t i = 0; i < j.at("sources").size(); ++i) {
        const json& s = j.at("sources")[i];
        const std::string where = "sources[" + std::to_string(i) + "]";
        reject_unknown(s, where, {"bus", "kind", "p", "q", "v", "params", "file"});
        network::SourceSpec src;
        src.bus = str_at(s, where, "bus");
        const std::string kind = str_at(s, where, "kind");
        src.P = num_at(s, where, "p", 0.0);
        src.Q = num_at(s, where, "q", 0.0);
        src.V = num_at(s, where, "v", 1.0);
        const json params = s.contains("params") ? s.at("params") : json::object();
        if (kind == "generator") {
            src.kind = network::SourceKind::generator;
            src.params = parse_generator(params, where + ".params");
        } else if (kind == "dfig") {
            src.kind = network::SourceKind::dfig;
            src.params = parse_dfig(params, where + ".params");
        } else if (kind == "torsional-generator") {
            src.kind = network::SourceKind::torsional_generator;
            src.params = parse_torsional(params, where + ".params");
        } else if (kind == "vsc-reference") {
            src.kind = network::SourceKind::vsc_reference;
            src.params = parse_vsc(params, where + ".params");
        } else if (kind == "measured-admittance-file") {
            src.kind = network::SourceKind::measured_admittance_file;
            const std::string file = str_at(s, where, "file");
            src.params = file;
            cf.measured_files.emplace_back(src.bus, base_dir / file);
            if (params.is_object() && !params.empty()) {
                reject_unknown(params, where + ".params", {"p", "q", "v", "theta"});
                OperatingPoint op;
                op.P = num_at(params, where + ".params", "p", 0.0, true);
                op.Q = num_at(params, where + ".params", "q", 0.0, true);
                const double v = num_at(params, where + ".params", "v", 1.0, true);
                op.theta_v = num_at(params, where + ".params", "theta", 0.0);
                op.Vx = v * std::cos(op.theta_v);
                op.Vy = v * std::sin(op.theta_v);
                src.calibration = op;
            }
        } else {
            fail(where + ".kind",
                 "expected generator|dfig|torsional-generator|vsc-reference|measured-admittance-file");
        }
        cf.net.sources.push_back(std::move(src));
    }

    if (j.contains("analysis")) {
        const json& a = j.at("analysis");
        reject_unknown(a, "analysis", {"fmin", "fmax", "grid_points", "order", "sweep", "values"});
        cf.analysis.fmin = num_at(a, "analysis", "fmin", cf.analysis.fmin);
        cf.analysis.fmax = num_at(a, "analysis", "fmax", cf.analysis.fmax);
        cf.analysis.grid_points = static_cast<int>(num_at(a, "analysis", "grid_points",
                                                          cf.analysis.grid_points));
        cf.analysis.order = static_cast<int>(num_at(a, "analysis", "order", 0));
        if (a.contains("sweep")) cf.analysis.sweep_path = str_at(a, "analysis", "sweep");
        if (a.contains("values")) {
            if (!a.at("values").is_array()) fail("analysis.values", "expected an array");
            cf.analysis.sweep_values = a.at("values").get<std::vector<double>>();
        }
    }

    cf.net.validate();
    return cf;
}

CaseFile load_case_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open case file '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_case(text, path.parent_path().empty() ? "." : path.parent_path());
}

network::AssembledSystem assemble_case(const CaseFile& cf) {
    if (cf.measured_files.empty()) return network::derive_and_assemble(cf.net);

    const network::PowerFlowResult pf = network::power_flow(cf.net);
    std::vector<AdmittanceBlock> blocks;
    for (const network::SourceSpec& s : cf.net.sources) {
        if (s.kind != network::SourceKind::measured_admittance_file) {
            blocks.push_back(network::derive_source_block(cf.net, pf, s));
            continue;
        }
        std::filesystem::path file;
        for (const auto& [bus, path] : cf.measured_files)
            if (bus == s.bus) file = path;
        AdmittanceBlock blk;
        blk.tf = read_admittance_file(file);
        blk.bus = s.bus;
        blk.frame = FrameTag::system();
        blk.injection_positive = true;
        blk.calibration = s.calibration;
        blocks.push_back(std::move(blk));
    }
    return network::assemble_total(cf.net, blocks);
}

}  // namespace io
}  // namespace ynet
