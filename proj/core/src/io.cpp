#include "ynet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ynet {
namespace io {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& what) { throw InvalidArgument("admittance file: " + what); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open '" + path.string() + "' for reading");
    return is;
}

}  // namespace

std::string format_complex(cdouble v) {
    if (v.imag() == 0.0) return format_double(v.real());
    std::string s = format_double(v.real());
    s += (v.imag() < 0.0 ? "-" : "+");
    s += format_double(std::abs(v.imag()));
    s += "j";
    return s;
}

cdouble parse_complex(const std::string& text) {
    if (text.empty()) fail("empty coefficient");
    if (text.back() != 'j') {
        std::size_t pos = 0;
        const double re = std::stod(text, &pos);
        if (pos != text.size()) fail("trailing characters in coefficient '" + text + "'");
        return cdouble(re);
    }
    const std::string body = text.substr(0, text.size() - 1);
    // Split at the sign of the imaginary part: the last +/- not following an
    // exponent marker and not at position zero.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) fail("cannot split complex coefficient '" + text + "'");
    const double re = std::stod(body.substr(0, split));
    const double im = std::stod(body.substr(split));
    return cdouble(re, im);
}

void write_admittance(std::ostream& os, const TFMatrix& y) {
    os << "rows " << y.rows() << "\n";
    os << "cols " << y.cols() << "\n";
    os << "var=s\n";
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) {
            const RationalFunction& f = y(i, j);
            os << "num:";
            for (const cdouble& c : f.num().coeffs()) os << " " << format_complex(c);
            os << "\nden:";
            for (const cdouble& c : f.den().coeffs()) os << " " << format_complex(c);
            os << "\n";
        }
}

void write_admittance_file(const std::filesystem::path& path, const TFMatrix& y) {
    auto os = open_out(path);
    write_admittance(os, y);
}

TFMatrix read_admittance(std::istream& is) {
    std::string key;
    int rows = 0, cols = 0;
    if (!(is >> key >> rows) || key != "rows") fail("expected 'rows <n>'");
    if (!(is >> key >> cols) || key != "cols") fail("expected 'cols <n>'");
    if (!(is >> key) || key != "var=s") fail("expected 'var=s'");
    if (rows < 1 || cols < 1) fail("bad dimensions");
    std::string line;
    std::getline(is, line);  // finish the var=s line

    TFMatrix y(rows, cols);
    auto read_poly = [&](const char* tag) {
        if (!std::getline(is, line)) fail(std::string("missing ") + tag + " line");
        if (line.rfind(tag, 0) != 0) fail(std::string("expected '") + tag + "' line, got '" + line + "'");
        std::istringstream ls(line.substr(std::string(tag).size()));
        std::vector<cdouble> c;
        std::string tok;
        while (ls >> tok) c.push_back(parse_complex(tok));
        if (c.empty()) fail(std::string(tag) + " line holds no coefficients");
        return Polynomial(std::move(c));
    };
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            Polynomial num = read_poly("num:");
            Polynomial den = read_poly("den:");
            y(i, j) = RationalFunction(std::move(num), std::move(den));
        }
    return y;
}

TFMatrix read_admittance_file(const std::filesystem::path& path) {
    auto is = open_in(path);
    return read_admittance(is);
}

void write_timeseries(std::ostream& os, const TimeSeries& ts) {
    os << "t";
    for (std::size_t i = 0; i < static_cast<std::size_t>(ts.y.rows()); ++i)
        os << "," << (i < ts.names.size() ? ts.names[i] : "y" + std::to_string(i + 1));
    os << "\n";
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
        os << format_double(ts.t[k]);
        for (int i = 0; i < ts.y.rows(); ++i)
            os << "," << format_double(ts.y(i, static_cast<Eigen::Index>(k)));
        os << "\n";
    }
}

void write_timeseries_file(const std::filesystem::path& path, const TimeSeries& ts) {
    auto os = open_out(path);
    write_timeseries(os, ts);
}

TimeSeries read_timeseries(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("time series: empty stream");
    TimeSeries ts;
    {
        std::istringstream hs(line);
        std::string tok;
        bool first = true;
        while (std::getline(hs, tok, ',')) {
            if (first) {
                if (tok != "t") throw InvalidArgument("time series: header must start with 't'");
                first = false;
            } else {
                ts.names.push_back(tok);
            }
        }
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() != ts.names.size() + 1)
            throw InvalidArgument("time series: ragged row '" + line + "'");
        rows.push_back(std::move(row));
    }
    ts.t.resize(rows.size());
    ts.y.resize(static_cast<Eigen::Index>(ts.names.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        ts.t[k] = rows[k][0];
        for (std::size_t i = 0; i < ts.names.size(); ++i)
            ts.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[k][i + 1];
    }
    return ts;
}

TimeSeries read_timeseries_file(const std::filesystem::path& path) {
    auto is = open_in(path);
    return read_timeseries(is);
}

void write_event_meta_file(const std::filesystem::path& path, const era::EventRecord& ev) {
    nlohmann::json j;
    j["input_channel"] = ev.input_channel;
    j["p"] = ev.p;
    j["ts"] = ev.ts;
    j["channels"] = ev.channels;
    j["scales"] = ev.scales;
    j["pre_event_samples"] = ev.pre_event_samples;
    auto os = open_out(path);
    os << j.dump(2) << "\n";
}

era::EventRecord read_event(const std::filesystem::path& csv, const std::filesystem::path& meta) {
    const TimeSeries ts = read_timeseries_file(csv);
    auto is = open_in(meta);
    nlohmann::json j;
    is >> j;

    era::EventRecord ev;
    ev.input_channel = j.at("input_channel").get<std::string>();
    ev.p = j.at("p").get<double>();
    ev.ts = j.at("ts").get<double>();
    if (j.contains("channels")) ev.channels = j.at("channels").get<std::vector<std::string>>();
    if (j.contains("scales")) ev.scales = j.at("scales").get<std::vector<double>>();
    ev.pre_event_samples = j.value("pre_event_samples", 1);
    if (ev.channels.empty()) ev.channels = ts.names;
    ev.outputs = ts.y;
    if (ts.t.size() >= 2) {
        const double dt = ts.t[1] - ts.t[0];
        if (std::abs(dt - ev.ts) > 1e-9 * std::max(1.0, ev.ts))
            throw InvalidArgument("event metadata sample period disagrees with the CSV time axis");
    }
    return ev;
}

void write_eigen_report(std::ostream& os, const stability::EigenReport& rep) {
    os << "re,im,freq_hz,damping_ratio\n";
    for (const stability::Root& r : rep.roots)
        os << format_double(r.value.real()) << "," << format_double(r.value.imag()) << ","
           << format_double(r.freq_hz) << "," << format_double(r.damping) << "\n";
}

void write_rma(std::ostream& os, const stability::RmaResult& r) {
    os << "freq_hz";
    for (int t = 0; t < r.modal.rows(); ++t)
        os << ",z" << t + 1 << "_re,z" << t + 1 << "_im,z" << t + 1 << "_mag";
    os << "\n";
    for (std::size_t k = 0; k < r.freq_hz.size(); ++k) {
        os << format_double(r.freq_hz[k]);
        for (int t = 0; t < r.modal.rows(); ++t) {
            const cdouble z = r.modal(t, static_cast<Eigen::Index>(k));
            os << "," << format_double(z.real()) << "," << format_double(z.imag()) << ","
               << format_double(std::abs(z));
        }
        os << "\n";
    }
}

void write_sigma(std::ostream& os, const stability::SigmaResult& r) {
    os << "freq_hz";
    for (int t = 0; t < r.sigma.rows(); ++t) os << ",sigma" << t + 1;
    os << "\n";
    for (std::size_t k = 0; k < r.freq_hz.size(); ++k) {
        os << format_double(r.freq_hz[k]);
        for (int t = 0; t < r.sigma.rows(); ++t)
            os << "," << format_double(r.sigma(t, static_cast<Eigen::Index>(k)));
        os << "\n";
    }
}

void write_nyquist(std::ostream& os, const stability::NyquistResult& r) {
    os << "freq_hz";
    for (int t = 0; t < r.loci.rows(); ++t) os << ",l" << t + 1 << "_re,l" << t + 1 << "_im";
    os << "\n";
    for (std::size_t k = 0; k < r.freq_hz.size(); ++k) {
        os << format_double(r.freq_hz[k]);
        for (int t = 0; t < r.loci.rows(); ++t) {
            const cdouble z = r.loci(t, static_cast<Eigen::Index>(k));
            os << "," << format_double(z.real()) << "," << format_double(z.imag());
        }
        os << "\n";
    }
}

void write_ybus(std::ostream& os, const Eigen::MatrixXcd& y) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            if (j) os << ",";
            os << format_double(y(i, j).real()) << "," << format_double(y(i, j).imag());
        }
        os << "\n";
    }
}

}  // namespace io
}  // namespace ynet
