#pragma once

#include <filesystem>
#include <iosfwd>

#include "ynet/era.hpp"
#include "ynet/stability.hpp"

namespace ynet {
namespace io {

/// Admittance file: plain text, diff-able, full round-trip precision.
///   rows <r>
///   cols <c>
///   var=s
/// then per entry (row-major):
///   num: c0 c1 ...
///   den: c0 c1 ...
/// with coefficients ascending in degree and complex values written re+imj.
void write_admittance(std::ostream& os, const TFMatrix& y);
void write_admittance_file(const std::filesystem::path& path, const TFMatrix& y);
TFMatrix read_admittance(std::istream& is);
TFMatrix read_admittance_file(const std::filesystem::path& path);

/// Complex coefficient formatting (re+imj, shortest round-trip decimal).
std::string format_complex(cdouble v);
cdouble parse_complex(const std::string& text);

/// Time series CSV: header `t,<out1>,<out2>,...`, seconds and per-unit.
void write_timeseries(std::ostream& os, const TimeSeries& ts);
void write_timeseries_file(const std::filesystem::path& path, const TimeSeries& ts);
TimeSeries read_timeseries(std::istream& is);
TimeSeries read_timeseries_file(const std::filesystem::path& path);

/// Event sidecar metadata (JSON): input channel, perturbation size, sample
/// period, per-channel scales, pre-event window length.
void write_event_meta_file(const std::filesystem::path& path, const era::EventRecord& ev);
/// Load an event from a time-series CSV plus its metadata sidecar.
era::EventRecord read_event(const std::filesystem::path& csv,
                            const std::filesystem::path& meta);

/// Eigen report CSV: `re,im,freq_hz,damping_ratio`.
void write_eigen_report(std::ostream& os, const stability::EigenReport& rep);
/// Sweep CSVs: `freq_hz,<payload columns>`.
void write_rma(std::ostream& os, const stability::RmaResult& r);
void write_sigma(std::ostream& os, const stability::SigmaResult& r);
void write_nyquist(std::ostream& os, const stability::NyquistResult& r);

/// Ybus export: CSV of complex entries as re,im pairs.
void write_ybus(std::ostream& os, const Eigen::MatrixXcd& y);

}  // namespace io
}  // namespace ynet
