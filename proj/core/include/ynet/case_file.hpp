#pragma once

#include <filesystem>

#include "ynet/network.hpp"

namespace ynet {
namespace io {

/// Analysis options carried in the case file's `analysis` section (command
/// specific; unknown keys are rejected like everywhere else).
struct AnalysisOptions {
    double fmin = 0.1;
    double fmax = 100.0;
    int grid_points = 400;
    int order = 0;                      ///< ERA order override
    std::string sweep_path;             ///< e.g. "sources[0].comp"
    std::vector<double> sweep_values;
};

struct CaseFile {
    network::NetworkCase net;
    AnalysisOptions analysis;
    /// Admittance files for measured-admittance sources, keyed by bus id.
    std::vector<std::pair<std::string, std::filesystem::path>> measured_files;
};

/// Parse and validate a case file. The document is a JSON key-value tree with
/// sections system/buses/branches/loads/sources/analysis; unknown keys are
/// rejected with the offending path in the message, before any numerics run.
CaseFile load_case_file(const std::filesystem::path& path);
CaseFile parse_case(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Derive parameter-backed sources, load measured-admittance files, and
/// assemble the total admittance.
network::AssembledSystem assemble_case(const CaseFile& cf);

}  // namespace io
}  // namespace ynet
