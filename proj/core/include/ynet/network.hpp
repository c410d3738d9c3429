#pragma once

#include <variant>

#include "ynet/components.hpp"
#include "ynet/vsc_reference.hpp"

namespace ynet {
namespace network {

enum class BusType { source, passive, infinite };

struct Bus {
    std::string id;
    BusType type = BusType::passive;
};

/// Series branch with optional line charging and series compensation.
/// comp is the compensated fraction of x: the effective series impedance is
/// r + j(x - comp*x) quasi-statically, or R-L plus a series capacitor of
/// reactance comp*x in dynamic-branches mode.
struct Branch {
    std::string from, to;
    double r = 0.0;
    double x = 0.0;
    double charging = 0.0;  ///< total line charging susceptance, pu
    double comp = 0.0;      ///< series compensation fraction of x, [0, 1)
};

/// Constant-impedance load, entered as consumed (P, Q) at nominal solution
/// voltage and folded into the admittance matrix after the power flow.
struct Load {
    std::string bus;
    double p = 0.0;
    double q = 0.0;
};

enum class SourceKind { generator, dfig, torsional_generator, vsc_reference, measured_admittance_file };

struct SourceSpec {
    std::string bus;
    SourceKind kind = SourceKind::generator;
    double P = 0.0;  ///< dispatched active power, pu
    double Q = 0.0;  ///< dispatched reactive power, pu (solved for PV sources)
    double V = 1.0;  ///< scheduled voltage magnitude, pu
    std::variant<components::GeneratorParams, components::DfigParams, components::TorsionalParams,
                 VscParams, std::string>
        params;
    /// Operating point a measured-admittance file was calibrated at; assembly
    /// checks it against the fresh power flow like any derived block.
    std::optional<OperatingPoint> calibration;
};

enum class BranchMode { quasistatic, dynamic_branches };

struct NetworkCase {
    double omega0 = 377.0;
    BranchMode mode = BranchMode::quasistatic;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Load> loads;
    std::vector<SourceSpec> sources;

    int bus_index(const std::string& id) const;
    const Bus& bus(const std::string& id) const;
    void validate() const;
};

struct SourceSolution {
    std::string bus;
    double P = 0.0, Q = 0.0, V = 0.0, theta = 0.0;
    double delta = 0.0;  ///< internal angle for machine-backed sources
    double E = 0.0;      ///< internal voltage magnitude
};

struct PowerFlowResult {
    Eigen::VectorXcd v;  ///< per-bus voltage phasors, case bus order
    std::vector<SourceSolution> sources;
    int iterations = 0;
    double mismatch = 0.0;

    const SourceSolution& at_bus(const std::string& bus) const;
};

/// Newton-Raphson power flow. Slack is the first infinite bus, or the first
/// source bus when the case has none. Diverging after 50 iterations is an
/// error.
PowerFlowResult power_flow(const NetworkCase& cs);

/// Steady-state complex bus admittance matrix over the non-infinite buses.
/// Branches to infinite buses become shunts to ground. Constant-impedance
/// loads are folded in when a power-flow result is supplied.
struct YbusResult {
    Eigen::MatrixXcd y;
    std::vector<int> bus_of_row;  ///< case bus index of each matrix row
};
YbusResult build_ybus(const NetworkCase& cs, const PowerFlowResult* pf);

/// Kron reduction: Schur complement onto `keep` (indices into y). The
/// eliminated block must be invertible.
Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y, const std::vector<int>& keep);

/// Expand an N x N complex matrix to the 2N x 2N real dq form, each entry
/// becoming [[Re, -Im], [Im, Re]].
TFMatrix expand_dq(const Eigen::MatrixXcd& yc);

struct AssembledSystem {
    TFMatrix y_total;                    ///< 2Ns x 2Ns (or 1x1 static for a lone DFIG)
    PowerFlowResult pf;
    std::vector<std::string> source_buses;  ///< block order of y_total
    Eigen::MatrixXcd y_red;              ///< reduced passive network (quasistatic path)
};

/// Assemble user-supplied source blocks with the reduced passive network:
/// Y = blockdiag(Y_src) + expand_dq(kron(Ybus)). Every block must be in the
/// system frame, injection-positive, and calibrated at the operating point
/// the fresh power flow demands (tolerance 1e-4 on P, Q, V, theta).
AssembledSystem assemble_total(const NetworkCase& cs, const std::vector<AdmittanceBlock>& blocks);

/// Build each source's admittance at the solved operating point, then
/// assemble. A single-DFIG case yields the scalar static-frame total.
AssembledSystem derive_and_assemble(const NetworkCase& cs);

/// Derive one source's admittance block at the solved operating point.
AdmittanceBlock derive_source_block(const NetworkCase& cs, const PowerFlowResult& pf,
                                    const SourceSpec& src);

/// Thevenin equivalent at source-block index k: the k-th diagonal 2x2 block
/// of Y^{-1}, computed symbolically through cofactors. Entries are explicitly
/// simplified with `simplify_tol` to keep degrees near the system order.
TFMatrix thevenin(const TFMatrix& y, int block_index,
                  double simplify_tol = RationalFunction::kCancelTol);

/// Per-frequency Thevenin block at s (for sweeps / larger systems).
Eigen::Matrix2cd thevenin_at(const TFMatrix& y, int block_index, cdouble s);

}  // namespace network
}  // namespace ynet
