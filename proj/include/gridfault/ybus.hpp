/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "gridfault/network.hpp"

namespace gridfault {

using SparseMatrixC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::VectorXcd;

struct YBusOptions {
    bool stamp_load_impedance = true;  // constant-impedance ZIP portions
    bool stamp_capacitors = false;     // only when voltage regulation is active
};

/// Phase-domain nodal admittance matrix in per-unit on the system base,
/// plus the Norton current vector of the source EMF. Immutable once built;
/// fault stamping returns a new instance.
struct YBus {
    std::shared_ptr<const NodeIndex> index;
    SparseMatrixC matrix;          // includes source Norton admittance
    SparseMatrixC passive;         // network only: lines, transformers, regulators
    VectorC source_current;        // Norton injection of the source EMF, pu

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// Assembles the admittance matrix. Throws SingularNetworkError when a bus
/// has no path to the source.
YBus build_ybus(const NetworkModel& net, const YBusOptions& options = {});

/// Returns a copy of `y` with the fault admittance stamped at the faulted
/// bus. Ground-referenced kinds add y_fault_pu on the faulted diagonals;
/// L2L couples the two phases with no ground path. A zero fault admittance
/// is a no-op. Throws PhaseMismatchError when the faulted phases are not
/// present at the bus.
YBus stamp_fault(const YBus& y, const FaultSpec& fault);

/// Per-unit impedance base of a bus, in ohms.
double z_base_ohm(const Bus& bus, double s_base_mva);

/// Per-unit series admittance block of a line over its present phases.
Eigen::MatrixXcd line_series_admittance_pu(const NetworkModel& net, const LineBranch& line);

/// Per-unit 6x6 admittance blocks of a transformer bank.
struct TransformerBlocks {
    Eigen::Matrix3cd hh, hl, lh, ll;
};
TransformerBlocks transformer_admittance_pu(const NetworkModel& net, const TransformerBranch& t);

/// Series admittance used for the ideal-ratio regulator model.
inline constexpr Complex kRegulatorSeriesZ{0.0, 1e-4};

}  // namespace gridfault
