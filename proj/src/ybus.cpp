/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "gridfault/ybus.hpp"

#include <Eigen/Dense>

namespace gridfault {

double z_base_ohm(const Bus& bus, double s_base_mva) {
    return bus.base_kv_ll * bus.base_kv_ll / s_base_mva;
}

Eigen::MatrixXcd line_series_admittance_pu(const NetworkModel& net, const LineBranch& line) {
    const Bus& from_bus = net.bus_at(line.from);
    const Bus& to_bus = net.bus_at(line.to);
    if (std::abs(from_bus.base_kv_ll - to_bus.base_kv_ll) > 1e-9)
        throw ModelError("line " + line.from + "-" + line.to + " spans different voltage bases");

    const auto phases = line.phases.phases();
    const int n = static_cast<int>(phases.size());
    const Mat3 z_abc = seq_to_phase_impedance(line.z1_per_km, line.z0_per_km);
    const double zb = z_base_ohm(from_bus, net.s_base_mva);

    // Submatrix for the phases this line actually carries, in per-unit.
    Eigen::MatrixXcd z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z(i, j) = z_abc(static_cast<int>(phases[i]), static_cast<int>(phases[j])) *
                      line.length_km / zb;
    return z.inverse();
}

namespace {

// Winding map W of the ideal part of a transformer, LV = W · HV. For the
// delta–grounded-wye bank the LV winding k couples the HV line-line pair
// that makes the LV positive-sequence voltage lag the HV by 30°:
//   a ← (A−C)/√3,  b ← (B−A)/√3,  c ← (C−B)/√3.
Eigen::Matrix3cd winding_map(TransformerConnection conn) {
    Eigen::Matrix3cd w;
    switch (conn) {
        case TransformerConnection::delta_yg_lag30: {
            const double s = 1.0 / std::sqrt(3.0);
            w << s, 0, -s,
                 -s, s, 0,
                 0, -s, s;
            break;
        }
        case TransformerConnection::yg_yg:
            w.setIdentity();
            break;
    }
    return w;
}

}  // namespace

TransformerBlocks transformer_admittance_pu(const NetworkModel& net, const TransformerBranch& t) {
    const Complex z_sys = t.z_leak_pu * (net.s_base_mva / t.s_rated_mva);
    const Complex y = 1.0 / z_sys;

    const Eigen::Matrix3cd w = winding_map(t.connection);
    Eigen::Matrix3cd y_ll = Eigen::Matrix3cd::Identity() * y;
    if (!t.grounded) {
        // Floating LV neutral: remove the zero-sequence path on the wye side.
        y_ll = y * (Eigen::Matrix3cd::Identity() - Eigen::Matrix3cd::Constant(1.0 / 3.0));
    }

    TransformerBlocks b;
    b.ll = y_ll;
    b.hh = w.transpose() * y_ll * w;
    b.hl = -(w.transpose() * y_ll);
    b.lh = -(y_ll * w);
    return b;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void stamp_block(Triplets& trip, const std::vector<int>& rows, const std::vector<int>& cols,
                 const Eigen::MatrixXcd& block) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (block(static_cast<int>(i), static_cast<int>(j)) != Complex{0, 0})
                trip.emplace_back(rows[i], cols[j], block(static_cast<int>(i), static_cast<int>(j)));
}

std::vector<int> phase_rows(const NodeIndex& idx, const std::string& bus,
                            const std::vector<Phase>& phases) {
    std::vector<int> rows;
    rows.reserve(phases.size());
    for (Phase p : phases) rows.push_back(idx.row_checked(bus, p));
    return rows;
}

void stamp_line(Triplets& trip, const NodeIndex& idx, const NetworkModel& net, const LineBranch& line) {
    const auto phases = line.phases.phases();
    const Eigen::MatrixXcd y = line_series_admittance_pu(net, line);
    const auto rows_f = phase_rows(idx, line.from, phases);
    const auto rows_t = phase_rows(idx, line.to, phases);
    stamp_block(trip, rows_f, rows_f, y);
    stamp_block(trip, rows_t, rows_t, y);
    stamp_block(trip, rows_f, rows_t, -y);
    stamp_block(trip, rows_t, rows_f, -y);
}

void stamp_transformer(Triplets& trip, const NodeIndex& idx, const NetworkModel& net,
                       const TransformerBranch& t) {
    const Bus& hv = net.bus_at(t.from);
    const Bus& lv = net.bus_at(t.to);
    if (!hv.phases.contains(PhaseSet::abc()) || !lv.phases.contains(PhaseSet::abc()))
        throw ModelError("transformer " + t.from + "-" + t.to + " requires three-phase buses");

    const TransformerBlocks b = transformer_admittance_pu(net, t);
    const std::vector<Phase> abc{Phase::a, Phase::b, Phase::c};
    const auto rows_h = phase_rows(idx, t.from, abc);
    const auto rows_l = phase_rows(idx, t.to, abc);
    stamp_block(trip, rows_h, rows_h, b.hh);
    stamp_block(trip, rows_l, rows_l, b.ll);
    stamp_block(trip, rows_h, rows_l, b.hl);
    stamp_block(trip, rows_l, rows_h, b.lh);
}

// Per-phase ideal-ratio regulator with the leakage admittance on the
// regulated side: I_to = y·(r·V_from − V_to).
void stamp_regulator(Triplets& trip, const NodeIndex& idx, const Regulator& reg) {
    const Complex y = 1.0 / kRegulatorSeriesZ;
    for (Phase p : reg.phases) {
        const int rf = idx.row_checked(reg.from, p);
        const int rt = idx.row_checked(reg.to, p);
        const double r = reg.ratio(p);
        trip.emplace_back(rf, rf, y * r * r);
        trip.emplace_back(rf, rt, -y * r);
        trip.emplace_back(rt, rf, -y * r);
        trip.emplace_back(rt, rt, y);
    }
}

}  // namespace

YBus build_ybus(const NetworkModel& net, const YBusOptions& options) {
    if (net.sources.size() != 1) throw ModelError("expected exactly one source equivalent");
    if (!network_is_connected(net))
        throw SingularNetworkError("network has buses with no path to the source");

    YBus y;
    y.index = std::make_shared<NodeIndex>(net);
    const NodeIndex& idx = *y.index;
    const int n = idx.size();

    Triplets passive;
    for (const auto& line : net.lines) stamp_line(passive, idx, net, line);
    for (const auto& t : net.transformers) stamp_transformer(passive, idx, net, t);
    for (const auto& reg : net.regulators) stamp_regulator(passive, idx, reg);

    y.passive.resize(n, n);
    y.passive.setFromTriplets(passive.begin(), passive.end());

    Triplets extra;
    const double s_base_phase_kva = net.s_base_mva * 1000.0 / 3.0;
    if (options.stamp_load_impedance) {
        for (const auto& load : net.loads) {
            ZipLoad pu = load;
            pu.s_nominal = load.s_nominal / s_base_phase_kva;
            const int r = idx.row_checked(load.bus, load.phase);
            extra.emplace_back(r, r, zip_impedance_admittance(pu));
        }
    }
    if (options.stamp_capacitors) {
        for (const auto& cap : net.capacitors) {
            if (!cap.enabled) continue;
            const Complex ya{0.0, cap.q_rated_kvar_per_phase / s_base_phase_kva};
            for (Phase p : cap.phases) {
                const int r = idx.row_checked(cap.bus, p);
                extra.emplace_back(r, r, ya);
            }
        }
    }

    // Source Norton equivalent: per-phase internal admittance plus the
    // balanced EMF converted to a current injection.
    y.source_current = VectorC::Zero(n);
    const SourceEquivalent& src = net.sources.front();
    const Complex y_src = 1.0 / src.z_internal_pu;
    const Bus& src_bus = net.bus_at(src.bus);
    for (Phase p : src_bus.phases.phases()) {
        const int r = idx.row_checked(src.bus, p);
        extra.emplace_back(r, r, y_src);
        const double shift = -120.0 * static_cast<int>(p);
        y.source_current(r) = y_src * polar_deg(src.v_set_pu, src.angle_deg + shift);
    }

    SparseMatrixC additions(n, n);
    additions.setFromTriplets(extra.begin(), extra.end());
    y.matrix = y.passive + additions;

    for (int k = 0; k < n; ++k) {
        if (std::abs(y.matrix.coeff(k, k)) == 0.0) {
            const auto& [bus, phase] = idx.entry(k);
            throw SingularNetworkError("no admittance at bus '" + bus + "' phase " +
                                       std::string(1, phase_char(phase)));
        }
    }
    return y;
}

YBus stamp_fault(const YBus& y, const FaultSpec& fault) {
    YBus out = y;  // shares the immutable index, copies the matrices
    if (fault.y_fault_pu == 0.0) return out;

    const NodeIndex& idx = *y.index;
    std::vector<int> rows;
    rows.reserve(fault.phases.size());
    for (Phase p : fault.phases) rows.push_back(idx.row_checked(fault.bus, p));

    Triplets trip;
    const Complex yf{fault.y_fault_pu, 0.0};
    if (fault.kind == FaultKind::L2L) {
        trip.emplace_back(rows[0], rows[0], yf);
        trip.emplace_back(rows[1], rows[1], yf);
        trip.emplace_back(rows[0], rows[1], -yf);
        trip.emplace_back(rows[1], rows[0], -yf);
    } else {
        for (int r : rows) trip.emplace_back(r, r, yf);
    }
    SparseMatrixC add(y.size(), y.size());
    add.setFromTriplets(trip.begin(), trip.end());
    out.matrix = y.matrix + add;
    return out;
}

}  // namespace gridfault
