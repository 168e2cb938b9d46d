/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "gridfault/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace gridfault {

DeviceState DeviceState::all_online(const NetworkModel& net) {
    DeviceState s;
    s.ibr_online.assign(net.ibrs.size(), true);
    s.ibr_angle_rad.assign(net.ibrs.size(), 0.0);
    // Seed fallback angles with the nominal angle of each unit's bus phases
    // so a solve that starts inside a fault still injects sensibly.
    for (std::size_t k = 0; k < net.ibrs.size(); ++k) {
        const Ibr& u = net.ibrs[k];
        if (!u.is_three_phase())
            s.ibr_angle_rad[k] = -2.0 * kPi / 3.0 * static_cast<int>(u.phases.front());
    }
    return s;
}

Complex NetworkSolution::voltage(const NodeIndex& idx, const std::string& bus, Phase p) const {
    return v(idx.row_checked(bus, p));
}

PhasorTriple NetworkSolution::bus_voltage(const NodeIndex& idx, const std::string& bus) const {
    PhasorTriple t;
    for (int k = 0; k < 3; ++k) {
        const Phase p = static_cast<Phase>(k);
        const int r = idx.row(bus, p);
        t[p] = r >= 0 ? v(r) : Complex{0, 0};
    }
    return t;
}

namespace {

struct LoadEntry {
    int row;
    ZipLoad pu;  // s_nominal rescaled to the per-phase system base
};

struct IbrEntry {
    const Ibr* ibr;
    std::vector<int> rows;
    double current_scale;  // own-base pu -> system pu
};

struct Workspace {
    std::vector<LoadEntry> loads;
    std::vector<IbrEntry> ibrs;
};

Workspace build_workspace(const NetworkModel& net, const NodeIndex& idx) {
    Workspace w;
    const double s_base_phase_kva = net.s_base_mva * 1000.0 / 3.0;
    w.loads.reserve(net.loads.size());
    for (const auto& load : net.loads) {
        ZipLoad pu = load;
        pu.s_nominal = load.s_nominal / s_base_phase_kva;
        w.loads.push_back({idx.row_checked(load.bus, load.phase), pu});
    }
    w.ibrs.reserve(net.ibrs.size());
    for (const auto& u : net.ibrs) {
        IbrEntry e;
        e.ibr = &u;
        for (Phase p : u.phases) e.rows.push_back(idx.row_checked(u.bus, p));
        e.current_scale = (u.s_rated_kva / static_cast<double>(u.phases.size())) / s_base_phase_kva;
        w.ibrs.push_back(std::move(e));
    }
    return w;
}

// Devices the matrix does not carry: dynamic ZIP portions (drawn) and IBR
// injections (delivered). Also reports the own-base IBR currents.
VectorC injections(const Workspace& w, const YBus& y, const DeviceState& state, const VectorC& v,
                   std::vector<std::vector<Complex>>* ibr_out) {
    VectorC i = y.source_current;
    for (const auto& l : w.loads) i(l.row) -= zip_injection_dynamic(l.pu, v(l.row));
    for (std::size_t k = 0; k < w.ibrs.size(); ++k) {
        if (!state.ibr_online[k]) {
            if (ibr_out) (*ibr_out)[k].clear();
            continue;
        }
        const IbrEntry& e = w.ibrs[k];
        std::vector<Complex> vt(e.rows.size());
        for (std::size_t j = 0; j < e.rows.size(); ++j) vt[j] = v(e.rows[j]);
        const auto cur = ibr_injection(*e.ibr, vt, true, state.ibr_angle_rad[k]);
        if (ibr_out) {
            auto& sys = (*ibr_out)[k];
            sys.resize(cur.size());
            for (std::size_t j = 0; j < cur.size(); ++j) sys[j] = cur[j] * e.current_scale;
        }
        for (std::size_t j = 0; j < e.rows.size(); ++j) i(e.rows[j]) += cur[j] * e.current_scale;
    }
    return i;
}

VectorC flat_start(const NodeIndex& idx) {
    VectorC v(idx.size());
    for (int r = 0; r < idx.size(); ++r)
        v(r) = polar_deg(1.0, -120.0 * static_cast<int>(idx.entries()[r].second));
    return v;
}

double max_abs_diff(const VectorC& a, const VectorC& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

double kcl_residual(const YBus& y, const NetworkModel& net, const DeviceState& state,
                    const VectorC& v) {
    const Workspace w = build_workspace(net, *y.index);
    const VectorC i = injections(w, y, state, v, nullptr);
    return (y.matrix * v - i).cwiseAbs().maxCoeff();
}

NetworkSolution solve(const YBus& y, const NetworkModel& net, DeviceState& state,
                      const SolveSettings& settings, const VectorC* warm_start) {
    const NodeIndex& idx = *y.index;
    const Workspace w = build_workspace(net, idx);

    Eigen::SparseLU<SparseMatrixC> lu;
    lu.compute(y.matrix);
    if (lu.info() != Eigen::Success) throw SingularNetworkError("admittance matrix is singular");

    NetworkSolution sol;
    sol.ibr_currents.assign(net.ibrs.size(), {});

    double rho = settings.relaxation;
    bool restarted = false;
    VectorC v = warm_start ? *warm_start : flat_start(idx);

    VectorC best_v = v;
    double best_residual = std::numeric_limits<double>::infinity();
    double prev_dv = std::numeric_limits<double>::infinity();
    int grow_streak = 0;

    for (int it = 1; it <= settings.max_iter; ++it) {
        const VectorC i = injections(w, y, state, v, nullptr);
        const VectorC v_solved = lu.solve(i);
        const VectorC v_next = (1.0 - rho) * v + rho * v_solved;
        const double dv = max_abs_diff(v_next, v);
        v = v_next;
        sol.iterations = it;

        const VectorC i_now = injections(w, y, state, v, nullptr);
        const double residual = (y.matrix * v - i_now).cwiseAbs().maxCoeff();
        if (residual < best_residual) {
            best_residual = residual;
            best_v = v;
        }

        if (dv < settings.tol_pu && residual <= settings.tol_pu) {
            sol.converged = true;
            break;
        }

        // Bounded divergence recovery: one relaxation halving and restart.
        grow_streak = dv > prev_dv ? grow_streak + 1 : 0;
        prev_dv = dv;
        if (grow_streak >= 3) {
            if (restarted) break;
            restarted = true;
            rho *= 0.5;
            v = flat_start(idx);
            prev_dv = std::numeric_limits<double>::infinity();
            grow_streak = 0;
            sol.warnings.push_back("iteration diverging; relaxation halved and restarted");
        }
    }

    if (!sol.converged) v = best_v;
    sol.v = v;
    const VectorC i_final = injections(w, y, state, v, &sol.ibr_currents);
    sol.residual = (y.matrix * v - i_final).cwiseAbs().maxCoeff();
    if (!sol.converged) sol.warnings.push_back("solver did not converge");

    // Remember the control angle of every unit that still sees usable voltage.
    for (std::size_t k = 0; k < w.ibrs.size(); ++k) {
        if (!state.ibr_online[k]) continue;
        const IbrEntry& e = w.ibrs[k];
        std::vector<Complex> vt(e.rows.size());
        for (std::size_t j = 0; j < e.rows.size(); ++j) vt[j] = v(e.rows[j]);
        Complex v_ctrl;
        if (e.ibr->is_three_phase()) {
            v_ctrl = to_sequence(PhasorTriple{vt[0], vt[1], vt[2]}).pos;
        } else {
            v_ctrl = vt[0];
        }
        if (std::abs(v_ctrl) >= kIbrVoltageFloorPu)
            state.ibr_angle_rad[k] = std::arg(v_ctrl);
    }
    return sol;
}

bool regulator_control(NetworkModel& net, const NodeIndex& idx, const NetworkSolution& sol) {
    bool moved = false;
    for (auto& reg : net.regulators) {
        for (Phase p : reg.phases) {
            const int row = idx.row(reg.to, p);
            if (row < 0) continue;
            const double v = std::abs(sol.v(row));
            int& tap = reg.taps[static_cast<int>(p)];
            const double lo = reg.band_center_pu - reg.band_width_pu / 2.0;
            const double hi = reg.band_center_pu + reg.band_width_pu / 2.0;
            if (v < lo && tap < reg.tap_range) {
                ++tap;
                moved = true;
            } else if (v > hi && tap > -reg.tap_range) {
                --tap;
                moved = true;
            }
        }
    }
    return moved;
}

PrefaultResult solve_prefault(NetworkModel& net, bool voltage_regulation, DeviceState& state,
                              const SolveSettings& settings) {
    YBusOptions options;
    options.stamp_capacitors = voltage_regulation;

    PrefaultResult out;
    out.ybus = build_ybus(net, options);
    out.solution = solve(out.ybus, net, state, settings);
    if (!voltage_regulation) return out;

    int max_tap_range = 0;
    for (const auto& reg : net.regulators) max_tap_range = std::max(max_tap_range, reg.tap_range);
    const int max_sweeps = 3 * std::max(1, max_tap_range);

    const VectorC* warm = &out.solution.v;
    while (regulator_control(net, *out.ybus.index, out.solution)) {
        ++out.control_sweeps;
        if (out.control_sweeps > max_sweeps) {
            out.tap_oscillation = true;
            out.solution.warnings.push_back("regulator taps oscillating; frozen at last state");
            break;
        }
        out.ybus = build_ybus(net, options);
        VectorC start = *warm;
        out.solution = solve(out.ybus, net, state, settings, &start);
        warm = &out.solution.v;
    }
    return out;
}

PowerBalance compute_power_balance(const NetworkModel& net, const YBus& y, const DeviceState& state,
                                   const NetworkSolution& sol, const FaultSpec* fault,
                                   bool capacitors_stamped) {
    const NodeIndex& idx = *y.index;
    const VectorC& v = sol.v;
    PowerBalance pb{};

    const SourceEquivalent& src = net.sources.front();
    const Complex y_src = 1.0 / src.z_internal_pu;
    for (Phase p : net.bus_at(src.bus).phases.phases()) {
        const int r = idx.row_checked(src.bus, p);
        const Complex emf = polar_deg(src.v_set_pu, src.angle_deg - 120.0 * static_cast<int>(p));
        const Complex i_into_net = y_src * (emf - v(r));
        pb.source += v(r) * std::conj(i_into_net);
    }

    for (std::size_t k = 0; k < net.ibrs.size(); ++k) {
        if (!state.ibr_online[k] || sol.ibr_currents[k].empty()) continue;
        const Ibr& u = net.ibrs[k];
        for (std::size_t j = 0; j < u.phases.size(); ++j) {
            const int r = idx.row_checked(u.bus, u.phases[j]);
            pb.ibr_injection += v(r) * std::conj(sol.ibr_currents[k][j]);
        }
    }

    const double s_base_phase_kva = net.s_base_mva * 1000.0 / 3.0;
    for (const auto& load : net.loads) {
        ZipLoad pu = load;
        pu.s_nominal = load.s_nominal / s_base_phase_kva;
        pb.load += zip_power(pu, std::abs(v(idx.row_checked(load.bus, load.phase))));
    }

    if (capacitors_stamped) {
        for (const auto& cap : net.capacitors) {
            if (!cap.enabled) continue;
            const Complex ya{0.0, cap.q_rated_kvar_per_phase / s_base_phase_kva};
            for (Phase p : cap.phases) {
                const Complex vc = v(idx.row_checked(cap.bus, p));
                // shunt draws I = ya·V; consumed power V·conj(I)
                pb.capacitor += vc * std::conj(ya * vc);
            }
        }
    }

    for (const auto& line : net.lines) {
        const auto phases = line.phases.phases();
        const Eigen::MatrixXcd yb = line_series_admittance_pu(net, line);
        const int n = static_cast<int>(phases.size());
        Eigen::VectorXcd dv(n);
        for (int i = 0; i < n; ++i)
            dv(i) = v(idx.row_checked(line.from, phases[i])) - v(idx.row_checked(line.to, phases[i]));
        const Eigen::VectorXcd ib = yb * dv;
        for (int i = 0; i < n; ++i) pb.branch_loss += dv(i) * std::conj(ib(i));
    }

    for (const auto& t : net.transformers) {
        const TransformerBlocks b = transformer_admittance_pu(net, t);
        Eigen::Vector3cd vh, vl;
        for (int i = 0; i < 3; ++i) {
            vh(i) = v(idx.row_checked(t.from, static_cast<Phase>(i)));
            vl(i) = v(idx.row_checked(t.to, static_cast<Phase>(i)));
        }
        const Eigen::Vector3cd ih = b.hh * vh + b.hl * vl;  // drawn at HV terminals
        const Eigen::Vector3cd il = b.lh * vh + b.ll * vl;  // drawn at LV terminals
        for (int i = 0; i < 3; ++i)
            pb.branch_loss += vh(i) * std::conj(ih(i)) + vl(i) * std::conj(il(i));
    }

    for (const auto& reg : net.regulators) {
        const Complex yr = 1.0 / kRegulatorSeriesZ;
        for (Phase p : reg.phases) {
            const Complex vf = v(idx.row_checked(reg.from, p));
            const Complex vt = v(idx.row_checked(reg.to, p));
            const double r = reg.ratio(p);
            const Complex i_f = yr * (r * r * vf - r * vt);
            const Complex i_t = yr * (vt - r * vf);
            pb.branch_loss += vf * std::conj(i_f) + vt * std::conj(i_t);
        }
    }

    if (fault && fault->y_fault_pu > 0.0) {
        if (fault->kind == FaultKind::L2L) {
            const Complex va = v(idx.row_checked(fault->bus, fault->phases[0]));
            const Complex vb = v(idx.row_checked(fault->bus, fault->phases[1]));
            const Complex i = fault->y_fault_pu * (va - vb);
            pb.fault = (va - vb) * std::conj(i);
        } else {
            for (Phase p : fault->phases) {
                const Complex vf = v(idx.row_checked(fault->bus, p));
                pb.fault += vf * std::conj(fault->y_fault_pu * vf);
            }
        }
    }
    return pb;
}

}  // namespace gridfault
