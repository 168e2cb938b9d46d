/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string>
#include <vector>

#include "gridfault/ybus.hpp"

namespace gridfault {

struct SolveSettings {
    double tol_pu = 1e-6;
    int max_iter = 100;
    double relaxation = 1.0;
};

/// Per-run mutable device bookkeeping the solver consumes: which IBRs are
/// online and the last valid control angle of each (used when the terminal
/// voltage collapses below the tracking floor).
struct DeviceState {
    std::vector<bool> ibr_online;
    std::vector<double> ibr_angle_rad;

    static DeviceState all_online(const NetworkModel& net);
};

struct NetworkSolution {
    VectorC v;                                    // per (bus, phase) voltage, pu
    int iterations = 0;
    double residual = 0.0;                        // max KCL mismatch, pu
    bool converged = false;
    std::vector<std::vector<Complex>> ibr_currents;  // system pu, per net.ibrs entry
    std::vector<std::string> warnings;

    Complex voltage(const NodeIndex& idx, const std::string& bus, Phase p) const;
    PhasorTriple bus_voltage(const NodeIndex& idx, const std::string& bus) const;
};

/// Fixed-point current-injection solve of Y·V = I_source + I_devices(V).
/// The matrix is factored once and reused across iterations. `warm_start`
/// may be null (flat balanced start). Updates `state.ibr_angle_rad` on exit.
NetworkSolution solve(const YBus& y, const NetworkModel& net, DeviceState& state,
                      const SolveSettings& settings, const VectorC* warm_start = nullptr);

/// Max row mismatch |Y·V − I_total(V)| of a candidate solution, pu.
double kcl_residual(const YBus& y, const NetworkModel& net, const DeviceState& state,
                    const VectorC& v);

/// One regulator-control pass: steps each regulator phase one tap toward its
/// band using the regulated-bus voltage. Returns true when any tap moved.
/// Taps are mutated in place on `net`.
bool regulator_control(NetworkModel& net, const NodeIndex& idx, const NetworkSolution& sol);

struct PrefaultResult {
    YBus ybus;             // with final taps and (when enabled) capacitors
    NetworkSolution solution;
    int control_sweeps = 0;
    bool tap_oscillation = false;
};

/// Solves the pre-fault operating point. With voltage regulation enabled,
/// alternates solves and regulator control until taps settle (or freezes
/// with a warning after 3·tap_range sweeps) and stamps enabled capacitors.
PrefaultResult solve_prefault(NetworkModel& net, bool voltage_regulation, DeviceState& state,
                              const SolveSettings& settings);

/// Independent per-element power audit of a converged solution (all terms in
/// per-unit on the system three-phase base, generator sign for the source).
struct PowerBalance {
    Complex source;          // delivered by the source EMF
    Complex ibr_injection;   // delivered by online IBRs
    Complex load;            // consumed by ZIP loads (full polynomial)
    Complex capacitor;       // consumed by shunt capacitors (negative vars)
    Complex branch_loss;     // lines + transformers + regulators
    Complex fault;           // dissipated in the fault branch, if any

    Complex mismatch() const {
        return source + ibr_injection - load - capacitor - branch_loss - fault;
    }
};

PowerBalance compute_power_balance(const NetworkModel& net, const YBus& y, const DeviceState& state,
                                   const NetworkSolution& sol, const FaultSpec* fault,
                                   bool capacitors_stamped);

}  // namespace gridfault
