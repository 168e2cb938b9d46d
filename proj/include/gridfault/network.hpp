/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridfault/devices.hpp"
#include "gridfault/phasor.hpp"

namespace gridfault {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularNetworkError : ModelError {
    using ModelError::ModelError;
};
struct PhaseMismatchError : ModelError {
    using ModelError::ModelError;
};

/// Which phase conductors exist at a bus or on a branch.
class PhaseSet {
public:
    PhaseSet() = default;
    static PhaseSet abc() { return PhaseSet(0b111); }
    static PhaseSet single(Phase p) { return PhaseSet(1u << static_cast<int>(p)); }

    /// Parses strings like "a", "bc", "abc". Throws ModelError on anything else.
    static PhaseSet parse(const std::string& text);

    bool has(Phase p) const { return (mask_ & (1u << static_cast<int>(p))) != 0; }
    void add(Phase p) { mask_ |= 1u << static_cast<int>(p); }
    bool empty() const { return mask_ == 0; }
    int count() const;
    bool contains(const PhaseSet& other) const { return (mask_ & other.mask_) == other.mask_; }
    bool operator==(const PhaseSet&) const = default;

    std::vector<Phase> phases() const;
    std::string to_string() const;

private:
    explicit PhaseSet(unsigned mask) : mask_(mask) {}
    unsigned mask_ = 0;
};

enum class BusZone { transmission, distribution };

struct Bus {
    std::string id;
    double base_kv_ll = 0.0;  // line-to-line, kV
    PhaseSet phases = PhaseSet::abc();
    BusZone zone = BusZone::distribution;
    std::string location_label;  // optional marker such as "PCC", "GTF"
};

struct LineBranch {
    std::string from;
    std::string to;
    double length_km = 0.0;
    Complex z1_per_km{};  // Ω/km, positive sequence (= negative sequence)
    Complex z0_per_km{};  // Ω/km, zero sequence
    PhaseSet phases = PhaseSet::abc();
};

enum class TransformerConnection { delta_yg_lag30, yg_yg };

struct TransformerBranch {
    std::string from;  // HV bus
    std::string to;    // LV bus
    TransformerConnection connection = TransformerConnection::yg_yg;
    double s_rated_mva = 0.0;
    Complex z_leak_pu{};  // on own rating
    bool grounded = true;  // LV neutral
};

struct SourceEquivalent {
    std::string bus;
    double v_set_pu = 1.0;
    double angle_deg = 0.0;
    Complex z_internal_pu{};  // on system base, per phase
};

enum class FaultKind { SL2G, DL2G, L2L, TL2G };

/// Number of faulted phases each kind requires.
int fault_phase_count(FaultKind kind);
std::string fault_kind_name(FaultKind kind);
std::optional<FaultKind> parse_fault_kind(const std::string& name);

struct FaultSpec {
    FaultKind kind = FaultKind::TL2G;
    std::string bus;
    std::vector<Phase> phases;
    double t_on_s = 0.5;
    double duration_s = 0.25;
    double y_fault_pu = 1e4;  // 0 turns the fault into a no-op
};

struct NetworkModel {
    std::string name;
    double s_base_mva = 10.0;
    double f_nominal_hz = 60.0;

    std::vector<Bus> buses;
    std::vector<LineBranch> lines;
    std::vector<TransformerBranch> transformers;
    std::vector<SourceEquivalent> sources;

    std::vector<ZipLoad> loads;
    std::vector<ShuntCapacitor> capacitors;
    std::vector<Regulator> regulators;
    std::vector<Ibr> ibrs;
    std::map<std::string, FrtCurve> frt_curves;

    const Bus* find_bus(const std::string& id) const;
    const Bus& bus_at(const std::string& id) const;  // throws ModelError
    const FrtCurve& curve_at(const std::string& name) const;
    std::optional<std::string> bus_for_location(const std::string& label) const;

    /// Total real load in kW including battery charging setpoints.
    double total_effective_load_kw() const;
    /// Installed PV capacity in kW (pv_farm + rooftop_pv ratings).
    double installed_pv_kw() const;
};

/// Maps (bus, phase) pairs onto contiguous matrix rows. Only phases present
/// at a bus get a row.
class NodeIndex {
public:
    explicit NodeIndex(const NetworkModel& net);

    int size() const { return static_cast<int>(entries_.size()); }
    int row(const std::string& bus, Phase p) const;         // -1 if absent
    int row_checked(const std::string& bus, Phase p) const;  // throws
    const std::pair<std::string, Phase>& entry(int row) const { return entries_[row]; }
    const std::vector<std::pair<std::string, Phase>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, Phase>> entries_;
    std::unordered_map<std::string, std::array<int, 3>> rows_by_bus_;
};

/// Accumulated line length from the source bus to every bus, in km.
/// Transformer and regulator branches count as zero length. Buses with no
/// path to the source are absent from the map.
std::map<std::string, double> distances_from_source_km(const NetworkModel& net);

/// True when every bus can reach the (single) source over branches.
bool network_is_connected(const NetworkModel& net);

}  // namespace gridfault
