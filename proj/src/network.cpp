/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "gridfault/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace gridfault {

PhaseSet PhaseSet::parse(const std::string& text) {
    PhaseSet set;
    for (char ch : text) {
        if (ch < 'a' || ch > 'c') throw ModelError("invalid phase character '" + std::string(1, ch) + "'");
        set.add(static_cast<Phase>(ch - 'a'));
    }
    if (set.empty()) throw ModelError("empty phase set");
    return set;
}

int PhaseSet::count() const {
    int n = 0;
    for (unsigned m = mask_; m != 0; m >>= 1) n += static_cast<int>(m & 1u);
    return n;
}

std::vector<Phase> PhaseSet::phases() const {
    std::vector<Phase> out;
    for (int k = 0; k < 3; ++k)
        if (has(static_cast<Phase>(k))) out.push_back(static_cast<Phase>(k));
    return out;
}

std::string PhaseSet::to_string() const {
    std::string out;
    for (Phase p : phases()) out.push_back(phase_char(p));
    return out;
}

int fault_phase_count(FaultKind kind) {
    switch (kind) {
        case FaultKind::SL2G: return 1;
        case FaultKind::DL2G: return 2;
        case FaultKind::L2L: return 2;
        case FaultKind::TL2G: return 3;
    }
    return 0;
}

std::string fault_kind_name(FaultKind kind) {
    switch (kind) {
        case FaultKind::SL2G: return "SL2G";
        case FaultKind::DL2G: return "DL2G";
        case FaultKind::L2L: return "L2L";
        case FaultKind::TL2G: return "3L2G";
    }
    return "?";
}

std::optional<FaultKind> parse_fault_kind(const std::string& name) {
    if (name == "SL2G") return FaultKind::SL2G;
    if (name == "DL2G") return FaultKind::DL2G;
    if (name == "L2L") return FaultKind::L2L;
    if (name == "3L2G" || name == "TL2G") return FaultKind::TL2G;
    return std::nullopt;
}

const Bus* NetworkModel::find_bus(const std::string& id) const {
    for (const auto& b : buses)
        if (b.id == id) return &b;
    return nullptr;
}

const Bus& NetworkModel::bus_at(const std::string& id) const {
    const Bus* b = find_bus(id);
    if (!b) throw ModelError("unknown bus '" + id + "'");
    return *b;
}

const FrtCurve& NetworkModel::curve_at(const std::string& name) const {
    auto it = frt_curves.find(name);
    if (it == frt_curves.end()) throw ModelError("unknown FRT curve '" + name + "'");
    return it->second;
}

std::optional<std::string> NetworkModel::bus_for_location(const std::string& label) const {
    for (const auto& b : buses)
        if (b.location_label == label) return b.id;
    return std::nullopt;
}

double NetworkModel::total_effective_load_kw() const {
    double total = 0.0;
    for (const auto& l : loads) total += l.s_nominal.real();
    for (const auto& u : ibrs)
        if (u.kind == IbrKind::bess && u.p_set_kw < 0.0) total += -u.p_set_kw;
    return total;
}

double NetworkModel::installed_pv_kw() const {
    double total = 0.0;
    for (const auto& u : ibrs)
        if (u.is_pv()) total += u.s_rated_kva;
    return total;
}

NodeIndex::NodeIndex(const NetworkModel& net) {
    for (const auto& bus : net.buses) {
        std::array<int, 3> rows{-1, -1, -1};
        for (Phase p : bus.phases.phases()) {
            rows[static_cast<int>(p)] = static_cast<int>(entries_.size());
            entries_.emplace_back(bus.id, p);
        }
        rows_by_bus_.emplace(bus.id, rows);
    }
}

int NodeIndex::row(const std::string& bus, Phase p) const {
    auto it = rows_by_bus_.find(bus);
    if (it == rows_by_bus_.end()) return -1;
    return it->second[static_cast<int>(p)];
}

int NodeIndex::row_checked(const std::string& bus, Phase p) const {
    const int r = row(bus, p);
    if (r < 0)
        throw PhaseMismatchError("phase " + std::string(1, phase_char(p)) + " not present at bus '" +
                                 bus + "'");
    return r;
}

namespace {

struct Adjacency {
    std::map<std::string, std::vector<std::pair<std::string, double>>> edges;

    void add(const std::string& a, const std::string& b, double km) {
        edges[a].emplace_back(b, km);
        edges[b].emplace_back(a, km);
    }
};

Adjacency build_adjacency(const NetworkModel& net) {
    Adjacency adj;
    for (const auto& l : net.lines) adj.add(l.from, l.to, l.length_km);
    for (const auto& t : net.transformers) adj.add(t.from, t.to, 0.0);
    for (const auto& r : net.regulators) adj.add(r.from, r.to, 0.0);
    return adj;
}

}  // namespace

std::map<std::string, double> distances_from_source_km(const NetworkModel& net) {
    std::map<std::string, double> dist;
    if (net.sources.empty()) return dist;
    const Adjacency adj = build_adjacency(net);

    using Item = std::pair<double, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, net.sources.front().bus);
    while (!heap.empty()) {
        auto [d, bus] = heap.top();
        heap.pop();
        auto it = dist.find(bus);
        if (it != dist.end() && it->second <= d) continue;
        dist[bus] = d;
        auto ait = adj.edges.find(bus);
        if (ait == adj.edges.end()) continue;
        for (const auto& [next, km] : ait->second) {
            auto dit = dist.find(next);
            if (dit == dist.end() || dit->second > d + km) heap.emplace(d + km, next);
        }
    }
    return dist;
}

bool network_is_connected(const NetworkModel& net) {
    if (net.sources.empty()) return false;
    const auto dist = distances_from_source_km(net);
    for (const auto& b : net.buses)
        if (dist.find(b.id) == dist.end()) return false;
    return true;
}

}  // namespace gridfault
