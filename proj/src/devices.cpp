/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "gridfault/devices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gridfault {

namespace {

double const_power_fraction_at(double v_mag, double a_p) {
    // Below the floor the constant-power portion behaves as an impedance
    // sized at the floor voltage, keeping S(v) continuous at the floor.
    if (v_mag >= kZipConstPowerFloorPu) return a_p;
    const double r = v_mag / kZipConstPowerFloorPu;
    return a_p * r * r;
}

}  // namespace

Complex zip_power(const ZipLoad& load, double v_mag_pu) {
    const double r = v_mag_pu / load.v_nominal_pu;
    const double scale = load.a_z * r * r + load.a_i * r + const_power_fraction_at(v_mag_pu, load.a_p);
    return load.s_nominal * scale;
}

Complex zip_injection(const ZipLoad& load, Complex v) {
    const double v_mag = std::abs(v);
    if (v_mag == 0.0) return {0.0, 0.0};
    return std::conj(zip_power(load, v_mag) / v);
}

Complex zip_injection_dynamic(const ZipLoad& load, Complex v) {
    const double v_mag = std::abs(v);
    if (v_mag == 0.0) return {0.0, 0.0};
    const double r = v_mag / load.v_nominal_pu;
    const double scale = load.a_i * r + const_power_fraction_at(v_mag, load.a_p);
    return std::conj(load.s_nominal * scale / v);
}

Complex zip_impedance_admittance(const ZipLoad& load) {
    return load.a_z * std::conj(load.s_nominal) / (load.v_nominal_pu * load.v_nominal_pu);
}

std::string ibr_kind_name(IbrKind kind) {
    switch (kind) {
        case IbrKind::pv_farm: return "pv_farm";
        case IbrKind::bess: return "bess";
        case IbrKind::rooftop_pv: return "rooftop_pv";
    }
    return "?";
}

double ibr_control_angle(const Ibr& ibr, const std::vector<Complex>& v_terminals) {
    if (ibr.is_three_phase()) {
        const PhasorTriple t{v_terminals[0], v_terminals[1], v_terminals[2]};
        return std::arg(to_sequence(t).pos);
    }
    return std::arg(v_terminals[0]);
}

std::vector<Complex> ibr_injection(const Ibr& ibr, const std::vector<Complex>& v_terminals,
                                   bool /*faulted*/, double fallback_angle_rad) {
    const Complex s_set_pu{ibr.p_set_kw / ibr.s_rated_kva, ibr.q_set_kvar / ibr.s_rated_kva};
    const double s_mag = std::abs(s_set_pu);
    const double phi_s = std::arg(s_set_pu);

    Complex v_ctrl;
    if (ibr.is_three_phase()) {
        const PhasorTriple t{v_terminals[0], v_terminals[1], v_terminals[2]};
        v_ctrl = to_sequence(t).pos;
    } else {
        v_ctrl = v_terminals[0];
    }

    const double v_mag = std::abs(v_ctrl);
    double i_mag;
    double theta;
    if (v_mag < kIbrVoltageFloorPu) {
        i_mag = s_mag > 0.0 ? ibr.i_limit_pu : 0.0;
        theta = fallback_angle_rad - phi_s;
    } else {
        i_mag = std::min(s_mag / v_mag, ibr.i_limit_pu);
        theta = std::arg(v_ctrl) - phi_s;
    }

    std::vector<Complex> out(ibr.phases.size());
    if (ibr.is_three_phase()) {
        const Complex i1 = std::polar(i_mag, theta);
        const SequenceTriple seq{Complex{0, 0}, i1, Complex{0, 0}};
        const PhasorTriple t = from_sequence(seq);
        out[0] = t.a;
        out[1] = t.b;
        out[2] = t.c;
    } else {
        out[0] = std::polar(i_mag, theta);
    }
    return out;
}

FrtVoltages ibr_voltage_for_frt(const Ibr& ibr, const std::vector<Complex>& v_terminals) {
    FrtVoltages v;
    if (ibr.is_three_phase()) {
        double lo = std::abs(v_terminals[0]);
        double hi = lo;
        for (std::size_t k = 1; k < 3; ++k) {
            const double m = std::abs(v_terminals[k]);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        v.undervoltage = lo;
        v.overvoltage = hi;
    } else {
        v.undervoltage = v.overvoltage = std::abs(v_terminals[0]);
    }
    return v;
}

FrtCurve default_frt_curve() {
    FrtCurve c;
    c.name = "default_1547";
    c.under_voltage = {
        {0.70, 0.88, 10.0},
        {0.50, 0.70, 2.0},
        {0.00, 0.50, 0.15},
    };
    c.over_voltage = {
        {1.10, 1.20, 0.5},
        {1.20, 99.0, 0.15},
    };
    c.under_frequency = {
        {57.0, 58.5, 0.3},
        {0.0, 57.0, 0.15},
    };
    c.over_frequency = {
        {61.2, 61.8, 0.3},
        {61.8, 999.0, 0.15},
    };
    c.continuous = {0.88, 1.10, 58.5, 61.2};
    return c;
}

int FrtCurve::zone_count() const {
    return static_cast<int>(under_voltage.size() + over_voltage.size() + under_frequency.size() +
                            over_frequency.size());
}

namespace {

// Zone indices are laid out [uv..., ov..., uf..., of...].
enum class ZoneKind { uv, ov, uf, of };

struct ZoneRef {
    ZoneKind kind;
    const FrtZone* zone;
};

ZoneRef zone_ref(const FrtCurve& c, int index) {
    int i = index;
    if (i < static_cast<int>(c.under_voltage.size())) return {ZoneKind::uv, &c.under_voltage[i]};
    i -= static_cast<int>(c.under_voltage.size());
    if (i < static_cast<int>(c.over_voltage.size())) return {ZoneKind::ov, &c.over_voltage[i]};
    i -= static_cast<int>(c.over_voltage.size());
    if (i < static_cast<int>(c.under_frequency.size())) return {ZoneKind::uf, &c.under_frequency[i]};
    i -= static_cast<int>(c.under_frequency.size());
    return {ZoneKind::of, &c.over_frequency[i]};
}

bool zone_contains(const ZoneRef& ref, double v_uv, double v_ov, double f) {
    switch (ref.kind) {
        case ZoneKind::uv: return v_uv >= ref.zone->low && v_uv < ref.zone->high;
        case ZoneKind::ov: return v_ov > ref.zone->low && v_ov <= ref.zone->high;
        case ZoneKind::uf: return f >= ref.zone->low && f < ref.zone->high;
        case ZoneKind::of: return f > ref.zone->low && f <= ref.zone->high;
    }
    return false;
}

std::string zone_text(const char* tag, const FrtZone& z, bool open_low) {
    char buf[64];
    if (open_low) {
        std::snprintf(buf, sizeof buf, "%s(%.4g,%.4g]", tag, z.low, z.high);
    } else {
        std::snprintf(buf, sizeof buf, "%s[%.4g,%.4g)", tag, z.low, z.high);
    }
    return buf;
}

std::string check_band(const char* what, const std::vector<FrtZone>& zones, bool descending,
                       double region_edge) {
    // Zones must tile outward from the continuous region without gaps or
    // overlaps: descending bands start at the region's lower edge, ascending
    // bands at its upper edge.
    double edge = region_edge;
    for (const auto& z : zones) {
        if (z.max_duration_s < 0.0) return std::string(what) + ": negative duration";
        if (z.high <= z.low) return std::string(what) + ": empty zone";
        const double touch = descending ? z.high : z.low;
        if (std::abs(touch - edge) > 1e-9) return std::string(what) + ": gap or overlap in zones";
        edge = descending ? z.low : z.high;
    }
    return {};
}

}  // namespace

std::string FrtCurve::zone_label(int zone_index) const {
    const ZoneRef ref = zone_ref(*this, zone_index);
    switch (ref.kind) {
        case ZoneKind::uv: return zone_text("uv", *ref.zone, false);
        case ZoneKind::ov: return zone_text("ov", *ref.zone, true);
        case ZoneKind::uf: return zone_text("uf", *ref.zone, false);
        case ZoneKind::of: return zone_text("of", *ref.zone, true);
    }
    return "?";
}

std::string FrtCurve::validate() const {
    if (continuous.v_min_pu >= continuous.v_max_pu || continuous.f_min_hz >= continuous.f_max_hz)
        return "continuous region is empty";
    std::string err;
    err = check_band("under_voltage", under_voltage, true, continuous.v_min_pu);
    if (err.empty()) err = check_band("over_voltage", over_voltage, false, continuous.v_max_pu);
    if (err.empty()) err = check_band("under_frequency", under_frequency, true, continuous.f_min_hz);
    if (err.empty()) err = check_band("over_frequency", over_frequency, false, continuous.f_max_hz);
    return err;
}

FrtState frt_step_extrema(const FrtCurve& curve, const FrtState& state, double v_uv_pu,
                          double v_ov_pu, double f_hz, double dt_s, double t_now_s) {
    FrtState next = state;
    if (next.status == FrtStatus::tripped) return next;
    next.zone_timers.resize(curve.zone_count(), 0.0);

    const bool in_continuous = v_uv_pu >= curve.continuous.v_min_pu &&
                               v_ov_pu <= curve.continuous.v_max_pu &&
                               f_hz >= curve.continuous.f_min_hz &&
                               f_hz <= curve.continuous.f_max_hz;
    if (in_continuous) {
        std::fill(next.zone_timers.begin(), next.zone_timers.end(), 0.0);
        return next;
    }

    for (int k = 0; k < curve.zone_count(); ++k) {
        const ZoneRef ref = zone_ref(curve, k);
        if (zone_contains(ref, v_uv_pu, v_ov_pu, f_hz)) next.zone_timers[k] += dt_s;
    }

    for (int k = 0; k < curve.zone_count(); ++k) {
        const ZoneRef ref = zone_ref(curve, k);
        if (next.zone_timers[k] > 0.0 && next.zone_timers[k] >= ref.zone->max_duration_s) {
            next.status = FrtStatus::tripped;
            next.trip_time_s = t_now_s;
            const double observed = (ref.kind == ZoneKind::uv)   ? v_uv_pu
                                    : (ref.kind == ZoneKind::ov) ? v_ov_pu
                                                                 : f_hz;
            next.trip_cause = FrtTripCause{curve.zone_label(k), observed};
            break;
        }
    }
    return next;
}

FrtState frt_step(const FrtCurve& curve, const FrtState& state, double v_pu, double f_hz,
                  double dt_s, double t_now_s) {
    return frt_step_extrema(curve, state, v_pu, v_pu, f_hz, dt_s, t_now_s);
}

}  // namespace gridfault
