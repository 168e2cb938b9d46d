/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridfault/phasor.hpp"

namespace gridfault {

/// Voltage-polynomial load: constant-impedance, constant-current and
/// constant-power fractions of the nominal apparent power.
struct ZipLoad {
    std::string bus;
    Phase phase = Phase::a;
    Complex s_nominal{};        // consumed at v_nominal (kVA in files, any
                                // consistent unit for the injection math)
    double a_z = 0.4;
    double a_i = 0.3;
    double a_p = 0.3;
    double v_nominal_pu = 1.0;
};

/// Below this voltage the constant-power fraction of a ZIP load is evaluated
/// as a fixed impedance sized at the floor.
inline constexpr double kZipConstPowerFloorPu = 0.3;

/// Apparent power drawn at voltage magnitude |v| (same unit as s_nominal).
Complex zip_power(const ZipLoad& load, double v_mag_pu);

/// Current drawn by the load (load convention): conj(S(v)/v). Unit-consistent
/// with s_nominal; per-unit in, per-unit out.
Complex zip_injection(const ZipLoad& load, Complex v);

/// Same, restricted to the constant-current and constant-power portions.
/// Used when the constant-impedance portion has been stamped into the
/// admittance matrix.
Complex zip_injection_dynamic(const ZipLoad& load, Complex v);

/// Nominal admittance of the constant-impedance portion (for stamping):
/// a_z · conj(s_nominal) / v_nominal².
Complex zip_impedance_admittance(const ZipLoad& load);

struct ShuntCapacitor {
    std::string bus;
    std::vector<Phase> phases;
    double q_rated_kvar_per_phase = 0.0;
    bool enabled = true;
};

struct Regulator {
    std::string from;  // upstream bus
    std::string to;    // regulated (downstream) bus
    std::vector<Phase> phases;
    double step_pu = 0.00625;
    int tap_range = 16;
    double band_center_pu = 1.0;
    double band_width_pu = 1.0 / 30.0;
    std::array<int, 3> taps{0, 0, 0};  // indexed by Phase

    double ratio(Phase p) const { return 1.0 + taps[static_cast<int>(p)] * step_pu; }
};

enum class IbrKind { pv_farm, bess, rooftop_pv };

std::string ibr_kind_name(IbrKind kind);

struct Ibr {
    std::string id;
    std::string bus;
    std::vector<Phase> phases;  // one phase, or {a,b,c}
    double s_rated_kva = 0.0;
    double p_set_kw = 0.0;  // negative for a charging BESS
    double q_set_kvar = 0.0;
    double i_limit_pu = 2.0;  // on own base
    std::string frt_curve = "default_1547";
    IbrKind kind = IbrKind::rooftop_pv;

    bool is_three_phase() const { return phases.size() == 3; }
    bool is_pv() const { return kind != IbrKind::bess; }
};

/// Injected phase currents in per-unit on the unit's own base (generator
/// convention), given the terminal voltages. Three-phase units inject
/// balanced positive-sequence current tracking the positive-sequence
/// terminal voltage; single-phase units track their own phase voltage.
/// The magnitude is |S_set|/|V_ctrl| clamped to i_limit_pu. Below
/// kIbrVoltageFloorPu the clamped current is issued at fallback_angle_rad.
std::vector<Complex> ibr_injection(const Ibr& ibr, const std::vector<Complex>& v_terminals,
                                   bool faulted, double fallback_angle_rad = 0.0);

inline constexpr double kIbrVoltageFloorPu = 1e-3;

/// Control voltage angle the unit is currently tracking (for fallback reuse).
double ibr_control_angle(const Ibr& ibr, const std::vector<Complex>& v_terminals);

/// Fault-ride-through envelope. Zones are half-open toward the must-trip
/// side: a voltage exactly on the continuous-region boundary is continuous.
struct FrtZone {
    double low = 0.0;
    double high = 0.0;
    double max_duration_s = 0.0;  // 0 means instantaneous trip
};

struct FrtContinuousRegion {
    double v_min_pu = 0.88;
    double v_max_pu = 1.10;
    double f_min_hz = 58.5;
    double f_max_hz = 61.2;
};

struct FrtCurve {
    std::string name;
    std::vector<FrtZone> under_voltage;   // descending, [low, high)
    std::vector<FrtZone> over_voltage;    // ascending, (low, high]
    std::vector<FrtZone> under_frequency; // descending
    std::vector<FrtZone> over_frequency;  // ascending
    FrtContinuousRegion continuous;

    /// Empty string when well-formed, else a description of the defect
    /// (overlap, gap against the continuous region, negative duration).
    std::string validate() const;

    int zone_count() const;
    /// Stable identifier such as "uv[0.50,0.70)" for trip causes.
    std::string zone_label(int zone_index) const;
};

/// The built-in envelope shipped as "default_1547".
FrtCurve default_frt_curve();

enum class FrtStatus { online, tripped };

struct FrtTripCause {
    std::string zone;      // zone_label of the zone whose timer elapsed
    double observed = 0.0; // voltage (pu) or frequency (Hz) seen at trip
};

struct FrtState {
    FrtStatus status = FrtStatus::online;
    std::vector<double> zone_timers;  // aligned with curve zone indices
    std::optional<double> trip_time_s;
    std::optional<FrtTripCause> trip_cause;
};

/// One evaluation step with distinct voltages for the undervoltage and
/// overvoltage checks (they differ for three-phase units). Timers of every
/// zone reset when the operating point is inside the continuous region.
FrtState frt_step_extrema(const FrtCurve& curve, const FrtState& state, double v_uv_pu,
                          double v_ov_pu, double f_hz, double dt_s, double t_now_s);

/// Single-voltage form (the common case for single-phase units).
FrtState frt_step(const FrtCurve& curve, const FrtState& state, double v_pu, double f_hz,
                  double dt_s, double t_now_s);

/// Applicable voltages for the FRT checks: single-phase units use their own
/// phase magnitude for both; three-phase units use the minimum phase
/// magnitude against undervoltage zones and the maximum against overvoltage.
struct FrtVoltages {
    double undervoltage = 1.0;
    double overvoltage = 1.0;
};
FrtVoltages ibr_voltage_for_frt(const Ibr& ibr, const std::vector<Complex>& v_terminals);

}  // namespace gridfault
