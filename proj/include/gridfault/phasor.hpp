/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace gridfault {

using Complex = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;

/// 1∠120°, the rotation operator of the symmetrical-components transform.
inline Complex alpha() { return {-0.5, 0.5 * std::sqrt(3.0)}; }

inline Complex polar_deg(double magnitude, double angle_deg) {
    return std::polar(magnitude, angle_deg * kPi / 180.0);
}

inline double angle_deg(Complex v) { return std::arg(v) * 180.0 / kPi; }

enum class Phase : std::uint8_t { a = 0, b = 1, c = 2 };

inline char phase_char(Phase p) { return static_cast<char>('a' + static_cast<int>(p)); }

/// Phase-frame triple (V_a, V_b, V_c).
struct PhasorTriple {
    Complex a{};
    Complex b{};
    Complex c{};

    Complex& operator[](Phase p) { return p == Phase::a ? a : (p == Phase::b ? b : c); }
    Complex operator[](Phase p) const { return p == Phase::a ? a : (p == Phase::b ? b : c); }
};

/// Sequence-frame triple (V_0, V_1, V_2): zero, positive, negative.
struct SequenceTriple {
    Complex zero{};
    Complex pos{};
    Complex neg{};
};

SequenceTriple to_sequence(const PhasorTriple& v);
PhasorTriple from_sequence(const SequenceTriple& s);

/// Symmetrical-components matrix A with columns (1,1,1), (1,α²,α), (1,α,α²),
/// so that V_abc = A · V_012.
Mat3 sequence_matrix();
Mat3 sequence_matrix_inverse();

/// Phase-frame series impedance of a transposed line given its sequence
/// impedances (with Z_neg = Z_pos). Diagonal Z_s = (z0 + 2·z1)/3, off-diagonal
/// Z_m = (z0 − z1)/3.
Mat3 seq_to_phase_impedance(Complex z1, Complex z0);

}  // namespace gridfault
