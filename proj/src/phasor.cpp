/*
 * (C) Copyright 2026 gridfault developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "gridfault/phasor.hpp"

namespace gridfault {

SequenceTriple to_sequence(const PhasorTriple& v) {
    const Complex al = alpha();
    const Complex al2 = al * al;
    SequenceTriple s;
    s.zero = (v.a + v.b + v.c) / 3.0;
    s.pos = (v.a + al * v.b + al2 * v.c) / 3.0;
    s.neg = (v.a + al2 * v.b + al * v.c) / 3.0;
    return s;
}

PhasorTriple from_sequence(const SequenceTriple& s) {
    const Complex al = alpha();
    const Complex al2 = al * al;
    PhasorTriple v;
    v.a = s.zero + s.pos + s.neg;
    v.b = s.zero + al2 * s.pos + al * s.neg;
    v.c = s.zero + al * s.pos + al2 * s.neg;
    return v;
}

Mat3 sequence_matrix() {
    const Complex al = alpha();
    const Complex al2 = al * al;
    Mat3 a;
    a << 1.0, 1.0, 1.0,
         1.0, al2, al,
         1.0, al,  al2;
    return a;
}

Mat3 sequence_matrix_inverse() {
    const Complex al = alpha();
    const Complex al2 = al * al;
    Mat3 inv;
    inv << 1.0, 1.0, 1.0,
           1.0, al,  al2,
           1.0, al2, al;
    return inv / 3.0;
}

Mat3 seq_to_phase_impedance(Complex z1, Complex z0) {
    const Complex zs = (z0 + 2.0 * z1) / 3.0;
    const Complex zm = (z0 - z1) / 3.0;
    Mat3 z;
    z << zs, zm, zm,
         zm, zs, zm,
         zm, zm, zs;
    return z;
}

}  // namespace gridfault
