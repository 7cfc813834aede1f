#pragma once

#include "qsync/types.hpp"

namespace qsync {

// Spin-1 angular momentum matrices on the basis {|m=+1>, |m=0>, |m=-1>}.
struct SpinMatrices {
    Mat3 jx;
    Mat3 jy;
    Mat3 jz;
};

SpinMatrices build_spin1();

// Kronecker product of two qutrit operators; the first factor varies slowest,
// so the product index is j = 3*a + b (0-based), i.e. |m1,m2> with m1 from
// the first factor. 1-based this is j = 3(a-1)+b, matching the element
// labels used by the synchronization measure.
Mat9 kron(const Mat3& a, const Mat3& b);
Mat9 lift_first(const Mat3& a);   // a (x) I
Mat9 lift_second(const Mat3& b);  // I (x) b

// H_S = omega1 * J1z + (omega1 + delta) * J2z. Diagonal in the product basis.
Mat9 build_hamiltonian(double omega1, double delta);

// V = (1+h)(J1z + J2z) + (1-h)(J1x + J2x), -1 <= h <= 1.
// h = 1 is purely dephasing ([V, H_S] = 0), h = -1 purely dissipative.
Mat9 build_coupling(double h);

// Two non-interacting qutrits plus the operator coupling them to the bath.
struct SystemModel {
    double omega1{1.0};
    double delta{0.0};
    double h{-1.0};
    Mat9 hs;
    Mat9 v;
};

SystemModel build_model(double omega1, double delta, double h);

}  // namespace qsync
