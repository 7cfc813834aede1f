#include "qsync/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace qsync {

namespace {
constexpr Complex kI{0.0, 1.0};
}

SpinMatrices build_spin1() {
    const double s = 1.0 / std::sqrt(2.0);
    SpinMatrices m;
    m.jx << 0, s, 0,
            s, 0, s,
            0, s, 0;
    m.jy << 0, -kI * s, 0,
            kI * s, 0, -kI * s,
            0, kI * s, 0;
    m.jz << 1, 0, 0,
            0, 0, 0,
            0, 0, -1;
    return m;
}

Mat9 kron(const Mat3& a, const Mat3& b) {
    Mat9 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
    return out;
}

Mat9 lift_first(const Mat3& a) { return kron(a, Mat3::Identity()); }

Mat9 lift_second(const Mat3& b) { return kron(Mat3::Identity(), b); }

Mat9 build_hamiltonian(double omega1, double delta) {
    if (!(omega1 > 0.0))
        throw std::invalid_argument("build_hamiltonian: omega1 must be > 0");
    const SpinMatrices spin = build_spin1();
    return omega1 * lift_first(spin.jz) + (omega1 + delta) * lift_second(spin.jz);
}

Mat9 build_coupling(double h) {
    if (!(h >= -1.0 && h <= 1.0))
        throw std::invalid_argument("build_coupling: anisotropy h must lie in [-1, 1]");
    const SpinMatrices spin = build_spin1();
    const Mat9 jz_sum = lift_first(spin.jz) + lift_second(spin.jz);
    const Mat9 jx_sum = lift_first(spin.jx) + lift_second(spin.jx);
    return (1.0 + h) * jz_sum + (1.0 - h) * jx_sum;
}

SystemModel build_model(double omega1, double delta, double h) {
    SystemModel model;
    model.omega1 = omega1;
    model.delta = delta;
    model.h = h;
    model.hs = build_hamiltonian(omega1, delta);
    model.v = build_coupling(h);
    return model;
}

}  // namespace qsync
