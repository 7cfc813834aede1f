#pragma once

#include <vector>

#include "qsync/types.hpp"

namespace qsync {

// SU(2) coherent state of a spin 1 on the basis {|1,1>, |1,0>, |1,-1>}:
// amplitudes (e^{-i phi}(1+cos theta)/2, sin theta/sqrt 2, e^{i phi}(1-cos theta)/2).
struct SpinCoherentState {
    double theta{0.0};
    double phi{0.0};
    Vec3 amplitudes;
};

SpinCoherentState spin_coherent_state(double theta, double phi);

// Husimi Q distribution of a two-qutrit state over product coherent states,
// Q = 9/(16 pi^2) <theta1,phi1|x|theta2,phi2| rho |theta1,phi1>x|theta2,phi2>.
double husimi_q(const Mat9& rho, double theta1, double theta2, double phi1,
                double phi2);

// The five coherences that carry the phase distribution: z1 collects the
// single-flip terms, z2 the double-flip one.
struct SyncCoherences {
    Complex z1{0.0, 0.0};
    Complex z2{0.0, 0.0};
};

SyncCoherences sync_coherences(const Mat9& rho);

// S_r(phi) = (32 xi + 9 pi^2 eta) / (256 pi) with
// xi = 2 Re(e^{2 i phi} z2), eta = 2 Re(e^{i phi} z1).
double sync_from_coherences(const SyncCoherences& c, double phi);

// Synchronization measure at relative phase phi (validates rho first).
double sync_measure_closed(const Mat9& rho, double phi);

// Same quantity by direct quadrature of the Husimi distribution: Gauss-
// Legendre with `resolution` nodes in cos(theta) per sphere, uniform
// trapezoid in the common azimuth. Oracle for sync_measure_closed.
double sync_measure_quadrature(const Mat9& rho, double phi, int resolution);

struct MaxSync {
    double s_r_max{0.0};
    double phi_star{0.0};
};

// Maximizes S_r over phi: dense grid of phi_samples points (>= 8) plus
// golden-section refinement to |dphi| < 1e-6.
MaxSync max_sync(const Mat9& rho, int phi_samples = 1024);

// Transposes the chosen tensor factor (1 or 2).
Mat9 partial_transpose(const Mat9& rho, int subsystem);

Mat3 partial_trace_second(const Mat9& rho);  // rho_1 = Tr_2 rho
Mat3 partial_trace_first(const Mat9& rho);   // rho_2 = Tr_1 rho

struct NegativityResult {
    double negativity{0.0};      // N = (||rho^T||_1 - 1) / 2
    double log_negativity{0.0};  // E = log2(1 + 2N)
};

NegativityResult negativity_measures(const Mat9& rho);

// I = S(rho_1) + S(rho_2) - S(rho), natural-log von Neumann entropies.
double mutual_information(const Mat9& rho);

// Everything the CSV reports need from one density matrix.
struct MeasureReport {
    std::vector<double> phi_grid;
    std::vector<double> s_r;
    double s_r_max{0.0};
    double phi_star{0.0};
    double negativity{0.0};
    double log_negativity{0.0};
    double mutual_information{0.0};
};

MeasureReport measure_report(const Mat9& rho, int phi_grid_size = 1024);

// Gauss-Legendre rule on [-1, 1]; exposed for the quadrature-based tests.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace qsync
