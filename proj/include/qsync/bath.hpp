#pragma once

#include <vector>

#include "qsync/types.hpp"

namespace qsync {

// Drude-Lorentz bath, J(w) = 2*lambda*gamma*w / (pi*(gamma^2 + w^2)), with
// the correlation function expanded over Matsubara exponentials
//   C(t) = sum_{k=0}^{m_cut} c_k exp(-nu_k t),  t >= 0.
// The terminator coefficient Xi closes the hierarchy against the truncated
// tail of the expansion; it is real (the imaginary parts of -i*lambda and
// -c_0/nu_0 cancel exactly) and shrinks as m_cut grows.
struct BathSpec {
    double lambda{0.05};  // system-bath coupling strength
    double gamma{2.0};    // spectral width; 1/gamma is the bath correlation time
    double beta{0.3};     // inverse temperature
    int m_cut{2};         // Matsubara cutoff M
    std::vector<double> nu;   // nu_0 = gamma, nu_k = 2*pi*k/beta
    std::vector<Complex> c;   // c_0 = gamma*lambda*(cot(gamma*beta/2) - i), ...
    Complex terminator{0.0};  // Xi = 2*lambda/(beta*gamma) - i*lambda - sum c_k/nu_k
};

std::vector<double> matsubara_frequencies(double gamma, double beta, int m_cut);

// Throws DegenerateBath when gamma coincides with a Matsubara frequency
// (pole of c_k for k <= m_cut, pole of cot(gamma*beta/2) for any k >= 1).
std::vector<Complex> matsubara_coefficients(double lambda, double gamma,
                                            double beta, int m_cut);

Complex terminator_coefficient(const BathSpec& spec);

BathSpec make_bath(double lambda, double gamma, double beta, int m_cut);

// C(t) from the truncated expansion; requires t >= 0.
Complex correlation_function(const BathSpec& spec, double t);

double spectral_density(double lambda, double gamma, double omega);

}  // namespace qsync
