#include "qsync/bath.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double kDegeneracyTol = 1e-9;
constexpr Complex kI{0.0, 1.0};

void check_positive(double gamma, double beta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("bath: gamma must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("bath: beta must be > 0");
}

// gamma == 2*pi*k/beta for some k >= 1 makes both cot(gamma*beta/2) and the
// k-th coefficient singular, regardless of where the expansion is cut.
void check_degeneracy(double gamma, double beta) {
    const double ratio = gamma * beta / (2.0 * std::numbers::pi);
    const long k = std::lround(ratio);
    if (k >= 1) {
        const double nu_k = 2.0 * std::numbers::pi * static_cast<double>(k) / beta;
        if (std::abs(gamma - nu_k) / nu_k < kDegeneracyTol) {
            std::ostringstream msg;
            msg << "bath: gamma = " << gamma << " is degenerate with Matsubara frequency nu_"
                << k << " = " << nu_k << " (pole of the expansion coefficients)";
            throw DegenerateBath(msg.str());
        }
    }
}

}  // namespace

std::vector<double> matsubara_frequencies(double gamma, double beta, int m_cut) {
    check_positive(gamma, beta);
    if (m_cut < 0) throw std::invalid_argument("bath: m_cut must be >= 0");
    std::vector<double> nu(static_cast<std::size_t>(m_cut) + 1);
    nu[0] = gamma;
    for (int k = 1; k <= m_cut; ++k)
        nu[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / beta;
    return nu;
}

std::vector<Complex> matsubara_coefficients(double lambda, double gamma,
                                            double beta, int m_cut) {
    check_positive(gamma, beta);
    if (!(lambda >= 0.0)) throw std::invalid_argument("bath: lambda must be >= 0");
    if (m_cut < 0) throw std::invalid_argument("bath: m_cut must be >= 0");
    check_degeneracy(gamma, beta);

    std::vector<Complex> c(static_cast<std::size_t>(m_cut) + 1);
    const double x = gamma * beta / 2.0;
    c[0] = gamma * lambda * (Complex{std::cos(x) / std::sin(x), -1.0});
    for (int k = 1; k <= m_cut; ++k) {
        const double nu_k = 2.0 * std::numbers::pi * k / beta;
        c[static_cast<std::size_t>(k)] =
            4.0 * gamma * lambda * nu_k / (beta * (nu_k * nu_k - gamma * gamma));
    }
    return c;
}

Complex terminator_coefficient(const BathSpec& spec) {
    Complex residual = 2.0 * spec.lambda / (spec.beta * spec.gamma) - kI * spec.lambda;
    for (std::size_t k = 0; k < spec.c.size(); ++k)
        residual -= spec.c[k] / spec.nu[k];
    return residual;
}

BathSpec make_bath(double lambda, double gamma, double beta, int m_cut) {
    BathSpec spec;
    spec.lambda = lambda;
    spec.gamma = gamma;
    spec.beta = beta;
    spec.m_cut = m_cut;
    spec.nu = matsubara_frequencies(gamma, beta, m_cut);
    spec.c = matsubara_coefficients(lambda, gamma, beta, m_cut);
    spec.terminator = terminator_coefficient(spec);
    return spec;
}

Complex correlation_function(const BathSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("correlation_function: t must be >= 0");
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < spec.c.size(); ++k)
        sum += spec.c[k] * std::exp(-spec.nu[k] * t);
    return sum;
}

double spectral_density(double lambda, double gamma, double omega) {
    return 2.0 * lambda * gamma * omega /
           (std::numbers::pi * (gamma * gamma + omega * omega));
}

}  // namespace qsync
