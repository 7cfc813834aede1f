#include "qsync/measures.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double pi = std::numbers::pi;

void validate_density(const Mat9& rho) {
    if (!rho.allFinite())
        throw InvalidDensityMatrix("density matrix has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidDensityMatrix("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-8)
        throw InvalidDensityMatrix("density matrix trace differs from 1");
}

// Coherent-state amplitudes without range checks; phases wrap naturally.
Vec3 coherent_amplitudes(double cos_theta, double sin_theta, double phi) {
    const Complex phase{std::cos(phi), std::sin(phi)};
    Vec3 a;
    a(0) = std::conj(phase) * 0.5 * (1.0 + cos_theta);
    a(1) = sin_theta / std::numbers::sqrt2;
    a(2) = phase * 0.5 * (1.0 - cos_theta);
    return a;
}

std::vector<double> entropy_spectrum(const Eigen::VectorXd& ev) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double v = ev(i);
        if (v < -1e-8)
            throw InvalidDensityMatrix("density matrix has a negative eigenvalue");
        if (v > 1e-12) out.push_back(v);
    }
    return out;
}

double entropy_nat(const std::vector<double>& spectrum) {
    double s = 0.0;
    for (double v : spectrum) s -= v * std::log(v);
    return s;
}

}  // namespace

SpinCoherentState spin_coherent_state(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= pi))
        throw std::invalid_argument("spin_coherent_state: theta outside [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * pi))
        throw std::invalid_argument("spin_coherent_state: phi outside [0, 2 pi)");
    SpinCoherentState s;
    s.theta = theta;
    s.phi = phi;
    s.amplitudes = coherent_amplitudes(std::cos(theta), std::sin(theta), phi);
    return s;
}

double husimi_q(const Mat9& rho, double theta1, double theta2, double phi1,
                double phi2) {
    validate_density(rho);
    const Vec3 a = spin_coherent_state(theta1, phi1).amplitudes;
    const Vec3 b = spin_coherent_state(theta2, phi2).amplitudes;
    Vec9 psi;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) psi(3 * i + j) = a(i) * b(j);
    return 9.0 / (16.0 * pi * pi) * std::real(psi.dot(rho * psi));
}

SyncCoherences sync_coherences(const Mat9& rho) {
    SyncCoherences c;
    c.z1 = rho(1, 3) + rho(2, 4) + rho(4, 6) + rho(5, 7);
    c.z2 = rho(2, 6);
    return c;
}

double sync_from_coherences(const SyncCoherences& c, double phi) {
    const Complex e1{std::cos(phi), std::sin(phi)};
    const double eta = 2.0 * std::real(e1 * c.z1);
    const double xi = 2.0 * std::real(e1 * e1 * c.z2);
    return (32.0 * xi + 9.0 * pi * pi * eta) / (256.0 * pi);
}

double sync_measure_closed(const Mat9& rho, double phi) {
    validate_density(rho);
    return sync_from_coherences(sync_coherences(rho), phi);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least 1 node");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    // legendre_p_zeros returns the non-negative zeros in ascending order;
    // mirror them and use w = 2 / ((1 - x^2) P_n'(x)^2).
    int lo = n / 2 - 1, hi = n / 2;
    for (double x : zeros) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (x == 0.0) {
            nodes[static_cast<std::size_t>(hi)] = 0.0;
            weights[static_cast<std::size_t>(hi)] = w;
            ++hi;
        } else {
            nodes[static_cast<std::size_t>(hi)] = x;
            weights[static_cast<std::size_t>(hi)] = w;
            nodes[static_cast<std::size_t>(lo)] = -x;
            weights[static_cast<std::size_t>(lo)] = w;
            ++hi;
            --lo;
        }
    }
}

double sync_measure_quadrature(const Mat9& rho, double phi, int resolution) {
    validate_density(rho);
    if (resolution < 8)
        throw std::invalid_argument(
            "sync_measure_quadrature: resolution must be at least 8");

    std::vector<double> u, w;
    gauss_legendre(resolution, u, w);

    // Base amplitudes at zero azimuth; the azimuth only rotates the outer
    // components by e^{-+i phi}, applied per sample below.
    std::vector<Vec3> base(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double c = u[static_cast<std::size_t>(i)];
        base[static_cast<std::size_t>(i)] =
            coherent_amplitudes(c, std::sqrt(std::max(0.0, 1.0 - c * c)), 0.0);
    }

    const int n_az = resolution;  // trapezoid rule, exact for harmonics < n_az
    const double step = 2.0 * pi / n_az;
    double total = 0.0;
    Vec9 psi;
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            double cell = 0.0;
            for (int p = 0; p < n_az; ++p) {
                const double az = step * p;
                const Complex f1{std::cos(az + phi), std::sin(az + phi)};
                const Complex f2{std::cos(az), std::sin(az)};
                const Vec3& a = base[static_cast<std::size_t>(i)];
                const Vec3& b = base[static_cast<std::size_t>(j)];
                const Vec3 a1{std::conj(f1) * a(0), a(1), f1 * a(2)};
                const Vec3 b1{std::conj(f2) * b(0), b(1), f2 * b(2)};
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) psi(3 * r + s) = a1(r) * b1(s);
                cell += std::real(psi.dot(rho * psi));
            }
            total += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * cell;
        }
    }
    total *= 9.0 / (16.0 * pi * pi) * step;
    return total - 1.0 / (2.0 * pi);
}

MaxSync max_sync(const Mat9& rho, int phi_samples) {
    validate_density(rho);
    if (phi_samples < 8)
        throw std::invalid_argument("max_sync: need at least 8 phase samples");
    const SyncCoherences c = sync_coherences(rho);

    const double step = 2.0 * pi / phi_samples;
    double best_phi = 0.0, best = sync_from_coherences(c, 0.0);
    for (int i = 1; i < phi_samples; ++i) {
        const double phi = step * i;
        const double v = sync_from_coherences(c, phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }

    // Golden-section refinement on the bracket around the best grid node.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_phi - step, b = best_phi + step;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sync_from_coherences(c, x1), f2 = sync_from_coherences(c, x2);
    while (b - a > 1e-6) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sync_from_coherences(c, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sync_from_coherences(c, x1);
        }
    }
    MaxSync out;
    out.phi_star = 0.5 * (a + b);
    out.s_r_max = sync_from_coherences(c, out.phi_star);
    if (out.phi_star < 0.0) out.phi_star += 2.0 * pi;
    if (out.phi_star >= 2.0 * pi) out.phi_star -= 2.0 * pi;
    return out;
}

Mat9 partial_transpose(const Mat9& rho, int subsystem) {
    if (subsystem != 1 && subsystem != 2)
        throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
    Mat9 out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    if (subsystem == 1)
                        out(3 * a + b, 3 * c + d) = rho(3 * c + b, 3 * a + d);
                    else
                        out(3 * a + b, 3 * c + d) = rho(3 * a + d, 3 * c + b);
                }
    return out;
}

Mat3 partial_trace_second(const Mat9& rho) {
    Mat3 out = Mat3::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) out(a, b) += rho(3 * a + c, 3 * b + c);
    return out;
}

Mat3 partial_trace_first(const Mat9& rho) {
    Mat3 out = Mat3::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) out(a, b) += rho(3 * c + a, 3 * c + b);
    return out;
}

NegativityResult negativity_measures(const Mat9& rho) {
    validate_density(rho);
    const Mat9 pt = partial_transpose(rho, 1);
    Eigen::SelfAdjointEigenSolver<Mat9> es(pt, Eigen::EigenvaluesOnly);
    double trace_norm = 0.0;
    for (Eigen::Index i = 0; i < 9; ++i) trace_norm += std::abs(es.eigenvalues()(i));
    NegativityResult out;
    out.negativity = 0.5 * (trace_norm - 1.0);
    if (out.negativity < 0.0) out.negativity = 0.0;
    out.log_negativity = std::log2(1.0 + 2.0 * out.negativity);
    return out;
}

double mutual_information(const Mat9& rho) {
    validate_density(rho);
    Eigen::SelfAdjointEigenSolver<Mat9> es9(rho, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat3> es1(partial_trace_second(rho),
                                            Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat3> es2(partial_trace_first(rho),
                                            Eigen::EigenvaluesOnly);
    const double s12 = entropy_nat(entropy_spectrum(es9.eigenvalues()));
    const double s1 = entropy_nat(entropy_spectrum(es1.eigenvalues()));
    const double s2 = entropy_nat(entropy_spectrum(es2.eigenvalues()));
    return s1 + s2 - s12;
}

MeasureReport measure_report(const Mat9& rho, int phi_grid_size) {
    validate_density(rho);
    if (phi_grid_size < 8)
        throw std::invalid_argument("measure_report: need at least 8 phase samples");
    MeasureReport rep;
    const SyncCoherences c = sync_coherences(rho);
    rep.phi_grid.resize(static_cast<std::size_t>(phi_grid_size));
    rep.s_r.resize(static_cast<std::size_t>(phi_grid_size));
    for (int i = 0; i < phi_grid_size; ++i) {
        const double phi = 2.0 * pi * i / phi_grid_size;
        rep.phi_grid[static_cast<std::size_t>(i)] = phi;
        rep.s_r[static_cast<std::size_t>(i)] = sync_from_coherences(c, phi);
    }
    const MaxSync m = max_sync(rho, phi_grid_size);
    rep.s_r_max = m.s_r_max;
    rep.phi_star = m.phi_star;
    const NegativityResult neg = negativity_measures(rho);
    rep.negativity = neg.negativity;
    rep.log_negativity = neg.log_negativity;
    rep.mutual_information = mutual_information(rho);
    return rep;
}

}  // namespace qsync
