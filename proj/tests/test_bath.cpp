#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qsync/bath.hpp"
#include "qsync/errors.hpp"

using namespace qsync;

// Reference values below were frozen from an independent arbitrary-precision
// evaluation (40 significant digits) of the Matsubara expansion and of the
// continuum integral C(t) = int_0^inf J(w)[coth(bw/2)cos(wt) - i sin(wt)] dw.

TEST_CASE("matsubara frequencies ladder") {
    const auto nu = matsubara_frequencies(2.0, 0.3, 2);
    REQUIRE(nu.size() == 3);
    CHECK(nu[0] == 2.0);
    CHECK(nu[1] == doctest::Approx(20.943951023931954923).epsilon(1e-15));
    CHECK(nu[2] == doctest::Approx(41.887902047863909846).epsilon(1e-15));

    const auto nu_slow = matsubara_frequencies(0.2, 0.3, 1);
    CHECK(nu_slow[0] == 0.2);
    CHECK(nu_slow[1] == doctest::Approx(20.943951023931954923).epsilon(1e-15));

    CHECK_THROWS_AS(matsubara_frequencies(0.0, 0.3, 2), std::invalid_argument);
    CHECK_THROWS_AS(matsubara_frequencies(2.0, -0.3, 2), std::invalid_argument);
    CHECK_THROWS_AS(matsubara_frequencies(2.0, 0.3, -1), std::invalid_argument);
}

TEST_CASE("matsubara coefficients match the high-precision oracle") {
    const auto c = matsubara_coefficients(0.05, 0.2, 0.3, 2);
    REQUIRE(c.size() == 3);
    CHECK(c[0].real() == doctest::Approx(0.33323332733281900133).epsilon(1e-14));
    CHECK(c[0].imag() == doctest::Approx(-0.01).epsilon(1e-15));
    CHECK(c[1].real() == doctest::Approx(0.0063667783042382098251).epsilon(1e-14));
    CHECK(c[1].imag() == 0.0);
    CHECK(c[2].real() == doctest::Approx(0.003183171429444724473).epsilon(1e-14));
    CHECK(c[2].imag() == 0.0);

    const auto cfast = matsubara_coefficients(0.05, 2.0, 0.3, 0);
    CHECK(cfast[0].real() == doctest::Approx(0.32327281437658275137).epsilon(1e-14));
    CHECK(cfast[0].imag() == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("classical limit of the leading coefficient") {
    // Re c_0 -> 2*lambda/beta as beta -> 0, relative correction (gamma*beta)^2/12
    const double lambda = 0.05, gamma = 2.0, beta = 1e-6;
    const auto c = matsubara_coefficients(lambda, gamma, beta, 0);
    CHECK(c[0].real() == doctest::Approx(2.0 * lambda / beta).epsilon(1e-10));
}

TEST_CASE("degenerate bath parameters are rejected") {
    const double nu1 = 2.0 * std::numbers::pi / 0.3;
    CHECK_THROWS_AS(matsubara_coefficients(0.05, nu1, 0.3, 2), DegenerateBath);
    // the cot pole is present even when the expansion is cut before that mode
    CHECK_THROWS_AS(matsubara_coefficients(0.05, nu1, 0.3, 0), DegenerateBath);
    // second Matsubara frequency, slight perturbation within the guard band
    CHECK_THROWS_AS(matsubara_coefficients(0.05, 2.0 * nu1 * (1.0 + 1e-12), 0.3, 5),
                    DegenerateBath);
    // well-separated gamma passes
    CHECK_NOTHROW(matsubara_coefficients(0.05, nu1 * 0.5, 0.3, 5));
}

TEST_CASE("terminator coefficient is real and shrinks with the cutoff") {
    const double vals[] = {0.00050003000257166002104,    // m_cut = 0
                           0.00012004611080898283122,    // m_cut = 2
                           4.6672170773743169125e-05};   // m_cut = 6
    const int cuts[] = {0, 2, 6};
    for (int i = 0; i < 3; ++i) {
        const BathSpec b = make_bath(0.05, 0.2, 0.3, cuts[i]);
        CHECK(b.terminator.real() == doctest::Approx(vals[i]).epsilon(1e-12));
        CHECK(std::abs(b.terminator.imag()) < 1e-15);
    }
    CHECK(std::abs(make_bath(0.05, 0.2, 0.3, 6).terminator) <
          std::abs(make_bath(0.05, 0.2, 0.3, 2).terminator));

    const BathSpec fast = make_bath(0.05, 2.0, 0.3, 2);
    CHECK(fast.terminator.real() == doctest::Approx(0.0012010055114700054922).epsilon(1e-12));
    CHECK(std::abs(fast.terminator.imag()) < 1e-15);

    // recomputing from the stored expansion reproduces the stored value
    CHECK(terminator_coefficient(fast) == fast.terminator);
}

TEST_CASE("truncated expansion reproduces the continuum correlation function") {
    struct Point {
        double t;
        double re;
    };
    // slow bath: lambda=0.05, gamma=0.2, beta=0.3
    const BathSpec slow = make_bath(0.05, 0.2, 0.3, 20);
    const Point slow_pts[] = {{0.05, 0.33266927842668509449},
                              {0.1, 0.32747154108830787275},
                              {2.5, 0.20211622986541062812},
                              {5.0, 0.12258969023889777043},
                              {25.0, 0.0022453084978974329492}};
    for (const auto& p : slow_pts)
        CHECK(correlation_function(slow, p.t).real() ==
              doctest::Approx(p.re).epsilon(1e-10));

    // fast bath: lambda=0.05, gamma=2
    const BathSpec fast = make_bath(0.05, 2.0, 0.3, 20);
    const Point fast_pts[] = {{0.05, 0.32023963085743257744},
                              {0.25, 0.19641767919494421258},
                              {0.5, 0.11892724176295204132},
                              {2.5, 0.0021781950895146089943}};
    for (const auto& p : fast_pts)
        CHECK(correlation_function(fast, p.t).real() ==
              doctest::Approx(p.re).epsilon(1e-8));

    // the imaginary part is a single exponential, exact at any cutoff
    for (double t : {0.0, 0.1, 1.0, 7.0}) {
        CHECK(correlation_function(slow, t).imag() ==
              doctest::Approx(-0.05 * 0.2 * std::exp(-0.2 * t)).epsilon(1e-13));
        CHECK(correlation_function(fast, t).imag() ==
              doctest::Approx(-0.05 * 2.0 * std::exp(-2.0 * t)).epsilon(1e-13));
    }
    CHECK(correlation_function(fast, 0.1).imag() ==
          doctest::Approx(-0.081873075307798185867).epsilon(1e-13));

    CHECK_THROWS_AS(correlation_function(fast, -0.1), std::invalid_argument);
}

TEST_CASE("monotone convergence of the expansion at short time") {
    // at t = 0.05 the m_cut = 20 series still misses the continuum by ~4e-13;
    // deeper cuts shrink the defect
    const double target = 0.33266927842668509449;
    const double e5 = std::abs(correlation_function(make_bath(0.05, 0.2, 0.3, 5), 0.05).real() - target);
    const double e20 = std::abs(correlation_function(make_bath(0.05, 0.2, 0.3, 20), 0.05).real() - target);
    CHECK(e20 < e5);
    CHECK(e5 / target < 1e-4);
}

TEST_CASE("spectral density shape") {
    const double lambda = 0.05, gamma = 0.2;
    CHECK(spectral_density(lambda, gamma, 0.0) == 0.0);
    // peak value lambda/pi sits exactly at omega = gamma
    CHECK(spectral_density(lambda, gamma, gamma) ==
          doctest::Approx(lambda / std::numbers::pi).epsilon(1e-15));
    CHECK(spectral_density(lambda, gamma, 0.99 * gamma) <
          spectral_density(lambda, gamma, gamma));
    CHECK(spectral_density(lambda, gamma, 1.01 * gamma) <
          spectral_density(lambda, gamma, gamma));
    // odd in omega
    CHECK(spectral_density(lambda, gamma, -0.7) ==
          doctest::Approx(-spectral_density(lambda, gamma, 0.7)).epsilon(1e-15));
}

TEST_CASE("make_bath stores consistent pieces") {
    const BathSpec b = make_bath(0.03, 0.7, 0.4, 3);
    CHECK(b.lambda == 0.03);
    CHECK(b.gamma == 0.7);
    CHECK(b.beta == 0.4);
    CHECK(b.m_cut == 3);
    REQUIRE(b.nu.size() == 4);
    REQUIRE(b.c.size() == 4);
    CHECK(b.nu == matsubara_frequencies(0.7, 0.4, 3));

    // lambda = 0 switches the bath off entirely
    const BathSpec off = make_bath(0.0, 2.0, 0.3, 2);
    for (const auto& ck : off.c) CHECK(std::abs(ck) == 0.0);
    CHECK(std::abs(off.terminator) == 0.0);
    CHECK(std::abs(correlation_function(off, 1.0)) == 0.0);
}
