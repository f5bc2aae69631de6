#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torusrev/profile.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

using torusrev::InvalidProfile;
using torusrev::ParamMismatch;
using torusrev::Profile;
using torusrev::QuadratureUnderResolved;

namespace {

constexpr double kPi = 3.14159265358979323846;

double envelope(double x) {
    return std::pow(2.0 * kPi, -0.25) * std::exp(-x * x / 4.0);
}

// plain composite trapezoid on [a, b]; the independent oracle for every
// closed form below
std::complex<double> trapezoid(double a, double b, int n,
                               const std::function<std::complex<double>(double)>& f) {
    const double h = (b - a) / n;
    std::complex<double> acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) acc += f(a + i * h);
    return acc * h;
}

std::vector<std::complex<double>> gaussian_samples(double box, int n) {
    std::vector<std::complex<double>> values(n);
    const double h = 2.0 * box / (n - 1);
    for (int i = 0; i < n; ++i) values[i] = envelope(-box + i * h);
    return values;
}

} // namespace

TEST_CASE("gaussian envelope point values and unit mass") {
    const Profile g1 = Profile::gaussian(1);
    CHECK(g1.evaluate1(0.0).real() == doctest::Approx(std::pow(2.0 * kPi, -0.25)).epsilon(1e-14));
    CHECK(g1.evaluate1(1.3).real() ==
          doctest::Approx(envelope(1.3)).epsilon(1e-14));
    CHECK(g1.evaluate1(1.3).imag() == 0.0);

    // mass oracle straight from the defining integral
    const auto mass = trapezoid(-20.0, 20.0, 40000, [&](double x) {
        return std::complex<double>(std::norm(g1.evaluate1(x)), 0.0);
    });
    CHECK(mass.real() == doctest::Approx(1.0).epsilon(1e-12));

    const Profile g2 = Profile::gaussian(2);
    const double origin2[2] = {0.0, 0.0};
    CHECK(g2.evaluate(origin2).real() ==
          doctest::Approx(std::pow(2.0 * kPi, -0.5)).epsilon(1e-14));
    const double x2[2] = {0.7, -1.1};
    CHECK(g2.evaluate(x2).real() ==
          doctest::Approx(envelope(0.7) * envelope(-1.1) * std::pow(2.0 * kPi, 0.25) *
                          std::pow(2.0 * kPi, 0.25) * std::pow(2.0 * kPi, -0.5))
              .epsilon(1e-13));
}

TEST_CASE("fourier transform against the defining integral") {
    const Profile g = Profile::gaussian(1);

    for (double xi : {0.0, 0.5, 1.0, 2.0}) {
        const auto oracle = trapezoid(-20.0, 20.0, 40000, [&](double x) {
            return envelope(x) * std::polar(1.0, -xi * x);
        }) / std::sqrt(2.0 * kPi);
        CHECK(std::abs(g.fourier1(xi) - oracle) < 1e-10);
    }

    // the quadrature oracle pins the normalization: the value at 0 is
    // (2/pi)^{1/4}, not pi^{-1/4}
    const auto at0 = trapezoid(-20.0, 20.0, 40000, [&](double x) {
        return std::complex<double>(envelope(x), 0.0);
    }) / std::sqrt(2.0 * kPi);
    CHECK(at0.real() == doctest::Approx(std::pow(2.0 / kPi, 0.25)).epsilon(1e-12));
    CHECK(g.fourier1(0.0).real() ==
          doctest::Approx(0.89324384173800227).epsilon(1e-14));

    // even real envelope: even real transform
    for (double xi : {0.3, 1.7, 4.0}) {
        CHECK(g.fourier1(xi) == g.fourier1(-xi));
        CHECK(std::abs(g.fourier1(xi).imag()) < 1e-15);
    }

    // rapid decay: everything beyond |xi| = 6 is numerically dead
    for (double xi : {6.0, 7.5, 10.0}) {
        CHECK(std::abs(g.fourier1(xi)) < 1e-14);
        const auto tail = trapezoid(-20.0, 20.0, 40000, [&](double x) {
            return envelope(x) * std::polar(1.0, -xi * x);
        }) / std::sqrt(2.0 * kPi);
        CHECK(std::abs(tail) < 1e-14);
    }

    const Profile g2 = Profile::gaussian(2);
    const double xi2[2] = {1.0, 0.5};
    CHECK(g2.fourier(xi2).real() ==
          doctest::Approx(std::pow(2.0 / kPi, 0.5) * std::exp(-1.25)).epsilon(1e-13));
}

TEST_CASE("autocorrelation against the defining integral") {
    const Profile g = Profile::gaussian(1);

    CHECK(g.autocorrelation1(0.0).real() == doctest::Approx(1.0).epsilon(1e-14));

    for (double r : {1.0, 0.5}) {
        const auto oracle = trapezoid(-20.0, 20.0, 40000, [&](double x) {
            return envelope(x) * envelope(x - 2.0 * r);
        });
        CHECK(std::abs(g.autocorrelation1(r) - oracle) < 1e-10);
        CHECK(g.autocorrelation1(r).real() ==
              doctest::Approx(std::exp(-r * r / 2.0)).epsilon(1e-13));
    }

    // |sigma_R| <= 1 and sigma_{-R} = conj(sigma_R)
    for (double r : {0.1, 0.7, 1.9, 5.0}) {
        CHECK(std::abs(g.autocorrelation1(r)) <= 1.0 + 1e-15);
        CHECK(std::abs(g.autocorrelation1(-r) - std::conj(g.autocorrelation1(r))) <
              1e-15);
    }

    const Profile g2 = Profile::gaussian(2);
    const double shift[2] = {1.0, 1.0};
    CHECK(g2.autocorrelation(shift).real() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("sampled profile reproduces the gaussian closed forms") {
    const Profile exact = Profile::gaussian(1);
    const Profile sampled = Profile::from_samples(1, 20.0, 801, gaussian_samples(20.0, 801));

    CHECK(sampled.kind() == torusrev::ProfileKind::NumericSampled);
    for (double xi : {0.0, 0.7, 1.0, 2.0, 4.0})
        CHECK(std::abs(sampled.fourier1(xi) - exact.fourier1(xi)) < 1e-10);
    for (double r : {0.0, 0.5, 1.0, 2.5})
        CHECK(std::abs(sampled.autocorrelation1(r) - exact.autocorrelation1(r)) < 1e-10);
    CHECK(std::abs(sampled.evaluate1(0.25) - exact.evaluate1(0.25)) < 1e-13);
    CHECK(std::abs(sampled.evaluate1(0.275) - exact.evaluate1(0.275)) < 1e-6);

    // Parseval over the transform support
    double parseval = 0.0;
    const int n = 801;
    const double lo = -8.0, hi = 8.0, h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        parseval += w * std::norm(sampled.fourier1(lo + i * h));
    }
    parseval *= h;
    CHECK(parseval == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("csv round trip preserves the sample grid") {
    const auto dir = std::filesystem::temp_directory_path() / "torusrev_profile_csv";
    std::filesystem::create_directories(dir);
    const auto path = dir / "gaussian_801.csv";

    const int n = 801;
    const auto values = gaussian_samples(20.0, n);
    {
        std::ofstream f(path);
        f << "x_1,re,im\n";
        char line[128];
        for (int i = 0; i < n; ++i) {
            const double x = -20.0 + 40.0 * i / (n - 1);
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", x,
                          values[i].real(), values[i].imag());
            f << line;
        }
    }

    const Profile from_csv = Profile::from_csv(path.string());
    const Profile from_mem = Profile::from_samples(1, 20.0, n, values);
    CHECK(from_csv.points_per_axis() == n);
    CHECK(from_csv.box_halfwidth() == doctest::Approx(20.0).epsilon(1e-15));
    for (double xi : {0.0, 1.0, 3.0})
        CHECK(std::abs(from_csv.fourier1(xi) - from_mem.fourier1(xi)) < 1e-14);

    std::filesystem::remove_all(dir);
}

TEST_CASE("invalid sample sets are rejected") {
    // wrong mass
    auto doubled = gaussian_samples(20.0, 801);
    for (auto& v : doubled) v *= 2.0;
    CHECK_THROWS_AS(Profile::from_samples(1, 20.0, 801, doubled), InvalidProfile);

    // the envelope must be dead at the box boundary: a recentered gaussian
    // keeps unit mass but leaks at +20
    std::vector<std::complex<double>> shifted(801);
    for (int i = 0; i < 801; ++i) {
        const double x = -20.0 + 40.0 * i / 800.0;
        shifted[i] = envelope(x - 10.0);
    }
    CHECK_THROWS_AS(Profile::from_samples(1, 20.0, 801, shifted), InvalidProfile);

    // even sample counts leave no centered coarsening
    CHECK_THROWS_AS(Profile::from_samples(1, 20.0, 800,
                                          gaussian_samples(20.0, 800)),
                    ParamMismatch);

    // sample count must match dimension^d tensor size
    CHECK_THROWS_AS(Profile::from_samples(2, 20.0, 801, gaussian_samples(20.0, 801)),
                    ParamMismatch);
}

TEST_CASE("under-resolved sample grids refuse to answer") {
    // 51 points on [-20, 20] passes the mass gate (trapezoid aliasing ~1e-14
    // at step 0.8) but the coarsened error estimate for transform queries is
    // macroscopic
    const Profile coarse = Profile::from_samples(1, 20.0, 51, gaussian_samples(20.0, 51));
    CHECK_THROWS_AS((void)coarse.fourier1(0.5), QuadratureUnderResolved);
    CHECK_THROWS_AS((void)coarse.fourier1(6.0), QuadratureUnderResolved);
}
