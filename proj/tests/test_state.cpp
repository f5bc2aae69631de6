#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torusrev/profile.hpp"
#include "torusrev/serialize.hpp"
#include "torusrev/state.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace torusrev;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

SemiclassicalParams sqrt_params(double hbar, int d = 1) {
    return SemiclassicalParams::from_hbar(hbar, 0.5, d);
}

double envelope(double x) {
    return std::pow(kTwoPi, -0.25) * std::exp(-x * x / 4.0);
}

// whole-line packet at (q0, p0); the torus coefficient equals its whole-line
// Fourier integral because periodization unfolds
std::complex<double> coefficient_oracle(double hbar, double alpha, double q0,
                                        double p0, int k) {
    const double lo = q0 - 22.0 * alpha;
    const double hi = q0 + 22.0 * alpha;
    const int n = 200000;
    const double h = (hi - lo) / n;
    std::complex<double> acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const std::complex<double> eta =
            envelope((x - q0) / alpha) / std::sqrt(alpha) *
            std::polar(1.0, p0 * (x - q0) / hbar);
        acc += w * eta * std::polar(1.0, -static_cast<double>(k) * x);
    }
    return acc * h / std::sqrt(kTwoPi);
}

double max_coeff_diff(const FourierState& a, const FourierState& b) {
    REQUIRE(a.window().lo() == b.window().lo());
    REQUIRE(a.window().hi() == b.window().hi());
    double worst = 0.0;
    for (size_t i = 0; i < a.coeffs().size(); ++i)
        worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return worst;
}

FourierState single_mode(double hbar, int k) {
    LatticeWindow window({k}, {k});
    return FourierState(hbar, window, {std::complex<double>(1.0, 0.0)});
}

} // namespace

TEST_CASE("coherent coefficients match direct quadrature of the packet") {
    const double hbar = 0.1;
    const auto params = sqrt_params(hbar);
    const auto spec = PacketSpec::make({0.7}, {1.0});
    const Profile g = Profile::gaussian(1);
    const FourierState psi = coherent_state(params, spec, g);

    const auto& w = psi.window();
    CHECK(w.lo()[0] == 10 - static_cast<int>(std::ceil(6.0 / params.alpha)));
    CHECK(w.hi()[0] == 10 + static_cast<int>(std::ceil(6.0 / params.alpha)));

    for (int k = w.lo()[0]; k <= w.hi()[0]; ++k) {
        const int kk[1] = {k};
        const auto oracle =
            coefficient_oracle(hbar, params.alpha, 0.7, 1.0, k);
        CHECK(std::abs(psi.coeff(kk) - oracle) < 1e-10);
    }
}

TEST_CASE("coefficient peak, norm defect, and window truncation") {
    const Profile g = Profile::gaussian(1);

    const auto psi = coherent_state(sqrt_params(0.1), PacketSpec::make({0.0}, {1.0}), g);
    const auto& w = psi.window();
    int argmax = 0;
    double best = -1.0;
    for (int k = w.lo()[0]; k <= w.hi()[0]; ++k) {
        const int kk[1] = {k};
        if (std::abs(psi.coeff(kk)) > best) {
            best = std::abs(psi.coeff(kk));
            argmax = k;
        }
    }
    CHECK(argmax == 10);  // nearest integer to p0/hbar

    CHECK(std::fabs(1.0 - psi.norm_sq()) <= 1e-8);

    // periodization images die off as the packet narrows relative to the torus
    double prev = 1.0;
    for (double hbar : {0.4, 0.2, 0.1}) {
        const auto s = coherent_state(sqrt_params(hbar), PacketSpec::make({0.0}, {0.0}), g);
        const double defect = std::fabs(1.0 - s.norm_sq());
        CHECK(defect < prev);
        prev = defect;
    }

    // out-of-window coefficients read as zero
    const int outside[1] = {w.hi()[0] + 3};
    CHECK(psi.coeff(outside) == std::complex<double>(0.0, 0.0));

    CHECK_THROWS_AS(coherent_state(sqrt_params(0.1), PacketSpec::make({0.0}, {1.0}), g,
                                   CoherentStateOptions{6.0, 8}),
                    WindowOverflow);
}

TEST_CASE("free evolution: identity, period, half period, group law") {
    const auto params = sqrt_params(0.1);
    const auto spec = PacketSpec::make({1.1}, {2.0});
    const Profile g = Profile::gaussian(1);
    const FourierState psi = coherent_state(params, spec, g);
    const double period = params.revival_time();

    // t = 0 returns bitwise-identical coefficients
    const FourierState same = evolve(psi, 0.0);
    for (size_t i = 0; i < psi.coeffs().size(); ++i)
        CHECK(same.coeffs()[i] == psi.coeffs()[i]);

    CHECK(max_coeff_diff(evolve(psi, period), psi) < 1e-12);

    // half period = antipodal translation (e^{-i pi k^2} = e^{-i pi k})
    const double half_turn[1] = {kPi};
    CHECK(max_coeff_diff(evolve(psi, period / 2.0), translate(psi, half_turn)) < 1e-12);

    CHECK(max_coeff_diff(evolve(evolve(psi, 0.37), 1.9), evolve(psi, 0.37 + 1.9)) <
          1e-13);

    for (double t : {0.0, 0.71, 13.9, period}) {
        CHECK(evolve(psi, t).norm_sq() == doctest::Approx(psi.norm_sq()).epsilon(1e-14));
    }
}

TEST_CASE("translation identities") {
    const auto params = sqrt_params(0.1);
    const Profile g = Profile::gaussian(1);
    const FourierState psi = coherent_state(params, PacketSpec::make({0.4}, {1.0}), g);

    const double zero[1] = {0.0}, fwd[1] = {0.9}, back[1] = {-0.9};
    const double full_turn[1] = {kTwoPi}, step[1] = {1.3};
    const FourierState same = translate(psi, zero);
    for (size_t i = 0; i < psi.coeffs().size(); ++i)
        CHECK(same.coeffs()[i] == psi.coeffs()[i]);

    CHECK(max_coeff_diff(translate(translate(psi, fwd), back), psi) < 1e-15);
    CHECK(max_coeff_diff(translate(psi, full_turn), psi) < 1e-14);

    // translating the state equals moving the packet center
    const FourierState moved = translate(psi, step);
    const FourierState rebuilt =
        coherent_state(params, PacketSpec::make({0.4 + 1.3}, {1.0}), g);
    CHECK(max_coeff_diff(moved, rebuilt) < 1e-12);
}

TEST_CASE("inner products match the continuum gaussian overlap") {
    const double hbar = 0.02;
    const auto params = sqrt_params(hbar);
    const Profile g = Profile::gaussian(1);
    const double p0 = 1.0;

    const auto overlap_oracle = [&](double q1, double q2) {
        std::complex<double> acc = 0.0;
        for (int m = -3; m <= 3; ++m) {
            const double dq = q2 + kTwoPi * m - q1;
            acc += std::polar(std::exp(-dq * dq / (8.0 * params.alpha * params.alpha)),
                              -p0 * dq / hbar);
        }
        return acc;
    };

    const FourierState a = coherent_state(params, PacketSpec::make({0.0}, {p0}), g);
    const FourierState near = coherent_state(params, PacketSpec::make({0.3}, {p0}), g);
    const FourierState far = coherent_state(params, PacketSpec::make({kPi}, {p0}), g);

    CHECK(std::abs(inner_product(a, near) - overlap_oracle(0.0, 0.3)) < 1e-10);
    CHECK(std::abs(inner_product(a, far)) < 1e-10);

    CHECK(inner_product(a, a).imag() == 0.0);
    CHECK(inner_product(a, a).real() == doctest::Approx(a.norm_sq()).epsilon(1e-15));
    CHECK(std::abs(inner_product(a, near) - std::conj(inner_product(near, a))) <
          1e-15);
}

TEST_CASE("position density: uniform mode, packet peak, mass") {
    const Profile g = Profile::gaussian(1);

    const FourierState mode = single_mode(0.1, 3);
    for (double q : {0.0, 1.7, 5.2})
        CHECK(position_density(mode, {&q, 1}) ==
              doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));

    const auto params = sqrt_params(0.1);
    const FourierState psi = coherent_state(params, PacketSpec::make({2.5}, {0.0}), g);

    // direct series oracle at one point
    {
        const double q = 1.7;
        std::complex<double> amp = 0.0;
        const auto& w = psi.window();
        for (int k = w.lo()[0]; k <= w.hi()[0]; ++k) {
            const int kk[1] = {k};
            amp += psi.coeff(kk) * std::polar(1.0, k * q);
        }
        const double oracle = std::norm(amp) / kTwoPi;
        CHECK(position_density(psi, {&q, 1}) == doctest::Approx(oracle).epsilon(1e-13));
    }

    int argmax = 0;
    double best = -1.0;
    for (int i = 0; i < 256; ++i) {
        const double q = kTwoPi * i / 256.0;
        const double v = position_density(psi, {&q, 1});
        if (v > best) {
            best = v;
            argmax = i;
        }
    }
    CHECK(std::fabs(kTwoPi * argmax / 256.0 - 2.5) <= kTwoPi / 256.0 + 1e-12);

    // periodic trapezoid = plain Riemann mean; exact for a band-limited density
    double mass = 0.0;
    for (int i = 0; i < 512; ++i) {
        const double q = kTwoPi * i / 512.0;
        mass += position_density(psi, {&q, 1});
    }
    mass *= kTwoPi / 512.0;
    CHECK(std::fabs(mass - psi.norm_sq()) < 1e-10);
}

TEST_CASE("validation of parameters and mismatched operands") {
    CHECK_THROWS_AS(SemiclassicalParams::from_hbar(-0.1, 0.5, 1), ParamMismatch);
    CHECK_THROWS_AS(SemiclassicalParams::from_hbar(0.1, 0.5, 0), ParamMismatch);

    // q0 is reduced mod 2*pi
    const auto spec = PacketSpec::make({kTwoPi + 0.5}, {0.0});
    CHECK(spec.q0[0] == doctest::Approx(0.5).epsilon(1e-12));

    const FourierState a = single_mode(0.1, 0);
    const FourierState b = single_mode(0.2, 0);
    CHECK_THROWS_AS((void)inner_product(a, b), ParamMismatch);
}

TEST_CASE("json serialization round trip is exact") {
    const auto params = sqrt_params(0.1);
    const Profile g = Profile::gaussian(1);
    const FourierState psi =
        evolve(coherent_state(params, PacketSpec::make({0.7}, {1.0}), g), 0.37);

    const FourierState back = state_from_json(state_to_json(psi));
    CHECK(back.hbar() == psi.hbar());
    CHECK(back.window().lo() == psi.window().lo());
    CHECK(back.window().hi() == psi.window().hi());
    for (size_t i = 0; i < psi.coeffs().size(); ++i)
        CHECK(back.coeffs()[i] == psi.coeffs()[i]);
}
