#include "torusrev/state.hpp"

#include <cmath>

#include "torusrev/ksum.hpp"
#include "torusrev/vecmath.hpp"

namespace torusrev {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void SemiclassicalParams::validate() const {
    if (!(hbar > 0.0)) throw ParamMismatch("SemiclassicalParams: hbar must be positive");
    if (!(alpha > 0.0)) throw ParamMismatch("SemiclassicalParams: alpha must be positive");
    if (dimension < 1) throw ParamMismatch("SemiclassicalParams: dimension must be >= 1");
}

SemiclassicalParams SemiclassicalParams::from_hbar(double hbar, double gamma,
                                                   int dimension) {
    SemiclassicalParams p{hbar, std::pow(hbar, gamma), dimension};
    p.validate();
    return p;
}

PacketSpec PacketSpec::make(std::vector<double> q0, std::vector<double> p0) {
    if (q0.size() != p0.size() || q0.empty())
        throw ParamMismatch("PacketSpec: q0/p0 rank mismatch");
    for (double& q : q0) q = wrap_2pi(q);
    return PacketSpec{std::move(q0), std::move(p0)};
}

FourierState::FourierState(double hbar, LatticeWindow window,
                           std::vector<std::complex<double>> coeffs)
    : hbar_(hbar), window_(std::move(window)), coeffs_(std::move(coeffs)) {
    if (!(hbar_ > 0.0)) throw ParamMismatch("FourierState: hbar must be positive");
    if (static_cast<std::int64_t>(coeffs_.size()) != window_.size())
        throw ParamMismatch("FourierState: coefficient count does not match window");
}

std::complex<double> FourierState::coeff(std::span<const int> k) const {
    if (!window_.contains(k)) return {0.0, 0.0};
    return coeffs_[window_.flatten(k)];
}

double FourierState::norm_sq() const {
    KahanSum<double> acc;
    for (const auto& c : coeffs_) acc.add(std::norm(c));
    return acc.get();
}

FourierState coherent_state(const SemiclassicalParams& params,
                            const PacketSpec& spec, const Profile& profile,
                            const CoherentStateOptions& options) {
    params.validate();
    const int d = params.dimension;
    if (spec.dimension() != d || profile.dimension() != d)
        throw ParamMismatch("coherent_state: dimension mismatch");

    const int halfwidth = static_cast<int>(std::ceil(options.tail_width / params.alpha));
    std::vector<int> lo(d), hi(d);
    std::vector<double> carrier(d);  // p0/hbar per axis
    for (int a = 0; a < d; ++a) {
        carrier[a] = spec.p0[a] / params.hbar;
        const int center = static_cast<int>(std::llround(carrier[a]));
        lo[a] = center - halfwidth;
        hi[a] = center + halfwidth;
    }
    LatticeWindow window(std::move(lo), std::move(hi));
    if (window.size() > options.max_points)
        throw WindowOverflow("coherent_state: window of " + std::to_string(window.size()) +
                             " points exceeds the budget of " +
                             std::to_string(options.max_points));

    const double scale = std::pow(params.alpha, 0.5 * d);
    std::vector<std::complex<double>> coeffs(window.size());

    if (profile.kind() == ProfileKind::Gaussian) {
        // the envelope transform factorizes; build per-axis tables once
        std::vector<std::vector<double>> axis(d);
        const double pref = std::pow(2.0 / kPi, 0.25);
        for (int a = 0; a < d; ++a) {
            axis[a].resize(window.extent(a));
            for (int i = 0; i < window.extent(a); ++i) {
                const double xi = params.alpha * (window.lo()[a] + i - carrier[a]);
                axis[a][i] = pref * std::exp(-xi * xi);
            }
        }
        std::int64_t idx = 0;
        window.for_each([&](std::span<const int> k) {
            double mag = scale;
            double phase = 0.0;
            for (int a = 0; a < d; ++a) {
                mag *= axis[a][k[a] - window.lo()[a]];
                phase -= k[a] * spec.q0[a];
            }
            coeffs[idx++] = std::polar(mag, phase);
        });
    } else {
        std::vector<double> xi(d);
        std::int64_t idx = 0;
        window.for_each([&](std::span<const int> k) {
            double phase = 0.0;
            for (int a = 0; a < d; ++a) {
                xi[a] = params.alpha * (k[a] - carrier[a]);
                phase -= k[a] * spec.q0[a];
            }
            coeffs[idx++] = scale * profile.fourier(xi) * std::polar(1.0, phase);
        });
    }
    return FourierState(params.hbar, std::move(window), std::move(coeffs));
}

FourierState evolve(const FourierState& state, double t) {
    std::vector<std::complex<double>> coeffs(state.coeffs().begin(),
                                             state.coeffs().end());
    const double ht = state.hbar() * t;
    std::int64_t idx = 0;
    state.window().for_each([&](std::span<const int> k) {
        coeffs[idx] *= std::polar(1.0, -ht * norm_sq(k));
        ++idx;
    });
    return FourierState(state.hbar(), state.window(), std::move(coeffs));
}

FourierState translate(const FourierState& state, std::span<const double> dq) {
    if (static_cast<int>(dq.size()) != state.dimension())
        throw ParamMismatch("translate: displacement rank mismatch");
    std::vector<std::complex<double>> coeffs(state.coeffs().begin(),
                                             state.coeffs().end());
    std::int64_t idx = 0;
    state.window().for_each([&](std::span<const int> k) {
        coeffs[idx] *= std::polar(1.0, -dot(k, dq));
        ++idx;
    });
    return FourierState(state.hbar(), state.window(), std::move(coeffs));
}

std::complex<double> inner_product(const FourierState& a, const FourierState& b) {
    if (a.dimension() != b.dimension())
        throw ParamMismatch("inner_product: dimension mismatch");
    if (a.hbar() != b.hbar())
        throw ParamMismatch("inner_product: hbar mismatch");
    const LatticeWindow joint = window_union(a.window(), b.window());
    KahanSum<std::complex<double>> acc;
    joint.for_each([&](std::span<const int> k) {
        acc.add(std::conj(a.coeff(k)) * b.coeff(k));
    });
    return acc.get();
}

double position_density(const FourierState& state, std::span<const double> q) {
    if (static_cast<int>(q.size()) != state.dimension())
        throw ParamMismatch("position_density: point rank mismatch");
    KahanSum<std::complex<double>> acc;
    std::int64_t idx = 0;
    state.window().for_each([&](std::span<const int> k) {
        acc.add(state.coeffs()[idx] * std::polar(1.0, dot(k, q)));
        ++idx;
    });
    const double amp = std::abs(acc.get());
    return amp * amp * std::pow(2.0 * kPi, -state.dimension());
}

} // namespace torusrev
