#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "torusrev/lattice.hpp"
#include "torusrev/profile.hpp"

namespace torusrev {

// Scale pair of a semiclassical run: Planck constant hbar and packet width
// alpha (position std alpha, momentum std hbar/(2*alpha)).
struct SemiclassicalParams {
    double hbar = 0.1;
    double alpha = 0.31622776601683794;
    int dimension = 1;

    // one full revival of the free evolution on the 2*pi torus
    double revival_time() const { return 2.0 * 3.14159265358979323846 / hbar; }
    void validate() const;

    static SemiclassicalParams from_hbar(double hbar, double gamma, int dimension);
};

// Packet center (q0, p0); q0 lives in the fundamental cell [0, 2*pi)^d.
struct PacketSpec {
    std::vector<double> q0;
    std::vector<double> p0;

    static PacketSpec make(std::vector<double> q0, std::vector<double> p0);
    int dimension() const { return static_cast<int>(q0.size()); }
};

// Truncated Fourier representation of a wave function on the torus:
//   psi(x) = (2*pi)^{-d/2} * sum_k c_k e^{i k.x},  k in a lattice window.
// Coefficients are stored lexicographically over the window; all reductions
// walk that order with compensated accumulation (determinism contract).
class FourierState {
public:
    FourierState() = default;
    FourierState(double hbar, LatticeWindow window,
                 std::vector<std::complex<double>> coeffs);

    int dimension() const { return window_.dimension(); }
    double hbar() const { return hbar_; }
    const LatticeWindow& window() const { return window_; }
    std::span<const std::complex<double>> coeffs() const { return coeffs_; }
    std::span<std::complex<double>> coeffs() { return coeffs_; }

    // 0 outside the window
    std::complex<double> coeff(std::span<const int> k) const;

    double norm_sq() const;

private:
    double hbar_ = 0.0;
    LatticeWindow window_;
    std::vector<std::complex<double>> coeffs_;
};

struct CoherentStateOptions {
    // window halfwidth ceil(tail_width / alpha) per axis keeps the dropped
    // envelope mass below ~1e-14 at the default 6.0
    double tail_width = 6.0;
    std::int64_t max_points = std::int64_t{1} << 22;
};

// Periodized coherent state centered at (q0, p0):
//   c_k = alpha^{d/2} e^{-i k.q0} fourier(alpha * (k - p0/hbar)),
// windowed to round(p0/hbar) +- ceil(tail_width/alpha) per axis.
FourierState coherent_state(const SemiclassicalParams& params,
                            const PacketSpec& spec, const Profile& profile,
                            const CoherentStateOptions& options = {});

// Free evolution: multiplies c_k by e^{-i hbar t |k|^2}. Exact and unitary.
FourierState evolve(const FourierState& state, double t);

// Torus translation by dq: multiplies c_k by e^{-i k.dq}.
FourierState translate(const FourierState& state, std::span<const double> dq);

// (a, b) = sum_k conj(a_k) b_k over the window union; missing modes are 0.
std::complex<double> inner_product(const FourierState& a, const FourierState& b);

// |psi(q)|^2 at one point.
double position_density(const FourierState& state, std::span<const double> q);

} // namespace torusrev
