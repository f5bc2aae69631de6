#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "torusrev/phasespace.hpp"
#include "torusrev/profile.hpp"
#include "torusrev/state.hpp"

namespace torusrev {

// How the evaluation time t scales with hbar:
//   RationalRevival : t = (M/N) * T + B * alpha/hbar   (T = 2*pi/hbar)
//   IrrationalScale : t = A * T + B * alpha/hbar, A declared irrational
//   GrowingAction   : t = T * ln(1/hbar)
// B >= 0 measures the residual offset in packet-spreading units; B = +inf is
// the far-from-revival sentinel.
struct TimeSchedule {
    enum class Kind { RationalRevival, IrrationalScale, GrowingAction };

    Kind kind = Kind::RationalRevival;
    std::int64_t m = 0;
    std::int64_t n = 1;
    double a = 0.0;
    double b = 0.0;

    static TimeSchedule rational(std::int64_t m, std::int64_t n, double b);
    static TimeSchedule irrational(double a, double b);
    static TimeSchedule growing();
};

enum class Regime { Equidistribution, FractionalRevival };

// FractionalRevival only for rational fractions observed at finite residual B.
Regime classify_schedule(const TimeSchedule& schedule);

// Copy lattice of the fractional revival at t = (M/N) T, per axis:
// n_prime copies spaced 2*pi/n_prime, all shifted by delta_q0 = gamma*2*pi/N
// (gamma = 1 exactly when N = 2 mod 4). In d dimensions the copy set is the
// tensor power, n_prime^d copies of weight n_prime^{-d} each.
struct RevivalStructure {
    std::int64_t n_prime = 1;
    int gamma = 0;
    double delta_q0 = 0.0;
};

RevivalStructure revival_structure(std::int64_t m, std::int64_t n);

// Smoothed copy profile: delta_B(q) = (2*pi)^{-d} sum_j autocorr(B*j) e^{i j.q}.
// Strictly positive for Gaussian envelopes; integrates to 1 over the torus.
double copy_density(const Profile& profile, double width_b,
                    std::span<const double> q);

// The Gaussian copy profile evaluated through its two series: the momentum
// (Fourier) sum and the position (image/theta) sum. Returns {fourier, image}.
std::pair<double, double> theta_identity_check(double width_b,
                                               std::span<const double> q, int d);

// Time-averaging window b(t): box indicator or Gaussian bump, height 1.
struct TimeWindow {
    enum class Kind { Box, Gaussian };
    Kind kind = Kind::Box;
    double t0 = 0.0, t1 = 1.0;      // box
    double center = 0.0, sigma = 1.0;  // gaussian

    static TimeWindow box(double t0, double t1);
    static TimeWindow gaussian(double center, double sigma);

    double value(double t) const;
    double integral() const;
    double lo() const;  // quadrature support
    double hi() const;
};

// Weak limit of the Husimi transform along a schedule. Variants:
//   UniformShell   : uniform in q times delta(p - p0)
//   RevivalMixture : n_prime^{-d} sum over copy centers of
//                    delta_B(q - center) delta(p - p0)
//   TimeAveraged   : the b-weighted resonant time average (time_average_limit)
class LimitMeasure {
public:
    enum class Kind { UniformShell, RevivalMixture, TimeAveraged };

    static LimitMeasure uniform_shell(const PacketSpec& packet);
    // residual_time tau places the drifted copy centers at q0 + 2 p0 tau + lattice
    static LimitMeasure revival_mixture(const PacketSpec& packet, const Profile& profile,
                                        const RevivalStructure& structure, double width_b,
                                        std::vector<double> drift);
    static LimitMeasure time_averaged(const PacketSpec& packet, const Profile& profile,
                                      double width_b, const TimeWindow& window);

    Kind kind() const { return kind_; }
    int dimension() const { return static_cast<int>(p0_.size()); }
    std::span<const double> p0() const { return p0_; }
    std::span<const double> q0() const { return q0_; }
    double width_b() const { return width_b_; }
    const RevivalStructure& structure() const { return structure_; }
    const Profile& profile() const { return profile_; }
    const TimeWindow& window() const { return window_; }

    // copy centers in the fundamental cell, lexicographic over the copy lattice
    std::vector<std::vector<double>> centers() const;
    double copy_weight() const;  // n_prime^{-d}

private:
    LimitMeasure() : profile_(Profile::gaussian(1)) {}

    Kind kind_ = Kind::UniformShell;
    std::vector<double> p0_, q0_, drift_;
    double width_b_ = 0.0;
    RevivalStructure structure_;
    Profile profile_;
    TimeWindow window_;
};

// Builds the limit predicted for the schedule. Rational schedules with finite
// B and p0 != 0 need the residual time to resolve the copy drift
// (DriftUnresolved otherwise); pass the realized B*alpha/hbar of the row.
LimitMeasure limit_measure(const TimeSchedule& schedule, const PacketSpec& packet,
                           const Profile& profile,
                           std::optional<double> residual_time = std::nullopt);

// integral of the observable against the measure. Exact finite sums for the
// shell and mixture variants; the time-averaged variant normalizes
// time_average_limit by the window integral.
double pair_limit_observable(const LimitMeasure& measure, const Observable& obs);

// Is p0 orthogonal to some nonzero integer frequency within |j|_inf <= bound?
// (relative tolerance 1e-12)
bool resonant(std::span<const double> p0, int bound);

// Limit of the b-weighted time average of the pairing: only resonant
// frequencies survive,
//   sum over terms with j.p0 = 0 of weight * window(p0) * e^{i j.q0}
//     * integral b(t) autocorr(B t j) dt.
// Includes the integral-of-b scale (constant observable gives exactly that).
double time_average_limit(const Observable& obs, const PacketSpec& packet,
                          const Profile& profile, double width_b,
                          const TimeWindow& window);

// Free classical flow on the torus: q -> q + 2 p t (mod 2*pi), p fixed.
struct FlowPoint {
    std::vector<double> q;
    std::vector<double> p;
};
FlowPoint classical_flow(std::span<const double> q, std::span<const double> p,
                         double t);

} // namespace torusrev
