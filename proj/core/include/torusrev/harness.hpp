#pragma once

#include <string>
#include <vector>

#include "torusrev/limits.hpp"
#include "torusrev/phasespace.hpp"
#include "torusrev/profile.hpp"
#include "torusrev/state.hpp"

namespace torusrev {

// Semiclassical sweep: strictly decreasing hbar values with the packet width
// slaved to alpha = hbar^gamma, gamma in (0,1). The standard sweep is
// hbar_n = 0.4 * 2^{-n}, n = 0..n_max, gamma = 1/2 — the largest lattice
// window then stays near 6/alpha <= ~54 modes per axis in d = 1.
struct HbarSchedule {
    std::vector<double> hbar_seq;
    double gamma = 0.5;

    static HbarSchedule standard(int n_max = 5, double gamma = 0.5);

    void validate() const;  // InvalidProfile-free: throws ParamMismatch
    int size() const { return static_cast<int>(hbar_seq.size()); }
    SemiclassicalParams params_at(int n, int dimension) const;
};

struct ConvergenceRow {
    int n = 0;
    double hbar = 0.0;
    double alpha = 0.0;
    double t_value = 0.0;
    double empirical = 0.0;
    double theoretical = 0.0;
    double abs_error = 0.0;
    std::string flags;  // semicolon-joined smallness-condition violations
};

// Concrete evaluation time for this hbar:
//   RationalRevival : (M/N)(2 pi/hbar) + B alpha/hbar
//   IrrationalScale : A (2 pi/hbar) + B alpha/hbar
//   GrowingAction   : (2 pi/hbar) ln(1/hbar)  (one divergent representative)
double realize_time(const TimeSchedule& sched, const SemiclassicalParams& params);

// Dimensionless smallness conditions, violated-at-ratio-5 tokens:
// "alpha>2pi/5", "p.pi<5hbar", "p.alpha<5hbar". Empty string when all hold.
std::string smallness_flags(const SemiclassicalParams& params, const PacketSpec& spec);

// One row per hbar: empirical = Husimi pairing of the evolved packet at the
// realized time, theoretical = the pairing against the predicted limit
// (drift placed per-row from the realized residual time). Rows are
// independent; threads > 1 computes them concurrently without changing any
// per-row reduction order.
std::vector<ConvergenceRow> run_convergence(const HbarSchedule& schedule,
                                            const TimeSchedule& tsched,
                                            const PacketSpec& spec,
                                            const Profile& profile,
                                            const Observable& obs, int threads = 1);

// |<psi_0, psi_t>|^2 on the inclusive uniform grid of `steps` points covering
// [0, T], T = 2 pi/hbar. Peaks sit at the fractional revivals t = (M/N) T.
struct ScanPoint {
    double t = 0.0;
    double value = 0.0;
};
std::vector<ScanPoint> revival_scan(const SemiclassicalParams& params,
                                    const PacketSpec& spec, const Profile& profile,
                                    int steps);

// Time-dilation factor lambda with hbar*lambda/alpha -> target along the
// sweep. Representatives: target = +inf -> (alpha/hbar)^2; finite B > 0 ->
// B*alpha/hbar (exact); target = 0 -> sqrt(alpha/hbar) (still -> infinity,
// so off-resonant frequencies average out).
double lambda_for_target(const SemiclassicalParams& params, double target);

// integral over t of window(t) * [Husimi pairing at time lambda*t], by
// adaptive quadrature to 1e-6. The pairing in t is the precomputed
// exponential sum, so each node costs O(#frequencies).
double time_averaged_pairing(const SemiclassicalParams& params, double lambda,
                             const PacketSpec& spec, const Profile& profile,
                             const Observable& obs, const TimeWindow& window,
                             const PairingControls& controls = {});

// Wigner pairing of the evolved packet against the observable composed with
// the inverse classical flow g^{-s}, s = t_value - A T (A = M/N, the
// irrational scale, or 0 for the growing schedule, where all of t is drift).
// Removes the divergent transport term: the result is stable in the residual
// offset while the plain pairing oscillates with it.
double flow_corrected_pairing(const SemiclassicalParams& params,
                              const PacketSpec& spec, const Profile& profile,
                              const Observable& obs, const TimeSchedule& tsched,
                              double t_value);

} // namespace torusrev
