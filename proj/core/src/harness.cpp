#include "torusrev/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "torusrev/ksum.hpp"
#include "torusrev/parallel.hpp"
#include "torusrev/quadrature.hpp"
#include "torusrev/vecmath.hpp"

namespace torusrev {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFlagRatio = 5.0;
} // namespace

HbarSchedule HbarSchedule::standard(int n_max, double gamma) {
    if (n_max < 0) throw ParamMismatch("HbarSchedule: n_max must be >= 0");
    HbarSchedule s;
    s.gamma = gamma;
    s.hbar_seq.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) s.hbar_seq.push_back(0.4 * std::ldexp(1.0, -n));
    s.validate();
    return s;
}

void HbarSchedule::validate() const {
    if (hbar_seq.empty()) throw ParamMismatch("HbarSchedule: empty sequence");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw ParamMismatch("HbarSchedule: gamma must lie in (0,1)");
    double prev = std::numeric_limits<double>::infinity();
    for (double h : hbar_seq) {
        if (!(h > 0.0) || !std::isfinite(h))
            throw ParamMismatch("HbarSchedule: hbar values must be positive");
        if (!(h < prev))
            throw ParamMismatch("HbarSchedule: hbar values must strictly decrease");
        prev = h;
    }
}

SemiclassicalParams HbarSchedule::params_at(int n, int dimension) const {
    if (n < 0 || n >= size()) throw ParamMismatch("HbarSchedule: index out of range");
    return SemiclassicalParams::from_hbar(hbar_seq[n], gamma, dimension);
}

double realize_time(const TimeSchedule& sched, const SemiclassicalParams& params) {
    const double period = params.revival_time();
    switch (sched.kind) {
        case TimeSchedule::Kind::RationalRevival:
            return (static_cast<double>(sched.m) / static_cast<double>(sched.n)) *
                       period +
                   sched.b * params.alpha / params.hbar;
        case TimeSchedule::Kind::IrrationalScale:
            return sched.a * period + sched.b * params.alpha / params.hbar;
        case TimeSchedule::Kind::GrowingAction:
            return period * std::log(1.0 / params.hbar);
    }
    throw ParamMismatch("realize_time: unknown kind");
}

std::string smallness_flags(const SemiclassicalParams& params,
                            const PacketSpec& spec) {
    const double pbar = std::sqrt(norm_sq(std::span<const double>(spec.p0)));
    std::string out;
    auto append = [&out](const char* token) {
        if (!out.empty()) out += ';';
        out += token;
    };
    if (params.alpha > kTwoPi / kFlagRatio) append("alpha>2pi/5");
    if (pbar * kPi < kFlagRatio * params.hbar) append("p.pi<5hbar");
    if (pbar * params.alpha < kFlagRatio * params.hbar) append("p.alpha<5hbar");
    return out;
}

std::vector<ConvergenceRow> run_convergence(const HbarSchedule& schedule,
                                            const TimeSchedule& tsched,
                                            const PacketSpec& spec,
                                            const Profile& profile,
                                            const Observable& obs, int threads) {
    schedule.validate();
    const int d = spec.dimension();
    if (profile.dimension() != d || obs.dimension() != d)
        throw ParamMismatch("run_convergence: dimension mismatch");

    std::vector<ConvergenceRow> rows(schedule.size());
    parallel_for(schedule.size(), threads, [&](std::int64_t i) {
        const int n = static_cast<int>(i);
        const SemiclassicalParams params = schedule.params_at(n, d);
        const double t = realize_time(tsched, params);

        const FourierState state = coherent_state(params, spec, profile);
        const HusimiPairingPlan plan(state, params, profile, obs);
        const double empirical = plan.value_at(t);

        // the realized residual B*alpha/hbar places the drifted copy centers
        std::optional<double> residual;
        if (tsched.kind == TimeSchedule::Kind::RationalRevival &&
            std::isfinite(tsched.b))
            residual = tsched.b * params.alpha / params.hbar;
        const LimitMeasure measure = limit_measure(tsched, spec, profile, residual);
        const double theoretical = pair_limit_observable(measure, obs);

        ConvergenceRow& row = rows[n];
        row.n = n;
        row.hbar = params.hbar;
        row.alpha = params.alpha;
        row.t_value = t;
        row.empirical = empirical;
        row.theoretical = theoretical;
        row.abs_error = std::fabs(empirical - theoretical);
        row.flags = smallness_flags(params, spec);
    });
    return rows;
}

std::vector<ScanPoint> revival_scan(const SemiclassicalParams& params,
                                    const PacketSpec& spec, const Profile& profile,
                                    int steps) {
    if (steps < 2) throw ParamMismatch("revival_scan: need at least 2 grid points");
    const FourierState state = coherent_state(params, spec, profile);

    // <psi_0, psi_t> = sum_k |c_k|^2 e^{-i hbar t |k|^2}: group mass by the
    // integer action |k|^2 so each grid point is a short exponential sum
    std::map<std::int64_t, double> mass;
    std::int64_t idx = 0;
    state.window().for_each([&](std::span<const int> k) {
        std::int64_t s = 0;
        for (int v : k) s += static_cast<std::int64_t>(v) * v;
        mass[s] += std::norm(state.coeffs()[idx++]);
    });

    const double period = params.revival_time();
    std::vector<ScanPoint> out(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = period * static_cast<double>(i) / (steps - 1);
        KahanSum<std::complex<double>> acc;
        for (const auto& [s, m] : mass)
            acc.add(m * std::polar(1.0, -params.hbar * t * static_cast<double>(s)));
        out[i] = {t, std::norm(acc.get())};
    }
    return out;
}

double lambda_for_target(const SemiclassicalParams& params, double target) {
    const double ratio = params.alpha / params.hbar;
    if (std::isinf(target)) return ratio * ratio;
    if (target == 0.0) return std::sqrt(ratio);
    if (!(target > 0.0))
        throw ParamMismatch("lambda_for_target: target must be >= 0 or +inf");
    return target * ratio;
}

double time_averaged_pairing(const SemiclassicalParams& params, double lambda,
                             const PacketSpec& spec, const Profile& profile,
                             const Observable& obs, const TimeWindow& window,
                             const PairingControls& controls) {
    if (!(lambda > 0.0)) throw ParamMismatch("time_averaged_pairing: lambda <= 0");
    const FourierState state = coherent_state(params, spec, profile);
    const HusimiPairingPlan plan(state, params, profile, obs, controls);

    QuadratureControls qc;
    qc.abs_tol = 1e-6;
    qc.fail_tol = 1e-4;
    qc.max_nodes = 1 << 18;  // dilated frequencies need dense grids
    qc.initial_intervals = 256;
    auto f = [&](double t) { return window.value(t) * plan.value_at(lambda * t); };
    return integrate_real(f, window.lo(), window.hi(), qc).value;
}

double flow_corrected_pairing(const SemiclassicalParams& params,
                              const PacketSpec& spec, const Profile& profile,
                              const Observable& obs, const TimeSchedule& tsched,
                              double t_value) {
    double scale = 0.0;  // A: the revival fraction the flow correction keeps
    switch (tsched.kind) {
        case TimeSchedule::Kind::RationalRevival:
            scale = static_cast<double>(tsched.m) / static_cast<double>(tsched.n);
            break;
        case TimeSchedule::Kind::IrrationalScale:
            scale = tsched.a;
            break;
        case TimeSchedule::Kind::GrowingAction:
            scale = 0.0;
            break;
    }
    const double s = t_value - scale * params.revival_time();
    const FourierState evolved =
        evolve(coherent_state(params, spec, profile), t_value);
    return pair_wigner_observable(evolved, obs, s);
}

} // namespace torusrev
