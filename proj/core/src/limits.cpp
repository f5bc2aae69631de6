#include "torusrev/limits.hpp"

#include <cmath>
#include <numeric>

#include "torusrev/ksum.hpp"
#include "torusrev/quadrature.hpp"
#include "torusrev/vecmath.hpp"

namespace torusrev {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
// exp(-x) < 1e-16 for x > 36.8; series cutoffs reach a little further
constexpr double kSeriesReach = 8.6;
} // namespace

// ---------------------------------------------------------------------------
// schedules

TimeSchedule TimeSchedule::rational(std::int64_t m, std::int64_t n, double b) {
    if (n < 1) throw ParamMismatch("TimeSchedule: denominator must be >= 1");
    if (m < 0) throw ParamMismatch("TimeSchedule: numerator must be >= 0");
    if (std::gcd(m, n) != 1)
        throw NonIrreducible("TimeSchedule: " + std::to_string(m) + "/" +
                             std::to_string(n) + " is not in lowest terms");
    if (!(b >= 0.0)) throw ParamMismatch("TimeSchedule: residual B must be >= 0");
    TimeSchedule s;
    s.kind = Kind::RationalRevival;
    s.m = m;
    s.n = n;
    s.b = b;
    return s;
}

TimeSchedule TimeSchedule::irrational(double a, double b) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw ParamMismatch("TimeSchedule: scale A must be positive and finite");
    if (!(b >= 0.0)) throw ParamMismatch("TimeSchedule: residual B must be >= 0");
    TimeSchedule s;
    s.kind = Kind::IrrationalScale;
    s.a = a;
    s.b = b;
    return s;
}

TimeSchedule TimeSchedule::growing() {
    TimeSchedule s;
    s.kind = Kind::GrowingAction;
    return s;
}

Regime classify_schedule(const TimeSchedule& schedule) {
    switch (schedule.kind) {
        case TimeSchedule::Kind::RationalRevival:
            return std::isinf(schedule.b) ? Regime::Equidistribution
                                          : Regime::FractionalRevival;
        case TimeSchedule::Kind::IrrationalScale:
        case TimeSchedule::Kind::GrowingAction:
            return Regime::Equidistribution;
    }
    throw ParamMismatch("classify_schedule: unknown kind");
}

RevivalStructure revival_structure(std::int64_t m, std::int64_t n) {
    if (n < 1 || m < 0 || std::gcd(m, n) != 1)
        throw NonIrreducible("revival_structure: fraction not in lowest terms");
    RevivalStructure rs;
    if (n % 2 == 1) {
        rs.n_prime = n;
        rs.gamma = 0;
    } else if (n % 4 == 0) {
        rs.n_prime = n / 2;
        rs.gamma = 0;
    } else {  // n = 2 mod 4
        rs.n_prime = n / 2;
        rs.gamma = 1;
    }
    rs.delta_q0 = rs.gamma * kTwoPi / static_cast<double>(n);
    return rs;
}

// ---------------------------------------------------------------------------
// copy profile

double copy_density(const Profile& profile, double width_b,
                    std::span<const double> q) {
    if (width_b == 0.0)
        throw SingularAtZeroWidth("copy_density: width 0 is a point mass");
    if (!(width_b > 0.0)) throw ParamMismatch("copy_density: width must be positive");
    const int d = profile.dimension();
    if (static_cast<int>(q.size()) != d)
        throw ParamMismatch("copy_density: point rank mismatch");

    // frequency cutoff: Gaussian autocorrelation dies at |B j| ~ 8.6; sampled
    // envelopes vanish exactly once the shifted supports separate
    int reach;
    if (profile.kind() == ProfileKind::Gaussian)
        reach = static_cast<int>(std::ceil(kSeriesReach / width_b));
    else
        reach = static_cast<int>(std::ceil((profile.box_halfwidth() + 1.0) / width_b));

    LatticeWindow box(std::vector<int>(d, -reach), std::vector<int>(d, reach));
    std::vector<double> shift(d);
    KahanSum<std::complex<double>> acc;
    box.for_each([&](std::span<const int> j) {
        for (int a = 0; a < d; ++a) shift[a] = width_b * j[a];
        acc.add(profile.autocorrelation(shift) * std::polar(1.0, dot(j, q)));
    });
    return acc.get().real() * std::pow(kTwoPi, -d);
}

std::pair<double, double> theta_identity_check(double width_b,
                                               std::span<const double> q, int d) {
    if (width_b == 0.0)
        throw SingularAtZeroWidth("theta_identity_check: width 0 is a point mass");
    const Profile gauss = Profile::gaussian(d);
    const double fourier_form = copy_density(gauss, width_b, q);

    // image form: product over axes of (2 pi B^2)^{-1/2} sum_n e^{-(q-2 pi n)^2/(2B^2)}
    double image_form = 1.0;
    const double reach = kSeriesReach * width_b;
    for (int a = 0; a < d; ++a) {
        const int nlo = static_cast<int>(std::floor((q[a] - reach) / kTwoPi)) - 1;
        const int nhi = static_cast<int>(std::ceil((q[a] + reach) / kTwoPi)) + 1;
        KahanSum<double> axis;
        for (int n = nlo; n <= nhi; ++n) {
            const double u = q[a] - kTwoPi * n;
            axis.add(std::exp(-u * u / (2.0 * width_b * width_b)));
        }
        image_form *= axis.get() / std::sqrt(kTwoPi * width_b * width_b);
    }
    return {fourier_form, image_form};
}

// ---------------------------------------------------------------------------
// time windows

TimeWindow TimeWindow::box(double t0, double t1) {
    if (!(t1 > t0)) throw ParamMismatch("TimeWindow: box needs t1 > t0");
    TimeWindow w;
    w.kind = Kind::Box;
    w.t0 = t0;
    w.t1 = t1;
    return w;
}

TimeWindow TimeWindow::gaussian(double center, double sigma) {
    if (!(sigma > 0.0)) throw ParamMismatch("TimeWindow: sigma must be positive");
    TimeWindow w;
    w.kind = Kind::Gaussian;
    w.center = center;
    w.sigma = sigma;
    return w;
}

double TimeWindow::value(double t) const {
    if (kind == Kind::Box) return (t >= t0 && t <= t1) ? 1.0 : 0.0;
    const double u = (t - center) / sigma;
    return std::exp(-0.5 * u * u);
}

double TimeWindow::integral() const {
    if (kind == Kind::Box) return t1 - t0;
    return sigma * std::sqrt(kTwoPi);
}

double TimeWindow::lo() const {
    return kind == Kind::Box ? t0 : center - 9.0 * sigma;
}

double TimeWindow::hi() const {
    return kind == Kind::Box ? t1 : center + 9.0 * sigma;
}

// ---------------------------------------------------------------------------
// limit measures

LimitMeasure LimitMeasure::uniform_shell(const PacketSpec& packet) {
    LimitMeasure m;
    m.kind_ = Kind::UniformShell;
    m.p0_ = packet.p0;
    m.q0_ = packet.q0;
    return m;
}

LimitMeasure LimitMeasure::revival_mixture(const PacketSpec& packet,
                                           const Profile& profile,
                                           const RevivalStructure& structure,
                                           double width_b, std::vector<double> drift) {
    if (profile.dimension() != packet.dimension())
        throw ParamMismatch("LimitMeasure: profile dimension mismatch");
    if (!(width_b >= 0.0))
        throw ParamMismatch("LimitMeasure: width B must be >= 0");
    if (drift.size() != packet.q0.size())
        throw ParamMismatch("LimitMeasure: drift rank mismatch");
    LimitMeasure m;
    m.kind_ = Kind::RevivalMixture;
    m.p0_ = packet.p0;
    m.q0_ = packet.q0;
    m.profile_ = profile;
    m.structure_ = structure;
    m.width_b_ = width_b;
    m.drift_ = std::move(drift);
    return m;
}

LimitMeasure LimitMeasure::time_averaged(const PacketSpec& packet,
                                         const Profile& profile, double width_b,
                                         const TimeWindow& window) {
    if (profile.dimension() != packet.dimension())
        throw ParamMismatch("LimitMeasure: profile dimension mismatch");
    LimitMeasure m;
    m.kind_ = Kind::TimeAveraged;
    m.p0_ = packet.p0;
    m.q0_ = packet.q0;
    m.profile_ = profile;
    m.width_b_ = width_b;
    m.window_ = window;
    return m;
}

std::vector<std::vector<double>> LimitMeasure::centers() const {
    const int d = dimension();
    if (kind_ != Kind::RevivalMixture)
        return {std::vector<double>(q0_.begin(), q0_.end())};
    const auto np = structure_.n_prime;
    std::vector<std::vector<double>> out;
    LatticeWindow lattice(std::vector<int>(d, 0),
                          std::vector<int>(d, static_cast<int>(np) - 1));
    out.reserve(lattice.size());
    lattice.for_each([&](std::span<const int> l) {
        std::vector<double> c(d);
        for (int a = 0; a < d; ++a)
            c[a] = wrap_2pi(q0_[a] + drift_[a] + structure_.delta_q0 +
                            kTwoPi * l[a] / static_cast<double>(np));
        out.push_back(std::move(c));
    });
    return out;
}

double LimitMeasure::copy_weight() const {
    if (kind_ != Kind::RevivalMixture) return 1.0;
    return std::pow(static_cast<double>(structure_.n_prime), -dimension());
}

LimitMeasure limit_measure(const TimeSchedule& schedule, const PacketSpec& packet,
                           const Profile& profile,
                           std::optional<double> residual_time) {
    if (classify_schedule(schedule) == Regime::Equidistribution)
        return LimitMeasure::uniform_shell(packet);

    const int d = packet.dimension();
    bool moving = false;
    for (double p : packet.p0)
        if (p != 0.0) moving = true;
    std::vector<double> drift(d, 0.0);
    if (moving && schedule.b > 0.0) {
        if (!residual_time)
            throw DriftUnresolved(
                "limit_measure: p0 != 0 with a residual offset needs the realized "
                "residual time to place the copy centers");
        for (int a = 0; a < d; ++a) drift[a] = 2.0 * packet.p0[a] * *residual_time;
    }
    return LimitMeasure::revival_mixture(packet, profile,
                                         revival_structure(schedule.m, schedule.n),
                                         schedule.b, std::move(drift));
}

double pair_limit_observable(const LimitMeasure& measure, const Observable& obs) {
    const int d = measure.dimension();
    if (obs.dimension() != d)
        throw ParamMismatch("pair_limit_observable: dimension mismatch");

    switch (measure.kind()) {
        case LimitMeasure::Kind::UniformShell:
            return obs.mean_at(measure.p0());

        case LimitMeasure::Kind::RevivalMixture: {
            // (1/N'^d) sum over centers of a^(B)(center, p0), where a^(B)
            // multiplies the j-th q-coefficient by sigma_{Bj}
            const auto centers = measure.centers();
            std::vector<double> shift(d);
            KahanSum<std::complex<double>> acc;
            for (const auto& term : obs.terms()) {
                const double win = Observable::window_value(term, measure.p0());
                if (win == 0.0) continue;
                std::complex<double> sigma{1.0, 0.0};
                if (measure.width_b() > 0.0) {
                    for (int a = 0; a < d; ++a)
                        shift[a] = measure.width_b() * term.j[a];
                    sigma = measure.profile().autocorrelation(shift);
                }
                for (const auto& c : centers)
                    acc.add(term.weight * win * sigma *
                            std::polar(1.0, dot(term.j, c)));
            }
            return acc.get().real() * measure.copy_weight();
        }

        case LimitMeasure::Kind::TimeAveraged: {
            PacketSpec packet = PacketSpec::make(
                std::vector<double>(measure.q0().begin(), measure.q0().end()),
                std::vector<double>(measure.p0().begin(), measure.p0().end()));
            return time_average_limit(obs, packet, measure.profile(),
                                      measure.width_b(), measure.window()) /
                   measure.window().integral();
        }
    }
    throw ParamMismatch("pair_limit_observable: unknown measure kind");
}

bool resonant(std::span<const double> p0, int bound) {
    if (bound < 1) throw ParamMismatch("resonant: bound must be >= 1");
    const int d = static_cast<int>(p0.size());
    const double tol = 1e-12 * std::sqrt(norm_sq(p0));
    LatticeWindow box(std::vector<int>(d, -bound), std::vector<int>(d, bound));
    bool found = false;
    box.for_each([&](std::span<const int> j) {
        if (found || is_zero_tuple(j)) return;
        if (std::fabs(dot(j, p0)) <= tol) found = true;
    });
    return found;
}

double time_average_limit(const Observable& obs, const PacketSpec& packet,
                          const Profile& profile, double width_b,
                          const TimeWindow& window) {
    const int d = packet.dimension();
    if (obs.dimension() != d || profile.dimension() != d)
        throw ParamMismatch("time_average_limit: dimension mismatch");
    if (!(width_b >= 0.0))
        throw ParamMismatch("time_average_limit: width B must be >= 0");

    const double tol =
        1e-12 * std::sqrt(norm_sq(std::span<const double>(packet.p0)));
    KahanSum<std::complex<double>> acc;
    std::vector<double> shift(d);
    for (const auto& term : obs.terms()) {
        if (std::fabs(dot(term.j, packet.p0)) > tol) continue;  // averaged away
        const double win = Observable::window_value(term, packet.p0);
        if (win == 0.0) continue;

        const bool zero_j = is_zero_tuple(term.j);
        // width infinity: sigma_{Btj} vanishes for every t != 0 and j != 0
        if (!zero_j && std::isinf(width_b)) continue;

        std::complex<double> tint;
        if (zero_j || width_b == 0.0) {
            tint = window.integral();
        } else {
            auto f = [&](double t) {
                for (int a = 0; a < d; ++a) shift[a] = width_b * t * term.j[a];
                return window.value(t) * profile.autocorrelation(shift);
            };
            tint = integrate_complex(f, window.lo(), window.hi()).value;
        }
        acc.add(term.weight * win * tint * std::polar(1.0, dot(term.j, packet.q0)));
    }
    return acc.get().real();
}

FlowPoint classical_flow(std::span<const double> q, std::span<const double> p,
                         double t) {
    if (q.size() != p.size())
        throw ParamMismatch("classical_flow: rank mismatch");
    FlowPoint out;
    out.q.resize(q.size());
    out.p.assign(p.begin(), p.end());
    for (size_t a = 0; a < q.size(); ++a) out.q[a] = wrap_2pi(q[a] + 2.0 * p[a] * t);
    return out;
}

} // namespace torusrev
