#include "torusrev/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "torusrev/ksum.hpp"
#include "torusrev/parallel.hpp"
#include "torusrev/quadrature.hpp"
#include "torusrev/vecmath.hpp"

namespace torusrev {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

bool is_zero(std::span<const int> j) {
    for (int v : j)
        if (v != 0) return false;
    return true;
}
} // namespace

// ---------------------------------------------------------------------------
// Observable

void Observable::add_term(ObservableTerm term) {
    if (static_cast<int>(term.j.size()) != dim_ ||
        static_cast<int>(term.center.size()) != dim_)
        throw ParamMismatch("Observable: term rank mismatch");
    if (!(term.width > 0.0))
        throw ParamMismatch("Observable: window width must be positive");
    terms_.push_back(std::move(term));
}

void Observable::add_hermitian(std::vector<int> j, std::vector<double> center,
                               double width, std::complex<double> weight) {
    if (is_zero(j)) {
        if (weight.imag() != 0.0)
            throw ParamMismatch("Observable: j = 0 term of a real observable needs a real weight");
        add_term({std::move(j), std::move(center), width, weight});
        return;
    }
    std::vector<int> mj(j.size());
    for (size_t i = 0; i < j.size(); ++i) mj[i] = -j[i];
    add_term({std::move(j), center, width, weight});
    add_term({std::move(mj), std::move(center), width, std::conj(weight)});
}

bool Observable::is_hermitian() const {
    for (const auto& t : terms_) {
        bool found = false;
        for (const auto& s : terms_) {
            bool mirrored = true;
            for (int a = 0; a < dim_; ++a)
                if (s.j[a] != -t.j[a]) mirrored = false;
            if (!mirrored || s.center != t.center || s.width != t.width) continue;
            if (std::abs(s.weight - std::conj(t.weight)) <= 1e-15 * (1.0 + std::abs(t.weight))) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

double Observable::window_value(const ObservableTerm& term, std::span<const double> p) {
    if (std::isinf(term.width)) return 1.0;
    double e = 0.0;
    for (size_t a = 0; a < p.size(); ++a) {
        const double d = p[a] - term.center[a];
        e += d * d;
    }
    return std::exp(-e / (2.0 * term.width * term.width));
}

double Observable::evaluate(std::span<const double> q, std::span<const double> p) const {
    KahanSum<std::complex<double>> acc;
    for (const auto& t : terms_)
        acc.add(t.weight * window_value(t, p) * std::polar(1.0, dot(t.j, q)));
    return acc.get().real();
}

double Observable::mean_at(std::span<const double> p) const {
    KahanSum<std::complex<double>> acc;
    for (const auto& t : terms_)
        if (is_zero(t.j)) acc.add(t.weight * window_value(t, p));
    return acc.get().real();
}

Observable Observable::constant(int dimension) {
    Observable a(dimension);
    a.add_term({std::vector<int>(dimension, 0), std::vector<double>(dimension, 0.0),
                std::numeric_limits<double>::infinity(), {1.0, 0.0}});
    return a;
}

Observable Observable::cosine(int dimension, int axis, std::vector<double> center,
                              double width) {
    if (axis < 0 || axis >= dimension)
        throw ParamMismatch("Observable::cosine: axis out of range");
    Observable a(dimension);
    std::vector<int> j(dimension, 0);
    j[axis] = 1;
    a.add_hermitian(std::move(j), std::move(center), width, {0.5, 0.0});
    return a;
}

// ---------------------------------------------------------------------------
// Wigner

WignerField wigner(const FourierState& state, std::int64_t cell_budget) {
    const auto& w = state.window();
    const int d = state.dimension();
    const std::int64_t if_built = w.size() * w.size();
    if (if_built > cell_budget)
        throw GridTooLarge("wigner: " + std::to_string(if_built) +
                           " coefficients exceed the budget of " +
                           std::to_string(cell_budget));

    const double scale = std::pow(kTwoPi, -d);
    std::vector<int> mlo(d), mhi(d);
    for (int a = 0; a < d; ++a) {
        mlo[a] = 2 * w.lo()[a];
        mhi[a] = 2 * w.hi()[a];
    }
    LatticeWindow mbox(mlo, mhi);

    std::vector<WignerField::Atom> atoms;
    atoms.reserve(mbox.size());
    std::vector<int> jj(d), kk(d);
    mbox.for_each([&](std::span<const int> m) {
        WignerField::Atom atom;
        atom.m.assign(m.begin(), m.end());
        atom.r_lo.resize(d);
        atom.r_extent.resize(d);
        std::int64_t count = 1;
        for (int a = 0; a < d; ++a) {
            const int rlo = std::max(2 * w.lo()[a] - m[a], m[a] - 2 * w.hi()[a]);
            const int rhi = std::min(m[a] - 2 * w.lo()[a], 2 * w.hi()[a] - m[a]);
            atom.r_lo[a] = rlo;
            atom.r_extent[a] = (rhi - rlo) / 2 + 1;
            count *= atom.r_extent[a];
        }
        atom.coeffs.resize(count);
        // lexicographic over the step-2 offset box
        std::vector<int> idx(d, 0);
        for (std::int64_t flat = 0; flat < count; ++flat) {
            for (int a = 0; a < d; ++a) {
                const int r = atom.r_lo[a] + 2 * idx[a];
                jj[a] = (m[a] - r) / 2;
                kk[a] = (m[a] + r) / 2;
            }
            atom.coeffs[flat] =
                scale * std::conj(state.coeff(jj)) * state.coeff(kk);
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < atom.r_extent[a]) break;
                idx[a] = 0;
            }
        }
        atoms.push_back(std::move(atom));
    });
    return WignerField(state.hbar(), d, std::move(atoms));
}

std::complex<double> WignerField::coefficient(std::span<const int> m,
                                              std::span<const int> r) const {
    if (static_cast<int>(m.size()) != dim_ || static_cast<int>(r.size()) != dim_)
        throw ParamMismatch("WignerField::coefficient: rank mismatch");
    // atoms fill a lattice box in m stored lexicographically
    const auto& first = atoms_.front().m;
    const auto& last = atoms_.back().m;
    std::int64_t flat = 0;
    for (int a = 0; a < dim_; ++a) {
        if (m[a] < first[a] || m[a] > last[a]) return {0.0, 0.0};
        flat = flat * (last[a] - first[a] + 1) + (m[a] - first[a]);
    }
    const Atom& atom = atoms_[flat];
    std::int64_t off = 0;
    for (int a = 0; a < dim_; ++a) {
        const int rel = r[a] - atom.r_lo[a];
        if (rel < 0 || rel % 2 != 0 || rel / 2 >= atom.r_extent[a]) return {0.0, 0.0};
        off = off * atom.r_extent[a] + rel / 2;
    }
    return atom.coeffs[off];
}

std::complex<double> WignerField::evaluate(std::span<const double> q,
                                           std::span<const int> m) const {
    const auto& first = atoms_.front().m;
    const auto& last = atoms_.back().m;
    std::int64_t flat = 0;
    for (int a = 0; a < dim_; ++a) {
        if (m[a] < first[a] || m[a] > last[a]) return {0.0, 0.0};
        flat = flat * (last[a] - first[a] + 1) + (m[a] - first[a]);
    }
    const Atom& atom = atoms_[flat];
    KahanSum<std::complex<double>> acc;
    std::vector<int> idx(dim_, 0);
    const std::int64_t count = static_cast<std::int64_t>(atom.coeffs.size());
    for (std::int64_t i = 0; i < count; ++i) {
        double phase = 0.0;
        for (int a = 0; a < dim_; ++a)
            phase += (atom.r_lo[a] + 2 * idx[a]) * q[a];
        acc.add(atom.coeffs[i] * std::polar(1.0, phase));
        for (int a = dim_ - 1; a >= 0; --a) {
            if (++idx[a] < atom.r_extent[a]) break;
            idx[a] = 0;
        }
    }
    return acc.get();
}

double WignerField::q_marginal(std::span<const double> q) const {
    KahanSum<std::complex<double>> acc;
    for (const auto& atom : atoms_) {
        std::vector<int> idx(dim_, 0);
        const std::int64_t count = static_cast<std::int64_t>(atom.coeffs.size());
        for (std::int64_t i = 0; i < count; ++i) {
            double phase = 0.0;
            for (int a = 0; a < dim_; ++a)
                phase += (atom.r_lo[a] + 2 * idx[a]) * q[a];
            acc.add(atom.coeffs[i] * std::polar(1.0, phase));
            for (int a = dim_ - 1; a >= 0; --a) {
                if (++idx[a] < atom.r_extent[a]) break;
                idx[a] = 0;
            }
        }
    }
    return acc.get().real();
}

double WignerField::p_atom_mass(std::span<const int> m) const {
    for (int a = 0; a < dim_; ++a)
        if (m[a] % 2 != 0) return 0.0;
    std::vector<int> r0(dim_, 0);
    return std::pow(kTwoPi, dim_) * coefficient(m, r0).real();
}

double WignerField::total_mass() const {
    KahanSum<double> acc;
    std::vector<int> r0(dim_, 0);
    for (const auto& atom : atoms_) {
        bool even = true;
        for (int a = 0; a < dim_; ++a)
            if (atom.m[a] % 2 != 0) even = false;
        if (!even) continue;
        acc.add(coefficient(atom.m, r0).real());
    }
    return std::pow(kTwoPi, dim_) * acc.get();
}

// ---------------------------------------------------------------------------
// Husimi

double husimi_point(const FourierState& state, const SemiclassicalParams& params,
                    const Profile& profile, std::span<const double> q,
                    std::span<const double> p) {
    if (params.hbar != state.hbar())
        throw ParamMismatch("husimi_point: params.hbar differs from the state");
    const PacketSpec analysis = PacketSpec::make(
        std::vector<double>(q.begin(), q.end()), std::vector<double>(p.begin(), p.end()));
    const FourierState probe = coherent_state(params, analysis, profile);
    const std::complex<double> ov = inner_product(probe, state);
    return std::norm(ov) * std::pow(kTwoPi * params.hbar, -state.dimension());
}

PhaseSpaceGrid default_grid(const SemiclassicalParams& params, const PacketSpec& spec,
                            int n_q, int n_p) {
    const double halfwidth = 8.0 * params.hbar / (2.0 * params.alpha);
    PhaseSpaceGrid g;
    g.n_q = n_q;
    g.n_p = n_p;
    for (int a = 0; a < params.dimension; ++a) {
        g.p_lo.push_back(spec.p0[a] - halfwidth);
        g.p_hi.push_back(spec.p0[a] + halfwidth);
    }
    return g;
}

HusimiGrid::HusimiGrid(PhaseSpaceGrid grid, int dimension, double hbar,
                       std::vector<double> values)
    : grid_(std::move(grid)), dim_(dimension), hbar_(hbar), values_(std::move(values)) {
    if (grid_.n_q < 1 || grid_.n_p < 2)
        throw ParamMismatch("HusimiGrid: need n_q >= 1 and n_p >= 2");
    if (static_cast<int>(grid_.p_lo.size()) != dim_ ||
        static_cast<int>(grid_.p_hi.size()) != dim_)
        throw ParamMismatch("HusimiGrid: momentum window rank mismatch");
    if (static_cast<std::int64_t>(values_.size()) != q_cells() * p_cells())
        throw ParamMismatch("HusimiGrid: value count does not match the grid");
}

std::int64_t HusimiGrid::q_cells() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim_; ++a) n *= grid_.n_q;
    return n;
}

std::int64_t HusimiGrid::p_cells() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim_; ++a) n *= grid_.n_p;
    return n;
}

double HusimiGrid::q_coord(int i) const { return kTwoPi * i / grid_.n_q; }

double HusimiGrid::p_coord(int axis, int i) const {
    return grid_.p_lo[axis] +
           (grid_.p_hi[axis] - grid_.p_lo[axis]) * i / (grid_.n_p - 1);
}

double HusimiGrid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a)
        v *= (kTwoPi / grid_.n_q) *
             ((grid_.p_hi[a] - grid_.p_lo[a]) / (grid_.n_p - 1));
    return v;
}

double HusimiGrid::mass() const {
    KahanSum<double> acc;
    for (double v : values_) acc.add(v);
    return acc.get() * cell_volume();
}

std::vector<double> HusimiGrid::q_marginal() const {
    const std::int64_t nq = q_cells(), np = p_cells();
    double pvol = 1.0;
    for (int a = 0; a < dim_; ++a)
        pvol *= (grid_.p_hi[a] - grid_.p_lo[a]) / (grid_.n_p - 1);
    std::vector<double> out(nq);
    for (std::int64_t iq = 0; iq < nq; ++iq) {
        KahanSum<double> acc;
        for (std::int64_t ip = 0; ip < np; ++ip) acc.add(values_[iq * np + ip]);
        out[iq] = acc.get() * pvol;
    }
    return out;
}

HusimiGrid husimi_grid(const FourierState& state, const SemiclassicalParams& params,
                       const Profile& profile, const PhaseSpaceGrid& grid,
                       int threads, std::int64_t cell_budget) {
    if (params.hbar != state.hbar())
        throw ParamMismatch("husimi_grid: params.hbar differs from the state");
    const int d = state.dimension();
    if (params.dimension != d || profile.dimension() != d)
        throw ParamMismatch("husimi_grid: dimension mismatch");
    if (static_cast<int>(grid.p_lo.size()) != d ||
        static_cast<int>(grid.p_hi.size()) != d)
        throw ParamMismatch("husimi_grid: momentum window rank mismatch");

    std::int64_t nq = 1, np = 1;
    for (int a = 0; a < d; ++a) {
        nq *= grid.n_q;
        np *= grid.n_p;
    }
    if (nq * np > cell_budget)
        throw GridTooLarge("husimi_grid: " + std::to_string(nq * np) +
                           " cells exceed the budget of " + std::to_string(cell_budget));

    const auto& w = state.window();
    const std::int64_t modes = w.size();
    const double alpha = params.alpha;
    const double hbar = params.hbar;

    // per-axis q phase tables: e^{i k q} for every axis grid point and mode index
    std::vector<std::vector<std::complex<double>>> qph(d);
    for (int a = 0; a < d; ++a) {
        qph[a].resize(static_cast<size_t>(grid.n_q) * w.extent(a));
        for (int i = 0; i < grid.n_q; ++i) {
            const double q = kTwoPi * i / grid.n_q;
            for (int k = 0; k < w.extent(a); ++k)
                qph[a][static_cast<size_t>(i) * w.extent(a) + k] =
                    std::polar(1.0, (w.lo()[a] + k) * q);
        }
    }

    // analysis weights per momentum row; Gaussian profiles factorize per axis
    const bool product_profile = profile.kind() == ProfileKind::Gaussian;
    const double norm_out = std::pow(kTwoPi * hbar, -d);
    const double scale = std::pow(alpha, 0.5 * d);

    std::vector<double> values(static_cast<size_t>(nq * np));
    std::vector<std::int64_t> qstride(d, 1), pstride(d, 1);
    for (int a = d - 2; a >= 0; --a) {
        qstride[a] = qstride[a + 1] * grid.n_q;
        pstride[a] = pstride[a + 1] * grid.n_p;
    }

    parallel_for(np, threads, [&](std::int64_t ip) {
        // decode the momentum tuple
        std::vector<double> p(d);
        std::vector<int> pidx(d);
        std::int64_t rest = ip;
        for (int a = 0; a < d; ++a) {
            pidx[a] = static_cast<int>(rest / pstride[a]);
            rest %= pstride[a];
            p[a] = grid.p_lo[a] +
                   (grid.p_hi[a] - grid.p_lo[a]) * pidx[a] / (grid.n_p - 1);
        }

        // mode weights conj(analysis coefficient magnitude part) at this p
        std::vector<std::complex<double>> mw(modes);
        if (product_profile) {
            const double pref = std::pow(2.0 / kPi, 0.25) * std::pow(alpha, 0.5);
            std::vector<std::vector<double>> axis(d);
            for (int a = 0; a < d; ++a) {
                axis[a].resize(w.extent(a));
                for (int k = 0; k < w.extent(a); ++k) {
                    const double xi = alpha * (w.lo()[a] + k - p[a] / hbar);
                    axis[a][k] = pref * std::exp(-xi * xi);
                }
            }
            std::int64_t idx = 0;
            w.for_each([&](std::span<const int> k) {
                double v = 1.0;
                for (int a = 0; a < d; ++a) v *= axis[a][k[a] - w.lo()[a]];
                mw[idx++] = v;
            });
        } else {
            std::vector<double> xi(d);
            std::int64_t idx = 0;
            w.for_each([&](std::span<const int> k) {
                for (int a = 0; a < d; ++a) xi[a] = alpha * (k[a] - p[a] / hbar);
                mw[idx++] = scale * std::conj(profile.fourier(xi));
            });
        }

        // all q cells for this momentum row
        std::vector<int> qidx(d);
        for (std::int64_t iq = 0; iq < nq; ++iq) {
            std::int64_t qrest = iq;
            for (int a = 0; a < d; ++a) {
                qidx[a] = static_cast<int>(qrest / qstride[a]);
                qrest %= qstride[a];
            }
            KahanSum<std::complex<double>> acc;
            std::int64_t idx = 0;
            w.for_each([&](std::span<const int> k) {
                std::complex<double> ph{1.0, 0.0};
                for (int a = 0; a < d; ++a)
                    ph *= qph[a][static_cast<size_t>(qidx[a]) * w.extent(a) +
                                 (k[a] - w.lo()[a])];
                acc.add(mw[idx] * state.coeffs()[idx] * ph);
                ++idx;
            });
            values[static_cast<size_t>(iq * np + ip)] = norm_out * std::norm(acc.get());
        }
    });

    return HusimiGrid(grid, d, hbar, std::move(values));
}

// ---------------------------------------------------------------------------
// Pairings

namespace {

// 1D window factor of a term along one axis at momentum hbar*u
double axis_window(const ObservableTerm& term, int axis, double hu) {
    if (std::isinf(term.width)) return 1.0;
    const double dlt = hu - term.center[axis];
    return std::exp(-dlt * dlt / (2.0 * term.width * term.width));
}

struct AxisIntegral {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

// Dense table of the sampled profile's 1D transform, so pairing integrands do
// not re-run the defining quadrature per node.
class TransformTable {
public:
    TransformTable(const Profile& profile, double lo, double hi) : lo_(lo) {
        step_ = 1e-3;
        const int n = static_cast<int>(std::ceil((hi - lo) / step_)) + 6;
        vals_.resize(n);
        for (int i = 0; i < n; ++i) vals_[i] = profile.fourier1(lo_ + i * step_);
    }
    std::complex<double> operator()(double xi) const {
        const double u = (xi - lo_) / step_;
        int i0 = static_cast<int>(std::floor(u)) - 2;
        i0 = std::clamp(i0, 0, static_cast<int>(vals_.size()) - 6);
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < 6; ++j) {
            double w = 1.0;
            for (int m = 0; m < 6; ++m) {
                if (m == j) continue;
                w *= (u - (i0 + m)) / static_cast<double>(j - m);
            }
            acc += w * vals_[i0 + j];
        }
        return acc;
    }

private:
    double lo_, step_;
    std::vector<std::complex<double>> vals_;
};

} // namespace

HusimiPairingPlan::HusimiPairingPlan(const FourierState& base,
                                     const SemiclassicalParams& params,
                                     const Profile& profile, const Observable& obs,
                                     const PairingControls& controls) {
    if (params.hbar != base.hbar())
        throw ParamMismatch("HusimiPairingPlan: params.hbar differs from the state");
    const int d = base.dimension();
    if (params.dimension != d || profile.dimension() != d || obs.dimension() != d)
        throw ParamMismatch("HusimiPairingPlan: dimension mismatch");
    if (profile.kind() == ProfileKind::NumericSampled && d > 1)
        throw Error("HusimiPairingPlan: sampled-profile pairing is supported in d = 1 only");
    hbar_ = params.hbar;

    const auto& w = base.window();
    const double alpha = params.alpha;
    const double hbar = params.hbar;
    QuadratureControls qctl;
    qctl.abs_tol = controls.abs_tol;
    qctl.max_nodes = controls.max_nodes;
    qctl.fail_tol = controls.fail_tol;

    // sampled profiles read their transform through one dense table
    std::unique_ptr<TransformTable> table;
    if (profile.kind() == ProfileKind::NumericSampled) {
        int jmax = 0;
        for (const auto& t : obs.terms())
            for (int v : t.j) jmax = std::max(jmax, std::abs(v));
        const double reach = 8.5 + alpha * jmax + 1.0;
        table = std::make_unique<TransformTable>(profile, -reach, reach);
    }

    // per term and axis: I_a(k_a) = alpha * int conj(F(alpha(k-u))) F(alpha(k+j-u)) win(hbar u) du
    const auto axis_integral = [&](const ObservableTerm& term, int axis,
                                   int k) -> AxisIntegral {
        const int j = term.j[axis];
        double lo = std::min(k, k + j) - 8.0 / alpha;
        double hi = std::max(k, k + j) + 8.0 / alpha;
        if (!std::isinf(term.width)) {
            lo = std::max(lo, (term.center[axis] - 9.0 * term.width) / hbar);
            hi = std::min(hi, (term.center[axis] + 9.0 * term.width) / hbar);
            if (lo >= hi) return {};
        }
        if (profile.kind() == ProfileKind::Gaussian) {
            const double pref = alpha * std::sqrt(2.0 / kPi);
            auto f = [&](double u) {
                const double a1 = alpha * (u - k);
                const double a2 = alpha * (u - k - j);
                return pref * std::exp(-a1 * a1 - a2 * a2) *
                       axis_window(term, axis, hbar * u);
            };
            const auto r = integrate_real(f, lo, hi, qctl);
            return {{r.value, 0.0}, r.error};
        }
        auto f = [&](double u) {
            return alpha * std::conj((*table)(alpha * (k - u))) *
                   (*table)(alpha * (k + j - u)) * axis_window(term, axis, hbar * u);
        };
        const auto r = integrate_complex(f, lo, hi, qctl);
        return {r.value, r.error};
    };

    std::map<std::int64_t, std::complex<double>> groups;
    KahanSum<double> err_acc;

    for (const auto& term : obs.terms()) {
        // cache the axis integrals for this term
        std::vector<std::vector<AxisIntegral>> cache(d);
        for (int a = 0; a < d; ++a) {
            cache[a].resize(w.extent(a));
            for (int i = 0; i < w.extent(a); ++i) {
                const int k = w.lo()[a] + i;
                const int kj = k + term.j[a];
                if (kj < w.lo()[a] || kj > w.hi()[a]) continue;  // partner outside
                cache[a][i] = axis_integral(term, a, k);
            }
        }
        std::vector<int> kj(d);
        std::int64_t idx = 0;
        w.for_each([&](std::span<const int> k) {
            const std::int64_t me = idx++;
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                kj[a] = k[a] + term.j[a];
                if (kj[a] < w.lo()[a] || kj[a] > w.hi()[a]) inside = false;
            }
            if (!inside) return;
            const std::complex<double> ck = base.coeffs()[me];
            const std::complex<double> ckj = base.coeff(kj);
            if (ck == 0.0 && ckj == 0.0) return;

            std::complex<double> I{1.0, 0.0};
            double ierr = 0.0;
            for (int a = 0; a < d; ++a) {
                const AxisIntegral& ai = cache[a][k[a] - w.lo()[a]];
                ierr = ierr * std::abs(ai.value) + ai.error * std::abs(I);
                I *= ai.value;
            }
            std::int64_t freq = 0;
            for (int a = 0; a < d; ++a)
                freq += static_cast<std::int64_t>(term.j[a]) * (2 * k[a] + term.j[a]);

            const std::complex<double> bilinear = ck * std::conj(ckj);
            groups[freq] += term.weight * bilinear * I;
            err_acc.add(std::abs(term.weight) * std::abs(bilinear) * ierr);
        });
    }
    lines_.reserve(groups.size());
    for (const auto& [freq, amp] : groups) lines_.push_back({freq, amp});
    quad_error_ = err_acc.get();
}

double HusimiPairingPlan::value_at(double t) const {
    KahanSum<std::complex<double>> acc;
    if (t == 0.0) {
        for (const auto& line : lines_) acc.add(line.amp);
    } else {
        for (const auto& line : lines_)
            acc.add(line.amp * std::polar(1.0, hbar_ * line.freq * t));
    }
    return acc.get().real();
}

PairingResult pair_husimi_observable(const FourierState& state,
                                     const SemiclassicalParams& params,
                                     const Profile& profile, const Observable& obs,
                                     const PairingControls& controls) {
    HusimiPairingPlan plan(state, params, profile, obs, controls);
    return {plan.value_at(0.0), plan.quad_error()};
}

double pair_wigner_observable(const FourierState& state, const Observable& obs,
                              double twist_time) {
    const int d = state.dimension();
    if (obs.dimension() != d)
        throw ParamMismatch("pair_wigner_observable: dimension mismatch");
    const auto& w = state.window();
    const double hbar = state.hbar();

    KahanSum<std::complex<double>> acc;
    std::vector<int> kj(d);
    std::vector<double> pm(d);
    for (const auto& term : obs.terms()) {
        std::int64_t idx = 0;
        w.for_each([&](std::span<const int> k) {
            const std::int64_t me = idx++;
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                kj[a] = k[a] + term.j[a];
                if (kj[a] < w.lo()[a] || kj[a] > w.hi()[a]) inside = false;
            }
            if (!inside) return;
            for (int a = 0; a < d; ++a) pm[a] = hbar * (k[a] + 0.5 * term.j[a]);
            std::complex<double> z = term.weight * state.coeffs()[me] *
                                     std::conj(state.coeff(kj)) *
                                     Observable::window_value(term, pm);
            if (twist_time != 0.0) {
                std::int64_t freq = 0;
                for (int a = 0; a < d; ++a)
                    freq += static_cast<std::int64_t>(term.j[a]) * (2 * k[a] + term.j[a]);
                z *= std::polar(1.0, -hbar * freq * twist_time);
            }
            acc.add(z);
        });
    }
    return acc.get().real();
}

std::pair<double, double> smooth_wigner_check(const FourierState& state,
                                              const SemiclassicalParams& params,
                                              const Profile& profile,
                                              std::span<const double> q,
                                              std::span<const double> p) {
    const int d = state.dimension();
    const PacketSpec analysis = PacketSpec::make(
        std::vector<double>(q.begin(), q.end()), std::vector<double>(p.begin(), p.end()));
    const FourierState probe = coherent_state(params, analysis, profile);

    const WignerField wu = wigner(probe);
    const WignerField wp = wigner(state);

    // sum_m sum_r S^probe_{m,r} S^state_{m,-r}
    KahanSum<std::complex<double>> acc;
    std::vector<int> r(d), mr(d);
    for (const auto& atom : wu.atoms()) {
        std::vector<int> idx(d, 0);
        const std::int64_t count = static_cast<std::int64_t>(atom.coeffs.size());
        for (std::int64_t i = 0; i < count; ++i) {
            for (int a = 0; a < d; ++a) {
                r[a] = atom.r_lo[a] + 2 * idx[a];
                mr[a] = -r[a];
            }
            acc.add(atom.coeffs[i] * wp.coefficient(atom.m, mr));
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < atom.r_extent[a]) break;
                idx[a] = 0;
            }
        }
    }
    const double smoothed =
        std::pow(kTwoPi / params.hbar, d) * acc.get().real();
    const double direct = husimi_point(state, params, profile, q, p);
    return {direct, smoothed};
}

} // namespace torusrev
