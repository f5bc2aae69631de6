#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "torusrev/state.hpp"

namespace torusrev {

// One Fourier-in-q term of a phase-space observable: weight * e^{i j.q} times
// a Gaussian momentum window exp(-|p - center|^2 / (2 width^2)). width = +inf
// is the flat window (identically 1) used by normalization observables; the
// 1e-14 compact-support convention applies to finite widths.
struct ObservableTerm {
    std::vector<int> j;
    std::vector<double> center;
    double width = std::numeric_limits<double>::infinity();
    std::complex<double> weight{1.0, 0.0};
};

// Finite trigonometric polynomial in q with per-term momentum windows. Real
// observables carry terms in conjugate pairs; add_hermitian maintains that.
class Observable {
public:
    explicit Observable(int dimension) : dim_(dimension) {
        if (dimension < 1) throw ParamMismatch("Observable: dimension must be >= 1");
    }

    int dimension() const { return dim_; }
    const std::vector<ObservableTerm>& terms() const { return terms_; }

    void add_term(ObservableTerm term);
    // adds (j, w) and, for j != 0, (-j, conj w); for j = 0 the weight must be real
    void add_hermitian(std::vector<int> j, std::vector<double> center, double width,
                       std::complex<double> weight);

    // every term has a conjugate partner (same window, mirrored j, conj weight)
    bool is_hermitian() const;

    // window factor of one term at momentum p
    static double window_value(const ObservableTerm& term, std::span<const double> p);

    // pointwise value (real part; exact for hermitian observables)
    double evaluate(std::span<const double> q, std::span<const double> p) const;

    // q-average at momentum p: only j = 0 terms survive
    double mean_at(std::span<const double> p) const;

    // a = 1: single flat j = 0 term
    static Observable constant(int dimension);
    // cos(q_axis) with a momentum window (width = inf for the flat one)
    static Observable cosine(int dimension, int axis, std::vector<double> center,
                             double width);

private:
    int dim_;
    std::vector<ObservableTerm> terms_;
};

// Wigner distribution of a truncated Fourier state. Momentum support is the
// exact half-integer lattice p = hbar*m/2; per atom m the q-dependence is the
// finite series sum_r S_{m,r} e^{i r.q} with r = m (mod 2) per axis and
//   S_{m,r} = conj(c_{(m-r)/2}) c_{(m+r)/2} / (2*pi)^d.
// Never rasterized in p: the atoms are the data.
class WignerField {
public:
    struct Atom {
        std::vector<int> m;
        std::vector<int> r_lo;      // offsets run r_lo + 2*i per axis
        std::vector<int> r_extent;  // number of offsets per axis
        std::vector<std::complex<double>> coeffs;  // lexicographic over offsets
    };

    WignerField(double hbar, int dimension, std::vector<Atom> atoms)
        : hbar_(hbar), dim_(dimension), atoms_(std::move(atoms)) {}

    double hbar() const { return hbar_; }
    int dimension() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    // S_{m,r}; zero when the atom or offset is absent
    std::complex<double> coefficient(std::span<const int> m,
                                     std::span<const int> r) const;

    // value of the q-series at atom m (imaginary part is a roundoff residue)
    std::complex<double> evaluate(std::span<const double> q,
                                  std::span<const int> m) const;

    // sum over atoms of the q-series at q: equals |psi(q)|^2
    double q_marginal(std::span<const double> q) const;

    // mass of the momentum atom at m (nonzero only for even m): |c_{m/2}|^2
    double p_atom_mass(std::span<const int> m) const;

    double total_mass() const;

private:
    double hbar_;
    int dim_;
    std::vector<Atom> atoms_;  // lexicographic in m
};

// Exact transcription of the state's coefficient bilinear form into Wigner
// atoms. cell_budget caps the total number of stored coefficients.
WignerField wigner(const FourierState& state,
                   std::int64_t cell_budget = std::int64_t{1} << 24);

// Husimi value at one phase-space point: builds the analysis packet at (q, p)
// and returns (2*pi*hbar)^{-d} |(analysis, state)|^2. Nonnegative.
double husimi_point(const FourierState& state, const SemiclassicalParams& params,
                    const Profile& profile, std::span<const double> q,
                    std::span<const double> p);

// Uniform rasterization window: n_q points per q axis on [0, 2*pi) and n_p
// points per p axis spanning [p_lo, p_hi] inclusive.
struct PhaseSpaceGrid {
    int n_q = 256;
    int n_p = 256;
    std::vector<double> p_lo;
    std::vector<double> p_hi;
};

// Default momentum window p0 +- 8 * hbar/(2*alpha): captures the packet's
// momentum mass to ~1e-14.
PhaseSpaceGrid default_grid(const SemiclassicalParams& params, const PacketSpec& spec,
                            int n_q = 256, int n_p = 256);

class HusimiGrid {
public:
    HusimiGrid(PhaseSpaceGrid grid, int dimension, double hbar,
               std::vector<double> values);

    const PhaseSpaceGrid& grid() const { return grid_; }
    int dimension() const { return dim_; }
    double hbar() const { return hbar_; }
    std::span<const double> values() const { return values_; }

    std::int64_t q_cells() const;  // n_q^d
    std::int64_t p_cells() const;  // n_p^d
    double q_coord(int i) const;   // 2*pi*i/n_q
    double p_coord(int axis, int i) const;
    double cell_volume() const;

    // Riemann mass: sum * cell volume
    double mass() const;
    // per-q-cell Riemann sum over p times the p cell volume
    std::vector<double> q_marginal() const;

private:
    PhaseSpaceGrid grid_;
    int dim_;
    double hbar_;
    std::vector<double> values_;  // q tuples outer, p tuples inner, lexicographic
};

// Rasterizes the Husimi transform. cell_budget caps n_q^d * n_p^d; threads
// parallelizes over cells without changing any per-cell reduction order.
HusimiGrid husimi_grid(const FourierState& state, const SemiclassicalParams& params,
                       const Profile& profile, const PhaseSpaceGrid& grid,
                       int threads = 1,
                       std::int64_t cell_budget = std::int64_t{1} << 24);

struct PairingControls {
    double abs_tol = 1e-10;  // per 1D window integral
    int max_nodes = 1 << 16;
    double fail_tol = 1e-8;  // QuadratureUnderResolved above this
};

struct PairingResult {
    double value = 0.0;
    double quad_error = 0.0;  // accumulated step-halving disagreement
};

// Precomputed bilinear form for Husimi-vs-observable pairings. Construction
// reduces integral H_psi * a to per-mode-pair window integrals; evolving the
// state only rotates the bilinear phases, so the pairing at any time t is a
// finite exponential sum evaluated in O(#frequencies). value_at(0) is the
// pairing of the base state itself.
class HusimiPairingPlan {
public:
    HusimiPairingPlan(const FourierState& base, const SemiclassicalParams& params,
                      const Profile& profile, const Observable& obs,
                      const PairingControls& controls = {});

    double value_at(double t) const;
    double quad_error() const { return quad_error_; }

private:
    struct Line {
        std::int64_t freq;  // integer frequency: phase e^{i hbar freq t}
        std::complex<double> amp;
    };
    std::vector<Line> lines_;
    double hbar_ = 0.0;
    double quad_error_ = 0.0;
};

// integral of H_psi(q,p) a(q,p) over the torus and R^d in p.
PairingResult pair_husimi_observable(const FourierState& state,
                                     const SemiclassicalParams& params,
                                     const Profile& profile, const Observable& obs,
                                     const PairingControls& controls = {});

// Wigner pairing: exact finite sum over atoms, no quadrature. twist_time != 0
// multiplies the j-term at atom momentum p by e^{-2 i j.p s} (the classical
// flow correction used by the harness).
double pair_wigner_observable(const FourierState& state, const Observable& obs,
                              double twist_time = 0.0);

// Husimi value at (q, p) computed two ways: directly, and by smoothing the
// state's Wigner atoms against the analysis packet's. Returns {direct,
// smoothed}; they agree to quadrature-free roundoff.
std::pair<double, double> smooth_wigner_check(const FourierState& state,
                                              const SemiclassicalParams& params,
                                              const Profile& profile,
                                              std::span<const double> q,
                                              std::span<const double> p);

} // namespace torusrev
