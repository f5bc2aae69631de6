#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "torusrev/errors.hpp"
#include "torusrev/ksum.hpp"

namespace torusrev {

struct QuadratureControls {
    double abs_tol = 1e-10;   // stop once successive refinements agree this well
    int max_nodes = 1 << 16;  // hard cap on function evaluations
    double fail_tol = 1e-8;   // throw QuadratureUnderResolved above this
    int initial_intervals = 64;
};

template <typename T>
struct QuadratureValue {
    T value{};
    double error = 0.0;  // last step-halving disagreement
    int nodes = 0;
};

namespace detail {
inline double quad_abs(double x) { return std::fabs(x); }
inline double quad_abs(const std::complex<double>& z) { return std::abs(z); }
} // namespace detail

// Composite trapezoid with global step halving; the error estimate is the
// disagreement between the last two refinement levels. Each refinement reuses
// all previous evaluations (only midpoints are new).
template <typename T, typename F>
QuadratureValue<T> adaptive_trapezoid(F&& f, double a, double b,
                                      const QuadratureControls& ctl = {}) {
    if (!(b > a)) {
        if (a == b) return {T{}, 0.0, 0};
        throw ParamMismatch("adaptive_trapezoid: inverted interval");
    }
    int n = ctl.initial_intervals;
    double h = (b - a) / n;

    KahanSum<T> acc;
    acc.add(T(0.5) * (f(a) + f(b)));
    for (int i = 1; i < n; ++i) acc.add(f(a + i * h));
    T estimate = acc.get() * T(h);
    int nodes = n + 1;

    double err = INFINITY;
    while (true) {
        // midpoints of the current intervals
        KahanSum<T> mid;
        for (int i = 0; i < n; ++i) mid.add(f(a + (i + 0.5) * h));
        const T refined = T(0.5) * estimate + T(0.5) * h * mid.get();
        nodes += n;
        err = detail::quad_abs(refined - estimate);
        estimate = refined;
        n *= 2;
        h *= 0.5;
        if (err <= ctl.abs_tol) break;
        if (nodes + n > ctl.max_nodes) {
            if (err > ctl.fail_tol)
                throw QuadratureUnderResolved(
                    "adaptive_trapezoid: node budget exhausted, residual " +
                    std::to_string(err));
            break;
        }
    }
    return {estimate, err, nodes};
}

template <typename F>
QuadratureValue<double> integrate_real(F&& f, double a, double b,
                                       const QuadratureControls& ctl = {}) {
    return adaptive_trapezoid<double>(std::forward<F>(f), a, b, ctl);
}

template <typename F>
QuadratureValue<std::complex<double>> integrate_complex(
    F&& f, double a, double b, const QuadratureControls& ctl = {}) {
    return adaptive_trapezoid<std::complex<double>>(std::forward<F>(f), a, b, ctl);
}

} // namespace torusrev
