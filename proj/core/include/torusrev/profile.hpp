#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "torusrev/errors.hpp"

namespace torusrev {

enum class ProfileKind { Gaussian, NumericSampled };

// Wave-packet envelope phi on R^d: unit L2 norm, rapidly decaying. The
// Gaussian kind carries closed forms; NumericSampled holds uniform tensor-grid
// samples on [-L, L]^d and answers the same queries by certified trapezoid
// quadrature (estimate from grid coarsening; QuadratureUnderResolved when the
// estimate exceeds 1e-10).
//
// Conventions (fixed across the whole library):
//   fourier(xi)          = (2*pi)^{-d/2} * integral phi(x) e^{-i xi.x} dx
//   autocorrelation(R)   = integral phi(x) * conj(phi(x - 2R)) dx
// Gaussian envelope phi(x) = (2*pi)^{-d/4} e^{-|x|^2/4}, giving
//   fourier(xi) = (2/pi)^{d/4} e^{-|xi|^2},  autocorrelation(R) = e^{-|R|^2/2}.
class Profile {
public:
    static Profile gaussian(int dimension);

    // values: lexicographic over the tensor grid with points_per_axis samples
    // per axis (endpoints included; points_per_axis must be odd so coarsened
    // error estimates exist). Validates unit norm (1e-10) and boundary decay
    // (1e-14).
    static Profile from_samples(int dimension, double box_halfwidth,
                                int points_per_axis,
                                std::vector<std::complex<double>> values);

    // CSV with header x_1,...,x_d,re,im; rows in lexicographic grid order.
    static Profile from_csv(const std::string& path);

    int dimension() const { return dim_; }
    ProfileKind kind() const { return kind_; }
    double box_halfwidth() const { return box_; }
    int points_per_axis() const { return n_; }

    std::complex<double> evaluate(std::span<const double> x) const;
    std::complex<double> fourier(std::span<const double> xi) const;
    std::complex<double> autocorrelation(std::span<const double> shift) const;

    // d=1 conveniences used all over the spectral code paths.
    std::complex<double> evaluate1(double x) const;
    std::complex<double> fourier1(double xi) const;
    std::complex<double> autocorrelation1(double r) const;

private:
    Profile() = default;
    void validate_samples() const;
    std::complex<double> interp(std::span<const double> x) const;
    std::complex<double> sampled_fourier(std::span<const double> xi) const;
    std::complex<double> sampled_autocorr(std::span<const double> shift) const;

    ProfileKind kind_ = ProfileKind::Gaussian;
    int dim_ = 1;
    double box_ = 20.0;  // support radius used for quadrature domains
    int n_ = 0;          // samples per axis (NumericSampled)
    double step_ = 0.0;
    std::vector<std::complex<double>> samples_;  // lexicographic
};

} // namespace torusrev
