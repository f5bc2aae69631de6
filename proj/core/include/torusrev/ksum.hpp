#pragma once

#include <complex>

namespace torusrev {

// Kahan compensated accumulator. All lattice reductions in this library sum in
// a fixed lexicographic order through one of these, which is what makes the
// determinism contract (identical bytes for identical inputs, any thread
// count) cheap to honor: per-output sums never depend on the partitioning.
template <typename T>
class KahanSum {
public:
    void add(const T& value) {
        const T y = value - cor_;
        const T t = sum_ + y;
        cor_ = (t - sum_) - y;
        sum_ = t;
    }
    KahanSum& operator+=(const T& value) {
        add(value);
        return *this;
    }
    T get() const { return sum_; }

private:
    T sum_{};
    T cor_{};
};

// std::complex lacks the ordered subtraction trick componentwise only in
// spirit; operator overloads make the template above work, but keeping the
// real/imag compensations separate is slightly more accurate.
template <>
class KahanSum<std::complex<double>> {
public:
    void add(const std::complex<double>& value) {
        re_.add(value.real());
        im_.add(value.imag());
    }
    KahanSum& operator+=(const std::complex<double>& value) {
        add(value);
        return *this;
    }
    std::complex<double> get() const { return {re_.get(), im_.get()}; }

private:
    KahanSum<double> re_;
    KahanSum<double> im_;
};

} // namespace torusrev
