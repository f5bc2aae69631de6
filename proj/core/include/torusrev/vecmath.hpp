#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace torusrev {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(std::span<const int> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double norm_sq(std::span<const int> a) {
    double s = 0.0;
    for (int v : a) s += static_cast<double>(v) * v;
    return s;
}

inline bool is_zero_tuple(std::span<const int> a) {
    for (int v : a)
        if (v != 0) return false;
    return true;
}

// Reduce an angle-like coordinate to the fundamental cell [0, 2*pi).
inline double wrap_2pi(double x) {
    const double two_pi = 6.283185307179586476925286766559;
    double r = std::fmod(x, two_pi);
    if (r < 0) r += two_pi;
    // fmod of a negative near-multiple can land exactly on two_pi after the add
    if (r >= two_pi) r -= two_pi;
    return r;
}

} // namespace torusrev
