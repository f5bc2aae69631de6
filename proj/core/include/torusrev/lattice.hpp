#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "torusrev/errors.hpp"

namespace torusrev {

// Axis-aligned box of integer lattice points, iterated lexicographically
// (first axis slowest). Flattened offsets follow the same order, so "index i"
// always means the same tuple for a given window — the determinism contract
// leans on that.
class LatticeWindow {
public:
    LatticeWindow() = default;
    LatticeWindow(std::vector<int> lo, std::vector<int> hi)
        : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size())
            throw ParamMismatch("LatticeWindow: lo/hi rank mismatch");
        for (size_t i = 0; i < lo_.size(); ++i)
            if (hi_[i] < lo_[i])
                throw ParamMismatch("LatticeWindow: empty axis range");
    }

    int dimension() const { return static_cast<int>(lo_.size()); }
    const std::vector<int>& lo() const { return lo_; }
    const std::vector<int>& hi() const { return hi_; }
    int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }

    std::int64_t size() const {
        std::int64_t n = 1;
        for (size_t i = 0; i < lo_.size(); ++i) n *= extent(static_cast<int>(i));
        return n;
    }

    bool contains(std::span<const int> k) const {
        if (k.size() != lo_.size()) return false;
        for (size_t i = 0; i < lo_.size(); ++i)
            if (k[i] < lo_[i] || k[i] > hi_[i]) return false;
        return true;
    }

    std::int64_t flatten(std::span<const int> k) const {
        std::int64_t idx = 0;
        for (size_t i = 0; i < lo_.size(); ++i)
            idx = idx * extent(static_cast<int>(i)) + (k[i] - lo_[i]);
        return idx;
    }

    void unflatten(std::int64_t idx, std::span<int> k) const {
        for (int i = dimension() - 1; i >= 0; --i) {
            const int ext = extent(i);
            k[i] = lo_[i] + static_cast<int>(idx % ext);
            idx /= ext;
        }
    }

    // Visit every point in lexicographic order. The callback gets a scratch
    // tuple that must not be retained.
    template <typename F>
    void for_each(F&& f) const {
        std::vector<int> k(lo_);
        if (size() == 0) return;
        while (true) {
            f(std::span<const int>(k));
            int axis = dimension() - 1;
            while (axis >= 0) {
                if (++k[axis] <= hi_[axis]) break;
                k[axis] = lo_[axis];
                --axis;
            }
            if (axis < 0) break;
        }
    }

    bool operator==(const LatticeWindow& other) const = default;

private:
    std::vector<int> lo_;
    std::vector<int> hi_;
};

// Smallest window containing both operands (used for inner products across
// states with different truncations).
inline LatticeWindow window_union(const LatticeWindow& a, const LatticeWindow& b) {
    if (a.dimension() != b.dimension())
        throw ParamMismatch("window_union: rank mismatch");
    std::vector<int> lo(a.lo()), hi(a.hi());
    for (int i = 0; i < a.dimension(); ++i) {
        lo[i] = std::min(lo[i], b.lo()[i]);
        hi[i] = std::max(hi[i], b.hi()[i]);
    }
    return LatticeWindow(std::move(lo), std::move(hi));
}

} // namespace torusrev
