#include "torusrev/profile.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "torusrev/ksum.hpp"
#include "torusrev/lattice.hpp"
#include "torusrev/vecmath.hpp"

namespace torusrev {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormTol = 1e-10;
constexpr double kDecayTol = 1e-14;
constexpr double kQuadTol = 1e-10;

// Degree-5 Lagrange interpolation on a uniform grid, 6-point stencil shifted
// inward near the edges. u is the fractional grid coordinate.
template <typename Fetch>
std::complex<double> lagrange6(double u, int n, Fetch&& fetch) {
    int i0 = static_cast<int>(std::floor(u)) - 2;
    if (i0 < 0) i0 = 0;
    if (i0 > n - 6) i0 = n - 6;
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < 6; ++j) {
        double w = 1.0;
        for (int m = 0; m < 6; ++m) {
            if (m == j) continue;
            w *= (u - (i0 + m)) / static_cast<double>(j - m);
        }
        acc += w * fetch(i0 + j);
    }
    return acc;
}

} // namespace

Profile Profile::gaussian(int dimension) {
    if (dimension < 1) throw ParamMismatch("Profile: dimension must be >= 1");
    Profile p;
    p.kind_ = ProfileKind::Gaussian;
    p.dim_ = dimension;
    p.box_ = 20.0;  // |phi(20)| ~ 1e-44, comfortably inside every tolerance
    return p;
}

Profile Profile::from_samples(int dimension, double box_halfwidth,
                              int points_per_axis,
                              std::vector<std::complex<double>> values) {
    if (dimension < 1) throw ParamMismatch("Profile: dimension must be >= 1");
    if (box_halfwidth <= 0.0) throw ParamMismatch("Profile: box halfwidth must be positive");
    if (points_per_axis < 7 || points_per_axis % 2 == 0)
        throw ParamMismatch("Profile: points per axis must be odd and >= 7");
    std::int64_t expect = 1;
    for (int i = 0; i < dimension; ++i) expect *= points_per_axis;
    if (static_cast<std::int64_t>(values.size()) != expect)
        throw ParamMismatch("Profile: sample count does not fill the tensor grid");

    Profile p;
    p.kind_ = ProfileKind::NumericSampled;
    p.dim_ = dimension;
    p.box_ = box_halfwidth;
    p.n_ = points_per_axis;
    p.step_ = 2.0 * box_halfwidth / (points_per_axis - 1);
    p.samples_ = std::move(values);
    p.validate_samples();
    return p;
}

Profile Profile::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidProfile("Profile: cannot open " + path);

    std::string line;
    // header: x_1,...,x_d,re,im (comment lines before it are allowed)
    while (std::getline(in, line) && (line.empty() || line[0] == '#')) {}
    std::vector<std::string> head;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) head.push_back(tok);
    }
    if (head.size() < 3 || head[head.size() - 2] != "re" || head.back() != "im")
        throw InvalidProfile("Profile: expected header x_1,...,x_d,re,im");
    const int d = static_cast<int>(head.size()) - 2;
    for (int i = 0; i < d; ++i)
        if (head[i] != "x_" + std::to_string(i + 1))
            throw InvalidProfile("Profile: expected header x_1,...,x_d,re,im");

    std::vector<std::vector<double>> coords;
    std::vector<std::complex<double>> values;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
        if (row.size() != static_cast<size_t>(d) + 2)
            throw InvalidProfile("Profile: malformed CSV row");
        coords.emplace_back(row.begin(), row.begin() + d);
        values.emplace_back(row[d], row[d + 1]);
    }
    if (values.size() < 7) throw InvalidProfile("Profile: too few samples");

    // Infer the tensor grid: n points per axis, lexicographic rows.
    const auto m = static_cast<std::int64_t>(values.size());
    int n = static_cast<int>(std::llround(std::pow(static_cast<double>(m), 1.0 / d)));
    std::int64_t check = 1;
    for (int i = 0; i < d; ++i) check *= n;
    if (check != m)
        throw InvalidProfile("Profile: row count is not a d-dimensional tensor grid");
    const double box = -coords.front()[0];
    const double step = 2.0 * box / (n - 1);
    LatticeWindow grid(std::vector<int>(d, 0), std::vector<int>(d, n - 1));
    std::int64_t idx = 0;
    bool ok = true;
    grid.for_each([&](std::span<const int> mi) {
        for (int a = 0; a < d && ok; ++a) {
            const double want = -box + mi[a] * step;
            if (std::fabs(coords[idx][a] - want) > 1e-9 * (1.0 + std::fabs(want))) ok = false;
        }
        ++idx;
    });
    if (!ok) throw InvalidProfile("Profile: rows are not a uniform lexicographic grid");
    return from_samples(d, box, n, std::move(values));
}

void Profile::validate_samples() const {
    // boundary decay: every sample on a face of the box must be below 1e-14
    LatticeWindow grid(std::vector<int>(dim_, 0), std::vector<int>(dim_, n_ - 1));
    std::int64_t idx = 0;
    grid.for_each([&](std::span<const int> mi) {
        bool face = false;
        for (int a = 0; a < dim_; ++a)
            if (mi[a] == 0 || mi[a] == n_ - 1) face = true;
        if (face && std::abs(samples_[idx]) > kDecayTol)
            throw InvalidProfile("Profile: samples do not decay below 1e-14 at the box boundary");
        ++idx;
    });

    // unit L2 norm via tensor trapezoid
    KahanSum<double> acc;
    idx = 0;
    grid.for_each([&](std::span<const int> mi) {
        double w = 1.0;
        for (int a = 0; a < dim_; ++a)
            if (mi[a] == 0 || mi[a] == n_ - 1) w *= 0.5;
        acc.add(w * std::norm(samples_[idx]));
        ++idx;
    });
    const double nrm = acc.get() * std::pow(step_, dim_);
    if (std::fabs(nrm - 1.0) > kNormTol)
        throw InvalidProfile("Profile: L2 norm deviates from 1 by " +
                             std::to_string(std::fabs(nrm - 1.0)));
}

std::complex<double> Profile::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw ParamMismatch("Profile::evaluate: argument rank mismatch");
    if (kind_ == ProfileKind::Gaussian)
        return {std::pow(2.0 * kPi, -dim_ / 4.0) * std::exp(-0.25 * norm_sq(x)), 0.0};
    return interp(x);
}

std::complex<double> Profile::interp(std::span<const double> x) const {
    for (int a = 0; a < dim_; ++a)
        if (x[a] < -box_ || x[a] > box_) return {0.0, 0.0};
    // tensor degree-5 Lagrange, recursing across axes
    std::vector<double> u(dim_);
    for (int a = 0; a < dim_; ++a) u[a] = (x[a] + box_) / step_;

    std::vector<std::int64_t> stride(dim_, 1);
    for (int a = dim_ - 2; a >= 0; --a) stride[a] = stride[a + 1] * n_;

    struct Rec {
        const Profile* p;
        const std::vector<double>& u;
        const std::vector<std::int64_t>& stride;
        std::complex<double> run(int axis, std::int64_t base) const {
            if (axis == p->dim_)
                return p->samples_[base];
            return lagrange6(u[axis], p->n_, [&](int i) {
                return run(axis + 1, base + i * stride[axis]);
            });
        }
    };
    return Rec{this, u, stride}.run(0, 0);
}

std::complex<double> Profile::fourier(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != dim_)
        throw ParamMismatch("Profile::fourier: argument rank mismatch");
    if (kind_ == ProfileKind::Gaussian)
        return {std::pow(2.0 / kPi, dim_ / 4.0) * std::exp(-norm_sq(xi)), 0.0};
    return sampled_fourier(xi);
}

std::complex<double> Profile::sampled_fourier(std::span<const double> xi) const {
    // trapezoid over the sample grid at two resolutions; the stride-2 pass is
    // the error estimate
    auto pass = [&](int stride) {
        KahanSum<std::complex<double>> acc;
        const int last = n_ - 1;
        LatticeWindow grid(std::vector<int>(dim_, 0),
                           std::vector<int>(dim_, last / stride));
        grid.for_each([&](std::span<const int> mi) {
            double w = 1.0;
            double phase = 0.0;
            std::int64_t flat = 0;
            for (int a = 0; a < dim_; ++a) {
                const int i = mi[a] * stride;
                if (i == 0 || i == last) w *= 0.5;
                phase -= xi[a] * (-box_ + i * step_);
                flat = flat * n_ + i;
            }
            acc.add(w * samples_[flat] * std::polar(1.0, phase));
        });
        return acc.get() * std::pow(stride * step_, dim_);
    };
    const std::complex<double> fine = pass(1);
    const std::complex<double> coarse = pass(2);
    if (std::abs(fine - coarse) > kQuadTol)
        throw QuadratureUnderResolved("Profile::fourier: sample grid too coarse, residual " +
                                      std::to_string(std::abs(fine - coarse)));
    return fine * std::pow(2.0 * kPi, -0.5 * dim_);
}

std::complex<double> Profile::autocorrelation(std::span<const double> shift) const {
    if (static_cast<int>(shift.size()) != dim_)
        throw ParamMismatch("Profile::autocorrelation: argument rank mismatch");
    if (kind_ == ProfileKind::Gaussian)
        return {std::exp(-0.5 * norm_sq(shift)), 0.0};
    return sampled_autocorr(shift);
}

std::complex<double> Profile::sampled_autocorr(std::span<const double> shift) const {
    // integral phi(x) conj(phi(x - 2R)) dx; the shifted factor is read through
    // the interpolant, the outer integral through the sample grid
    std::vector<double> y(dim_);
    auto pass = [&](int stride) {
        KahanSum<std::complex<double>> acc;
        const int last = n_ - 1;
        LatticeWindow grid(std::vector<int>(dim_, 0),
                           std::vector<int>(dim_, last / stride));
        grid.for_each([&](std::span<const int> mi) {
            double w = 1.0;
            std::int64_t flat = 0;
            for (int a = 0; a < dim_; ++a) {
                const int i = mi[a] * stride;
                if (i == 0 || i == last) w *= 0.5;
                y[a] = -box_ + i * step_ - 2.0 * shift[a];
                flat = flat * n_ + i;
            }
            acc.add(w * samples_[flat] * std::conj(interp(y)));
        });
        return acc.get() * std::pow(stride * step_, dim_);
    };
    const std::complex<double> fine = pass(1);
    const std::complex<double> coarse = pass(2);
    if (std::abs(fine - coarse) > kQuadTol)
        throw QuadratureUnderResolved(
            "Profile::autocorrelation: sample grid too coarse, residual " +
            std::to_string(std::abs(fine - coarse)));
    return fine;
}

std::complex<double> Profile::evaluate1(double x) const {
    return evaluate(std::span<const double>(&x, 1));
}
std::complex<double> Profile::fourier1(double xi) const {
    return fourier(std::span<const double>(&xi, 1));
}
std::complex<double> Profile::autocorrelation1(double r) const {
    return autocorrelation(std::span<const double>(&r, 1));
}

} // namespace torusrev
