#include "torusrev/serialize.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "torusrev/version.hpp"

namespace torusrev {

namespace {

void append_tuple(std::string& out, std::span<const double> v) {
    for (size_t a = 0; a < v.size(); ++a) {
        if (a) out += ',';
        out += format_double(v[a]);
    }
}

std::string json_complex(const std::complex<double>& z) {
    return "[" + format_double(z.real()) + "," + format_double(z.imag()) + "]";
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string metadata_header(std::uint64_t config_hash) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash);
    return std::string("# artifact-version: ") + kArtifactVersion +
           "\n# config-hash: " + buf + "\n";
}

std::string state_to_json(const FourierState& state) {
    const auto& w = state.window();
    std::string out = "{\n  \"d\": " + std::to_string(state.dimension()) +
                      ",\n  \"hbar\": " + format_double(state.hbar()) +
                      ",\n  \"window\": [";
    for (int a = 0; a < state.dimension(); ++a) {
        if (a) out += ", ";
        out += "[" + std::to_string(w.lo()[a]) + "," + std::to_string(w.hi()[a]) + "]";
    }
    out += "],\n  \"coeffs\": [";
    const auto coeffs = state.coeffs();
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) out += ",";
        if (i % 4 == 0) out += "\n    ";
        out += json_complex(coeffs[i]);
    }
    out += "\n  ]\n}\n";
    return out;
}

FourierState state_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int d = j.at("d").get<int>();
    const double hbar = j.at("hbar").get<double>();
    const auto& jw = j.at("window");
    if (static_cast<int>(jw.size()) != d)
        throw ParamMismatch("state_from_json: window rank mismatch");
    std::vector<int> lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        lo[a] = jw[a].at(0).get<int>();
        hi[a] = jw[a].at(1).get<int>();
    }
    LatticeWindow window(lo, hi);
    const auto& jc = j.at("coeffs");
    if (static_cast<std::int64_t>(jc.size()) != window.size())
        throw ParamMismatch("state_from_json: coefficient count mismatch");
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(jc.size());
    for (const auto& pair : jc)
        coeffs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return FourierState(hbar, std::move(window), std::move(coeffs));
}

std::string wigner_to_json(const WignerField& field) {
    std::string out = "{\n  \"d\": " + std::to_string(field.dimension()) +
                      ",\n  \"hbar\": " + format_double(field.hbar()) +
                      ",\n  \"atoms\": {";
    bool first_atom = true;
    for (const auto& atom : field.atoms()) {
        if (!first_atom) out += ",";
        first_atom = false;
        std::string key;
        for (size_t a = 0; a < atom.m.size(); ++a) {
            if (a) key += ',';
            key += std::to_string(atom.m[a]);
        }
        out += "\n    \"" + key + "\": {\"r_lo\": [";
        for (size_t a = 0; a < atom.r_lo.size(); ++a) {
            if (a) out += ",";
            out += std::to_string(atom.r_lo[a]);
        }
        out += "], \"r_extent\": [";
        for (size_t a = 0; a < atom.r_extent.size(); ++a) {
            if (a) out += ",";
            out += std::to_string(atom.r_extent[a]);
        }
        out += "], \"coeffs\": [";
        for (size_t i = 0; i < atom.coeffs.size(); ++i) {
            if (i) out += ",";
            out += json_complex(atom.coeffs[i]);
        }
        out += "]}";
    }
    out += "\n  }\n}\n";
    return out;
}

std::string husimi_to_csv(const HusimiGrid& grid, std::uint64_t config_hash) {
    const int d = grid.dimension();
    std::string out = metadata_header(config_hash);
    for (int a = 0; a < d; ++a) out += "q" + std::to_string(a + 1) + ",";
    for (int a = 0; a < d; ++a) out += "p" + std::to_string(a + 1) + ",";
    out += "H\n";

    const auto& g = grid.grid();
    std::vector<int> iq(d, 0), ip(d, 0);
    const auto values = grid.values();
    std::int64_t flat = 0;
    // q tuples outer, p tuples inner, both lexicographic — matches storage
    auto advance = [](std::vector<int>& idx, int base) {
        for (int a = static_cast<int>(idx.size()) - 1; a >= 0; --a) {
            if (++idx[a] < base) return true;
            idx[a] = 0;
        }
        return false;
    };
    do {
        std::fill(ip.begin(), ip.end(), 0);
        do {
            for (int a = 0; a < d; ++a) {
                out += format_double(grid.q_coord(iq[a]));
                out += ',';
            }
            for (int a = 0; a < d; ++a) {
                out += format_double(grid.p_coord(a, ip[a]));
                out += ',';
            }
            out += format_double(values[flat++]);
            out += '\n';
        } while (advance(ip, g.n_p));
    } while (advance(iq, g.n_q));
    return out;
}

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows,
                               std::uint64_t config_hash) {
    std::string out = metadata_header(config_hash);
    out += "n,hbar,alpha,t,empirical,theoretical,abs_error,flags\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n);
        out += ',';
        out += format_double(r.hbar);
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += format_double(r.t_value);
        out += ',';
        out += format_double(r.empirical);
        out += ',';
        out += format_double(r.theoretical);
        out += ',';
        out += format_double(r.abs_error);
        out += ',';
        out += r.flags;
        out += '\n';
    }
    return out;
}

std::string scan_to_csv(const std::vector<ScanPoint>& points,
                        std::uint64_t config_hash) {
    std::string out = metadata_header(config_hash);
    out += "t,overlap_sq\n";
    for (const auto& p : points) {
        out += format_double(p.t);
        out += ',';
        out += format_double(p.value);
        out += '\n';
    }
    return out;
}

std::string measure_to_json(const LimitMeasure& measure) {
    const char* tag = nullptr;
    switch (measure.kind()) {
        case LimitMeasure::Kind::UniformShell: tag = "uniform_shell"; break;
        case LimitMeasure::Kind::RevivalMixture: tag = "revival_mixture"; break;
        case LimitMeasure::Kind::TimeAveraged: tag = "time_averaged"; break;
    }
    std::string out = std::string("{\n  \"variant\": \"") + tag + "\",\n  \"p0\": [";
    std::string tuple;
    append_tuple(tuple, measure.p0());
    out += tuple + "],\n  \"q0\": [";
    tuple.clear();
    append_tuple(tuple, measure.q0());
    out += tuple + "],\n  \"width_b\": " + format_double(measure.width_b()) +
           ",\n  \"copy_weight\": " + format_double(measure.copy_weight()) +
           ",\n  \"centers\": [";
    const auto centers = measure.centers();
    for (size_t i = 0; i < centers.size(); ++i) {
        if (i) out += ", ";
        tuple.clear();
        append_tuple(tuple, centers[i]);
        out += "[" + tuple + "]";
    }
    out += "]\n}\n";
    return out;
}

std::string density_to_csv(const std::vector<std::vector<double>>& points,
                           const std::vector<double>& values,
                           std::uint64_t config_hash) {
    if (points.size() != values.size())
        throw ParamMismatch("density_to_csv: point/value count mismatch");
    std::string out = metadata_header(config_hash);
    const int d = points.empty() ? 1 : static_cast<int>(points.front().size());
    for (int a = 0; a < d; ++a) out += "q" + std::to_string(a + 1) + ",";
    out += "density\n";
    for (size_t i = 0; i < points.size(); ++i) {
        std::string tuple;
        append_tuple(tuple, points[i]);
        out += tuple;
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());

    std::random_device rd;
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("write_atomic: cannot open " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw Error("write_atomic: short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("write_atomic: rename failed: " + ec.message());
    }
}

} // namespace torusrev
