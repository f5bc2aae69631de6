#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace torusrev::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ParamMismatch(std::string("config: unknown key \"") + key +
                                "\" in " + where);
    }
}

std::vector<double> real_vector(const json& j, int expect, const char* where) {
    if (!j.is_array())
        throw ParamMismatch(std::string("config: ") + where + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw ParamMismatch(std::string("config: ") + where +
                                " entries must be numbers");
        out.push_back(v.get<double>());
    }
    if (expect >= 0 && static_cast<int>(out.size()) != expect)
        throw ParamMismatch(std::string("config: ") + where +
                            " must have one entry per axis");
    return out;
}

// widths and residuals admit the string "inf"
double number_or_inf(const json& j, const char* where) {
    if (j.is_string() && j.get<std::string>() == "inf")
        return std::numeric_limits<double>::infinity();
    if (!j.is_number())
        throw ParamMismatch(std::string("config: ") + where +
                            " must be a number or \"inf\"");
    return j.get<double>();
}

TimeSchedule parse_time_schedule(const json& j, std::optional<double>& explicit_t,
                                 bool& has_schedule) {
    if (!j.is_object()) throw ParamMismatch("config: time must be an object");
    const std::string kind = j.value("kind", std::string());
    if (kind == "rational") {
        check_keys(j, {"kind", "m", "n", "b"}, "time");
        const double b = j.contains("b") ? number_or_inf(j.at("b"), "time.b") : 0.0;
        has_schedule = true;
        return TimeSchedule::rational(j.at("m").get<std::int64_t>(),
                                      j.at("n").get<std::int64_t>(), b);
    }
    if (kind == "irrational") {
        check_keys(j, {"kind", "a", "b"}, "time");
        const double b = j.contains("b") ? number_or_inf(j.at("b"), "time.b") : 0.0;
        has_schedule = true;
        return TimeSchedule::irrational(j.at("a").get<double>(), b);
    }
    if (kind == "growing") {
        check_keys(j, {"kind"}, "time");
        has_schedule = true;
        return TimeSchedule::growing();
    }
    if (kind == "value") {
        check_keys(j, {"kind", "t"}, "time");
        if (!j.contains("t") || !j.at("t").is_number())
            throw ParamMismatch("config: time.kind \"value\" needs a numeric t");
        explicit_t = j.at("t").get<double>();
        has_schedule = false;
        return TimeSchedule::growing();  // placeholder, never read
    }
    throw ParamMismatch("config: time.kind must be rational, irrational, growing, "
                        "or value");
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParamMismatch(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParamMismatch("config: top level must be an object");
    check_keys(j,
               {"dimension", "profile", "packet", "params", "schedule", "time",
                "observable", "grid", "scan", "evolve", "limit", "output"},
               "top level");

    ExperimentConfig cfg;
    cfg.raw = text;

    if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
        throw ParamMismatch("config: integer dimension is required");
    cfg.dimension = j.at("dimension").get<int>();
    if (cfg.dimension < 1 || cfg.dimension > 3)
        throw ParamMismatch("config: dimension must be 1, 2, or 3");

    if (j.contains("profile")) {
        const auto& jp = j.at("profile");
        check_keys(jp, {"kind", "csv"}, "profile");
        cfg.profile_kind = jp.value("kind", std::string("gaussian"));
        if (cfg.profile_kind != "gaussian" && cfg.profile_kind != "sampled")
            throw ParamMismatch("config: profile.kind must be gaussian or sampled");
        if (cfg.profile_kind == "sampled") {
            if (!jp.contains("csv"))
                throw ParamMismatch("config: sampled profile needs a csv path");
            cfg.profile_csv = jp.at("csv").get<std::string>();
        } else if (jp.contains("csv")) {
            throw ParamMismatch("config: profile.csv only applies to sampled kind");
        }
    }

    if (!j.contains("packet")) throw ParamMismatch("config: packet is required");
    {
        const auto& jp = j.at("packet");
        check_keys(jp, {"q0", "p0"}, "packet");
        std::vector<double> q0(cfg.dimension, 0.0), p0(cfg.dimension, 0.0);
        if (jp.contains("q0")) q0 = real_vector(jp.at("q0"), cfg.dimension, "packet.q0");
        if (jp.contains("p0")) p0 = real_vector(jp.at("p0"), cfg.dimension, "packet.p0");
        cfg.packet = PacketSpec::make(std::move(q0), std::move(p0));
    }

    if (j.contains("params")) {
        const auto& jp = j.at("params");
        check_keys(jp, {"hbar", "alpha", "gamma"}, "params");
        if (!jp.contains("hbar") || !jp.at("hbar").is_number())
            throw ParamMismatch("config: params.hbar is required");
        const double hbar = jp.at("hbar").get<double>();
        if (jp.contains("alpha") && jp.contains("gamma"))
            throw ParamMismatch("config: params takes alpha or gamma, not both");
        SemiclassicalParams p;
        if (jp.contains("alpha")) {
            p.hbar = hbar;
            p.alpha = jp.at("alpha").get<double>();
            p.dimension = cfg.dimension;
            p.validate();
        } else {
            p = SemiclassicalParams::from_hbar(hbar, jp.value("gamma", 0.5),
                                               cfg.dimension);
        }
        cfg.params = p;
    }

    if (j.contains("schedule")) {
        const auto& js = j.at("schedule");
        check_keys(js, {"n_max", "gamma", "hbar_seq"}, "schedule");
        HbarSchedule s;
        s.gamma = js.value("gamma", 0.5);
        if (js.contains("hbar_seq")) {
            if (js.contains("n_max"))
                throw ParamMismatch(
                    "config: schedule takes n_max or hbar_seq, not both");
            s.hbar_seq = real_vector(js.at("hbar_seq"), -1, "schedule.hbar_seq");
            s.validate();
        } else {
            s = HbarSchedule::standard(js.value("n_max", 5), s.gamma);
        }
        cfg.schedule = std::move(s);
    }

    if (j.contains("time")) {
        bool has_schedule = false;
        TimeSchedule t = parse_time_schedule(j.at("time"), cfg.explicit_t, has_schedule);
        if (has_schedule) cfg.time = t;
    }

    if (j.contains("observable")) {
        const auto& jo = j.at("observable");
        if (!jo.is_array())
            throw ParamMismatch("config: observable must be a list of terms");
        Observable obs(cfg.dimension);
        for (const auto& jt : jo) {
            check_keys(jt, {"j", "weight", "center", "width"}, "observable term");
            if (!jt.contains("j"))
                throw ParamMismatch("config: observable term needs a frequency j");
            std::vector<int> freq;
            for (const auto& v : jt.at("j")) {
                if (!v.is_number_integer())
                    throw ParamMismatch("config: observable j must be integers");
                freq.push_back(v.get<int>());
            }
            if (static_cast<int>(freq.size()) != cfg.dimension)
                throw ParamMismatch("config: observable j must have one entry per axis");
            std::complex<double> weight{1.0, 0.0};
            if (jt.contains("weight")) {
                const auto& jw = jt.at("weight");
                if (jw.is_number()) {
                    weight = jw.get<double>();
                } else if (jw.is_array() && jw.size() == 2) {
                    weight = {jw.at(0).get<double>(), jw.at(1).get<double>()};
                } else {
                    throw ParamMismatch(
                        "config: observable weight must be a number or [re, im]");
                }
            }
            std::vector<double> center(cfg.dimension, 0.0);
            if (jt.contains("center"))
                center = real_vector(jt.at("center"), cfg.dimension,
                                     "observable center");
            double width = std::numeric_limits<double>::infinity();
            if (jt.contains("width")) width = number_or_inf(jt.at("width"), "width");
            obs.add_hermitian(std::move(freq), std::move(center), width, weight);
        }
        cfg.observable = std::move(obs);
    }

    if (j.contains("grid")) {
        const auto& jg = j.at("grid");
        check_keys(jg, {"n_q", "n_p", "p_lo", "p_hi"}, "grid");
        cfg.n_q = jg.value("n_q", 256);
        cfg.n_p = jg.value("n_p", 256);
        if (cfg.n_q < 1 || cfg.n_p < 1)
            throw ParamMismatch("config: grid sizes must be positive");
        if (jg.contains("p_lo") != jg.contains("p_hi"))
            throw ParamMismatch("config: grid p_lo and p_hi come together");
        if (jg.contains("p_lo")) {
            cfg.p_lo = real_vector(jg.at("p_lo"), cfg.dimension, "grid.p_lo");
            cfg.p_hi = real_vector(jg.at("p_hi"), cfg.dimension, "grid.p_hi");
        }
    }

    if (j.contains("scan")) {
        const auto& js = j.at("scan");
        check_keys(js, {"steps"}, "scan");
        cfg.scan_steps = js.value("steps", 1024);
        if (cfg.scan_steps < 2)
            throw ParamMismatch("config: scan.steps must be at least 2");
    }

    if (j.contains("evolve")) {
        const auto& je = j.at("evolve");
        check_keys(je, {"density_points"}, "evolve");
        cfg.density_points = je.value("density_points", 256);
        if (cfg.density_points < 1)
            throw ParamMismatch("config: evolve.density_points must be positive");
    }

    if (j.contains("limit")) {
        const auto& jl = j.at("limit");
        check_keys(jl, {"theta_check", "theta_widths", "theta_points",
                        "resonance_bound"},
                   "limit");
        cfg.theta_check = jl.value("theta_check", false);
        if (jl.contains("theta_widths"))
            cfg.theta_widths = real_vector(jl.at("theta_widths"), -1, "theta_widths");
        cfg.theta_points = jl.value("theta_points", 64);
        if (cfg.theta_points < 1)
            throw ParamMismatch("config: limit.theta_points must be positive");
        if (jl.contains("resonance_bound")) {
            cfg.resonance_bound = jl.at("resonance_bound").get<int>();
            if (*cfg.resonance_bound < 1)
                throw ParamMismatch("config: limit.resonance_bound must be >= 1");
        }
    }

    if (j.contains("output")) {
        const auto& jo = j.at("output");
        check_keys(jo,
                   {"state", "density", "husimi", "convergence", "measure", "eval",
                    "scan"},
                   "output");
        for (const auto& [key, value] : jo.items()) {
            if (!value.is_string())
                throw ParamMismatch("config: output names must be strings");
            cfg.output_names[key] = value.get<std::string>();
        }
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParamMismatch("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

Profile ExperimentConfig::make_profile() const {
    if (profile_kind == "gaussian") return Profile::gaussian(dimension);
    Profile p = Profile::from_csv(profile_csv);
    if (p.dimension() != dimension)
        throw ParamMismatch("config: sampled profile dimension mismatch");
    return p;
}

SemiclassicalParams ExperimentConfig::require_params(const char* who) const {
    if (!params)
        throw ParamMismatch(std::string("config: ") + who +
                            " needs a params section");
    return *params;
}

const TimeSchedule& ExperimentConfig::require_time(const char* who) const {
    if (!time)
        throw ParamMismatch(std::string("config: ") + who +
                            " needs a schedule-style time section");
    return *time;
}

Observable ExperimentConfig::make_observable() const {
    if (observable) return *observable;
    return Observable::constant(dimension);
}

double ExperimentConfig::output_time(const SemiclassicalParams& p) const {
    if (explicit_t) return *explicit_t;
    if (time) return realize_time(*time, p);
    throw ParamMismatch("config: a time section is required");
}

std::string ExperimentConfig::output_path(const std::string& out_dir,
                                          const std::string& key,
                                          const std::string& fallback) const {
    const auto it = output_names.find(key);
    const std::string name = it == output_names.end() ? fallback : it->second;
    return (std::filesystem::path(out_dir) / name).string();
}

} // namespace torusrev::cli
