#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusrev/harness.hpp"
#include "torusrev/limits.hpp"
#include "torusrev/phasespace.hpp"
#include "torusrev/profile.hpp"
#include "torusrev/state.hpp"

namespace torusrev::cli {

// Parsed experiment description. Strict: unknown keys anywhere in the config
// document are hard errors, so a typo can never silently fall back to a
// default.
struct ExperimentConfig {
    int dimension = 1;

    // profile
    std::string profile_kind = "gaussian";  // "gaussian" | "sampled"
    std::string profile_csv;                // sampled only

    PacketSpec packet;

    // single-point semiclassical parameters (evolve/husimi/revival-scan;
    // optional for limit-eval where they resolve the residual drift)
    std::optional<SemiclassicalParams> params;

    // sweep (converge)
    std::optional<HbarSchedule> schedule;

    // evaluation time: a schedule realized per-hbar, or an explicit value
    std::optional<TimeSchedule> time;
    std::optional<double> explicit_t;

    std::optional<Observable> observable;

    // husimi raster
    int n_q = 256;
    int n_p = 256;
    std::optional<std::vector<double>> p_lo, p_hi;

    int scan_steps = 1024;
    int density_points = 256;

    // limit-eval extras
    bool theta_check = false;
    std::vector<double> theta_widths = {0.25, 0.5, 1.0, 2.0};
    int theta_points = 64;
    std::optional<int> resonance_bound;

    std::map<std::string, std::string> output_names;

    std::string raw;  // exact config bytes, fingerprinted into outputs

    // resolved helpers (validate cross-field invariants on use)
    Profile make_profile() const;
    SemiclassicalParams require_params(const char* who) const;
    const TimeSchedule& require_time(const char* who) const;
    Observable make_observable() const;  // defaults to the constant observable
    double output_time(const SemiclassicalParams& params) const;
    std::string output_path(const std::string& out_dir, const std::string& key,
                            const std::string& fallback) const;
};

// Throws ParamMismatch (or nlohmann parse_error) on any malformed input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

} // namespace torusrev::cli
