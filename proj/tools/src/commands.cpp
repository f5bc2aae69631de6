#include "commands.hpp"

#include <cmath>
#include <iostream>

#include "torusrev/parallel.hpp"
#include "torusrev/serialize.hpp"

namespace torusrev::cli {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// lexicographic q-grid with n points per axis, spacing 2*pi/n, origin included
std::vector<std::vector<double>> density_grid(int dimension, int n) {
    std::int64_t total = 1;
    for (int a = 0; a < dimension; ++a) {
        total *= n;
        if (total > (std::int64_t{1} << 24))
            throw GridTooLarge("density grid exceeds the cell budget");
    }
    std::vector<std::vector<double>> points(total, std::vector<double>(dimension));
    std::vector<int> idx(dimension, 0);
    for (std::int64_t i = 0; i < total; ++i) {
        for (int a = 0; a < dimension; ++a)
            points[i][a] = kTwoPi * idx[a] / static_cast<double>(n);
        for (int a = dimension - 1; a >= 0; --a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
    }
    return points;
}

} // namespace

int cmd_evolve(const ExperimentConfig& cfg, const CommandContext& ctx) {
    const SemiclassicalParams params = cfg.require_params("evolve");
    const Profile profile = cfg.make_profile();
    const double t = cfg.output_time(params);
    const FourierState state =
        evolve(coherent_state(params, cfg.packet, profile), t);

    const auto points = density_grid(cfg.dimension, cfg.density_points);
    std::vector<double> values(points.size());
    parallel_for(static_cast<std::int64_t>(points.size()), ctx.threads,
                 [&](std::int64_t i) {
                     values[i] = position_density(state, points[i]);
                 });

    const std::uint64_t hash = fnv1a64(cfg.raw);
    const std::string state_json = state_to_json(state);
    const std::string density_csv = density_to_csv(points, values, hash);
    write_atomic(cfg.output_path(ctx.out_dir, "state", "state.json"), state_json);
    write_atomic(cfg.output_path(ctx.out_dir, "density", "density.csv"),
                 density_csv);
    return 0;
}

int cmd_husimi(const ExperimentConfig& cfg, const CommandContext& ctx) {
    const SemiclassicalParams params = cfg.require_params("husimi");
    const Profile profile = cfg.make_profile();
    const double t = cfg.output_time(params);
    const FourierState state =
        evolve(coherent_state(params, cfg.packet, profile), t);

    PhaseSpaceGrid grid = default_grid(params, cfg.packet, cfg.n_q, cfg.n_p);
    if (cfg.p_lo) {
        grid.p_lo = *cfg.p_lo;
        grid.p_hi = *cfg.p_hi;
    }
    const HusimiGrid raster = husimi_grid(state, params, profile, grid, ctx.threads);
    write_atomic(cfg.output_path(ctx.out_dir, "husimi", "husimi.csv"),
                 husimi_to_csv(raster, fnv1a64(cfg.raw)));
    return 0;
}

int cmd_converge(const ExperimentConfig& cfg, const CommandContext& ctx) {
    if (!cfg.schedule)
        throw ParamMismatch("config: converge needs a schedule section");
    const TimeSchedule& tsched = cfg.require_time("converge");
    const Profile profile = cfg.make_profile();
    const auto rows = run_convergence(*cfg.schedule, tsched, cfg.packet, profile,
                                      cfg.make_observable(), ctx.threads);
    write_atomic(cfg.output_path(ctx.out_dir, "convergence", "convergence.csv"),
                 convergence_to_csv(rows, fnv1a64(cfg.raw)));
    return 0;
}

int cmd_limit_eval(const ExperimentConfig& cfg, const CommandContext& ctx) {
    const TimeSchedule& tsched = cfg.require_time("limit-eval");
    const Profile profile = cfg.make_profile();

    std::optional<double> residual;
    if (cfg.params && tsched.kind == TimeSchedule::Kind::RationalRevival &&
        std::isfinite(tsched.b))
        residual = tsched.b * cfg.params->alpha / cfg.params->hbar;
    const LimitMeasure measure =
        limit_measure(tsched, cfg.packet, profile, residual);
    const double pairing = pair_limit_observable(measure, cfg.make_observable());

    std::string eval = "{\n  \"limit_pairing\": " + format_double(pairing);
    if (cfg.theta_check) {
        eval += ",\n  \"theta_check\": [";
        for (size_t i = 0; i < cfg.theta_widths.size(); ++i) {
            const double b = cfg.theta_widths[i];
            double worst = 0.0;
            std::vector<double> q(cfg.dimension);
            for (int k = 0; k < cfg.theta_points; ++k) {
                const double s = kTwoPi * k / static_cast<double>(cfg.theta_points);
                std::fill(q.begin(), q.end(), s);
                const auto [fourier, image] = theta_identity_check(b, q, cfg.dimension);
                worst = std::max(worst, std::fabs(fourier - image));
            }
            if (i) eval += ", ";
            eval += "{\"width_b\": " + format_double(b) +
                    ", \"max_abs_diff\": " + format_double(worst) + "}";
        }
        eval += "]";
    }
    if (cfg.resonance_bound)
        eval += std::string(",\n  \"resonant\": ") +
                (resonant(cfg.packet.p0, *cfg.resonance_bound) ? "true" : "false");
    eval += "\n}\n";

    write_atomic(cfg.output_path(ctx.out_dir, "measure", "measure.json"),
                 measure_to_json(measure));
    write_atomic(cfg.output_path(ctx.out_dir, "eval", "eval.json"), eval);
    return 0;
}

int cmd_revival_scan(const ExperimentConfig& cfg, const CommandContext& ctx) {
    const SemiclassicalParams params = cfg.require_params("revival-scan");
    const Profile profile = cfg.make_profile();
    const auto points = revival_scan(params, cfg.packet, profile, cfg.scan_steps);
    write_atomic(cfg.output_path(ctx.out_dir, "scan", "scan.csv"),
                 scan_to_csv(points, fnv1a64(cfg.raw)));
    return 0;
}

int run_guarded(int (*cmd)(const ExperimentConfig&, const CommandContext&),
                const std::string& config_path, const CommandContext& ctx) {
    try {
        const ExperimentConfig cfg = load_config(config_path);
        return cmd(cfg, ctx);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace torusrev::cli
