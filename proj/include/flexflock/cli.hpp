// Command implementations behind the flexflock CLI: validate, run, compare,
// plotdata. They return process exit codes: 0 clean, 1 constraint-violating
// run, 2 configuration or I/O error.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "flexflock/config.hpp"
#include "flexflock/core.hpp"
#include "flexflock/sim.hpp"
#include "flexflock/trace_io.hpp"

namespace flexflock {

inline int log_level() {
    static const int level = [] {
        const char* v = std::getenv("FLEXFLOCK_LOG");
        return v ? std::atoi(v) : 0;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[flexflock] " << msg << "\n";
}

struct RunOverrides {
    std::optional<double> dt;
    std::optional<double> T;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

inline ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOverrides& ov) {
    if (ov.dt) cfg.dt = *ov.dt;
    if (ov.T) cfg.T = *ov.T;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (!(cfg.dt > 0.0) || !(cfg.T > 0.0))
        throw ConfigError("overridden dt and T must be > 0");
    return cfg;
}

inline int cmd_validate(const std::string& config_path) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        // Also resolve poses and check run preconditions (connectivity,
        // distinct gradients, barrier domain at t0).
        const SimOptions opts = to_sim_options(cfg);
        SimOptions probe = opts;
        probe.T = probe.dt;  // one step is enough to trip t0 violations
        probe.record_every = 1;
        const SimTrace t = run(probe);
        if (t.aborted) {
            std::cout << "invalid: " << t.abort_reason << "\n";
            return 1;
        }
        std::cout << "ok: " << config_path << "\n";
        return 0;
    } catch (const FlockError& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_run(const std::string& config_path, const RunOverrides& ov = {}) {
    namespace fs = std::filesystem;
    try {
        const ScenarioConfig cfg = apply_overrides(load_config(config_path), ov);
        const SimOptions opts = to_sim_options(cfg);
        log_info("running " + config_path + " -> " + cfg.out_dir);
        const SimTrace trace = run(opts);

        fs::create_directories(cfg.out_dir);
        write_trace_csv(fs::path(cfg.out_dir) / "trace.csv", trace);
        write_metrics_csv(fs::path(cfg.out_dir) / "metrics.csv", trace);
        write_events_csv(fs::path(cfg.out_dir) / "events.csv", trace);
        std::string summary;
        write_summary(fs::path(cfg.out_dir) / "summary.txt", trace, cfg.d_nom, &summary);
        std::cout << summary;
        if (trace.aborted) {
            std::cerr << "run aborted at t = " << trace.abort_time << ": " << trace.abort_reason
                      << "\n";
            return 1;
        }
        return 0;
    } catch (const FlockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

struct CompareResult {
    // First recorded time at which the flexible run's E_ASP (resp. the
    // baseline's E_dev) drops below the threshold; unset if never.
    std::optional<double> t_flexible;
    std::optional<double> t_baseline;
    SimTrace flexible;
    SimTrace baseline;
};

inline CompareResult run_compare(const SimOptions& opts, double threshold) {
    CompareResult res;
    SimOptions flex = opts;
    flex.asp_enabled = true;
    SimOptions base = opts;
    base.asp_enabled = false;
    res.flexible = run(flex);
    res.baseline = run(base);
    for (const auto& rec : res.flexible.records)
        if (!res.t_flexible && rec.metrics.E_asp < threshold) res.t_flexible = rec.t;
    for (const auto& rec : res.baseline.records)
        if (!res.t_baseline && rec.metrics.E_dev < threshold) res.t_baseline = rec.t;
    return res;
}

inline int cmd_compare(const std::string& config_path, const RunOverrides& ov = {},
                       double threshold = 0.01) {
    namespace fs = std::filesystem;
    try {
        const ScenarioConfig cfg = apply_overrides(load_config(config_path), ov);
        if (cfg.topology != TopologyMode::Static)
            throw ConfigError("compare requires a static-topology scenario");
        const SimOptions opts = to_sim_options(cfg);
        const CompareResult res = run_compare(opts, threshold);

        fs::create_directories(cfg.out_dir);
        {
            auto out = detail::open_out(fs::path(cfg.out_dir) / "compare_energy.dat");
            out << "# flexflock-compare v1: t E_dev_flexible E_asp_flexible E_dev_baseline\n";
            const std::size_t n =
                std::min(res.flexible.records.size(), res.baseline.records.size());
            for (std::size_t k = 0; k < n; ++k) {
                const auto& mf = res.flexible.records[k].metrics;
                const auto& mb = res.baseline.records[k].metrics;
                out << detail::csv_num(mf.t) << ' ' << detail::csv_num(mf.E_dev) << ' '
                    << detail::csv_num(mf.E_asp) << ' ' << detail::csv_num(mb.E_dev) << "\n";
            }
        }
        std::ostringstream sum;
        sum << "# flexflock-compare-summary v1\n";
        sum << "threshold = " << detail::csv_num(threshold) << "\n";
        sum << "t_flexible_E_asp = "
            << (res.t_flexible ? detail::csv_num(*res.t_flexible) : "never") << "\n";
        sum << "t_baseline_E_dev = "
            << (res.t_baseline ? detail::csv_num(*res.t_baseline) : "never") << "\n";
        const bool ordered = res.t_flexible && (!res.t_baseline || *res.t_flexible < *res.t_baseline);
        sum << "flexible_faster = " << (ordered ? 1 : 0) << "\n";
        {
            auto out = detail::open_out(fs::path(cfg.out_dir) / "compare_summary.txt");
            out << sum.str();
        }
        std::cout << sum.str();
        if (res.flexible.aborted || res.baseline.aborted) {
            std::cerr << "compare aborted: "
                      << (res.flexible.aborted ? res.flexible.abort_reason
                                               : res.baseline.abort_reason)
                      << "\n";
            return 1;
        }
        return 0;
    } catch (const FlockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_plotdata(const std::string& trace_dir, const std::string& out_dir) {
    try {
        const LoadedTrace lt = read_trace_dir(trace_dir);
        write_plotdata(lt, out_dir);
        std::cout << "plot data written to " << out_dir << " (" << lt.times.size()
                  << " samples, " << lt.edge_series.size() << " edges)\n";
        return 0;
    } catch (const FlockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: malformed trace data: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace flexflock
