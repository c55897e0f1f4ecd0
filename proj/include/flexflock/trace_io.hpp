// CSV export of run traces and the plain-text plot-data emission. All files
// carry a schema-version header comment and use round-trip float formatting
// so identical runs produce identical bytes.
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "flexflock/core.hpp"
#include "flexflock/sim.hpp"

namespace flexflock {

namespace detail {

inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw FlockError("cannot open output file: " + path.string());
    return out;
}

}  // namespace detail

inline void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace) {
    auto out = detail::open_out(path);
    out << "# flexflock-trace v1\n";
    out << "time,kind,i,j,x,y,theta,v,omega,mu,d,s,dstar,e\n";
    using detail::csv_num;
    for (const auto& rec : trace.records) {
        for (std::size_t i = 0; i < rec.poses.size(); ++i) {
            const auto& p = rec.poses[i];
            const auto& c = rec.controls[i];
            out << csv_num(rec.t) << ",pose," << i << ",," << csv_num(p.x) << ',' << csv_num(p.y)
                << ',' << csv_num(p.theta) << ',' << csv_num(c.v) << ',' << csv_num(c.omega)
                << ",,,,,\n";
        }
        for (const auto& [key, st] : rec.edges) {
            out << csv_num(rec.t) << ",edge," << key.i << ',' << key.j << ",,,,,,"
                << csv_num(st.mu) << ',' << csv_num(st.d) << ',' << csv_num(st.s) << ','
                << csv_num(st.d_star) << ',' << csv_num(st.e) << "\n";
        }
    }
}

inline void write_metrics_csv(const std::filesystem::path& path, const SimTrace& trace) {
    auto out = detail::open_out(path);
    out << "# flexflock-metrics v1\n";
    out << "time,sum_abs_e,max_abs_e,E_dev,E_asp,V_lyap,connected,min_mu,max_abs_v,max_abs_omega\n";
    using detail::csv_num;
    for (const auto& rec : trace.records) {
        const auto& m = rec.metrics;
        out << csv_num(m.t) << ',' << csv_num(m.sum_abs_e) << ',' << csv_num(m.max_abs_e) << ','
            << csv_num(m.E_dev) << ',' << csv_num(m.E_asp) << ',' << csv_num(m.V_lyap) << ','
            << (m.connected ? 1 : 0) << ',' << csv_num(m.min_mu) << ',' << csv_num(m.max_abs_v)
            << ',' << csv_num(m.max_abs_omega) << "\n";
    }
}

inline void write_events_csv(const std::filesystem::path& path, const SimTrace& trace) {
    auto out = detail::open_out(path);
    out << "# flexflock-events v1\n";
    out << "time,i,j,kind\n";
    for (const auto& ev : trace.events)
        out << detail::csv_num(ev.time) << ',' << ev.edge.i << ',' << ev.edge.j << ','
            << (ev.kind == EdgeEventKind::Added ? "added" : "removed_violation") << "\n";
}

inline void write_summary(const std::filesystem::path& path, const SimTrace& trace,
                          double d_nom, std::string* echo = nullptr) {
    std::ostringstream out;
    using detail::csv_num;
    const bool have = !trace.records.empty();
    const auto* last = have ? &trace.records.back().metrics : nullptr;
    bool collision_free = true;
    bool always_connected = true;
    double peak_v = 0.0, peak_w = 0.0;
    for (const auto& rec : trace.records) {
        if (!rec.edges.empty() && rec.metrics.min_mu <= 0.0) collision_free = false;
        if (!rec.metrics.connected) always_connected = false;
        peak_v = std::max(peak_v, rec.metrics.max_abs_v);
        peak_w = std::max(peak_w, rec.metrics.max_abs_omega);
    }
    out << "# flexflock-summary v1\n";
    out << "final_time = " << (have ? csv_num(last->t) : "nan") << "\n";
    out << "final_E_dev = " << (have ? csv_num(last->E_dev) : "nan") << "\n";
    out << "final_E_asp = " << (have ? csv_num(last->E_asp) : "nan") << "\n";
    out << "epsilon = " << (have ? csv_num(std::sqrt(last->E_dev) / d_nom) : "nan") << "\n";
    out << "final_max_abs_e = " << (have ? csv_num(last->max_abs_e) : "nan") << "\n";
    out << "connected_at_all_samples = " << (always_connected ? 1 : 0) << "\n";
    out << "collision_free = " << (collision_free ? 1 : 0) << "\n";
    out << "peak_abs_v = " << csv_num(peak_v) << "\n";
    out << "peak_abs_omega = " << csv_num(peak_w) << "\n";
    out << "edge_events = " << trace.events.size() << "\n";
    out << "total_messages = " << trace.total_messages << "\n";
    out << "wall_seconds = " << csv_num(trace.wall_seconds) << "\n";
    out << "aborted = " << (trace.aborted ? 1 : 0) << "\n";
    if (trace.aborted)
        out << "abort_reason = " << trace.abort_reason << "\n"
            << "abort_time = " << csv_num(trace.abort_time) << "\n";
    auto f = detail::open_out(path);
    f << out.str();
    if (echo) *echo = out.str();
}

// ---- plot-data emission -------------------------------------------------

// Minimal trace model re-read from the CSV files (plotdata runs against a
// directory written by an earlier run).
struct LoadedTrace {
    std::vector<double> times;
    std::vector<std::vector<AgentState>> poses;                       // per record
    std::map<EdgeKey, std::map<double, EdgeState>> edge_series;       // per edge: t -> state
    std::vector<double> e_dev, e_asp;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

inline LoadedTrace read_trace_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path trace_path = dir / "trace.csv";
    const fs::path metrics_path = dir / "metrics.csv";
    if (!fs::exists(trace_path))
        throw FlockError("no trace.csv in directory: " + dir.string());
    LoadedTrace lt;

    std::ifstream in(trace_path);
    std::string line;
    double cur_t = 0.0;
    bool first_record = true;
    std::vector<AgentState> cur_poses;
    auto flush_record = [&]() {
        if (!first_record) {
            lt.times.push_back(cur_t);
            lt.poses.push_back(cur_poses);
            cur_poses.clear();
        }
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
        const auto c = detail::split_csv(line);
        if (c.size() < 14) continue;
        const double t = std::stod(c[0]);
        if (first_record || t != cur_t) {
            flush_record();
            cur_t = t;
            first_record = false;
        }
        if (c[1] == "pose") {
            cur_poses.push_back({std::stod(c[4]), std::stod(c[5]), std::stod(c[6])});
        } else if (c[1] == "edge") {
            EdgeState st;
            st.mu = std::stod(c[9]);
            st.d = std::stod(c[10]);
            st.s = std::stod(c[11]);
            st.d_star = std::stod(c[12]);
            st.e = std::stod(c[13]);
            lt.edge_series[EdgeKey(std::stoi(c[2]), std::stoi(c[3]))][t] = st;
        }
    }
    flush_record();

    if (fs::exists(metrics_path)) {
        std::ifstream min(metrics_path);
        while (std::getline(min, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
            const auto c = detail::split_csv(line);
            if (c.size() < 10) continue;
            lt.e_dev.push_back(std::stod(c[3]));
            lt.e_asp.push_back(std::stod(c[4]));
        }
    }
    if (lt.times.empty()) throw FlockError("trace.csv contains no records: " + trace_path.string());
    return lt;
}

// Emit per-figure whitespace-separated data files: trajectories, spacing
// errors, mu series, s series and the energy comparison. Edges absent at a
// sample time (not yet admitted) print as nan.
inline void write_plotdata(const LoadedTrace& lt, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    using detail::csv_num;

    {
        auto out = detail::open_out(out_dir / "trajectories.dat");
        out << "# flexflock-plotdata v1: t then x_i y_i per agent\n# t";
        for (std::size_t i = 0; i < (lt.poses.empty() ? 0 : lt.poses[0].size()); ++i)
            out << " x" << i << " y" << i;
        out << "\n";
        for (std::size_t k = 0; k < lt.times.size(); ++k) {
            out << csv_num(lt.times[k]);
            for (const auto& p : lt.poses[k]) out << ' ' << csv_num(p.x) << ' ' << csv_num(p.y);
            out << "\n";
        }
    }

    auto edge_file = [&](const std::string& name, auto accessor) {
        auto out = detail::open_out(out_dir / name);
        out << "# flexflock-plotdata v1: t then one column per edge\n# t";
        for (const auto& [key, series] : lt.edge_series) out << " e" << key.i << "_" << key.j;
        out << "\n";
        for (const double t : lt.times) {
            out << csv_num(t);
            for (const auto& [key, series] : lt.edge_series) {
                const auto it = series.find(t);
                out << ' ' << (it == series.end() ? std::string("nan") : csv_num(accessor(it->second)));
            }
            out << "\n";
        }
    };
    edge_file("spacing_errors.dat", [](const EdgeState& s) { return s.e; });
    edge_file("mu_series.dat", [](const EdgeState& s) { return s.mu; });
    edge_file("s_series.dat", [](const EdgeState& s) { return s.s; });

    {
        auto out = detail::open_out(out_dir / "energy.dat");
        out << "# flexflock-plotdata v1: t E_dev E_asp\n";
        for (std::size_t k = 0; k < lt.times.size(); ++k) {
            const double ed = k < lt.e_dev.size() ? lt.e_dev[k] : std::nan("");
            const double ea = k < lt.e_asp.size() ? lt.e_asp[k] : std::nan("");
            out << csv_num(lt.times[k]) << ' ' << csv_num(ed) << ' ' << csv_num(ea) << "\n";
        }
    }
}

}  // namespace flexflock
