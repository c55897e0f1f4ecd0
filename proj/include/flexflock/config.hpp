// Scenario configuration: a flat key/value text format with repeatable list
// keys, load-time validation with precise messages, and canonical
// serialization (load . serialize . load is the identity).
#pragma once

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flexflock/core.hpp"
#include "flexflock/field.hpp"
#include "flexflock/graph.hpp"
#include "flexflock/sim.hpp"

namespace flexflock {

enum class PoseSpecKind { Explicit, Disc };

struct DInitSpec {
    enum class Kind { Nominal, Zero, Value } kind = Kind::Nominal;
    double value = 0.0;

    bool operator==(const DInitSpec&) const = default;
};

enum class PotentialTag { Quadratic, Barrier };

struct ScenarioConfig {
    FieldModel field;
    int n_agents = 0;
    TopologyMode topology = TopologyMode::Static;
    std::set<EdgeKey> static_edges;
    std::optional<double> r;  // required in dynamic mode and for the barrier
    PotentialTag potential = PotentialTag::Quadratic;
    double K_f = 1.0;
    double d_nom = 0.0;
    double lambda = 0.0;
    DInitSpec d_init;
    Integrator integrator = Integrator::RK4;
    double dt = 1e-3;
    double T = 50.0;
    int record_every = 10;
    std::uint64_t seed = 0;
    PoseSpecKind poses = PoseSpecKind::Explicit;
    std::vector<AgentState> pose_list;
    Vec2 disc_center{0.0, 0.0};
    double disc_radius = 0.0;
    double min_grad_sep = 0.0;
    std::string out_dir = "out";

    bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

inline double parse_real(const std::string& tok, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse real value '" + tok + "'");
    }
}

inline long long parse_int(const std::string& tok, const std::string& key) {
    long long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ConfigError("key '" + key + "': cannot parse integer '" + tok + "'");
    return v;
}

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_real4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace detail

// Parse a scenario from text. Grammar: one `key = value` per line, '#'
// starts a comment, repeatable keys are `edge`, `pose`, and `poly_term`;
// values with several fields are whitespace-separated.
inline ScenarioConfig parse_config(const std::string& text) {
    using detail::parse_int;
    using detail::parse_real;
    ScenarioConfig cfg;
    std::vector<std::string> errors;
    std::set<std::string> seen;
    std::vector<PolyTerm> poly_terms;
    bool have_field = false, have_n = false, have_topology = false, have_potential = false,
         have_dnom = false, have_lambda = false, have_poses = false;
    FieldKind field_kind = FieldKind::QuadraticBowl;

    auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };
    auto once = [&](const std::string& key) {
        if (seen.count(key)) fail("key '" + key + "' given more than once");
        seen.insert(key);
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        const auto toks = detail::split_ws(value);
        try {
            if (key == "field") {
                once(key);
                have_field = true;
                if (value == "quadratic") field_kind = FieldKind::QuadraticBowl;
                else if (value == "cubic") field_kind = FieldKind::CubicBench;
                else if (value == "poly") field_kind = FieldKind::Polynomial2D;
                else fail("key 'field': expected quadratic|cubic|poly, got '" + value + "'");
            } else if (key == "poly_term") {
                if (toks.size() != 3) { fail("key 'poly_term': expected '<i> <j> <coeff>'"); continue; }
                poly_terms.push_back({static_cast<int>(parse_int(toks[0], key)),
                                      static_cast<int>(parse_int(toks[1], key)),
                                      parse_real(toks[2], key)});
            } else if (key == "n_agents") {
                once(key);
                have_n = true;
                cfg.n_agents = static_cast<int>(parse_int(value, key));
            } else if (key == "topology") {
                once(key);
                have_topology = true;
                if (value == "static") cfg.topology = TopologyMode::Static;
                else if (value == "dynamic") cfg.topology = TopologyMode::Dynamic;
                else fail("key 'topology': expected static|dynamic, got '" + value + "'");
            } else if (key == "edge") {
                if (toks.size() != 2) { fail("key 'edge': expected '<i> <j>'"); continue; }
                const int a = static_cast<int>(parse_int(toks[0], key));
                const int b = static_cast<int>(parse_int(toks[1], key));
                if (a == b) { fail("key 'edge': self-loop " + value); continue; }
                cfg.static_edges.insert(EdgeKey(a, b));
            } else if (key == "r") {
                once(key);
                cfg.r = parse_real(value, key);
            } else if (key == "potential") {
                once(key);
                have_potential = true;
                if (value == "quadratic") cfg.potential = PotentialTag::Quadratic;
                else if (value == "barrier") cfg.potential = PotentialTag::Barrier;
                else fail("key 'potential': expected quadratic|barrier, got '" + value + "'");
            } else if (key == "K_f") {
                once(key);
                cfg.K_f = parse_real(value, key);
            } else if (key == "d_nom") {
                once(key);
                have_dnom = true;
                cfg.d_nom = parse_real(value, key);
            } else if (key == "lambda") {
                once(key);
                have_lambda = true;
                cfg.lambda = parse_real(value, key);
            } else if (key == "d_init") {
                once(key);
                if (value == "nominal") cfg.d_init = {DInitSpec::Kind::Nominal, 0.0};
                else if (value == "zero") cfg.d_init = {DInitSpec::Kind::Zero, 0.0};
                else cfg.d_init = {DInitSpec::Kind::Value, parse_real(value, key)};
            } else if (key == "integrator") {
                once(key);
                if (value == "rk4") cfg.integrator = Integrator::RK4;
                else if (value == "euler") cfg.integrator = Integrator::Euler;
                else fail("key 'integrator': expected rk4|euler, got '" + value + "'");
            } else if (key == "dt") {
                once(key);
                cfg.dt = parse_real(value, key);
            } else if (key == "T") {
                once(key);
                cfg.T = parse_real(value, key);
            } else if (key == "record_every") {
                once(key);
                cfg.record_every = static_cast<int>(parse_int(value, key));
            } else if (key == "seed") {
                once(key);
                cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
            } else if (key == "poses") {
                once(key);
                have_poses = true;
                if (value == "explicit") cfg.poses = PoseSpecKind::Explicit;
                else if (value == "disc") cfg.poses = PoseSpecKind::Disc;
                else fail("key 'poses': expected explicit|disc, got '" + value + "'");
            } else if (key == "pose") {
                if (toks.size() != 3) { fail("key 'pose': expected '<x> <y> <theta>'"); continue; }
                cfg.pose_list.push_back(
                    {parse_real(toks[0], key), parse_real(toks[1], key), parse_real(toks[2], key)});
            } else if (key == "disc_center") {
                once(key);
                if (toks.size() != 2) { fail("key 'disc_center': expected '<x> <y>'"); continue; }
                cfg.disc_center = {parse_real(toks[0], key), parse_real(toks[1], key)};
            } else if (key == "disc_radius") {
                once(key);
                cfg.disc_radius = parse_real(value, key);
            } else if (key == "min_grad_sep") {
                once(key);
                cfg.min_grad_sep = parse_real(value, key);
            } else if (key == "out_dir") {
                once(key);
                cfg.out_dir = value;
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }

    if (!have_field) fail("missing required key 'field'");
    if (!have_n) fail("missing required key 'n_agents'");
    if (!have_topology) fail("missing required key 'topology'");
    if (!have_potential) fail("missing required key 'potential'");
    if (!have_dnom) fail("missing required key 'd_nom'");
    if (!have_lambda) fail("missing required key 'lambda'");
    if (!have_poses) fail("missing required key 'poses'");

    if (have_field) {
        try {
            switch (field_kind) {
                case FieldKind::QuadraticBowl: cfg.field = FieldModel::quadratic_bowl(); break;
                case FieldKind::CubicBench: cfg.field = FieldModel::cubic_bench(); break;
                case FieldKind::Polynomial2D:
                    if (poly_terms.empty()) fail("field poly requires at least one poly_term");
                    cfg.field = FieldModel::polynomial(poly_terms);
                    break;
            }
        } catch (const InvalidArgument& e) {
            fail(e.what());
        }
    }

    // Semantic validation.
    if (have_n && cfg.n_agents < 1) fail("n_agents must be >= 1");
    if (!(cfg.K_f > 0.0)) fail("K_f must be > 0");
    if (have_dnom && !(cfg.d_nom > 0.0)) fail("d_nom must be > 0");
    if (have_lambda && !(cfg.lambda > 0.0)) fail("lambda must be > 0");
    if (!(cfg.dt > 0.0)) fail("dt must be > 0");
    if (!(cfg.T > 0.0)) fail("T must be > 0");
    if (cfg.record_every < 1) fail("record_every must be >= 1");
    if (cfg.topology == TopologyMode::Dynamic) {
        if (!cfg.r) fail("dynamic topology requires key 'r'");
        else if (!(*cfg.r > 0.0)) fail("r must be > 0");
        if (!cfg.static_edges.empty()) fail("key 'edge' is only valid with topology = static");
        if (cfg.r && *cfg.r > 0.0 && cfg.d_nom > 0.0 && cfg.lambda > 0.0) {
            const double bound = std::log(*cfg.r / cfg.d_nom);
            if (cfg.lambda > bound)
                fail("lambda " + detail::fmt_real(cfg.lambda) + " > ln(r/d_nom) = " +
                     detail::fmt_real4(bound));
        }
    }
    if (cfg.potential == PotentialTag::Barrier) {
        if (!cfg.r) fail("potential barrier requires key 'r'");
        else if (!(*cfg.r > 0.0)) fail("r must be > 0");
    }
    if (have_n && cfg.n_agents >= 1) {
        for (const auto& e : cfg.static_edges)
            if (e.i < 0 || e.j >= cfg.n_agents)
                fail("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                     ") out of agent range");
    }
    if (cfg.poses == PoseSpecKind::Explicit) {
        if (have_n && static_cast<int>(cfg.pose_list.size()) != cfg.n_agents)
            fail("poses explicit requires exactly n_agents 'pose' lines (got " +
                 std::to_string(cfg.pose_list.size()) + ")");
    } else {
        if (!(cfg.disc_radius > 0.0)) fail("poses disc requires disc_radius > 0");
        if (!(cfg.min_grad_sep > 0.0)) fail("poses disc requires min_grad_sep > 0");
        if (!cfg.pose_list.empty()) fail("key 'pose' is only valid with poses = explicit");
    }

    if (!errors.empty()) {
        std::string msg = "invalid scenario config:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (detail::trim(text).empty()) throw ConfigError("empty config file: " + path.string());
    return parse_config(text);
}

// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ScenarioConfig& cfg) {
    using detail::fmt_real;
    std::ostringstream out;
    out << "# flexflock scenario\n";
    switch (cfg.field.kind) {
        case FieldKind::QuadraticBowl: out << "field = quadratic\n"; break;
        case FieldKind::CubicBench: out << "field = cubic\n"; break;
        case FieldKind::Polynomial2D:
            out << "field = poly\n";
            for (const auto& t : cfg.field.terms)
                out << "poly_term = " << t.ix << " " << t.iy << " " << fmt_real(t.coeff) << "\n";
            break;
    }
    out << "n_agents = " << cfg.n_agents << "\n";
    out << "topology = " << (cfg.topology == TopologyMode::Static ? "static" : "dynamic") << "\n";
    for (const auto& e : cfg.static_edges) out << "edge = " << e.i << " " << e.j << "\n";
    if (cfg.r) out << "r = " << fmt_real(*cfg.r) << "\n";
    out << "potential = " << (cfg.potential == PotentialTag::Quadratic ? "quadratic" : "barrier")
        << "\n";
    out << "K_f = " << fmt_real(cfg.K_f) << "\n";
    out << "d_nom = " << fmt_real(cfg.d_nom) << "\n";
    out << "lambda = " << fmt_real(cfg.lambda) << "\n";
    switch (cfg.d_init.kind) {
        case DInitSpec::Kind::Nominal: out << "d_init = nominal\n"; break;
        case DInitSpec::Kind::Zero: out << "d_init = zero\n"; break;
        case DInitSpec::Kind::Value: out << "d_init = " << fmt_real(cfg.d_init.value) << "\n"; break;
    }
    out << "integrator = " << (cfg.integrator == Integrator::RK4 ? "rk4" : "euler") << "\n";
    out << "dt = " << fmt_real(cfg.dt) << "\n";
    out << "T = " << fmt_real(cfg.T) << "\n";
    out << "record_every = " << cfg.record_every << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "poses = " << (cfg.poses == PoseSpecKind::Explicit ? "explicit" : "disc") << "\n";
    if (cfg.poses == PoseSpecKind::Explicit) {
        for (const auto& p : cfg.pose_list)
            out << "pose = " << fmt_real(p.x) << " " << fmt_real(p.y) << " " << fmt_real(p.theta)
                << "\n";
    } else {
        out << "disc_center = " << fmt_real(cfg.disc_center.x) << " " << fmt_real(cfg.disc_center.y)
            << "\n";
        out << "disc_radius = " << fmt_real(cfg.disc_radius) << "\n";
        out << "min_grad_sep = " << fmt_real(cfg.min_grad_sep) << "\n";
    }
    out << "out_dir = " << cfg.out_dir << "\n";
    return out.str();
}

// Resolve a validated scenario into runnable options (pose generation,
// d_init and potential binding).
inline SimOptions to_sim_options(const ScenarioConfig& cfg) {
    SimOptions opts;
    opts.field = cfg.field;
    opts.n_agents = cfg.n_agents;
    opts.topo_mode = cfg.topology;
    opts.static_edges = cfg.static_edges;
    opts.r = cfg.r.value_or(0.0);
    opts.potential = cfg.potential == PotentialTag::Quadratic
                         ? PotentialKind::quadratic()
                         : PotentialKind::barrier(*cfg.r);
    opts.K_f = cfg.K_f;
    opts.spacing = {cfg.d_nom, cfg.lambda};
    switch (cfg.d_init.kind) {
        case DInitSpec::Kind::Nominal: opts.d_init = cfg.d_nom; break;
        case DInitSpec::Kind::Zero: opts.d_init = 0.0; break;
        case DInitSpec::Kind::Value: opts.d_init = cfg.d_init.value; break;
    }
    opts.integrator = cfg.integrator;
    opts.dt = cfg.dt;
    opts.T = cfg.T;
    opts.record_every = cfg.record_every;
    opts.initial_poses =
        cfg.poses == PoseSpecKind::Explicit
            ? cfg.pose_list
            : generate_poses(cfg.field, cfg.n_agents, cfg.seed, cfg.disc_center, cfg.disc_radius,
                             cfg.min_grad_sep);
    return opts;
}

}  // namespace flexflock
