// Coupled integration of all agent poses and all edge spacing states, the
// per-step pipeline (sense -> exchange -> control -> integrate ->
// retopologize), and trace recording.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flexflock/bus.hpp"
#include "flexflock/controller.hpp"
#include "flexflock/core.hpp"
#include "flexflock/field.hpp"
#include "flexflock/graph.hpp"
#include "flexflock/metrics.hpp"
#include "flexflock/potential.hpp"
#include "flexflock/spacing.hpp"

namespace flexflock {

enum class Integrator { RK4, Euler };

// Fully resolved run parameters (scenario files are parsed into this by the
// config module; tests may build it directly).
struct SimOptions {
    FieldModel field;
    int n_agents = 0;
    std::vector<AgentState> initial_poses;
    TopologyMode topo_mode = TopologyMode::Static;
    std::set<EdgeKey> static_edges;
    double r = 0.0;  // dynamic sensing range
    PotentialKind potential = PotentialKind::quadratic();
    double K_f = 1.0;
    SpacingParams spacing;
    double d_init = 2.0;  // d_ij at t0 and at edge admission
    Integrator integrator = Integrator::RK4;
    double dt = 1e-3;
    double T = 50.0;
    int record_every = 10;
    bool asp_enabled = true;  // false: fixed-spacing baseline (s = 1, D* = d_nom)
};

struct SimState {
    double t = 0.0;
    std::vector<AgentState> poses;
    EdgeStateMap edges;  // keyed exactly by the current topology edge set
    Topology topo;
};

// One recorded sample of the run.
struct TraceRecord {
    double t = 0.0;
    std::vector<AgentState> poses;  // theta wrapped to (-pi, pi]
    std::vector<ControlInput> controls;
    std::vector<std::pair<EdgeKey, EdgeState>> edges;
    MetricsSnapshot metrics;
};

struct SimTrace {
    std::vector<TraceRecord> records;
    std::vector<EdgeEvent> events;
    std::uint64_t total_messages = 0;
    bool aborted = false;
    std::string abort_reason;
    double abort_time = 0.0;
    double wall_seconds = 0.0;
};

// Time-derivative of the coupled state (pose rates and d_ij rates), plus
// the controls that produced it.
struct Derivative {
    std::vector<double> dx, dy, dtheta;
    std::vector<double> dd;  // aligned with the edges map iteration order
    std::vector<ControlInput> controls;
};

namespace detail {

// Refresh every edge state from the stage poses and d values. In baseline
// mode the spacing policy is frozen: s = 1, D* = d_nom.
inline void refresh_edges(EdgeStateMap& edges, std::span<const Vec2> gradients,
                          const SimOptions& opts, std::span<const double> d_values) {
    std::size_t k = 0;
    for (auto& [key, st] : edges) {
        const double m = mu(gradients[key.i], gradients[key.j]);
        const double d = d_values[k++];
        if (opts.asp_enabled) {
            st = make_edge_state(d, m, opts.spacing);
        } else {
            st.d = d;
            st.s = 1.0;
            st.d_star = opts.spacing.d_nom;
            st.mu = m;
            st.e = spacing_error(m, st.d_star);
        }
    }
}

// One evaluation of the coupled right-hand side at a stage state. Controls
// are recomputed from the stage state; the topology is fixed for the step.
inline Derivative evaluate(const std::vector<AgentState>& poses,
                           std::span<const double> d_values, SimState& scratch,
                           const SimOptions& opts, long step) {
    const int n = opts.n_agents;
    std::vector<Vec2> gradients(n);
    for (int i = 0; i < n; ++i) gradients[i] = gradient(opts.field, {poses[i].x, poses[i].y});

    refresh_edges(scratch.edges, gradients, opts, d_values);

    const Mailbox mail = publish_all(scratch.topo, gradients, step);
    const ControllerConfig cfg{opts.K_f, opts.potential};

    Derivative out;
    out.dx.resize(n);
    out.dy.resize(n);
    out.dtheta.resize(n);
    out.controls.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<NeighborInput> inputs;
        inputs.reserve(mail[i].size());
        for (const auto& sample : mail[i])
            inputs.push_back({sample, scratch.edges.at(EdgeKey(i, sample.sender))});
        const ControlInput u =
            agent_step_inputs(poses[i], gradients[i], hessian(opts.field, {poses[i].x, poses[i].y}),
                              inputs, cfg);
        out.controls[i] = u;
        out.dx[i] = u.v * std::cos(poses[i].theta);
        out.dy[i] = u.v * std::sin(poses[i].theta);
        out.dtheta[i] = u.omega;
    }

    out.dd.reserve(scratch.edges.size());
    for (const auto& [key, st] : scratch.edges)
        out.dd.push_back(opts.asp_enabled ? d_rate(st.e) : 0.0);
    return out;
}

inline std::vector<AgentState> blend_poses(const std::vector<AgentState>& base,
                                           const Derivative& k, double a) {
    std::vector<AgentState> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        out[i] = {base[i].x + a * k.dx[i], base[i].y + a * k.dy[i],
                  base[i].theta + a * k.dtheta[i]};
    return out;
}

inline std::vector<double> blend_d(const std::vector<double>& base, const Derivative& k,
                                   double a) {
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + a * k.dd[i];
    return out;
}

}  // namespace detail

// Right-hand side of the coupled ODE at the state's own time, exposed for
// direct inspection by tests; controls come along for the ride.
inline Derivative derivatives(const SimState& state, const SimOptions& opts,
                              long step = 0) {
    SimState scratch = state;
    std::vector<double> d0;
    d0.reserve(state.edges.size());
    for (const auto& [key, st] : state.edges) d0.push_back(st.d);
    return detail::evaluate(state.poses, d0, scratch, opts, step);
}

// Advance one step of dt with the configured integrator. Controls are
// re-evaluated at every stage; the topology stays fixed. Dynamic-mode edge
// switching is applied by the caller after the step.
inline std::vector<ControlInput> step(SimState& state, double dt, const SimOptions& opts,
                                      long step_index = 0) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
    std::vector<double> d0;
    d0.reserve(state.edges.size());
    for (const auto& [key, st] : state.edges) d0.push_back(st.d);

    SimState scratch = state;  // shares topology and edge keys
    const auto k1 = detail::evaluate(state.poses, d0, scratch, opts, step_index);
    Derivative combined;

    if (opts.integrator == Integrator::Euler) {
        combined = k1;
    } else {
        const auto k2 = detail::evaluate(detail::blend_poses(state.poses, k1, 0.5 * dt),
                                         detail::blend_d(d0, k1, 0.5 * dt), scratch, opts,
                                         step_index);
        const auto k3 = detail::evaluate(detail::blend_poses(state.poses, k2, 0.5 * dt),
                                         detail::blend_d(d0, k2, 0.5 * dt), scratch, opts,
                                         step_index);
        const auto k4 = detail::evaluate(detail::blend_poses(state.poses, k3, dt),
                                         detail::blend_d(d0, k3, dt), scratch, opts, step_index);
        combined = k1;
        for (std::size_t i = 0; i < combined.dx.size(); ++i) {
            combined.dx[i] = (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]) / 6.0;
            combined.dy[i] = (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]) / 6.0;
            combined.dtheta[i] =
                (k1.dtheta[i] + 2.0 * k2.dtheta[i] + 2.0 * k3.dtheta[i] + k4.dtheta[i]) / 6.0;
        }
        for (std::size_t i = 0; i < combined.dd.size(); ++i)
            combined.dd[i] = (k1.dd[i] + 2.0 * k2.dd[i] + 2.0 * k3.dd[i] + k4.dd[i]) / 6.0;
    }

    state.poses = detail::blend_poses(state.poses, combined, dt);
    const auto d_new = detail::blend_d(d0, combined, dt);
    std::size_t k = 0;
    for (auto& [key, st] : state.edges) st.d = d_new[k++];
    state.t += dt;

    // Re-derive the stored edge states at the new state.
    std::vector<Vec2> gradients(opts.n_agents);
    for (int i = 0; i < opts.n_agents; ++i)
        gradients[i] = gradient(opts.field, {state.poses[i].x, state.poses[i].y});
    detail::refresh_edges(state.edges, gradients, opts, d_new);
    return k1.controls;
}

// Seeded pose generator: uniform poses in a disc, resampled until all pairs
// are separated by at least min_grad_sep in gradient space. The RNG-to-double
// mapping is fixed so results are identical across platforms.
inline std::vector<AgentState> generate_poses(const FieldModel& field, int n,
                                              std::uint64_t seed, Vec2 center, double radius,
                                              double min_grad_sep, int max_tries = 1000) {
    if (n <= 0) throw InvalidArgument("n_agents must be positive");
    if (!(radius > 0.0)) throw InvalidArgument("disc radius must be > 0");
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<AgentState> poses(n);
        for (auto& p : poses) {
            const double rr = radius * std::sqrt(u01());
            const double phi = 2.0 * kPi * u01();
            p.x = center.x + rr * std::cos(phi);
            p.y = center.y + rr * std::sin(phi);
            p.theta = kPi * (2.0 * u01() - 1.0);
        }
        bool ok = true;
        for (int i = 0; ok && i < n; ++i)
            for (int j = i + 1; ok && j < n; ++j)
                if (mu(gradient(field, {poses[i].x, poses[i].y}),
                       gradient(field, {poses[j].x, poses[j].y})) < min_grad_sep)
                    ok = false;
        if (ok) return poses;
    }
    throw ConfigError("pose generator could not satisfy the minimum gradient separation");
}

namespace detail {

inline void validate_run_preconditions(const SimState& state, const SimOptions& opts) {
    if (opts.n_agents <= 0) throw ConfigError("n_agents must be positive");
    if (static_cast<int>(opts.initial_poses.size()) != opts.n_agents)
        throw ConfigError("initial pose count does not match n_agents");
    if (!(opts.spacing.d_nom > 0.0)) throw ConfigError("d_nom must be > 0");
    if (!(opts.spacing.lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(opts.T > 0.0) || !(opts.dt > 0.0)) throw ConfigError("dt and T must be > 0");
    if (opts.record_every < 1) throw ConfigError("record_every must be >= 1");
    if (opts.topo_mode == TopologyMode::Dynamic) {
        const double bound = std::log(opts.r / opts.spacing.d_nom);
        if (opts.spacing.lambda > bound)
            throw ConfigError("lambda exceeds the connectivity-preservation bound ln(r/d_nom)");
        if (!is_connected(state.topo))
            throw ConfigError("dynamic-mode initial graph is not connected");
    }
    std::vector<Vec2> gradients(opts.n_agents);
    for (int i = 0; i < opts.n_agents; ++i)
        gradients[i] =
            gradient(opts.field, {opts.initial_poses[i].x, opts.initial_poses[i].y});
    for (const auto& key : state.topo.edges) {
        const double m = mu(gradients[key.i], gradients[key.j]);
        if (m <= 0.0)
            throw ConfigError("connected pair (" + std::to_string(key.i) + "," +
                              std::to_string(key.j) + ") has coincident initial gradients");
        if (opts.topo_mode == TopologyMode::Dynamic && m >= opts.r)
            throw ConfigError("connected pair outside barrier domain at t0");
    }
}

inline void record_sample(SimTrace& trace, SimState& state, const SimOptions& opts,
                          long step_index) {
    // Fresh evaluation at the recorded state gives the controls actually in
    // effect there; it also re-derives the edge states.
    const auto deriv = derivatives(state, opts, step_index);
    TraceRecord rec;
    rec.t = state.t;
    rec.poses = state.poses;
    for (auto& p : rec.poses) p.theta = wrap_angle(p.theta);
    rec.controls = deriv.controls;
    rec.edges.assign(state.edges.begin(), state.edges.end());
    rec.metrics = snapshot(state.t, state.edges, state.topo, deriv.controls, opts.potential,
                           opts.spacing.d_nom);

    const double s_lo = std::exp(-opts.spacing.lambda);
    const double s_hi = std::exp(opts.spacing.lambda);
    for (const auto& [key, st] : state.edges) {
        if (opts.asp_enabled && !(st.s > s_lo && st.s < s_hi))
            throw FlockError("scaling factor left (e^-lambda, e^lambda)");
        if (!std::isfinite(st.mu) || !std::isfinite(st.d) || !std::isfinite(st.e))
            throw FlockError("non-finite edge state recorded");
    }
    for (const auto& p : rec.poses)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.theta))
            throw FlockError("non-finite pose recorded");
    trace.records.push_back(std::move(rec));
}

}  // namespace detail

// Run a scenario from t = 0 to T, recording every record_every-th step plus
// the final one. Runtime violations (collision, barrier domain, removed
// edge) abort the run: the trace keeps everything recorded so far, carries
// the reason, and the CLI maps it to a nonzero exit.
inline SimTrace run(const SimOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    SimTrace trace;
    SimState state;
    state.t = 0.0;
    state.poses = opts.initial_poses;
    state.topo.mode = opts.topo_mode;
    state.topo.n_agents = opts.n_agents;
    state.topo.r = opts.r;

    if (opts.topo_mode == TopologyMode::Static) {
        state.topo.edges = opts.static_edges;
    } else {
        std::vector<Vec2> gradients(opts.n_agents);
        for (int i = 0; i < opts.n_agents; ++i)
            gradients[i] =
                gradient(opts.field, {opts.initial_poses[i].x, opts.initial_poses[i].y});
        for (int i = 0; i < opts.n_agents; ++i)
            for (int j = i + 1; j < opts.n_agents; ++j)
                if (opts.r - mu(gradients[i], gradients[j]) > 0.0)
                    state.topo.edges.insert(EdgeKey(i, j));
    }

    detail::validate_run_preconditions(state, opts);

    {
        std::vector<Vec2> gradients(opts.n_agents);
        for (int i = 0; i < opts.n_agents; ++i)
            gradients[i] =
                gradient(opts.field, {opts.initial_poses[i].x, opts.initial_poses[i].y});
        std::vector<double> d0(state.topo.edges.size(), opts.d_init);
        for (const auto& key : state.topo.edges) state.edges[key] = EdgeState{};
        detail::refresh_edges(state.edges, gradients, opts, d0);
    }

    const long n_steps = static_cast<long>(std::llround(opts.T / opts.dt));
    auto finish = [&](bool ok, const std::string& reason, double t) {
        if (!ok) {
            trace.aborted = true;
            trace.abort_reason = reason;
            trace.abort_time = t;
        }
        trace.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    try {
        detail::record_sample(trace, state, opts, 0);
        for (long k = 1; k <= n_steps; ++k) {
            step(state, opts.dt, opts, k - 1);
            trace.total_messages += 2 * state.edges.size();

            if (opts.topo_mode == TopologyMode::Dynamic) {
                std::vector<Vec2> gradients(opts.n_agents);
                for (int i = 0; i < opts.n_agents; ++i)
                    gradients[i] = gradient(opts.field, {state.poses[i].x, state.poses[i].y});
                const auto events = update_edges(state.topo, gradients, state.t);
                bool removed = false;
                for (const auto& ev : events) {
                    trace.events.push_back(ev);
                    if (ev.kind == EdgeEventKind::Added) {
                        EdgeState fresh;
                        fresh.d = opts.d_init;
                        state.edges[ev.edge] = fresh;
                    } else {
                        state.edges.erase(ev.edge);
                        removed = true;
                    }
                }
                if (!events.empty()) {
                    std::vector<double> d_now;
                    d_now.reserve(state.edges.size());
                    for (const auto& [key, st] : state.edges) d_now.push_back(st.d);
                    detail::refresh_edges(state.edges, gradients, opts, d_now);
                }
                if (removed) {
                    detail::record_sample(trace, state, opts, k);
                    finish(false, "edge removed: connectivity-preservation violation",
                           state.t);
                    return trace;
                }
            }

            if (k % opts.record_every == 0 || k == n_steps)
                detail::record_sample(trace, state, opts, k);
        }
        finish(true, "", state.t);
    } catch (const FlockError& err) {
        finish(false, err.what(), state.t);
    }
    return trace;
}

}  // namespace flexflock
