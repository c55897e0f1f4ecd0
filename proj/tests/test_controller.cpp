#include "flexflock/controller.hpp"

#include <span>
#include <type_traits>

#include "test_util.hpp"

using namespace flexflock;

// Information firewall, compile-time half: the full per-agent pipeline is
// invocable from own pose + own gradient + own Hessian + neighbor samples +
// per-edge states, and from nothing else. GradientSample and EdgeState carry
// no pose, velocity, or orientation of other agents.
static_assert(std::is_invocable_r_v<ControlInput, decltype(&agent_step_inputs),
                                    const AgentState&, Vec2, const Mat2&,
                                    std::span<const NeighborInput>, const ControllerConfig&>);
static_assert(std::is_same_v<decltype(GradientSample::X), Vec2>);
static_assert(std::is_same_v<decltype(GradientSample::sender), int>);
static_assert(std::is_same_v<decltype(GradientSample::stamp), long>);
static_assert(sizeof(GradientSample) <= sizeof(int) + alignof(Vec2) + sizeof(Vec2) + sizeof(long));
static_assert(std::is_same_v<decltype(EdgeState::d), double> &&
              std::is_same_v<decltype(EdgeState::mu), double> &&
              std::is_same_v<decltype(EdgeState::e), double>);

namespace {

NeighborInput neighbor(Vec2 X, const EdgeState& st, int sender = 1) {
    return {{sender, X, 0}, st};
}

EdgeState state_with(double mu_val, double d_star) {
    EdgeState st;
    st.mu = mu_val;
    st.d_star = d_star;
    st.e = mu_val - d_star;
    return st;
}

}  // namespace

TEST_CASE("orientation vectors", "[controller]") {
    const auto [o0, p0] = orientation_vectors(0.0);
    CHECK(o0 == Vec2{1.0, 0.0});
    CHECK(p0 == Vec2{0.0, -1.0});

    const auto [o1, p1] = orientation_vectors(kPi / 2.0);
    CHECK_CLOSE(o1.x, 0.0, 1e-15);
    CHECK_CLOSE(o1.y, 1.0, 1e-15);
    CHECK_CLOSE(p1.x, 1.0, 1e-15);
    CHECK_CLOSE(p1.y, 0.0, 1e-15);

    testutil::Rng rng(42);
    for (int k = 0; k < 100; ++k) {
        const auto [o, operp] = orientation_vectors(rng.uniform(-10.0, 10.0));
        CHECK_CLOSE(o.dot(operp), 0.0, 1e-15);
        CHECK_CLOSE(o.norm(), 1.0, 1e-15);
        CHECK_CLOSE(operp.norm(), 1.0, 1e-15);
    }
}

TEST_CASE("control law", "[controller]") {
    const ControllerConfig cfg{1.0, PotentialKind::quadratic()};
    const Mat2 hess{-2.0, 0.0, 0.0, -2.0};

    // equilibrium: zero potential gradient
    const auto u0 = compute_control({0.0, 0.0, 0.7}, hess, {0.0, 0.0}, 3, cfg);
    CHECK(u0.v == 0.0);
    CHECK(u0.omega == 0.0);

    // hand matrix arithmetic: theta = 0, gradP = (1,0)
    const auto u1 = compute_control({0.0, 0.0, 0.0}, hess, {1.0, 0.0}, 1, cfg);
    CHECK(u1.v == 2.0);
    CHECK(u1.omega == 0.0);

    // pure rotation case: gradP = (0,1)
    const auto u2 = compute_control({0.0, 0.0, 0.0}, hess, {0.0, 1.0}, 1, cfg);
    CHECK(u2.v == 0.0);
    CHECK(u2.omega == 2.0);

    // isolated agents hold still
    const auto u3 = compute_control({0.0, 0.0, 0.0}, hess, {1.0, 1.0}, 0, cfg);
    CHECK(u3.v == 0.0);
    CHECK(u3.omega == 0.0);

    CHECK_THROWS_AS(
        compute_control({0.0, 0.0, std::nan("")}, hess, {1.0, 0.0}, 1, cfg),
        InvalidArgument);
    CHECK_THROWS_AS(
        compute_control({0.0, 0.0, 0.0}, hess,
                        {std::numeric_limits<double>::infinity(), 0.0}, 1, cfg),
        InvalidArgument);
}

TEST_CASE("per-agent pipeline", "[controller]") {
    const ControllerConfig cfg{1.0, PotentialKind::quadratic()};
    const Mat2 hess{-2.0, 0.0, 0.0, -2.0};
    const AgentState pose{0.0, 0.0, 0.3};

    // empty inbox
    const auto u0 = agent_step_inputs(pose, {1.0, 1.0}, hess, {}, cfg);
    CHECK(u0.v == 0.0);
    CHECK(u0.omega == 0.0);

    // all errors zero -> exactly zero control
    std::vector<NeighborInput> nbs{neighbor({2.0, 0.0}, state_with(2.0, 2.0), 1),
                                   neighbor({0.0, 2.0}, state_with(2.0, 2.0), 2)};
    const auto u1 = agent_step_inputs({0.0, 0.0, 1.1}, {0.0, 0.0}, hess, nbs, cfg);
    CHECK(u1.v == 0.0);
    CHECK(u1.omega == 0.0);

    // a coincident-gradient neighbor is a collision state
    std::vector<NeighborInput> bad{neighbor({1.0, 1.0}, state_with(0.0, 2.0))};
    CHECK_THROWS_AS(agent_step_inputs(pose, {1.0, 1.0}, hess, bad, cfg), CollisionError);
}

TEST_CASE("agent order does not matter", "[controller][property]") {
    const ControllerConfig cfg{0.8, PotentialKind::quadratic()};
    testutil::Rng rng(60);
    for (int trial = 0; trial < 50; ++trial) {
        const AgentState pose{0.0, 0.0, rng.uniform(-3.0, 3.0)};
        const Vec2 own{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const Mat2 hess{rng.uniform(-3.0, -1.0), 0.0, 0.0, rng.uniform(-3.0, -1.0)};
        std::vector<NeighborInput> nbs;
        for (int j = 0; j < 4; ++j) {
            const Vec2 X{own.x + rng.uniform(0.5, 3.0), own.y + rng.uniform(0.5, 3.0)};
            nbs.push_back(neighbor(X, state_with(mu(own, X), 2.0), j + 1));
        }
        const auto fwd = agent_step_inputs(pose, own, hess, nbs, cfg);
        std::reverse(nbs.begin(), nbs.end());
        const auto rev = agent_step_inputs(pose, own, hess, nbs, cfg);
        CHECK_CLOSE(fwd.v, rev.v, 1e-14);
        CHECK_CLOSE(fwd.omega, rev.omega, 1e-14);
    }
}

TEST_CASE("doubling the gain doubles both inputs exactly", "[controller][property]") {
    testutil::Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const AgentState pose{0.0, 0.0, rng.uniform(-3.0, 3.0)};
        const Mat2 hess{rng.uniform(-3.0, -1.0), 0.0, 0.0, rng.uniform(-3.0, -1.0)};
        const Vec2 gradP{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        const int n = rng.uniform_int(1, 5);
        const auto u1 = compute_control(pose, hess, gradP, n, {1.3, PotentialKind::quadratic()});
        const auto u2 = compute_control(pose, hess, gradP, n, {2.6, PotentialKind::quadratic()});
        CHECK(u2.v == 2.0 * u1.v);
        CHECK(u2.omega == 2.0 * u1.omega);
    }
}
