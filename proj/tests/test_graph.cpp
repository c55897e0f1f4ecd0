#include "flexflock/graph.hpp"

#include <array>

#include "flexflock/field.hpp"
#include "test_util.hpp"

using namespace flexflock;

namespace {

Topology complete(int n) {
    Topology t;
    t.mode = TopologyMode::Static;
    t.n_agents = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t.edges.insert(EdgeKey(i, j));
    return t;
}

// Independent reachability oracle: boolean transitive closure.
bool connected_by_closure(int n, const std::set<EdgeKey>& edges) {
    if (n <= 1) return true;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& e : edges) reach[e.i][e.j] = reach[e.j][e.i] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    for (int j = 1; j < n; ++j)
        if (!reach[0][j]) return false;
    return true;
}

}  // namespace

TEST_CASE("mu is the gradient-space Euclidean gap", "[graph]") {
    CHECK(mu({0.0, 0.0}, {3.0, 4.0}) == 5.0);
    CHECK(mu({1.0, 1.0}, {1.0, 1.0}) == 0.0);
    // Bowl gradients of agents at the origin and at (1,2).
    const auto f = FieldModel::quadratic_bowl();
    CHECK_CLOSE(mu(gradient(f, {0.0, 0.0}), gradient(f, {1.0, 2.0})),
                4.4721359549995794, 1e-15);
}

TEST_CASE("neighbor sets", "[graph]") {
    Topology dyn;
    dyn.mode = TopologyMode::Dynamic;
    dyn.n_agents = 2;
    dyn.r = 10.0;
    const std::vector<Vec2> grads{{0.0, 0.0}, {3.0, 4.0}};
    CHECK(neighbor_set(0, grads, dyn) == std::vector<int>{1});

    dyn.r = 5.0;  // mu = r exactly is not a neighbor
    CHECK(neighbor_set(0, grads, dyn).empty());

    const auto k5 = complete(5);
    const std::vector<Vec2> dummy(5);
    CHECK(neighbor_set(0, dummy, k5) == std::vector<int>({1, 2, 3, 4}));

    CHECK_THROWS_AS(neighbor_set(7, dummy, k5), InvalidArgument);
    CHECK_THROWS_AS(neighbor_set(-1, dummy, k5), InvalidArgument);
}

TEST_CASE("neighbor symmetry over random gradients", "[graph][property]") {
    testutil::Rng rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        Topology dyn;
        dyn.mode = TopologyMode::Dynamic;
        dyn.n_agents = 6;
        dyn.r = rng.uniform(0.5, 6.0);
        std::vector<Vec2> grads(6);
        for (auto& g : grads) g = {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        for (int i = 0; i < 6; ++i) {
            const auto ni = neighbor_set(i, grads, dyn);
            for (int j : ni) {
                const auto nj = neighbor_set(j, grads, dyn);
                CHECK(std::find(nj.begin(), nj.end(), i) != nj.end());
            }
        }
    }
}

TEST_CASE("edge lifecycle in dynamic mode", "[graph]") {
    Topology dyn;
    dyn.mode = TopologyMode::Dynamic;
    dyn.n_agents = 2;
    dyn.r = 10.0;

    // drift into range -> one Added event at the first in-range sample
    std::vector<Vec2> apart{{0.0, 0.0}, {11.0, 0.0}};
    CHECK(update_edges(dyn, apart, 0.0).empty());
    std::vector<Vec2> closer{{0.0, 0.0}, {9.5, 0.0}};
    const auto added = update_edges(dyn, closer, 7.0);
    REQUIRE(added.size() == 1);
    CHECK(added[0].kind == EdgeEventKind::Added);
    CHECK(added[0].time == 7.0);
    CHECK(added[0].edge == EdgeKey(0, 1));
    CHECK(dyn.edges.count(EdgeKey(0, 1)) == 1);

    // re-issuing with the same gradients is a no-op
    CHECK(update_edges(dyn, closer, 7.1).empty());

    // violation: stored edge leaves the sensing range
    const auto removed = update_edges(dyn, apart, 8.0);
    REQUIRE(removed.size() == 1);
    CHECK(removed[0].kind == EdgeEventKind::RemovedViolation);
    CHECK(dyn.edges.empty());

    // boundary: mu == r exactly is out of range
    std::vector<Vec2> boundary{{0.0, 0.0}, {10.0, 0.0}};
    CHECK(update_edges(dyn, boundary, 9.0).empty());
    CHECK(dyn.edges.empty());

    auto stat = complete(2);
    CHECK_THROWS_AS(update_edges(stat, apart, 0.0), InvalidArgument);
}

TEST_CASE("connectivity queries", "[graph]") {
    CHECK(is_connected(complete(5)));

    Topology two;
    two.mode = TopologyMode::Static;
    two.n_agents = 5;
    two.edges = {EdgeKey(0, 1), EdgeKey(2, 3)};
    CHECK_FALSE(is_connected(two));

    Topology path;
    path.mode = TopologyMode::Static;
    path.n_agents = 5;
    path.edges = {EdgeKey(0, 1), EdgeKey(1, 2), EdgeKey(2, 3), EdgeKey(3, 4)};
    CHECK(is_connected(path));

    Topology lonely;
    lonely.n_agents = 1;
    CHECK(is_connected(lonely));
}

TEST_CASE("is_connected agrees with transitive closure on all graphs up to 6 nodes",
          "[graph][property]") {
    for (int n = 1; n <= 6; ++n) {
        std::vector<EdgeKey> all_edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all_edges.push_back(EdgeKey(i, j));
        const int m = static_cast<int>(all_edges.size());
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Topology t;
            t.mode = TopologyMode::Static;
            t.n_agents = n;
            for (int b = 0; b < m; ++b)
                if (mask & (1u << b)) t.edges.insert(all_edges[b]);
            REQUIRE(is_connected(t) == connected_by_closure(n, t.edges));
        }
    }
}

TEST_CASE("edge keys are canonical", "[graph]") {
    CHECK(EdgeKey(3, 1) == EdgeKey(1, 3));
    CHECK(EdgeKey(3, 1).i == 1);
    CHECK_THROWS_AS(EdgeKey(2, 2), InvalidArgument);
}
