// Shared helpers for the test suites: a deterministic RNG with a fixed
// integer-to-double mapping and a few numeric matchers.
#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>

namespace testutil {

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double u01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
    int uniform_int(int a, int b) {  // inclusive bounds
        return a + static_cast<int>(gen() % static_cast<std::uint64_t>(b - a + 1));
    }
};

inline double rel_error(double got, double want) {
    const double denom = std::abs(want);
    return denom > 0.0 ? std::abs(got - want) / denom : std::abs(got - want);
}

}  // namespace testutil

#define CHECK_CLOSE(got, want, tol) CHECK_THAT((got), Catch::Matchers::WithinAbs((want), (tol)))
#define REQUIRE_CLOSE(got, want, tol) \
    REQUIRE_THAT((got), Catch::Matchers::WithinAbs((want), (tol)))
