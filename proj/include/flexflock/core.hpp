// Core value types and error taxonomy shared by every flexflock module.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace flexflock {

// 2-vector in the common NE frame; holds positions, field gradients X_i,
// and potential gradients depending on context.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double k) const { return {k * x, k * y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }

// 2x2 matrix, row-major. Symmetric whenever produced as a field Hessian.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    constexpr bool operator==(const Mat2&) const = default;

    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) &&
               std::isfinite(a21) && std::isfinite(a22);
    }
    bool symmetric(double tol = 0.0) const { return std::abs(a12 - a21) <= tol; }
};

// Base class for all library errors.
struct FlockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A precondition on an operation's arguments was violated.
struct InvalidArgument : FlockError {
    using FlockError::FlockError;
};

// Two connected agents' gradients coincide (mu_ij = 0): the edge direction
// is undefined and the state corresponds to a collision in gradient space.
struct CollisionError : FlockError {
    using FlockError::FlockError;
};

// Barrier potential evaluated outside its domain (mu <= 0 or mu >= r).
// Signals a range/collision constraint violation; never clamped.
struct BarrierDomainError : FlockError {
    using FlockError::FlockError;
};

// Scenario configuration could not be parsed or failed validation.
struct ConfigError : FlockError {
    using FlockError::FlockError;
};

// Pose of one unicycle agent.
struct AgentState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, unwrapped internally

    bool operator==(const AgentState&) const = default;
};

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi]. Poses keep theta unwrapped internally;
// wrapping is applied only when recording.
inline double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

}  // namespace flexflock
