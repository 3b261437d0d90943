#pragma once

// Four commuting flows on the circle R/Z with disjoint supports, each with a
// single hyperbolic repelling fixed point of time-one derivative 2, and the
// homomorphism F: R^4 -> Diff(S^1) they generate.
//
// Derivatives grow like 2^t, so every derivative leaves this module in log2
// units.

#include "skewlab/rotor.hpp"

#include <array>
#include <cstddef>

namespace skewlab {

/// A point of R/Z, stored reduced to [0, 1).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(double coordinate) noexcept;

    double value() const noexcept { return value_; }

    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

private:
    double value_ = 0.0;
};

/// Arc-length distance min(|a-b|, 1-|a-b|).
double circle_distance(CirclePoint a, CirclePoint b) noexcept;
/// Representative of b - a in [-1/2, 1/2).
double circle_difference(CirclePoint a, CirclePoint b) noexcept;

/// One flow f^i_t, generated by
///   X(s) = rate * (s - p) * bump((s - p) / cutoff_radius),
///   bump(u) = exp(1 - 1/(1 - u^2)) on |u| < 1, 0 elsewhere,
/// so X'(p) = rate and X vanishes outside the open support arc.
struct FlowSpec {
    int index = 1;             ///< 1..4
    double arc_begin = 0.0;    ///< support arc (arc_begin, arc_end)
    double arc_end = 0.0;
    double fixed_point = 0.0;  ///< p_i, the arc center
    double bump_radius = 0.0;  ///< neighbourhood of p_i used for repelling checks
    double cutoff_radius = 0.0;
    double rate = 0.0;         ///< X'(p_i) = ln 2

    bool contains(double s) const noexcept { return s > arc_begin && s < arc_end; }
};

struct OdeTolerance {
    double absolute = 1e-12;
    double relative = 1e-12;
    /// Longest time span handed to one adaptive integration call; longer
    /// times are split into chunks of this size.
    double max_chunk = 1.0;
};

/// A flow image together with the log2 of its spatial derivative.
struct FlowResult {
    CirclePoint point;
    double log2_derivative = 0.0;
};

class FlowSystem {
public:
    /// Supports ((2i-2)/8, (2i-1)/8), p_i = (4i-3)/16, cutoff 1/16, bump
    /// radius 1/32, rate ln 2.
    static FlowSystem standard(OdeTolerance tolerance = {});

    FlowSystem(std::array<FlowSpec, 4> specs, OdeTolerance tolerance);

    const std::array<FlowSpec, 4>& specs() const noexcept { return specs_; }
    const FlowSpec& spec(int index) const;
    const OdeTolerance& tolerance() const noexcept { return tolerance_; }

    /// X_i(s) and X_i'(s) for s in [0, 1).
    double field(int index, double s) const;
    double field_derivative(int index, double s) const;
    /// sup over the circle of |X_i'|, shared by all four flows. Computed once
    /// by dense sampling and rounded up by a relative 1e-6.
    double max_field_derivative() const noexcept { return max_field_derivative_; }

    /// Time-t map with its log2 derivative. Points off the support arc are
    /// returned unchanged with derivative 1; p_i uses the closed form
    /// log2 f'(p_i) = t; everything else is integrated.
    FlowResult flow_with_derivative(int index, double t, CirclePoint s) const;
    CirclePoint flow(int index, double t, CirclePoint s) const;
    double flow_log2_derivative(int index, double t, CirclePoint s) const;
    double flow_derivative(int index, double t, CirclePoint s) const;

    /// Integrates the flow and the variational equation d/dt log J = X'
    /// even at the fixed point; used to check the closed form.
    FlowResult integrate(int index, double t, CirclePoint s) const;

    /// F(v) s = f^1_{v.w} f^2_{v.x} f^3_{v.y} f^4_{v.z} s, with its log2
    /// derivative (the sum over the composition).
    FlowResult apply_with_derivative(const Vector4& times, CirclePoint s) const;
    CirclePoint apply(const Vector4& times, CirclePoint s) const;
    double log2_derivative(const Vector4& times, CirclePoint s) const;

private:
    std::array<FlowSpec, 4> specs_;
    OdeTolerance tolerance_;
    double max_field_derivative_ = 0.0;
};

/// Component i (1..4) of a translation vector: the time of flow i in F.
double flow_time(const Vector4& times, int index);

} // namespace skewlab
