#include "skewlab/circle_flows.hpp"

#include "skewlab/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skewlab {
namespace {

namespace odeint = boost::numeric::odeint;

// (position, natural log of the spatial derivative)
using OdeState = std::array<double, 2>;

constexpr double kLn2 = std::numbers::ln2;

double bump(double u) noexcept
{
    const double om = 1.0 - u * u;
    return om > 0.0 ? std::exp(1.0 - 1.0 / om) : 0.0;
}

// X(s) / rate and X'(s) / rate in the scaled coordinate u = (s - p) / cutoff.
double field_unit(const FlowSpec& f, double s) noexcept
{
    const double d = s - f.fixed_point;
    return d * bump(d / f.cutoff_radius);
}

double field_derivative_unit(const FlowSpec& f, double s) noexcept
{
    const double u = (s - f.fixed_point) / f.cutoff_radius;
    const double om = 1.0 - u * u;
    if (om <= 0.0)
        return 0.0;
    return bump(u) * (1.0 - 2.0 * u * u / (om * om));
}

// Largest |X'| / rate over the support.
double scan_field_derivative(const FlowSpec& f)
{
    constexpr int samples = 200000;
    double best = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double s = f.arc_begin + (f.arc_end - f.arc_begin) * k / samples;
        best = std::max(best, std::abs(field_derivative_unit(f, s)));
    }
    return best;
}

} // namespace

CirclePoint::CirclePoint(double coordinate) noexcept
{
    double r = coordinate - std::floor(coordinate);
    if (r >= 1.0)
        r = 0.0;
    value_ = r;
}

double circle_distance(CirclePoint a, CirclePoint b) noexcept
{
    const double d = std::abs(a.value() - b.value());
    return std::min(d, 1.0 - d);
}

double circle_difference(CirclePoint a, CirclePoint b) noexcept
{
    double d = b.value() - a.value();
    if (d >= 0.5)
        d -= 1.0;
    else if (d < -0.5)
        d += 1.0;
    return d;
}

FlowSystem FlowSystem::standard(OdeTolerance tolerance)
{
    std::array<FlowSpec, 4> specs{};
    for (int i = 1; i <= 4; ++i) {
        FlowSpec& f = specs[static_cast<std::size_t>(i - 1)];
        f.index = i;
        f.arc_begin = (2.0 * i - 2.0) / 8.0;
        f.arc_end = (2.0 * i - 1.0) / 8.0;
        f.fixed_point = (4.0 * i - 3.0) / 16.0;
        f.bump_radius = 1.0 / 32.0;
        f.cutoff_radius = 1.0 / 16.0;
        f.rate = kLn2;
    }
    return FlowSystem(specs, tolerance);
}

FlowSystem::FlowSystem(std::array<FlowSpec, 4> specs, OdeTolerance tolerance)
    : specs_(specs), tolerance_(tolerance)
{
    if (!(tolerance_.absolute > 0.0) || !(tolerance_.relative > 0.0) || !(tolerance_.max_chunk > 0.0))
        throw ConfigError("ODE tolerances must be positive");
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        const FlowSpec& f = specs_[i];
        if (f.index != static_cast<int>(i) + 1)
            throw ConfigError("flow specs must be listed in index order 1..4");
        if (!(f.arc_begin >= 0.0 && f.arc_begin < f.fixed_point && f.fixed_point < f.arc_end
              && f.arc_end <= 1.0))
            throw ConfigError("flow fixed point must lie inside its support arc");
        if (f.fixed_point - f.cutoff_radius < f.arc_begin - 1e-15
            || f.fixed_point + f.cutoff_radius > f.arc_end + 1e-15)
            throw ConfigError("vector field support must stay inside the arc");
        if (!(f.rate > 0.0))
            throw ConfigError("flow rate must be positive");
        if (i > 0 && !(specs_[i - 1].arc_end < f.arc_begin))
            throw ConfigError("support arcs must be pairwise disjoint with positive gaps");
        max_field_derivative_ = std::max(max_field_derivative_, f.rate * scan_field_derivative(f));
    }
    if (specs_.back().arc_end >= 1.0 && specs_.front().arc_begin <= 0.0)
        throw ConfigError("support arcs must leave a gap across 0");
    max_field_derivative_ *= 1.0 + 1e-6;
}

const FlowSpec& FlowSystem::spec(int index) const
{
    if (index < 1 || index > 4)
        throw IndexError("flow index must be in 1..4, got " + std::to_string(index));
    return specs_[static_cast<std::size_t>(index - 1)];
}

double FlowSystem::field(int index, double s) const
{
    const FlowSpec& f = spec(index);
    return f.contains(s) ? f.rate * field_unit(f, s) : 0.0;
}

double FlowSystem::field_derivative(int index, double s) const
{
    const FlowSpec& f = spec(index);
    return f.contains(s) ? f.rate * field_derivative_unit(f, s) : 0.0;
}

FlowResult FlowSystem::integrate(int index, double t, CirclePoint s) const
{
    const FlowSpec& f = spec(index);
    if (!f.contains(s.value()) || t == 0.0)
        return {s, 0.0};

    // Backward time integrates -X forward.
    const double direction = t < 0.0 ? -1.0 : 1.0;
    const double scale = direction * f.rate;
    auto system = [&f, scale](const OdeState& x, OdeState& dx, double) {
        dx[0] = scale * field_unit(f, x[0]);
        dx[1] = scale * field_derivative_unit(f, x[0]);
    };

    auto stepper = odeint::make_controlled(tolerance_.absolute, tolerance_.relative,
                                           odeint::runge_kutta_dopri5<OdeState>());
    OdeState state{s.value(), 0.0};
    double remaining = std::abs(t);
    while (remaining > 0.0) {
        const double chunk = std::min(remaining, tolerance_.max_chunk);
        odeint::integrate_adaptive(stepper, system, state, 0.0, chunk, chunk / 8.0);
        remaining -= chunk;
    }
    // The arc is invariant; keep round-off from pushing the point onto the
    // boundary, where other flows would start acting.
    const double lo = std::nextafter(f.arc_begin, 1.0);
    const double hi = std::nextafter(f.arc_end, 0.0);
    return {CirclePoint(std::clamp(state[0], lo, hi)), state[1] / kLn2};
}

FlowResult FlowSystem::flow_with_derivative(int index, double t, CirclePoint s) const
{
    const FlowSpec& f = spec(index);
    if (!f.contains(s.value()) || t == 0.0)
        return {s, 0.0};
    if (s.value() == f.fixed_point)
        return {s, t * f.rate / kLn2};
    return integrate(index, t, s);
}

CirclePoint FlowSystem::flow(int index, double t, CirclePoint s) const
{
    return flow_with_derivative(index, t, s).point;
}

double FlowSystem::flow_log2_derivative(int index, double t, CirclePoint s) const
{
    return flow_with_derivative(index, t, s).log2_derivative;
}

double FlowSystem::flow_derivative(int index, double t, CirclePoint s) const
{
    return std::exp2(flow_log2_derivative(index, t, s));
}

double flow_time(const Vector4& times, int index)
{
    switch (index) {
    case 1:
        return times.w;
    case 2:
        return times.x;
    case 3:
        return times.y;
    case 4:
        return times.z;
    default:
        throw IndexError("flow index must be in 1..4, got " + std::to_string(index));
    }
}

FlowResult FlowSystem::apply_with_derivative(const Vector4& times, CirclePoint s) const
{
    FlowResult r{s, 0.0};
    // f^4 acts first. At most one flow moves any given point.
    for (int i = 4; i >= 1; --i) {
        const FlowResult step = flow_with_derivative(i, flow_time(times, i), r.point);
        r.point = step.point;
        r.log2_derivative += step.log2_derivative;
    }
    return r;
}

CirclePoint FlowSystem::apply(const Vector4& times, CirclePoint s) const
{
    return apply_with_derivative(times, s).point;
}

double FlowSystem::log2_derivative(const Vector4& times, CirclePoint s) const
{
    return apply_with_derivative(times, s).log2_derivative;
}

} // namespace skewlab
