#include "skewlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skewlab {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n)
{
    // floor(n * uniform()); exact enough for the small n used here.
    return std::min(n - 1, static_cast<std::size_t>(static_cast<double>(n) * uniform()));
}

double Rng::normal()
{
    double u1 = 0.0;
    while (u1 == 0.0)
        u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector4 Rng::unit_vector4()
{
    for (;;) {
        const Vector4 v{normal(), normal(), normal(), normal()};
        const double n = norm(v);
        if (n > 1e-12)
            return v * (1.0 / n);
    }
}

Vector4 Rng::unit_axis()
{
    for (;;) {
        const Vector4 v{0.0, normal(), normal(), normal()};
        const double n = norm(v);
        if (n > 1e-12)
            return v * (1.0 / n);
    }
}

double radical_inverse(std::uint64_t index, std::uint32_t base) noexcept
{
    const double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

Vector4 cube_to_sphere3(double u1, double u2, double u3) noexcept
{
    constexpr double tau = 2.0 * std::numbers::pi;
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    return {a * std::sin(tau * u2), a * std::cos(tau * u2), b * std::sin(tau * u3),
            b * std::cos(tau * u3)};
}

Vector4 halton_sphere3(std::uint64_t index, std::uint64_t offset) noexcept
{
    const std::uint64_t i = index + offset + 1;
    return cube_to_sphere3(radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5));
}

double halton_circle(std::uint64_t index, std::uint64_t offset) noexcept
{
    return radical_inverse(index + offset + 1, 7);
}

UnitQuaternion random_small_rotation(Rng& rng, double max_angle)
{
    const Vector4 axis = rng.unit_axis();
    const double angle = rng.uniform(0.0, max_angle);
    // |r - 1| = 2 sin(angle/2) <= angle.
    return UnitQuaternion::from_axis_angle(axis, angle);
}

} // namespace skewlab
